"""Command-line driver: runs the model, writes CSV/JSON artifacts, and
replays canned example configurations with their documented assertions.

Every run drops a run_manifest.json next to its outputs holding the tool
version, the fully resolved parameters, and a sha256 per output file;
`reproduce --manifest` replays any manifest and verifies the new files
digest-match the recorded ones.

Exit codes: 0 ok, 1 assertion failure, 2 bad configuration, 3 invalid
model (non-spanning neighbor set or degenerate mixture).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from .dynamics import export_trajectory_csv, init_state, run
from .equidist import (
    dependence_scan,
    discrepancy_table,
    export_dependence_json,
    export_discrepancy_csv,
    rotation_vector,
)
from .errors import ConfigError, ContradynError, DegenerateMixtureError, InvalidModelError
from .lattice import ConvolutionSet, GroupParams, spans
from .mixing import (
    MixtureSpec,
    draw_index_sequence,
    export_mixture_manifest,
    find_transition_q,
    mixed_attractor_dimension,
    mixed_limit_state,
    mixed_run,
    mixed_spectrum,
)
from .orbit import (
    OrbitModel,
    attractor_dimension,
    error_series,
    export_attractor_csv,
    export_error_csv,
    export_orbit_csv,
    sample_attractor,
)
from .spectrum import (
    export_spectrum_csv,
    export_spectrum_json,
    full_spectrum,
    regularity,
)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2
EXIT_MODEL = 3

_REQUIRED = object()

# builtin defaults per subcommand; a None default means genuinely optional
_PARAMS: dict[str, dict] = {
    "spectrum": {"n": 29, "m": None, "C": _REQUIRED, "p": _REQUIRED},
    "simulate": {
        "n": 29, "m": None, "C": _REQUIRED, "p": _REQUIRED,
        "d": 3, "seed": 0, "steps": 1000, "scaling": "none", "stride": None,
    },
    "attractor": {
        "n": 29, "m": None, "C": _REQUIRED, "p": _REQUIRED,
        "d": 3, "seed": 0, "steps": 400, "resolution": 128,
    },
    "mixed": {
        "n": 29, "m": None, "C": _REQUIRED, "C2": _REQUIRED, "p": _REQUIRED,
        "q": _REQUIRED, "d": 3, "seed": 0, "steps": 2000, "stride": None,
    },
    "equidist": {
        "n": 29, "m": None, "C": None, "p": None, "from_spectrum": None,
        "t": "100,1000,10000", "L": 32, "L_max": 100, "tol": 1e-9,
        "cut_budget": 512,
    },
    "reproduce": {"example": None, "manifest": None},
}

EXAMPLE_IDS = ("ex1", "ex2", "ex3", "mix-low", "mix-high")


def _resolve(args: argparse.Namespace, command: str) -> tuple[dict, dict]:
    """Merge flag values over config-file values over builtin defaults."""
    table = _PARAMS[command]
    cfg = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            cfg = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        unknown = set(cfg) - set(table) - {"out_dir"}
        if unknown:
            raise ConfigError(f"unknown config keys for {command}: {sorted(unknown)}")
    params = {}
    for key, builtin in table.items():
        value = getattr(args, key, None)
        if value is None:
            value = cfg.get(key, builtin)
        if value is _REQUIRED:
            raise ConfigError(f"missing required option --{key.replace('_', '-')}")
        params[key] = value
    return params, cfg


def _model_from(params: dict, key: str = "C") -> tuple[GroupParams, ConvolutionSet]:
    n = int(params["n"])
    conv = ConvolutionSet.parse(params[key], n)
    if params.get("m") is not None and int(params["m"]) != conv.m:
        raise ConfigError(f"--m {params['m']} disagrees with {key} arity {conv.m}")
    g = GroupParams(n, conv.m)
    if not spans(conv, g):
        raise InvalidModelError(f"neighbor set {conv.to_string()} does not generate the torus")
    return g, conv


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(command: str, params: dict, out_dir: Path, files: list[str]) -> None:
    payload = {
        "command": command,
        "version": __version__,
        "params": {k: v for k, v in params.items()},
        "outputs": {name: _sha256(out_dir / name) for name in sorted(files)},
    }
    with open(out_dir / "run_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_state_csv(state: np.ndarray, path: Path) -> None:
    d = state.shape[1]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(["agent_index"] + [f"y_{i + 1}" for i in range(d)]) + "\n")
        for idx, row in enumerate(state):
            fh.write(",".join([str(idx)] + [f"{v:.17g}" for v in row]) + "\n")


def _check(label: str, ok: bool) -> bool:
    print(f"{'PASS' if ok else 'FAIL'}  {label}")
    return ok


# ---------------------------------------------------------------------------
# subcommand runners; each returns (exit_code, written file names)


def _cmd_spectrum(params: dict, out: Path) -> tuple[int, list[str]]:
    g, conv = _model_from(params)
    p = float(params["p"])
    rep = full_spectrum(g, conv, p)
    verdict = regularity(g, conv, p)
    export_spectrum_csv(rep, out / "spectrum.csv")
    export_spectrum_json(rep, out / "spectrum.json", regular=verdict.is_regular)
    print(
        f"lambda = {rep.lam:.9f}  mu = {rep.mu:.9f}  |W| = {len(rep.W)}"
        f"  |vartheta| = {len(rep.vartheta)}  regular = {verdict.is_regular}"
    )
    return EXIT_OK, ["spectrum.csv", "spectrum.json"]


def _cmd_simulate(params: dict, out: Path) -> tuple[int, list[str]]:
    g, conv = _model_from(params)
    p = float(params["p"])
    x0 = init_state(g, int(params["d"]), int(params["seed"]))
    stride = None if params["stride"] is None else int(params["stride"])
    traj = run(g, conv, p, x0, int(params["steps"]), scaling=params["scaling"], stride=stride)
    export_trajectory_csv(traj, out / "trajectory.csv")
    files = ["trajectory.csv"]
    if params["scaling"] == "inverse-lambda":
        try:
            model = OrbitModel.build(full_spectrum(g, conv, p), x0)
            times, errs = error_series(traj, model)
            export_error_csv(times, errs, out / "error.csv")
            files.append("error.csv")
        except InvalidModelError as exc:
            print(f"note: no limiting-orbit error file ({exc})", file=sys.stderr)
    print(f"simulated {params['steps']} steps, {len(traj.times)} snapshots")
    return EXIT_OK, files


def _cmd_attractor(params: dict, out: Path) -> tuple[int, list[str]]:
    g, conv = _model_from(params)
    p = float(params["p"])
    rep = full_spectrum(g, conv, p)
    x0 = init_state(g, int(params["d"]), int(params["seed"]))
    model = OrbitModel.build(rep, x0)
    sample = sample_attractor(model, resolution=int(params["resolution"]))
    export_attractor_csv(sample, out / "attractor.csv")
    export_orbit_csv(model, range(int(params["steps"]) + 1), out / "orbit.csv")
    print(
        f"attractor dimension {sample.dimension}, {sample.points.shape[0]} sample points,"
        f" spacing bound {sample.max_spacing_bound():.6g}"
    )
    return EXIT_OK, ["attractor.csv", "orbit.csv"]


def _cmd_mixed(params: dict, out: Path) -> tuple[int, list[str]]:
    g, first = _model_from(params)
    _, second = _model_from(params, key="C2")
    spec = MixtureSpec.two_set(
        g, first, second, float(params["p"]), float(params["q"]), seed=int(params["seed"])
    )
    mix = mixed_spectrum(spec)
    steps = int(params["steps"])
    seq = draw_index_sequence(spec, steps)
    x0 = init_state(g, int(params["d"]), int(params["seed"]))
    stride = None if params["stride"] is None else int(params["stride"])
    traj = mixed_run(spec, x0, steps, seq=seq, stride=stride, mix=mix)
    export_mixture_manifest(spec, steps, out / "mixture.json", seq=seq)
    export_trajectory_csv(traj, out / "trajectory.csv")
    _write_state_csv(mixed_limit_state(mix, x0, seq, steps), out / "limit_state.csv")
    print(
        f"mixture lambda = {mix.lam:.9f}  |W| = {len(mix.W)}"
        f"  dimension = {mixed_attractor_dimension(mix)}"
    )
    return EXIT_OK, ["mixture.json", "trajectory.csv", "limit_state.csv"]


def _cmd_equidist(params: dict, out: Path) -> tuple[int, list[str]]:
    if params["from_spectrum"]:
        src = Path(params["from_spectrum"])
        if not src.is_file():
            raise ConfigError(f"spectrum summary not found: {src}")
        summary = json.loads(src.read_text())
        n, p = int(summary["n"]), float(summary["p"])
        conv = ConvolutionSet(tuple(tuple(int(x) for x in c) for c in summary["C"]), n)
        g = GroupParams(n, conv.m)
    elif params["C"] is not None and params["p"] is not None:
        g, conv = _model_from(params)
        p = float(params["p"])
    else:
        raise ConfigError("equidist needs --from-spectrum or both --C and --p")
    rep = full_spectrum(g, conv, p)
    alpha = rotation_vector(rep)
    raw_t = params["t"]
    ts = [int(x) for x in raw_t] if isinstance(raw_t, list) else [
        int(x) for x in str(raw_t).split(",") if x
    ]
    rows = discrepancy_table(alpha, ts, L=int(params["L"]), cut_budget=int(params["cut_budget"]))
    export_discrepancy_csv(rows, out / "discrepancy.csv")
    export_dependence_json(alpha, int(params["L_max"]), float(params["tol"]), out / "dependence.json")
    rels = dependence_scan(alpha, int(params["L_max"]), float(params["tol"]))
    print(f"alpha = {np.array2string(alpha, precision=8)}  relations found: {len(rels)}")
    for r in rows:
        print(f"t = {r['t']:>7}  D = {r['empirical_D']:.6g} ({r['method']})  bound = {r['etk_bound']:.6g}")
    return EXIT_OK, ["discrepancy.csv", "dependence.json"]


# ---------------------------------------------------------------------------
# canned examples


def _rep_ex1(out: Path) -> tuple[bool, list[str]]:
    n, p, d, seed, steps = 29, 0.3, 3, 0, 300
    conv = ConvolutionSet.parse("(1,0);(0,1);(-1,0);(0,-1)", n)
    g = GroupParams(n, 2)
    rep = full_spectrum(g, conv, p)
    ok = _check("ex1: W equals the 4-neighbor set", set(rep.W) == set(conv.offsets))
    ok &= _check("ex1: no rotation angles (fixed point)", rep.vartheta == ())
    x0 = init_state(g, d, seed)
    model = OrbitModel.build(rep, x0)
    export_spectrum_csv(rep, out / "spectrum.csv")
    export_spectrum_json(rep, out / "spectrum.json", regular=regularity(g, conv, p).is_regular)
    export_attractor_csv(sample_attractor(model), out / "attractor.csv")
    traj = run(g, conv, p, x0, steps, scaling="inverse-lambda", lam=rep.lam)
    export_trajectory_csv(traj, out / "trajectory.csv")
    return ok, ["spectrum.csv", "spectrum.json", "attractor.csv", "trajectory.csv"]


def _rep_ex2(out: Path) -> tuple[bool, list[str]]:
    n, p, d, seed, steps = 7, 0.3, 3, 0, 400
    conv = ConvolutionSet.parse("(1,0);(0,1)", n)
    g = GroupParams(n, 2)
    theta0 = full_spectrum(g, conv, 0.0).theta_at((1, 0))
    ok = _check("ex2: theta at p=0 is 1/2 (periodic orbit)", abs(theta0 - 0.5) <= 1e-12)
    rep = full_spectrum(g, conv, p)
    formula = (
        n / (2 * math.pi)
        * math.atan2((1 - p) * math.sin(2 * math.pi / n), 1 + p + (1 - p) * math.cos(2 * math.pi / n))
    )
    ok &= _check(
        "ex2: basis-mode angle matches the closed form",
        abs(rep.theta_at((1, 0)) - formula) <= 1e-12,
    )
    x0 = init_state(g, d, seed)
    model = OrbitModel.build(rep, x0)
    export_spectrum_csv(rep, out / "spectrum.csv")
    export_spectrum_json(rep, out / "spectrum.json", regular=regularity(g, conv, p).is_regular)
    export_orbit_csv(model, range(steps + 1), out / "orbit.csv")
    export_attractor_csv(sample_attractor(model), out / "attractor.csv")
    traj = run(g, conv, p, x0, steps, scaling="inverse-lambda", lam=rep.lam)
    export_trajectory_csv(traj, out / "trajectory.csv")
    return ok, ["spectrum.csv", "spectrum.json", "orbit.csv", "attractor.csv", "trajectory.csv"]


def _rep_ex3(out: Path) -> tuple[bool, list[str]]:
    n, p, d, seed = 29, 0.25, 3, 0
    conv = ConvolutionSet.parse("(1,0);(0,1);(2,3)", n)
    g = GroupParams(n, 2)
    rep = full_spectrum(g, conv, p)
    expected_W = {(1, 0), (1, 28), (28, 0), (28, 1)}
    ok = _check("ex3: W is the expected 4-set", set(rep.W) == expected_W)
    ok &= _check("ex3: two distinct rotation angles", len(rep.vartheta) == 2)
    x0 = init_state(g, d, seed)
    model = OrbitModel.build(rep, x0)
    export_spectrum_csv(rep, out / "spectrum.csv")
    export_spectrum_json(rep, out / "spectrum.json", regular=regularity(g, conv, p).is_regular)
    export_orbit_csv(model, range(601), out / "orbit.csv")
    export_attractor_csv(sample_attractor(model, resolution=128), out / "attractor.csv")
    alpha = rotation_vector(rep)
    rows = discrepancy_table(alpha, [100, 1000, 10000], L=32)
    export_discrepancy_csv(rows, out / "discrepancy.csv")
    export_dependence_json(alpha, 100, 1e-9, out / "dependence.json")
    return ok, [
        "spectrum.csv", "spectrum.json", "orbit.csv", "attractor.csv",
        "discrepancy.csv", "dependence.json",
    ]


def _rep_mix_low(out: Path) -> tuple[bool, list[str]]:
    n, p, q, d, seed, steps = 29, 0.5, 0.5, 3, 0, 2000
    g = GroupParams(n, 2)
    first = ConvolutionSet.parse("(1,0);(0,1)", n)
    second = ConvolutionSet.parse("(1,0);(0,2)", n)
    dims = (
        attractor_dimension(full_spectrum(g, first, p)),
        attractor_dimension(full_spectrum(g, second, p)),
    )
    spec = MixtureSpec.two_set(g, first, second, p, q, seed=seed)
    mix = mixed_spectrum(spec)
    mdim = mixed_attractor_dimension(mix)
    ok = _check("mix-low: pure attractor dimensions are 2 and 2", dims == (2, 2))
    ok &= _check("mix-low: mixture attractor dimension drops to 1", mdim == 1)
    seq = draw_index_sequence(spec, steps)
    x0 = init_state(g, d, seed)
    traj = mixed_run(spec, x0, steps, seq=seq, mix=mix)
    export_mixture_manifest(spec, steps, out / "mixture.json", seq=seq)
    export_trajectory_csv(traj, out / "trajectory.csv")
    _write_state_csv(mixed_limit_state(mix, x0, seq, steps), out / "limit_state.csv")
    return ok, ["mixture.json", "trajectory.csv", "limit_state.csv"]


def _rep_mix_high(out: Path) -> tuple[bool, list[str]]:
    # doubled basis first: q is then the bias toward the plain basis, and
    # the subdominant family flips at a small positive q instead of at 0
    n, p, d, seed, steps = 29, 0.9, 3, 0, 2000
    g = GroupParams(n, 2)
    first = ConvolutionSet.parse("(2,0);(0,2)", n)
    second = ConvolutionSet.parse("(1,0);(0,1)", n)
    res = find_transition_q(g, first, second, p)
    ok = _check(
        "mix-high: transition at q = 0.0306 within 1e-3",
        abs(res.q_star - 0.0306) <= 1e-3,
    )
    ok &= _check(
        "mix-high: subdominant set grows at the transition",
        len(res.W_at_transition) > len(res.W_low),
    )
    payload = {
        "q_star": res.q_star,
        "bracket": list(res.bracket),
        "W_low": [list(v) for v in res.W_low],
        "W_at_transition": [list(v) for v in res.W_at_transition],
    }
    with open(out / "transition.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    spec = MixtureSpec.two_set(g, first, second, p, res.q_star, seed=seed)
    mix = mixed_spectrum(spec)
    seq = draw_index_sequence(spec, steps)
    x0 = init_state(g, d, seed)
    traj = mixed_run(spec, x0, steps, seq=seq, mix=mix)
    export_mixture_manifest(spec, steps, out / "mixture.json", seq=seq)
    export_trajectory_csv(traj, out / "trajectory.csv")
    _write_state_csv(mixed_limit_state(mix, x0, seq, steps), out / "limit_state.csv")
    return ok, ["transition.json", "mixture.json", "trajectory.csv", "limit_state.csv"]


_EXAMPLES: dict[str, Callable[[Path], tuple[bool, list[str]]]] = {
    "ex1": _rep_ex1,
    "ex2": _rep_ex2,
    "ex3": _rep_ex3,
    "mix-low": _rep_mix_low,
    "mix-high": _rep_mix_high,
}


def _cmd_reproduce(params: dict, out: Path) -> tuple[int, list[str]]:
    if params.get("manifest"):
        return _replay_manifest(Path(params["manifest"]), out)
    example = params.get("example")
    if example not in _EXAMPLES:
        raise ConfigError(f"pick an example from {EXAMPLE_IDS} or pass --manifest")
    ok, files = _EXAMPLES[example](out)
    return (EXIT_OK if ok else EXIT_ASSERTION), files


_RUNNERS: dict[str, Callable[[dict, Path], tuple[int, list[str]]]] = {
    "spectrum": _cmd_spectrum,
    "simulate": _cmd_simulate,
    "attractor": _cmd_attractor,
    "mixed": _cmd_mixed,
    "equidist": _cmd_equidist,
    "reproduce": _cmd_reproduce,
}


def _replay_manifest(path: Path, out: Path) -> tuple[int, list[str]]:
    """Re-run a recorded configuration and verify outputs digest-match."""
    if not path.is_file():
        raise ConfigError(f"manifest not found: {path}")
    recorded = json.loads(path.read_text())
    command = recorded.get("command")
    if command not in _RUNNERS:
        raise ConfigError(f"manifest has unknown command {command!r}")
    code, files = _RUNNERS[command](recorded["params"], out)
    all_match = True
    for name, digest in recorded.get("outputs", {}).items():
        fresh = _sha256(out / name) if (out / name).is_file() else None
        match = fresh == digest
        all_match &= _check(f"replay: {name} reproduced byte-identically", match)
    if not all_match:
        code = max(code, EXIT_ASSERTION)
    return code, files


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out-dir", dest="out_dir", default=None, help="output directory (default out)")
    sub.add_argument("--config", default=None, help="JSON config file; explicit flags win")


def _add_model_flags(sub: argparse.ArgumentParser, with_p: bool = True) -> None:
    sub.add_argument("--n", type=int, default=None, help="torus side (default 29)")
    sub.add_argument("--m", type=int, default=None, help="torus dimension; inferred from --C")
    sub.add_argument("--C", default=None, help='neighbor offsets, e.g. "(1,0);(0,1)"')
    if with_p:
        sub.add_argument("--p", type=float, default=None, help="self-weight in [0, 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contradyn",
        description="contrarian opinion dynamics on circulant networks",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spectrum", help="eigenvalues, subdominant set, rotation angles")
    _add_model_flags(sp)
    _add_common(sp)

    sim = subs.add_parser("simulate", help="iterate the dynamics and export snapshots")
    _add_model_flags(sim)
    sim.add_argument("--d", type=int, default=None, help="opinion dimension (default 3)")
    sim.add_argument("--seed", type=int, default=None, help="initial-state seed (default 0)")
    sim.add_argument("--steps", type=int, default=None, help="steps to run (default 1000)")
    sim.add_argument("--scaling", default=None, help="none | inverse-lambda | diameter")
    sim.add_argument("--stride", type=int, default=None, help="snapshot every stride steps")
    _add_common(sim)

    att = subs.add_parser("attractor", help="limiting orbit and attractor point cloud")
    _add_model_flags(att)
    att.add_argument("--d", type=int, default=None, help="opinion dimension (default 3)")
    att.add_argument("--seed", type=int, default=None, help="initial-state seed (default 0)")
    att.add_argument("--steps", type=int, default=None, help="orbit horizon (default 400)")
    att.add_argument("--resolution", type=int, default=None, help="phases per ellipse (default 128)")
    _add_common(att)

    mx = subs.add_parser("mixed", help="randomly mixed two-set dynamics")
    _add_model_flags(mx)
    mx.add_argument("--C2", default=None, help="second neighbor set")
    mx.add_argument("--q", type=float, default=None, help="draw probability of --C2")
    mx.add_argument("--d", type=int, default=None, help="opinion dimension (default 3)")
    mx.add_argument("--seed", type=int, default=None, help="draw and state seed (default 0)")
    mx.add_argument("--steps", type=int, default=None, help="steps to run (default 2000)")
    mx.add_argument("--stride", type=int, default=None, help="snapshot every stride steps")
    _add_common(mx)

    eq = subs.add_parser("equidist", help="discrepancy of the rotation phases")
    _add_model_flags(eq)
    eq.add_argument("--from-spectrum", dest="from_spectrum", default=None,
                    help="read n, C, p from an exported spectrum.json")
    eq.add_argument("--t", default=None, help="comma-separated horizons (default 100,1000,10000)")
    eq.add_argument("--L", type=int, default=None, help="bound cutoff (default 32)")
    eq.add_argument("--L-max", dest="L_max", type=int, default=None,
                    help="dependence scan range (default 100)")
    eq.add_argument("--tol", type=float, default=None, help="dependence tolerance (default 1e-9)")
    eq.add_argument("--cut-budget", dest="cut_budget", type=int, default=None,
                    help="cut positions per axis for the 2-D engine (default 512)")
    _add_common(eq)

    rep = subs.add_parser("reproduce", help="run a canned example and check its claims")
    rep.add_argument("example", nargs="?", choices=EXAMPLE_IDS, default=None)
    rep.add_argument("--manifest", default=None, help="replay a run_manifest.json instead")
    _add_common(rep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params, cfg = _resolve(args, args.command)
        out_dir = Path(args.out_dir or cfg.get("out_dir") or "out")
        out_dir.mkdir(parents=True, exist_ok=True)
        code, files = _RUNNERS[args.command](params, out_dir)
        if args.command == "reproduce" and params.get("manifest"):
            # a replayed directory gets the original manifest, so replaying
            # a replay chains byte-identically
            recorded = json.loads(Path(params["manifest"]).read_text())
            _write_manifest(recorded["command"], recorded["params"], out_dir, files)
        else:
            _write_manifest(args.command, params, out_dir, files)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InvalidModelError, DegenerateMixtureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except ContradynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return code


if __name__ == "__main__":
    sys.exit(main())
