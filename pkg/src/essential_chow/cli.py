"""Command line: ``build``, ``verify``, ``detect`` and ``experiment``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import chow
from .detector import EXACT, FLOAT, detect, is_exact_data, read_correspondences_csv
from .pieri import VARIANTS, build_resolution, serialize_matrix


def _variants(choice: str):
    return VARIANTS if choice == "both" else (choice,)


def cmd_build(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for v in _variants(args.variant):
        res = build_resolution(v)
        (out / f"alpha_{v}.txt").write_text(serialize_matrix(res.Dalpha, f"variant={v} map=alpha"))
        (out / f"phi_sym_{v}.txt").write_text(serialize_matrix(res.Dphi_sym, f"variant={v} map=phi_sym"))
        sym = chow.chow_matrix_symmetric(v, res)
        ess = chow.pullback_to_essential(sym)
        for cm in (sym, ess):
            path = out / chow.data_filename(v, cm.ambient)
            chow.save(cm, path)
            print(f"wrote {path}")
    return 0


def cmd_verify(args) -> int:
    from .checks import run_checks

    failures = 0
    for result in run_checks(args.level):
        print(result.line())
        failures += not result.passed
    return 1 if failures else 0


def cmd_detect(args) -> int:
    data = read_correspondences_csv(args.input)
    if args.mode == EXACT and not is_exact_data(data):
        print("exact mode needs p/q (or integer) entries in the input", file=sys.stderr)
        return 2
    cm = chow.load(args.matrix) if args.matrix else chow.load_chow_matrix(args.variant, chow.ESS9)
    if cm.ambient != chow.ESS9:
        print("the detector needs a matrix with ambient=ess9", file=sys.stderr)
        return 2
    report = detect(data, mode=args.mode, cm=cm)
    print(json.dumps(report.to_json()))
    return 0


def parse_grid(text: str) -> list[float]:
    """``"2,3,5"`` or ``"start:stop:step"`` (inclusive stop)."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        n = int(round((stop - start) / step)) + 1
        return [start + k * step for k in range(n)]
    return [float(x) for x in text.split(",") if x.strip()]


def cmd_experiment(args) -> int:
    from .experiment import SceneConfig, aggregate_path, run_sweep, write_aggregate_csv, write_trials_csv

    result = run_sweep(parse_grid(args.r_grid), args.trials, SceneConfig(), _variants(args.variant), args.seed)
    write_trials_csv(result, args.out_csv)
    write_aggregate_csv(result, aggregate_path(args.out_csv))
    for r in result.r_grid:
        cells = [f"{v}={result.mean(r, v):.3f}" for v in _variants(args.variant)]
        print(f"r={r:g} " + " ".join(cells))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="essential-chow", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct and serialize the Chow matrices")
    b.add_argument("--variant", choices=("both",) + VARIANTS, default="both")
    b.add_argument("--out", default="chow_matrices")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--level", choices=("quick", "full"), default="quick")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("detect", help="test six correspondences for two-view consistency")
    d.add_argument("--matrix", help="chow-matrix file (default: packaged matrix)")
    d.add_argument("--input", required=True, help="CSV with columns x1,x2,y1,y2")
    d.add_argument("--mode", choices=(EXACT, FLOAT), default=FLOAT)
    d.add_argument("--variant", choices=VARIANTS, default="first")
    d.set_defaults(func=cmd_detect)

    e = sub.add_parser("experiment", help="noise sweep of the spectral signal")
    e.add_argument("--r-grid", default="1:15:0.5")
    e.add_argument("--trials", type=int, default=100)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out-csv", default="sweep.csv")
    e.add_argument("--variant", choices=("both",) + VARIANTS, default="both")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
