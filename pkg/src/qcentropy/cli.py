"""Command-line entry point.

    qcentropy run --preset fig2e --seed 7 --out results/
    qcentropy run --config my.ini
    qcentropy list-presets
    qcentropy validate --config my.ini
    qcentropy selfcheck

Exit codes: 0 ok, 1 validation, 2 numerical integrity, 3 I/O.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import config as config_mod
from . import presets
from .errors import QCEntropyError
from .runner import WORKERS_ENV, default_workers, run_scenario

log = logging.getLogger("qcentropy")


def _scenarios(args) -> list:
    if args.config:
        cfgs = [config_mod.load_config(args.config)]
    elif args.preset:
        cfgs = presets.expand(args.preset)
    else:
        raise config_mod.ConfigError("give --preset or --config", "schema")
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.ntraj is not None:
        changes["n_traj"] = args.ntraj
    if args.t_final is not None:
        changes["t_final"] = args.t_final
    if args.no_plot:
        changes["plot"] = False
    return [c.replace(**changes) for c in cfgs]


def cmd_run(args) -> int:
    from .report import emit

    workers = args.workers or default_workers()
    for cfg in _scenarios(args):
        config_mod.validate(cfg)
    for cfg in _scenarios(args):
        log.info("running %s", cfg.name)
        series = run_scenario(cfg, workers=workers)
        for path in emit(series, cfg, args.out):
            print(path)
    return 0


def cmd_list(args) -> int:
    for name in sorted(presets.PRESETS):
        c = presets.PRESETS[name]
        print(f"{name:20s} {c.state_kind:20s} alpha={c.alpha:<5g} E0={c.E0:g}")
    for fam, members in presets.FAMILIES.items():
        print(f"{fam:20s} family: {' '.join(members)}")
    return 0


def cmd_validate(args) -> int:
    cfgs = _scenarios(args)
    for cfg in cfgs:
        resolved = config_mod.validate(cfg)
        print(config_mod.dump_config(resolved), end="")
    return 0


def cmd_selfcheck(args) -> int:
    from .selfcheck import run_selfcheck

    results = run_selfcheck(n_traj=args.ntraj or 100_000, quick=args.quick)
    ok = True
    for r in results:
        ok &= r.passed
        print(r.line())
    if args.json:
        print(json.dumps([r.as_dict() for r in results], indent=2))
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcentropy", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def scenario_args(p):
        p.add_argument("--preset", help="preset or figure family name")
        p.add_argument("--config", help="scenario config file")
        p.add_argument("--seed", type=int)
        p.add_argument("--ntraj", type=int)
        p.add_argument("--t-final", type=float, dest="t_final")
        p.add_argument("--no-plot", action="store_true")

    p = sub.add_parser("run", help="run a scenario and write CSV (and SVG)")
    scenario_args(p)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--workers", type=int, default=None,
                   help=f"worker threads (default: ${WORKERS_ENV} or 1)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("list-presets", help="list named scenarios")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("validate", help="validate a config and print it resolved")
    scenario_args(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("selfcheck", help="analytic anchors and convergence checks")
    p.add_argument("--ntraj", type=int)
    p.add_argument("--quick", action="store_true", help="short horizons only")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_selfcheck)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except QCEntropyError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
