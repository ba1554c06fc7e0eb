"""Command-line front end.

Subcommands: `run` (one scenario, metrics as JSON on stdout),
`sweep-malicious`, `sweep-threshold`, `compare-dsr` (batch experiments
writing CSVs and plot scripts), and `validate` (canned invariant
checks).  Exit codes: 0 success, 1 run or output failure, 2 usage or
configuration error.
"""

import argparse
import json
import sys

from . import harness
from .config import ConfigError, ScenarioConfig, load_scenario
from .metrics import summary
from .simulation import run_simulation


def _load(args):
    if args.config:
        try:
            return load_scenario(args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc}") from None
    return ScenarioConfig()


def _cmd_run(args):
    cfg = _load(args)
    seed = cfg.base_seed if args.seed is None else args.seed
    metrics, meta = run_simulation(cfg, seed)
    payload = dict(meta)
    payload["metrics"] = metrics.to_dict()
    payload["summary"] = summary(metrics)
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _cmd_experiment(args):
    cfg = _load(args)
    exp = harness.BUILDERS[args.command](cfg)

    def progress(done, total):
        sys.stderr.write(f"\r{exp.name}: {done}/{total} runs")
        sys.stderr.flush()
        if done == total:
            sys.stderr.write("\n")

    result = harness.run_experiment(
        exp, base_seed=args.seed, n_runs=args.runs, jobs=args.jobs,
        progress=progress if sys.stderr.isatty() else None)
    for path in harness.write_outputs(result, args.out):
        print(path)
    return 0


def _cmd_validate(args):
    return harness.validate()


def build_parser():
    parser = argparse.ArgumentParser(
        prog="oceansim",
        description="Ad hoc network simulator with source routing and "
                    "observation-based cooperation enforcement.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="scenario file; omitted keys take defaults")
    common.add_argument("--seed", type=int, metavar="N",
                        help="base random seed (default from config)")
    common.add_argument("--runs", type=int, metavar="N",
                        help="seeds per sweep point (default from config)")
    common.add_argument("--out", metavar="DIR", default="results",
                        help="output directory for experiment files")
    common.add_argument("--jobs", type=int, metavar="N", default=1,
                        help="worker processes for independent runs")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common],
                   help="single simulation, metrics to stdout").set_defaults(
        func=_cmd_run)
    for name in ("sweep-malicious", "sweep-threshold", "compare-dsr"):
        sub.add_parser(name, parents=[common],
                       help=f"{name} experiment, CSVs to --out").set_defaults(
            func=_cmd_experiment)
    sub.add_parser("validate", parents=[common],
                   help="canned invariant checks").set_defaults(
        func=_cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (harness.ExperimentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
