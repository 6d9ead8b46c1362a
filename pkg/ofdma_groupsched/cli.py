"""
CLI - Command-line front end: run, sweep, example, validate and bench subcommands
"""

import argparse
import json
import logging
import sys
from typing import Dict, List, Optional

from ofdma_groupsched import __version__, api
from ofdma_groupsched.chart_generator import AXES, METRICS
from ofdma_groupsched.config import parse_value
from ofdma_groupsched.exceptions import ConfigError
from ofdma_groupsched.hooks import allocator_hooks, app_title, channel_hooks
from ofdma_groupsched.presets import SWEEP_PRESETS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

USAGE_ERRORS = ("ConfigError", "DomainError")

# long flag -> help text; the dest is the SimConfig field
CONFIG_FLAGS = {
    "users": "number of users K",
    "subcarriers": "number of subcarriers M",
    "group-size": "subcarriers per group N_g (must divide M)",
    "epsilon": "reporting threshold; 'inf' reports every group",
    "l-param": "step-2 shortlist length L (default: K/4 rounded, at least 1)",
    "slots": "scheduling intervals T per SNR point",
    "snr-db": "comma-separated mean SNR points in dB",
    "alpha": "comma-separated fairness weights, normalised internally",
    "seed": "master RNG seed",
    "total-power": "total transmit power P_t",
    "max-it": "step-1 iteration cap (default: number of groups)",
    "channel-model": f"one of: {', '.join(channel_hooks)}",
    "grouping": "interleaved or contiguous",
    "taps": "multipath taps",
    "delay-spread": "multipath RMS delay spread in sample spacings",
}


def _common_parser() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    return parent


def _experiment_parser(algo_help: str) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    for flag, help_text in CONFIG_FLAGS.items():
        parent.add_argument(f"--{flag}", dest=flag.replace("-", "_"), metavar="VALUE", help=help_text)

    link = parent.add_mutually_exclusive_group()
    link.add_argument("--gap", metavar="VALUE", help="SNR gap, linear")
    link.add_argument("--ber", metavar="VALUE", help="target BER, converted to an SNR gap")

    parent.add_argument("--algo", metavar="NAME", help=algo_help)
    parent.add_argument("--config", metavar="PATH", help="key=value or YAML config file; flags win")
    parent.add_argument("--threads", type=int, metavar="N", help="worker threads (output is unchanged)")
    parent.add_argument("--output", metavar="PATH", help="CSV destination (default stdout)")
    parent.add_argument("--manifest", metavar="PATH", help="write the JSON run manifest here")
    return parent


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    algos = ", ".join(allocator_hooks)

    parser = argparse.ArgumentParser(
        prog="ofdma-groupsched",
        description=app_title,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    sub.add_parser(
        "run",
        parents=[common, _experiment_parser(f"allocator, one of: {algos}")],
        help="simulate one configuration and write aggregate CSV",
    )

    sweep = sub.add_parser(
        "sweep",
        parents=[common, _experiment_parser(f"comma-separated allocators from: {algos}")],
        help="simulate a parameter sweep",
    )
    sweep.add_argument("--axis", choices=AXES, help="swept parameter")
    sweep.add_argument("--values", metavar="LIST", help="comma-separated sweep values")
    sweep.add_argument("--metric", choices=METRICS, help="plot-data metric (default throughput)")
    sweep.add_argument("--plot-data", metavar="PATH", help="write series,x,y plot data here")
    sweep.add_argument("--preset", choices=[p["name"] for p in SWEEP_PRESETS], help="named sweep")

    example = sub.add_parser("example", parents=[common], help="two-user worked example")
    example.add_argument("--rates", help=argparse.SUPPRESS)

    validate = sub.add_parser("validate", parents=[common], help="oracle, invariant and determinism suites")
    validate.add_argument("--seed", type=int, default=7)
    validate.add_argument("--cases", type=int, help="randomised cases per invariant suite (default 1000)")
    validate.add_argument("--instances", type=int, help="oracle instances (default 500)")
    validate.add_argument("--output", metavar="PATH", help="JSON summary destination (default stdout)")

    bench = sub.add_parser("bench", parents=[common], help="time each allocator on random instances")
    bench.add_argument("--users", type=int, default=8)
    bench.add_argument("--groups", type=int, default=32)
    bench.add_argument("--instances", type=int, default=200)
    bench.add_argument("--seed", type=int, default=7)
    bench.add_argument("--algo", metavar="LIST", help=f"comma-separated allocators (default all: {algos})")

    return parser


def _split(raw: Optional[str]) -> List[str]:
    if raw is None:
        return []
    return [part.strip() for part in raw.split(",") if part.strip()]


def _overrides(args: argparse.Namespace, with_algo: bool) -> Dict[str, str]:
    """Flag values keyed by SimConfig field, typed by the config layer"""
    keys = [flag.replace("-", "_") for flag in CONFIG_FLAGS] + ["gap", "ber"]
    if with_algo:
        keys.append("algo")

    overrides = {}
    for key in keys:
        raw = getattr(args, key, None)
        if raw is not None:
            overrides[key] = parse_value(key, raw)
    return overrides


def _exit_code(result: Dict) -> int:
    if result.get("success"):
        return EXIT_OK
    if "error" in result:
        field = result.get("field")
        flag = f" (--{field.replace('_', '-')})" if field else ""
        print(f"error{flag}: {result['error']}", file=sys.stderr)
        if result.get("error_type") in USAGE_ERRORS:
            return EXIT_USAGE
    return EXIT_FAILED


def cmd_run(args: argparse.Namespace) -> int:
    result = api.run_simulation(
        overrides=_overrides(args, with_algo=True),
        config_file=args.config,
        threads=args.threads,
        output=args.output,
        manifest=args.manifest,
    )
    return _exit_code(result)


def cmd_sweep(args: argparse.Namespace) -> int:
    if not args.axis and not args.preset:
        raise ConfigError("sweep needs --axis or --preset", field="axis")
    if args.values is not None and not _split(args.values):
        raise ConfigError("--values is empty", field="values")

    try:
        values = [float(v) for v in _split(args.values)]
    except ValueError:
        raise ConfigError(f"invalid --values: {args.values!r}", field="values")

    result = api.run_sweep(
        axis=args.axis,
        values=values,
        algos=_split(args.algo),
        overrides=_overrides(args, with_algo=False),
        config_file=args.config,
        threads=args.threads,
        output=args.output,
        manifest=args.manifest,
        plot_data=args.plot_data,
        metric=args.metric,
        preset=args.preset,
    )
    return _exit_code(result)


def cmd_example(args: argparse.Namespace) -> int:
    rates = None
    if args.rates:
        try:
            rates = [[float(v) for v in _split(row)] for row in args.rates.split(";")]
        except ValueError:
            raise ConfigError(f"invalid --rates: {args.rates!r}", field="rates")

    result = api.run_worked_example(rates)
    if "line" in result:
        print(result["line"])
    for mismatch in result.get("mismatches", []):
        print(f"mismatch: {mismatch}", file=sys.stderr)
    return _exit_code(result)


def cmd_validate(args: argparse.Namespace) -> int:
    result = api.run_validation(seed=args.seed, cases=args.cases, instances=args.instances)
    if "summary" in result:
        text = json.dumps(result["summary"], indent=2, sort_keys=True) + "\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        else:
            sys.stdout.write(text)
        for suite in result["summary"]["suites"]:
            for failure in suite["failures"]:
                print(f"FAIL {suite['name']}: {failure}", file=sys.stderr)
    return _exit_code(result)


def cmd_bench(args: argparse.Namespace) -> int:
    result = api.run_benchmark(
        users=args.users,
        groups=args.groups,
        instances=args.instances,
        seed=args.seed,
        algos=_split(args.algo) or None,
    )
    if result.get("success"):
        sys.stdout.write(result["table"].to_csv(index=False, float_format="%.3f", lineterminator="\n"))
    return _exit_code(result)


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "example": cmd_example,
    "validate": cmd_validate,
    "bench": cmd_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    if getattr(args, "threads", None) is not None and args.threads < 1:
        parser.error("--threads must be >= 1")

    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        flag = f" (--{e.field.replace('_', '-')})" if e.field else ""
        print(f"error{flag}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
