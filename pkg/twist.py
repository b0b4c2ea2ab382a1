#!/usr/bin/env python3
"""
Twisted QAOA Certifier - CLI Entry Point

Certifies the guaranteed approximation ratios of bare and twisted QAOA on cubic graphs,
runs the hybrid pipeline on concrete graphs and exposes the classical helpers.

Usage:
    # Reproduce the full results table
    python twist.py certify --all

    # One cell
    python twist.py certify --method fkl --p 1

    # Hybrid run on a graph file
    python twist.py run --graph k33.txt --p 1 --post fkl --shots 1000 --seed 7

Configuration:
    Create a config.yaml file (copy from config.example.yaml) with:
    - threads: internal parallelism cap (default: 1)
    - restarts: optimizer restarts for `run` (default: 8)
    - certify_restarts: restarts when generating bare witness angles (default: 64)
    - seed: default seed (default: 2023)
    - shots: default shot count (default: 1000)
    - angle_cache: JSON file freezing generated angles (default: witness_angles.json)
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from rich.console import Console
from rich.table import Table

from twqaoa import TwistError
from twqaoa.certify import (
    WitnessAngleStore,
    certify_all,
    certify_table,
    classical_baselines,
    table_invariant_violations,
)
from twqaoa.cut import format_cut, cutsize, max_cut_exact, mc_upper_bound, parse_cut
from twqaoa.environments import EnvironmentKind, catalog
from twqaoa.errors import CutError
from twqaoa.graph import format_edge_list, format_marked, random_three_regular, read_edge_list, write_edge_list
from twqaoa.operators import Method
from twqaoa.optimize import twisted_qaoa_run
from twqaoa.postprocess import FlipStep, guaranteed_gain, postprocess

console = Console(stderr=True)
logger = logging.getLogger("twist")

DEFAULTS: Dict[str, Any] = {
    'threads': 1,
    'restarts': 8,
    'certify_restarts': 64,
    'seed': 2023,
    'shots': 1000,
    'angle_cache': 'witness_angles.json',
}


def load_config(config_path: Path) -> Dict[str, Any]:
    """
    Load flat `key: value` pairs from a config file.

    The file uses the YAML extension but only top-level scalar pairs are read; nested
    blocks are not supported. Values come back as strings with quotes and trailing
    `# comments` removed.

    Args:
        config_path: Path to config.yaml

    Returns:
        Dictionary of raw string values
    """
    if not config_path.exists():
        return {}

    config = {}
    try:
        # Flat key: value pairs only
        with open(config_path) as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith('#'):
                    continue
                if ':' in line:
                    key, value = line.split(':', 1)
                    key = key.strip()
                    value = value.split('#')[0].strip().strip('"').strip("'")
                    config[key] = value
    except Exception as e:
        console.print(f"[yellow]Warning:[/yellow] Failed to parse config file: {e}")

    return config


def resolve_settings(args: argparse.Namespace, config: Dict[str, str]) -> Dict[str, Any]:
    """Command-line flags override config file values, which override defaults."""
    settings = dict(DEFAULTS)
    for key, default in DEFAULTS.items():
        if key in config:
            raw = config[key]
            try:
                settings[key] = type(default)(raw) if isinstance(default, int) else raw
            except ValueError:
                console.print(f"[yellow]Warning:[/yellow] Ignoring invalid {key}: {raw!r}")
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    return settings


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def emit(document: Any, out: Optional[Path]) -> None:
    """Write a JSON document to --out or stdout."""
    text = json.dumps(document, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    output_path = Path(out)
    if output_path.parent and str(output_path.parent) != '.':
        output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, 'w', newline='\n') as f:
        f.write(text)
    console.print(f"[green]OK[/green] Wrote {output_path}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--config',
        type=Path,
        default=Path('config.yaml'),
        help='Path to config file (default: config.yaml)'
    )
    common.add_argument(
        '--threads',
        type=positive_int,
        help='Cap on internal parallelism (default: 1)'
    )
    common.add_argument(
        '--timing',
        action='store_true',
        help='Include wall-clock seconds in reports'
    )
    common.add_argument(
        '--verbose',
        action='store_true',
        help='Enable verbose logging'
    )

    parser = argparse.ArgumentParser(
        description="Certify and run twisted hybrid QAOA MaxCut algorithms on cubic graphs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Reproduce all 18 table bounds
  python twist.py certify --all --out table.json

  # Twisted run with FKL post-processing
  python twist.py run --graph k33.txt --p 1 --post fkl --shots 1000 --seed 7

  # Post-process a cut and show every flip
  python twist.py postprocess --graph g.txt --cut 00000000 --method hlz --trace

  # Random cubic graph, then its exact MaxCut
  python twist.py gen --n 14 --seed 1 --out g14.txt
  python twist.py maxcut --graph g14.txt
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    certify = sub.add_parser('certify', parents=[common], help='Certify table bounds')
    certify.add_argument('--method', choices=[m.value for m in Method], help='Algorithm row')
    certify.add_argument('--p', type=int, choices=range(1, 7), help='Level (1..6)')
    certify.add_argument('--all', action='store_true', help='All 18 cells')
    certify.add_argument('--out', type=Path, help='Write JSON here instead of stdout')

    run = sub.add_parser('run', parents=[common], help='Twisted QAOA on a graph file')
    run.add_argument('--graph', type=Path, required=True, help='Edge-list file')
    run.add_argument('--p', type=positive_int, default=1, help='Level (default: 1)')
    run.add_argument('--post', choices=['none', 'fkl', 'hlz'], default='none',
                     help='Post-processing (default: none)')
    run.add_argument('--shots', type=positive_int, help='Samples (default: 1000)')
    run.add_argument('--seed', type=int, help='Seed (default: 2023)')
    run.add_argument('--restarts', type=positive_int, help='Optimizer restarts (default: 8)')
    run.add_argument('--out', type=Path, help='Write JSON here instead of stdout')

    post = sub.add_parser('postprocess', parents=[common], help='Improve a cut classically')
    post.add_argument('--graph', type=Path, required=True, help='Edge-list file')
    post.add_argument('--cut', required=True, help='0/1 string, vertex 0 leftmost')
    post.add_argument('--method', choices=['fkl', 'hlz', 'greedy'], default='fkl',
                      help='Procedure (default: fkl)')
    post.add_argument('--trace', action='store_true', help='Print one line per flip')

    gen = sub.add_parser('gen', parents=[common], help='Random cubic graph')
    gen.add_argument('--n', type=int, required=True, help='Vertex count (even, >= 4)')
    gen.add_argument('--seed', type=int, help='Seed (default: 2023)')
    gen.add_argument('--out', type=Path, help='Edge-list file (default: stdout)')

    maxcut = sub.add_parser('maxcut', parents=[common], help='Exact MaxCut (n <= 26)')
    maxcut.add_argument('--graph', type=Path, required=True, help='Edge-list file')

    envs = sub.add_parser('envs', parents=[common], help='Dump environment catalogs')
    envs.add_argument('--kind', choices=[k.value for k in EnvironmentKind], default='triplet',
                      help='Support kind (default: triplet)')

    sub.add_parser('baselines', parents=[common], help='Classical post-processing baselines')
    return parser


def print_reports(reports) -> None:
    table = Table(title="Certified bounds")
    table.add_column("method")
    table.add_column("p", justify="right")
    table.add_column("bound", justify="right")
    table.add_column("target", justify="right")
    table.add_column("angles")
    table.add_column("status")
    for report in reports:
        status = "[green]OK[/green]" if report.passed else "[red]FAIL[/red]"
        table.add_row(
            report.method.value,
            str(report.p),
            f"{report.bound:.6f}",
            f"{report.target:.4f}",
            report.source,
            status,
        )
    console.print(table)


def cmd_certify(args, settings, parser) -> int:
    if not args.all and (args.method is None or args.p is None):
        parser.error("certify needs --all or both --method and --p")

    store = WitnessAngleStore(
        cache_path=Path(settings['angle_cache']) if settings['angle_cache'] else None,
        restarts=settings['certify_restarts'],
        seed=settings['seed'],
        workers=settings['threads'],
    )
    if args.all:
        reports = certify_all(store, workers=settings['threads'])
        for problem in table_invariant_violations(reports):
            logger.warning(problem)
        emit([r.to_dict(timing=args.timing) for r in reports], args.out)
    else:
        reports = [certify_table(Method(args.method), args.p, store)]
        emit(reports[0].to_dict(timing=args.timing), args.out)

    print_reports(reports)
    failed = [r for r in reports if not r.passed]
    for report in failed:
        console.print(f"[red]ERROR[/red] {report.method.value} p={report.p}: {report.failure}")
    return 1 if failed else 0


def cmd_run(args, settings, parser) -> int:
    g = read_edge_list(args.graph)
    console.print(f"[cyan]Graph:[/cyan] n={g.n}, m={g.m}")
    record = twisted_qaoa_run(
        g,
        args.p,
        Method(args.post),
        shots=settings['shots'] if args.shots is None else args.shots,
        seed=settings['seed'] if args.seed is None else args.seed,
        restarts=settings['restarts'] if args.restarts is None else args.restarts,
        workers=settings['threads'],
    )
    emit(record.to_dict(), args.out)
    console.print(
        f"[green]OK[/green] best cutsize {record.best_cutsize}/{record.max_cut}, "
        f"mean ratio {record.mean_ratio:.4f}"
    )
    return 0


def cmd_postprocess(args, settings, parser) -> int:
    g = read_edge_list(args.graph)
    try:
        c = parse_cut(args.cut, g.n)
    except CutError as e:
        parser.error(str(e))

    trace: List[FlipStep] = []
    result = postprocess(g, c, args.method, trace=trace)
    gain = guaranteed_gain(g, c, args.method)
    before, after = cutsize(g, c), cutsize(g, result)

    if args.trace:
        for step in trace:
            console.print(step.describe())
    emit(
        {
            "schema": 1,
            "method": args.method,
            "cut": format_cut(result),
            "before": before,
            "after": after,
            "guaranteed_gain": str(gain),
            "guaranteed_gain_value": round(float(gain), 6),
            "steps": len(trace),
        },
        None,
    )
    return 0


def cmd_gen(args, settings, parser) -> int:
    g = random_three_regular(args.n, settings['seed'] if args.seed is None else args.seed)
    if args.out:
        write_edge_list(g, args.out)
        console.print(f"[green]OK[/green] Wrote {args.out} (n={g.n}, m={g.m})")
    else:
        sys.stdout.write(format_edge_list(g))
    return 0


def cmd_maxcut(args, settings, parser) -> int:
    g = read_edge_list(args.graph)
    value, witness = max_cut_exact(g)
    emit({"schema": 1, "max_cut": value, "cut": format_cut(witness), "upper_bound": mc_upper_bound(g)}, None)
    return 0


def cmd_envs(args, settings, parser) -> int:
    cat = catalog(EnvironmentKind(args.kind))
    blocks = [f"# {cat.name(r)}\n{format_marked(env)}" for r, env in enumerate(cat.entries)]
    sys.stdout.write("\n".join(blocks))
    console.print(f"[green]OK[/green] {len(cat)} {args.kind} environments")
    return 0


def cmd_baselines(args, settings, parser) -> int:
    emit(
        [
            {"name": b.name, "ratio": str(b.ratio), "value": round(float(b.ratio), 6),
             "description": b.description}
            for b in classical_baselines()
        ],
        None,
    )
    return 0


COMMANDS = {
    'certify': cmd_certify,
    'run': cmd_run,
    'postprocess': cmd_postprocess,
    'gen': cmd_gen,
    'maxcut': cmd_maxcut,
    'envs': cmd_envs,
    'baselines': cmd_baselines,
}


def main(argv: Optional[List[str]] = None):
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Configure logging
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    # Command-line args override config file
    settings = resolve_settings(args, load_config(args.config))

    try:
        code = COMMANDS[args.command](args, settings, parser)
        sys.exit(code)

    except TwistError as e:
        console.print(f"\n[red]ERROR[/red] {e}")
        sys.exit(1)

    except KeyboardInterrupt:
        console.print("\n[yellow]Interrupted by user[/yellow]")
        sys.exit(130)

    except Exception as e:
        console.print(f"\n[red]Unexpected Error:[/red] {e}")
        if args.verbose:
            import traceback
            traceback.print_exc()
        sys.exit(1)


if __name__ == "__main__":
    main()
