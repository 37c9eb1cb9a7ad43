#!/usr/bin/env python3
"""
Entry point for satlink-dtn.

Usage:
    python run.py run builtin:dry_run             # Run a canned scenario
    python run.py run my_scenario.json --seed 7   # Run a scenario file
    python run.py compare-profiles --window 300   # Radio profile comparison
    python run.py plan-passes --ephemeris 0,5802000,300000 --to 86400000
    python run.py export --golden                 # Write scenarios/ and scenarios/golden/
    python run.py report output/dry_run.ndjson    # Rebuild a report from a log
    python run.py list                            # Show canned scenarios

Exit status: 0 pass, 1 assertion failure, 2 usage or config error.
"""

import sys
import json
import argparse
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2

DAY_MS = 86_400_000


def parse_ephemeris(value: str):
    """
    Ephemeris from "last,period,window" (ms) or a JSON file.

    The file holds either one ephemeris object or a scenario document,
    in which case its first ephemeris is used.
    """
    from src.orbit import OrbitEphemeris

    path = Path(value)
    if path.exists():
        data = json.loads(path.read_text(encoding='utf-8'))
        if 'ephemerides' in data:
            if not data['ephemerides']:
                raise ValueError(f"{value} has no ephemerides")
            data = data['ephemerides'][0]
        return OrbitEphemeris(
            data.get('satellite_id', 'sat'),
            int(data['last_passage_ms']),
            int(data['period_ms']),
            int(data['window_ms']),
            data.get('id'),
        )

    parts = value.split(',')
    if len(parts) != 3:
        raise ValueError(f"--ephemeris expects last,period,window in ms or a JSON file, got {value!r}")
    last, period, window = (int(p) for p in parts)
    return OrbitEphemeris('sat', last, period, window)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='satlink-dtn - Satellite-constrained DTN simulator for UAVs'
    )
    commands = parser.add_subparsers(dest='command', required=True)

    run_cmd = commands.add_parser('run', help='Run a scenario and report its assertions')
    run_cmd.add_argument('config', help='Scenario JSON file, or builtin:<name>')
    run_cmd.add_argument('--seed', type=int, help='Override the scenario seed')
    run_cmd.add_argument('--until', type=int, metavar='MS', help='Override the run duration (ms)')
    run_cmd.add_argument('--report', metavar='PATH', help='Where to write the JSON report')
    run_cmd.add_argument('--log', metavar='PATH', help='Where to write the NDJSON event log')
    run_cmd.add_argument('--quiet', action='store_true', help='Only set the exit status')

    profiles_cmd = commands.add_parser('compare-profiles', help='Compare built-in radio profiles')
    profiles_cmd.add_argument('--window', type=float, default=300, help='Pass window in seconds (default 300)')

    plan_cmd = commands.add_parser('plan-passes', help='List communication windows of an ephemeris')
    plan_cmd.add_argument('--ephemeris', required=True, help='"last,period,window" in ms, or a JSON file')
    plan_cmd.add_argument('--from', dest='t_from', type=int, default=0, metavar='MS')
    plan_cmd.add_argument('--to', dest='t_to', type=int, default=DAY_MS, metavar='MS')
    plan_cmd.add_argument('--epoch', help='Wall-clock time of t=0 (ISO 8601)')
    plan_cmd.add_argument('--profile', default='HUMSAT', help='Radio profile for the capacity column')

    export_cmd = commands.add_parser('export', help='Write canned scenarios as config files')
    export_cmd.add_argument('names', nargs='*', help='Scenarios to export (default: all)')
    export_cmd.add_argument('--out', default='scenarios', help='Output directory (default: scenarios)')
    export_cmd.add_argument('--golden', action='store_true', help='Also run them and write golden summaries')

    report_cmd = commands.add_parser('report', help='Rebuild a report from a saved event log')
    report_cmd.add_argument('log', help='NDJSON event log')
    report_cmd.add_argument('--report', metavar='PATH', help='Where to write the JSON report')

    commands.add_parser('list', help='Show canned scenarios')

    return parser


def dispatch(args) -> int:
    from src.main import ScenarioRunner

    runner = ScenarioRunner(quiet=getattr(args, 'quiet', False))
    if not runner.setup():
        return EXIT_USAGE

    if args.command == 'run':
        scenario = runner.load(args.config)
        if args.seed is not None or args.until is not None:
            scenario = scenario.with_overrides(seed=args.seed, duration_ms=args.until)
        report = runner.run_scenario(scenario, args.log, args.report)
        return EXIT_OK if report.passed else EXIT_ASSERTION

    if args.command == 'compare-profiles':
        window_ms = round(args.window * 1000)
        if window_ms <= 0:
            raise ValueError(f"--window must be > 0 seconds, got {args.window}")
        runner.compare_profiles(window_ms)
        return EXIT_OK

    if args.command == 'plan-passes':
        eph = parse_ephemeris(args.ephemeris)
        runner.plan_passes(eph, args.t_from, args.t_to, args.epoch, args.profile)
        return EXIT_OK

    if args.command == 'export':
        runner.export_scenarios(args.out, args.names, golden=args.golden)
        return EXIT_OK

    if args.command == 'report':
        report = runner.regenerate_report(args.log, args.report)
        return EXIT_OK if report.passed else EXIT_ASSERTION

    if args.command == 'list':
        from src.scenarios import list_scenarios

        print("\n📋 Canned scenarios:")
        for name, description in list_scenarios():
            print(f"   {name:28s} {description}")
        return EXIT_OK

    return EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    from src.sim import ConfigError, EventLogError, SimulationAborted

    try:
        return dispatch(args)
    except ConfigError as e:
        print(f"❌ Invalid scenario: {e}", file=sys.stderr)
        return EXIT_USAGE
    except EventLogError as e:
        print(f"❌ Invalid event log: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SimulationAborted as e:
        print(f"❌ Run aborted: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, OSError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
