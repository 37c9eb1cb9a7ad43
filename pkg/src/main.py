"""
Main orchestrator for satlink-dtn.
Loads scenarios, runs them, and writes logs, reports and exports.
"""

import json
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

from .link import get_profile
from .orbit import OrbitEphemeris
from .reports import Report, build_report, pass_plan_rows, render_pass_plan, render_profiles, render_text
from .scenarios import SCENARIO_REGISTRY, get_scenario
from .sim import Engine, Record, ScenarioConfig, SimulationAborted, load_config, read_log, write_records
from .utils.config import Config
from .utils.timezone import TimezoneHandler

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = 'builtin:'


class ScenarioRunner:
    """Orchestrates scenario runs for the command line."""

    def __init__(self, quiet: bool = False):
        self.config = Config()
        self.tz_handler = TimezoneHandler(self.config.display_timezone)
        self.quiet = quiet

    def _print(self, *args):
        if not self.quiet:
            print(*args)

    def setup(self) -> bool:
        """
        Validate environment configuration and set up logging.

        Returns:
            True if the configuration is usable
        """
        if not self.config.validate():
            return False
        logging.basicConfig(
            level=self.config.log_level,
            format='%(levelname)s %(name)s: %(message)s',
        )
        return True

    def load(self, source: str) -> ScenarioConfig:
        """
        Load a scenario from a file or a `builtin:<name>` reference.

        Raises:
            ConfigError: If the document is invalid
            ValueError: If the builtin name is unknown
        """
        if source.startswith(BUILTIN_PREFIX):
            return get_scenario(source[len(BUILTIN_PREFIX):])
        return load_config(source)

    def run_scenario(
        self,
        scenario: ScenarioConfig,
        log_path: Optional[Union[str, Path]] = None,
        report_path: Optional[Union[str, Path]] = None,
    ) -> Report:
        """
        Run one scenario and write its log and report.

        Raises:
            SimulationAborted: If the log cannot be written
        """
        self._print("\n" + "=" * 60)
        self._print(f"🛰  SATLINK-DTN - {scenario.name}")
        self._print("=" * 60)
        self._print(f"   Seed: {scenario.seed}")
        self._print(f"   Duration: {TimezoneHandler.format_duration(scenario.duration_ms)}")

        output = self.config.output_dir
        log_path = Path(log_path) if log_path else output / f"{scenario.name}.ndjson"
        report_path = Path(report_path) if report_path else output / f"{scenario.name}.report.json"

        try:
            metrics, log = Engine(scenario, log_path).run()
        except SimulationAborted as e:
            self._print(f"   ❌ {e}")
            self.save_aborted(e.records, output / f"{scenario.name}.aborted.ndjson")
            raise

        report = build_report(log.records)
        self._print(f"   ✓ {len(log)} records written to {log_path}")
        self.write_report(report, report_path)
        self._print("")
        self._print(render_text(report))
        self._print_summary(report)
        return report

    def save_aborted(self, records: List[Record], path: Path) -> Optional[Path]:
        """Dump the records of an aborted run to a fallback log."""
        try:
            write_records(records, path)
        except OSError as e:
            logger.error("cannot save aborted run to %s: %s", path, e)
            self._print(f"   ❌ {len(records)} records lost")
            return None
        self._print(f"   ⚠️  {len(records)} records saved to {path}")
        return path

    def write_report(self, report: Report, path: Union[str, Path]):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.to_json(), encoding='utf-8')
        self._print(f"   ✓ Report written to {path}")

    def regenerate_report(self, log_path: Union[str, Path], report_path: Optional[Union[str, Path]] = None) -> Report:
        """
        Rebuild a report from a saved log.

        Raises:
            EventLogError: If the log is unreadable
        """
        report = build_report(read_log(log_path))
        if report_path:
            self.write_report(report, report_path)
        self._print(render_text(report))
        return report

    def export_scenarios(
        self,
        out_dir: Union[str, Path],
        names: Optional[Sequence[str]] = None,
        golden: bool = False,
    ) -> List[Path]:
        """
        Write canned scenarios as config files, and golden summaries on request.

        Raises:
            ValueError: If a name is not a canned scenario
        """
        out_dir = Path(out_dir)
        names = list(names or self.config.builtin_scenarios or SCENARIO_REGISTRY)

        self._print("\n" + "-" * 60)
        self._print("📦 EXPORTING SCENARIOS")
        self._print("-" * 60)

        written = []
        out_dir.mkdir(parents=True, exist_ok=True)
        for name in names:
            scenario = get_scenario(name)
            path = out_dir / f"{name}.json"
            path.write_text(scenario.to_json() + '\n', encoding='utf-8')
            written.append(path)
            self._print(f"   ✓ {path}")

            if golden:
                _, log = Engine(scenario).run()
                summary = build_report(log.records).summary()
                golden_path = out_dir / 'golden' / f"{name}.json"
                golden_path.parent.mkdir(parents=True, exist_ok=True)
                golden_path.write_text(json.dumps(summary, sort_keys=True, indent=2) + '\n', encoding='utf-8')
                written.append(golden_path)
                self._print(f"   ✓ {golden_path} (golden)")
        return written

    def compare_profiles(self, window_ms: int) -> str:
        table = render_profiles(window_ms)
        self._print(table)
        return table

    def plan_passes(
        self,
        eph: OrbitEphemeris,
        t_from: int,
        t_to: int,
        epoch: Optional[str] = None,
        profile_name: str = 'HUMSAT',
    ) -> str:
        profile = get_profile(profile_name)
        rows = pass_plan_rows(eph, t_from, t_to, profile, epoch, self.config.display_timezone)
        table = render_pass_plan(eph, rows, profile)
        self._print(table)
        return table

    def _print_summary(self, report: Report):
        ledger = report.ledger
        self._print("=" * 60)
        if report.passed:
            self._print(f"✅ {report.scenario}: all {len(report.assertions)} assertions as expected")
        else:
            self._print(f"❌ {report.scenario}: {len(report.failures)} of {len(report.assertions)} assertions failed")
            for failure in report.failures:
                self._print(f"   - {failure['name']}: {failure['result']} (expected {failure['expected']})")
        self._print(
            f"   📊 Datums: {ledger.get('enqueued', 0)} enqueued, "
            f"{ledger.get('delivered', 0)} delivered, "
            f"{ledger.get('stored', 0)} stored, {ledger.get('dropped', 0)} dropped"
        )
        for node, t in report.violations.items():
            self._print(f"   ⚠ {node} exceeded its endurance at t={t} ms")
        self._print("=" * 60 + "\n")
