"""
Configuration loader for satlink-dtn.
Loads simulator defaults from environment variables or a .env file.

Scenario documents always override these values; the environment only
supplies defaults for fields a scenario leaves out.
"""

import logging
import os
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)


class Config:
    """Configuration manager that loads from environment variables or .env file."""

    _instance = None
    _loaded = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not Config._loaded:
            self._load_config()
            Config._loaded = True

    def _load_config(self):
        """Load configuration from .env file if not running in CI."""
        if not os.getenv('GITHUB_ACTIONS'):
            env_path = Path(__file__).parent.parent.parent / '.env'
            if env_path.exists():
                load_dotenv(env_path)
                logger.debug("Loaded configuration from %s", env_path)
            else:
                logger.debug("No .env file found at %s", env_path)
        else:
            logger.debug("Running in CI - using environment only")

    @staticmethod
    def _parse_int(name: str, default: int, minimum: int = 0) -> int:
        """Parse an integer environment variable."""
        raw = os.getenv(name, '')
        if raw is None or raw.strip() == '':
            return default
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"{name} must be a valid integer")
        if value < minimum:
            raise ValueError(f"{name} must be >= {minimum}")
        return value

    @staticmethod
    def _parse_list(value: Optional[str]) -> List[str]:
        """Parse comma-separated string into list."""
        if not value:
            return []
        return [item.strip() for item in value.split(',') if item.strip()]

    # Engine timing
    @property
    def tick_ms(self) -> int:
        """SatComms polling interval in ms."""
        return self._parse_int('SATLINK_TICK_MS', 100, minimum=1)

    @property
    def hop_latency_ms(self) -> int:
        """Default per-hop latency for ground links."""
        return self._parse_int('SATLINK_HOP_LATENCY_MS', 50)

    @property
    def eviction_periods(self) -> int:
        """Reassembly eviction age, in satellite periods."""
        return self._parse_int('SATLINK_EVICTION_PERIODS', 2, minimum=1)

    @property
    def queue_capacity_bytes(self) -> int:
        """Default SatComms store capacity."""
        return self._parse_int('SATLINK_QUEUE_CAPACITY_BYTES', 65536, minimum=1)

    @property
    def capture_radius_m(self) -> int:
        """Waypoint capture radius (X8 turn radius)."""
        return self._parse_int('SATLINK_CAPTURE_RADIUS_M', 31, minimum=1)

    # Radio
    @property
    def default_profile(self) -> str:
        """Radio profile used when a node names none."""
        return os.getenv('SATLINK_DEFAULT_PROFILE', 'HUMSAT')

    # Output
    @property
    def output_dir(self) -> Path:
        """Directory for logs and reports when no path is given."""
        return Path(os.getenv('SATLINK_OUTPUT_DIR', 'output'))

    @property
    def display_timezone(self) -> str:
        """Timezone used for wall-clock columns in reports."""
        return os.getenv('SATLINK_TIMEZONE', 'UTC')

    @property
    def log_level(self) -> str:
        """Diagnostic logging level."""
        return os.getenv('SATLINK_LOG_LEVEL', 'WARNING').upper()

    @property
    def builtin_scenarios(self) -> List[str]:
        """Canned scenarios to export (empty means all)."""
        return self._parse_list(os.getenv('SATLINK_EXPORT_SCENARIOS', ''))

    def validate(self) -> bool:
        """Validate that every configured value parses."""
        errors = []

        for name in ('tick_ms', 'hop_latency_ms', 'eviction_periods',
                     'queue_capacity_bytes', 'capture_radius_m'):
            try:
                getattr(self, name)
            except ValueError as e:
                errors.append(str(e))

        if self.log_level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            errors.append(f"SATLINK_LOG_LEVEL has unknown level {self.log_level!r}")

        if errors:
            print("❌ Configuration errors:")
            for error in errors:
                print(f"   - {error}")
            return False

        return True

    def print_config(self):
        """Print current configuration."""
        print("\n📋 Current Configuration:")
        print(f"   Tick: {self.tick_ms} ms")
        print(f"   Hop latency: {self.hop_latency_ms} ms")
        print(f"   Eviction: {self.eviction_periods} periods")
        print(f"   Queue capacity: {self.queue_capacity_bytes} B")
        print(f"   Default profile: {self.default_profile}")
        print(f"   Output dir: {self.output_dir}")
        print(f"   Timezone: {self.display_timezone}")
        print()
