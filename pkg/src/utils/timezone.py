"""
Timezone handling utilities for satlink-dtn.

Simulation time is integer milliseconds since the scenario epoch; this module
maps it onto wall-clock datetimes for reports and pass plans.
"""

import logging
from datetime import datetime, timedelta
from typing import Optional

import pytz
from dateutil import parser

logger = logging.getLogger(__name__)

DEFAULT_EPOCH = '2017-04-01T00:00:00Z'


class TimezoneHandler:
    """Handle epoch parsing and sim-time display."""

    def __init__(self, timezone_str: str = 'UTC'):
        """
        Initialize with a timezone string.

        Args:
            timezone_str: Timezone name (e.g., 'Europe/Lisbon')
        """
        try:
            self.timezone = pytz.timezone(timezone_str)
        except pytz.UnknownTimeZoneError:
            logger.warning("Unknown timezone %r, falling back to UTC", timezone_str)
            self.timezone = pytz.UTC

        self.utc = pytz.UTC

    def parse_epoch(self, value: Optional[str]) -> datetime:
        """
        Parse a scenario epoch string into an aware UTC datetime.

        Naive values are taken as UTC.

        Raises:
            ValueError: If the string is not a date
        """
        if not value:
            value = DEFAULT_EPOCH
        try:
            dt = parser.isoparse(value)
        except (ValueError, OverflowError):
            dt = parser.parse(value)
        if dt.tzinfo is None:
            dt = self.utc.localize(dt)
        return dt.astimezone(self.utc)

    def sim_to_datetime(self, epoch: datetime, t_ms: int) -> datetime:
        """Convert sim ms to a datetime in the display timezone."""
        return (epoch + timedelta(milliseconds=t_ms)).astimezone(self.timezone)

    def format_sim_time(self, epoch: datetime, t_ms: int) -> str:
        """Format sim ms as wall-clock time."""
        return self.sim_to_datetime(epoch, t_ms).strftime('%Y-%m-%d %H:%M:%S %Z')

    @staticmethod
    def format_duration(ms: int) -> str:
        """Format a duration like '5m 00s'."""
        total_s = ms // 1000
        if total_s >= 3600:
            return f"{total_s // 3600}h {(total_s % 3600) // 60:02d}m"
        return f"{total_s // 60}m {total_s % 60:02d}s"
