# Reports package
from .report import (
    Report,
    build_report,
    pass_plan_rows,
    profile_rows,
    render_pass_plan,
    render_profiles,
    render_text,
)

__all__ = [
    'Report',
    'build_report',
    'pass_plan_rows',
    'profile_rows',
    'render_pass_plan',
    'render_profiles',
    'render_text',
]
