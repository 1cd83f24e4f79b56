"""skipreport: offline report generator for skipbench CSV results."""

from .charts import InsufficientDataError, plot_scaling
from .cli import ReportConfig, build_report
from .loader import (
    EXPECTED_HEADER,
    BadHeaderError,
    MalformedRowError,
    ResultRow,
    load,
)
from .summary import summary

__all__ = [
    "BadHeaderError",
    "EXPECTED_HEADER",
    "InsufficientDataError",
    "MalformedRowError",
    "ReportConfig",
    "ResultRow",
    "build_report",
    "load",
    "plot_scaling",
    "summary",
]
