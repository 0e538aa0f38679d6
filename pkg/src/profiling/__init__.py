"""Parameter, MAC and latency profiling."""

from .latency import LatencyResult, measure_inference_latency
from .macs import MacReport, count_macs
from .table import (
    PROFILE_COLUMNS,
    ProfileRow,
    build_profile_table,
    read_profile_csv,
    render_markdown,
    write_profile_csv,
)

__all__ = [
    "LatencyResult",
    "measure_inference_latency",
    "MacReport",
    "count_macs",
    "PROFILE_COLUMNS",
    "ProfileRow",
    "build_profile_table",
    "read_profile_csv",
    "render_markdown",
    "write_profile_csv",
]
