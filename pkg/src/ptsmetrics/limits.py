"""Enumeration guardrails shared by the resolution and metric code."""
import os

DEFAULT_MAX_RESOLUTIONS = 10**6
DEFAULT_MAX_MEMO = 10**5


class CapExceeded(RuntimeError):
    """An enumeration or memo table grew past its configured cap."""

    def __init__(self, what, estimate, cap):
        self.what = what
        self.estimate = estimate
        self.cap = cap
        super().__init__(f"{what}: about {estimate} needed, cap is {cap}")


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return value if value > 0 else default


def max_resolutions() -> int:
    return _env_int("PTSMETRICS_MAX_RESOLUTIONS", DEFAULT_MAX_RESOLUTIONS)


def max_memo() -> int:
    return _env_int("PTSMETRICS_MAX_MEMO", DEFAULT_MAX_MEMO)
