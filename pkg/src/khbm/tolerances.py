"""Shared numerical tolerances and comparison helpers.

All inequality checks in this package use the same slack convention:
a relative tolerance scaled by the magnitude of the quantities being
compared, with an absolute floor for comparisons near zero.  Exact
identities (enumeration route equivalences, closed forms) use the
tighter REL_IDENTITY.
"""

from __future__ import annotations

# default slack for inequality assertions: 1e-9 relative, 1e-12 absolute floor
REL_SLACK = 1e-9
ABS_SLACK = 1e-12

# identities between two exact computation routes
REL_IDENTITY = 1e-12


def slack(*values: float, rel: float = REL_SLACK, abs_: float = ABS_SLACK) -> float:
    """Tolerance for comparing the given values: rel * max|v| with an absolute floor."""
    scale = max((abs(v) for v in values), default=0.0)
    return max(abs_, rel * scale)


def leq(a: float, b: float, rel: float = REL_SLACK, abs_: float = ABS_SLACK) -> bool:
    """a <= b up to slack."""
    return a <= b + slack(a, b, rel=rel, abs_=abs_)


def geq(a: float, b: float, rel: float = REL_SLACK, abs_: float = ABS_SLACK) -> bool:
    """a >= b up to slack."""
    return a >= b - slack(a, b, rel=rel, abs_=abs_)


def close(a: float, b: float, rel: float = REL_IDENTITY, abs_: float = ABS_SLACK) -> bool:
    """|a - b| within slack; used for identities between computation routes."""
    return abs(a - b) <= slack(a, b, rel=rel, abs_=abs_)
