"""Sign-sum inequalities of Hanner type/cotype, and falsification search.

A norm has Hanner cotype (q, n) when for all x_1..x_n

    sum_{eps in {-1,1}^n} || sum eps_i x_i ||^q
        >= sum_{eps} | sum eps_i ||x_i|| |^q

and Hanner type (q, n) with the inequality reversed.  ``hanner_gap``
reports lhs - rhs for one tuple; ``falsify_hanner`` searches random
tuples for a violation of a claimed mode.  The three-vector inequality

    ||x|| + ||y|| + ||z|| + ||x+y+z|| >= ||x+y|| + ||y+z|| + ||z+x||

is checked by ``hlawka_check``; norms satisfying it have cotype (1, 3).

Both sides of the sign sum are invariant under negating all signs, so
enumeration fixes eps_1 = +1 and doubles the half sum.  Each mirrored
term is bitwise equal to its partner (negation and absolute value are
exact), so the doubling is exact as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import tolerances as tol
from .functional import VectorTuple, _as_rows, _sign_matrix
from .norms import NormSpec, norm_eval_many

__all__ = ["HannerReport", "FalsificationResult", "HlawkaReport", "hanner_gap", "falsify_hanner", "hlawka_check"]

_MAX_N = 20
_BATCH = 256


def _half_signs(n: int) -> np.ndarray:
    # all sign rows with the first coordinate fixed at +1
    if n == 1:
        return np.ones((1, 1))
    rest = _sign_matrix(n - 1)
    return np.hstack([np.ones((rest.shape[0], 1)), rest])


@dataclass(frozen=True)
class HannerReport:
    q: float
    n: int
    lhs: float
    rhs: float
    gap: float
    verdict: str


def _verdict(gap: float, lhs: float, rhs: float, mode: Optional[str]) -> str:
    cushion = tol.slack(lhs, rhs)
    if mode is None:
        return "cotype-consistent" if gap >= 0.0 else "type-consistent"
    if mode == "cotype":
        return "violated-cotype" if gap < -cushion else "cotype-consistent"
    if mode == "type":
        return "violated-type" if gap > cushion else "type-consistent"
    raise ValueError(f"mode must be 'cotype', 'type' or None, got {mode!r}")


def hanner_gap(norm: NormSpec, vectors, q: float, mode: Optional[str] = None) -> HannerReport:
    """Exact sign-sum gap lhs - rhs for one vector tuple.

    Without ``mode`` the verdict only records which inequality the gap
    is consistent with; with a claimed mode it reports violations
    relative to the standard slack.
    """
    if not q >= 1.0:
        raise ValueError(f"need q >= 1, got {q}")
    rows = _as_rows(vectors)
    n = rows.shape[0]
    if n > _MAX_N:
        raise ValueError(f"sign enumeration supports n <= {_MAX_N}, got {n}")
    if rows.shape[1] != norm.dim:
        raise ValueError(f"vectors have dim {rows.shape[1]}, norm expects {norm.dim}")
    signs = _half_signs(n)
    vec_norms = norm_eval_many(norm, rows)
    lhs = 2.0 * float((norm_eval_many(norm, signs @ rows) ** q).sum())
    rhs = 2.0 * float((np.abs(signs @ vec_norms) ** q).sum())
    gap = lhs - rhs
    return HannerReport(q=q, n=n, lhs=lhs, rhs=rhs, gap=gap, verdict=_verdict(gap, lhs, rhs, mode))


@dataclass(frozen=True)
class FalsificationResult:
    witness: VectorTuple
    violation: float
    trial_index: int
    gap: float


def falsify_hanner(
    norm: NormSpec, q: float, n: int, d: int, mode: str, trials: int, seed: int
) -> Optional[FalsificationResult]:
    """Search gaussian tuples for a violation of the claimed mode.

    Returns the first violating tuple (normalized to unit Frobenius
    norm, with the relative violation magnitude) or None.  Deterministic
    in (seed, trials); trials are scanned in draw order.
    """
    if mode not in ("cotype", "type"):
        raise ValueError(f"mode must be 'cotype' or 'type', got {mode!r}")
    if d != norm.dim:
        raise ValueError(f"d = {d} does not match norm dimension {norm.dim}")
    if not (2 <= n <= _MAX_N):
        raise ValueError(f"need 2 <= n <= {_MAX_N}, got {n}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not q >= 1.0:
        raise ValueError(f"need q >= 1, got {q}")
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal((trials, n, d))
    signs = _half_signs(n)
    for start in range(0, trials, _BATCH):
        batch = draws[start : start + _BATCH]
        b = batch.shape[0]
        sums = np.einsum("pn,bnd->bpd", signs, batch)
        lhs = 2.0 * (norm_eval_many(norm, sums) ** q).sum(axis=1)
        vec_norms = norm_eval_many(norm, batch.reshape(-1, d)).reshape(b, n)
        rhs = 2.0 * (np.abs(vec_norms @ signs.T) ** q).sum(axis=1)
        gap = lhs - rhs
        cushion = np.maximum(tol.ABS_SLACK, tol.REL_SLACK * np.maximum(lhs, rhs))
        bad = gap > cushion if mode == "type" else gap < -cushion
        if np.any(bad):
            i = int(np.argmax(bad))
            scale = max(lhs[i], rhs[i])
            witness = batch[i] / np.linalg.norm(batch[i])
            return FalsificationResult(
                witness=VectorTuple(witness),
                violation=float(abs(gap[i]) / scale),
                trial_index=start + i,
                gap=float(gap[i]),
            )
    return None


@dataclass(frozen=True)
class HlawkaReport:
    lhs: float
    rhs: float
    gap: float
    holds: bool


def hlawka_check(norm: NormSpec, x, y, z) -> HlawkaReport:
    """Three-vector inequality gap for one triple."""
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    pts = np.stack([x, y, z, x + y + z, x + y, y + z, z + x])
    n = norm_eval_many(norm, pts)
    lhs = float(n[0] + n[1] + n[2] + n[3])
    rhs = float(n[4] + n[5] + n[6])
    gap = lhs - rhs
    return HlawkaReport(lhs=lhs, rhs=rhs, gap=gap, holds=tol.geq(lhs, rhs))
