"""Subset power-mean ratio and its sharp combinatorial bounds.

For nonnegative x_1..x_n, 1 <= k <= n and alpha >= 0:

    min{k/n, (k/n)^alpha}
        <= sum over k-subsets (subset sum)^alpha
           / [ C(n,k) * (sum x)^alpha ]
        <= max{k/n, (k/n)^alpha}

Both ends are attained: x = (1, 0, ..., 0) gives k/n (for alpha > 0)
and x = (1, ..., 1) gives (k/n)^alpha.  The convention 0^0 = 1 is used
throughout, so at alpha = 0 the ratio is exactly 1.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from itertools import combinations, islice

import numpy as np

from . import tolerances as tol
from .functional import EnumerationBudgetError, default_budget

__all__ = ["SubsetRatioInput", "Lemma1Report", "subset_power_ratio", "lemma1_bounds", "verify_lemma1"]

_MAX_N = 24
_CHUNK_ROWS = 1 << 16


@dataclass(frozen=True)
class SubsetRatioInput:
    x: tuple[float, ...]
    k: int
    alpha: float

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        if not x:
            raise ValueError("x must be nonempty")
        if len(x) > _MAX_N:
            raise ValueError(f"n <= {_MAX_N} required, got {len(x)}")
        if any(not (v >= 0.0 and math.isfinite(v)) for v in x):
            raise ValueError("entries must be finite and nonnegative")
        if math.fsum(x) <= 0.0:
            raise ValueError("sum of x must be positive")
        if not (1 <= self.k <= len(x)):
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={len(x)}")
        if not (self.alpha >= 0.0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be finite and >= 0, got {self.alpha}")
        object.__setattr__(self, "x", x)


def subset_power_ratio(inp: SubsetRatioInput, budget: int | None = None) -> float:
    """Exact ratio by enumerating all C(n, k) subsets in chunks."""
    budget = default_budget() if budget is None else budget
    n, k = len(inp.x), inp.k
    count = math.comb(n, k)
    if count > budget:
        raise EnumerationBudgetError(f"C({n},{k}) = {count} subsets exceed budget {budget}")
    x = np.array(inp.x)
    total = math.fsum(inp.x)
    try:
        t_pow = total**inp.alpha
    except OverflowError:
        t_pow = math.inf
    if sys.float_info.min <= t_pow <= sys.float_info.max:
        denom = count * t_pow
    else:
        # total**alpha left the normal range (all-tiny or all-huge input);
        # the ratio is scale-free, so divide through by the total instead
        x = x / total
        denom = float(count)
    it = combinations(range(n), k)
    chunk_totals = []
    while True:
        flat = np.fromiter(
            (i for subset in islice(it, _CHUNK_ROWS) for i in subset), dtype=np.intp
        )
        if flat.size == 0:
            break
        sums = x[flat.reshape(-1, k)].sum(axis=1)
        chunk_totals.append(float((sums**inp.alpha).sum()))
    numerator = math.fsum(chunk_totals)
    return numerator / denom


def lemma1_bounds(n: int, k: int, alpha: float) -> tuple[float, float]:
    """Sharp (min, max) envelope of the subset power ratio."""
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not (alpha >= 0.0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be finite and >= 0, got {alpha}")
    linear = k / n
    powered = (k / n) ** alpha
    return (min(linear, powered), max(linear, powered))


@dataclass(frozen=True)
class Lemma1Report:
    n: int
    k: int
    alpha: float
    ratio: float
    lower: float
    upper: float
    holds: bool


def verify_lemma1(inp: SubsetRatioInput, budget: int | None = None) -> Lemma1Report:
    """Compute the ratio and check it against the sharp bounds (1e-12 slack)."""
    ratio = subset_power_ratio(inp, budget=budget)
    lower, upper = lemma1_bounds(len(inp.x), inp.k, inp.alpha)
    holds = tol.geq(ratio, lower, rel=tol.REL_IDENTITY) and tol.leq(ratio, upper, rel=tol.REL_IDENTITY)
    return Lemma1Report(
        n=len(inp.x), k=inp.k, alpha=inp.alpha, ratio=ratio, lower=lower, upper=upper, holds=holds
    )
