"""Decomposition principles: sequential (one fixed activation order), its
average over all orders, the equivalent subset-weighted form, the extension
to functions that do not vanish at the origin, and the per-point Shapley
construction.

All methods evaluate the target function only on the projected family
{p_I(x)}; a per-call memo keyed by subset bitmask keeps black-box
evaluations to at most 2^d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import game as game_mod
from .core import (
    EXACT_PERMUTATION_CAP,
    EXACT_SUBSET_CAP,
    DimensionMismatchError,
    NonzeroOriginError,
    Permutation,
    Point,
    as_point,
    full_mask,
    hadamard,
    identity_permutation,
    inverse_permutation,
    mask_cardinality,
    permutation_average_marginals,
    project,
    ranks_from_permutation,
    validate_dimension,
)
from .expr import FunctionHandle, NativeFunction

# How far from zero the origin value may be for methods that require F(0)=0.
ORIGIN_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DecompositionResult:
    """Per-coordinate contributions at one point.

    ``total`` is the function value at the point; the contributions sum to
    it (up to the fixed-cost handling of the chosen method).
    """

    x: Point
    contributions: tuple[float, ...]
    total: float
    method: str

    @property
    def residual(self) -> float:
        return abs(self.total - math.fsum(self.contributions))


class _MaskEvaluator:
    """Memoized evaluation of F on the projected points of one x."""

    def __init__(self, fn: FunctionHandle, x: Point) -> None:
        self.fn = fn
        self.x = x
        self.cache: dict[int, float] = {}

    def value(self, mask: int) -> float:
        v = self.cache.get(mask)
        if v is None:
            v = self.fn(project(self.x, mask))
            self.cache[mask] = v
        return v

    def full_table(self, d: int) -> list[float]:
        return [self.value(mask) for mask in range(1 << d)]


def _prepare(fn: FunctionHandle, x: Sequence[float],
             cap: int | None) -> tuple[Point, _MaskEvaluator]:
    point = as_point(x, fn.d)
    validate_dimension(fn.d, cap)
    return point, _MaskEvaluator(fn, point)


def _require_zero_origin(ev: _MaskEvaluator, method: str) -> float:
    v0 = ev.value(0)
    if abs(v0) > ORIGIN_TOLERANCE:
        raise NonzeroOriginError(
            f"{method} needs F to vanish at the origin, got {v0!r}; "
            "use delta_star, which splits the origin value evenly"
        )
    return v0


def sequential(fn: FunctionHandle, x: Sequence[float],
               perm: Permutation | None = None) -> DecompositionResult:
    """Telescoping attribution along one activation order.

    ``perm`` assigns each coordinate its activation rank (0-based internal
    form; identity if omitted): coordinates switch from 0 to their actual
    value one at a time in rank order, and each coordinate is credited
    with the change it causes.  Exactly d+1 function evaluations.
    """
    d = fn.d
    if perm is None:
        perm = identity_permutation(d)
    if len(perm) != d:
        raise DimensionMismatchError(f"permutation length {len(perm)} != d {d}")
    point, ev = _prepare(fn, x, cap=None)  # d+1 evaluations, no cap needed
    prev = _require_zero_origin(ev, "sequential")
    contributions = [0.0] * d
    mask = 0
    for coord in inverse_permutation(perm):  # coordinate activated at each step
        mask |= 1 << coord
        cur = ev.value(mask)
        contributions[coord] = cur - prev
        prev = cur
    return DecompositionResult(
        point, tuple(contributions), ev.value(full_mask(d)),
        method=f"sequential{ranks_from_permutation(perm)}",
    )


def as_permutation(fn: FunctionHandle, x: Sequence[float]) -> DecompositionResult:
    """Averaged sequential contributions: the exact mean of `sequential`
    over all d! activation orders, via full enumeration."""
    point, ev = _prepare(fn, x, cap=EXACT_PERMUTATION_CAP)
    _require_zero_origin(ev, "as_permutation")
    d = fn.d
    marginals = permutation_average_marginals(ev.full_table(d), d)
    return DecompositionResult(
        point, tuple(float(v) for v in marginals), ev.value(full_mask(d)),
        method="as_permutation",
    )


def _subset_weighted_contributions(ev: _MaskEvaluator, d: int) -> list[float]:
    contributions = [0.0] * d
    values = ev.full_table(d)
    for mask in range(1, 1 << d):
        w = game_mod.shapley_weight(d, mask_cardinality(mask))
        v = values[mask]
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            contributions[i] += w * (v - values[mask ^ low])
            m ^= low
    return contributions


def as_subset(fn: FunctionHandle, x: Sequence[float]) -> DecompositionResult:
    """Averaged sequential contributions in closed subset form: each
    coordinate sums its weighted switch-on differences F(p_I x) - F(p_{I-i} x)
    over the subsets containing it.  Equal to `as_permutation` without
    enumerating orderings (2^d instead of d! terms)."""
    point, ev = _prepare(fn, x, cap=EXACT_SUBSET_CAP)
    _require_zero_origin(ev, "as_subset")
    d = fn.d
    contributions = _subset_weighted_contributions(ev, d)
    return DecompositionResult(
        point, tuple(contributions), ev.value(full_mask(d)), method="as_subset",
    )


def delta_star(fn: FunctionHandle, x: Sequence[float]) -> DecompositionResult:
    """Subset-form attribution extended to functions with F(0) != 0: the
    origin value is split evenly across the d coordinates and the rest is
    attributed like `as_subset`.  Restricted to functions vanishing at the
    origin this coincides with the averaged sequential decomposition."""
    point, ev = _prepare(fn, x, cap=EXACT_SUBSET_CAP)
    d = fn.d
    fixed = ev.value(0) / d
    contributions = [fixed + c for c in _subset_weighted_contributions(ev, d)]
    return DecompositionResult(
        point, tuple(contributions), ev.value(full_mask(d)), method="delta_star",
    )


def pointwise_shapley(fn: FunctionHandle, x: Sequence[float]) -> DecompositionResult:
    """Per-point game construction: restrict F to the binary activation
    pattern of x (y -> F(x * y)), read that as a game, and allocate with the
    classical Shapley value."""
    point, _ = _prepare(fn, x, cap=EXACT_SUBSET_CAP)
    restricted = NativeFunction(
        lambda y: fn(hadamard(point, y)), fn.d, label=f"{fn.label}@{point}"
    )
    induced = game_mod.game_from_binary_function(restricted)
    allocation = game_mod.shapley(induced)
    return DecompositionResult(
        point, allocation.shares, induced.grand_value, method="pointwise_shapley",
    )
