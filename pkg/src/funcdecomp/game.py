"""Coalition games, the classical Shapley allocation, and the bridge
between set-functions and functions on binary points."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .core import (
    EXACT_PERMUTATION_CAP,
    EXACT_SUBSET_CAP,
    DimensionMismatchError,
    NonzeroOriginError,
    Permutation,
    full_mask,
    indices_from_mask,
    mask_cardinality,
    mask_from_indices,
    permutation_average_marginals,
    permute_mask,
    validate_dimension,
)

# Computed tables (values read off a float-valued model) cannot be held to
# exact equality at the empty coalition; this is the acceptance slack.
ORIGIN_TOLERANCE = 1e-12


class GameFormatError(ValueError):
    """A game table is incomplete or malformed."""


@dataclass(frozen=True)
class Game:
    """Total payoff table over all coalitions of ``d`` players.

    ``values[m]`` is the payoff of the coalition encoded by bitmask ``m``;
    the empty coalition must be worth exactly zero.
    """

    d: int
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        validate_dimension(self.d, EXACT_SUBSET_CAP)
        if len(self.values) != 1 << self.d:
            raise GameFormatError(
                f"table must cover all {1 << self.d} coalitions, got {len(self.values)}"
            )
        if self.values[0] != 0.0:
            raise NonzeroOriginError(
                f"empty coalition must be worth exactly 0, got {self.values[0]!r}"
            )
        for m, v in enumerate(self.values):
            if not math.isfinite(v):
                raise GameFormatError(f"non-finite payoff {v!r} for coalition {m:#b}")

    def value(self, mask: int) -> float:
        return self.values[mask]

    @property
    def grand_value(self) -> float:
        return self.values[full_mask(self.d)]


@dataclass(frozen=True)
class Allocation:
    """Per-player shares of a game's grand-coalition payoff."""

    shares: tuple[float, ...]

    @property
    def total(self) -> float:
        return math.fsum(self.shares)

    def efficiency_gap(self, game: Game) -> float:
        return abs(self.total - game.grand_value)


@lru_cache(maxsize=None)
def shapley_weight(d: int, size: int) -> float:
    """Weight (size-1)!(d-size)!/d! for a coalition of the given size.

    Exact integer factorials, one float division at the end; no per-term
    rounding accumulates.
    """
    if not 1 <= size <= d:
        raise DimensionMismatchError(f"coalition size {size} outside 1..{d}")
    return math.factorial(size - 1) * math.factorial(d - size) / math.factorial(d)


def shapley(game: Game) -> Allocation:
    """Classical Shapley allocation of the grand-coalition payoff.

    Sums weighted marginal contributions v(S) - v(S \\ {i}) over the
    coalitions containing each player (the remaining terms vanish).
    """
    d = game.d
    shares = [0.0] * d
    values = game.values
    for mask in range(1, 1 << d):
        w = shapley_weight(d, mask_cardinality(mask))
        v = values[mask]
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            shares[i] += w * (v - values[mask ^ low])
            m ^= low
    return Allocation(tuple(shares))


def shapley_permutation_oracle(game: Game) -> Allocation:
    """Independent route to the same allocation: enumerate all d! joining
    orders and average each player's marginal contribution."""
    validate_dimension(game.d, EXACT_PERMUTATION_CAP)
    marginals = permutation_average_marginals(game.values, game.d)
    return Allocation(tuple(float(v) for v in marginals))


def game_from_binary_function(fn: Callable[[Sequence[float]], float]) -> Game:
    """Tabulate a function on binary points into a game.

    The coalition encoded by mask ``m`` is valued at the function's output
    on the indicator vector of ``m``.  Requires a ``d`` attribute on the
    callable and a vanishing value at the origin (within ORIGIN_TOLERANCE;
    the stored empty-coalition entry is then exactly zero).
    """
    d = validate_dimension(getattr(fn, "d"), EXACT_SUBSET_CAP)
    at_zero = float(fn((0.0,) * d))
    if abs(at_zero) > ORIGIN_TOLERANCE:
        raise NonzeroOriginError(
            f"function is {at_zero!r} at the origin; a game needs value 0 there"
        )
    values = [0.0] * (1 << d)
    for mask in range(1, 1 << d):
        point = tuple(1.0 if mask >> i & 1 else 0.0 for i in range(d))
        values[mask] = float(fn(point))
    return Game(d, tuple(values))


def permute_game(game: Game, perm: Permutation) -> Game:
    """The relabeled game (v o pi)(S) := v(pi(S))."""
    if len(perm) != game.d:
        raise DimensionMismatchError(f"permutation length {len(perm)} != d {game.d}")
    values = [0.0] * (1 << game.d)
    for mask in range(1 << game.d):
        values[mask] = game.values[permute_mask(mask, perm)]
    return Game(game.d, tuple(values))


def add_games(a: Game, b: Game) -> Game:
    if a.d != b.d:
        raise DimensionMismatchError(f"dimension mismatch: {a.d} vs {b.d}")
    return Game(a.d, tuple(x + y for x, y in zip(a.values, b.values)))


# ---------------------------------------------------------------------------
# JSON interchange: {"d": int, "values": {"1,3": payoff, ...}} with coalition
# keys as comma-separated 1-based indices ("" for the empty coalition).


def game_from_json(data: Mapping) -> Game:
    if not isinstance(data, Mapping) or "d" not in data or "values" not in data:
        raise GameFormatError('game JSON needs the keys "d" and "values"')
    d = data["d"]
    if not isinstance(d, int) or not 1 <= d <= EXACT_SUBSET_CAP:
        raise GameFormatError(f'"d" must be an integer in 1..{EXACT_SUBSET_CAP}, got {d!r}')
    raw = data["values"]
    if not isinstance(raw, Mapping):
        raise GameFormatError('"values" must be an object of coalition: payoff entries')
    table: dict[int, float] = {}
    for key, payoff in raw.items():
        mask = _parse_coalition_key(key, d)
        if mask in table:
            raise GameFormatError(f"coalition {key!r} listed twice")
        if not isinstance(payoff, (int, float)) or isinstance(payoff, bool):
            raise GameFormatError(f"payoff for {key!r} is not a number: {payoff!r}")
        table[mask] = float(payoff)
    empty = table.setdefault(0, 0.0)  # missing empty coalition defaults to 0
    if empty != 0.0:
        raise NonzeroOriginError(f"empty coalition must be worth 0, got {empty!r}")
    missing = [m for m in range(1 << d) if m not in table]
    if missing:
        names = ", ".join(_coalition_key(m) for m in missing[:5])
        raise GameFormatError(
            f"{len(missing)} coalition(s) missing from the table (e.g. {names})"
        )
    return Game(d, tuple(table[m] for m in range(1 << d)))


def game_to_json(game: Game) -> dict:
    return {
        "d": game.d,
        "values": {_coalition_key(m): game.values[m] for m in range(1 << game.d)},
    }


def _coalition_key(mask: int) -> str:
    return ",".join(str(i) for i in indices_from_mask(mask))


def _parse_coalition_key(key: str, d: int) -> int:
    if not isinstance(key, str):
        raise GameFormatError(f"coalition key must be a string, got {key!r}")
    text = key.strip()
    if not text:
        return 0
    try:
        indices = [int(part) for part in text.split(",")]
    except ValueError:
        raise GameFormatError(f"bad coalition key {key!r}") from None
    if len(set(indices)) != len(indices):
        raise GameFormatError(f"repeated index in coalition key {key!r}")
    try:
        return mask_from_indices(indices, d)
    except DimensionMismatchError as exc:
        raise GameFormatError(f"bad coalition key {key!r}: {exc}") from None
