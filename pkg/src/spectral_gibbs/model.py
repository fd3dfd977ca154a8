"""State space, Hamiltonian, and stationary distribution of the 1-D N-color chain.

A configuration assigns one of ``num_colors`` colors to each of ``n`` sites.
Adjacent sites that agree contribute +1 to the Hamiltonian and disagreeing
ones contribute -1; the chain has free boundaries.  The stationary
distribution weights a configuration ``x`` by ``exp(H(x)/T)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

# Operations that materialize the full state space refuse above this size.
EXACT_STATES_BUDGET = 65536
# Dense symmetric eigensolves refuse above this size.
DENSE_SOLVE_BUDGET = 4096
# Brute-force path-constant computation refuses above this size.
KAPPA_BUDGET = 4096


class BudgetExceededError(RuntimeError):
    """An exact-mode operation would touch more states than its budget allows."""


def check_budget(size: int, budget: int, operation: str) -> None:
    """Raise :class:`BudgetExceededError` when ``size`` exceeds ``budget``."""
    if size > budget:
        raise BudgetExceededError(
            f"{operation} would touch {size} states, exceeding its budget of {budget}"
        )


@dataclass(frozen=True)
class ModelSpec:
    """Chain parameters.

    Attributes:
        n: Number of lattice sites, at least 1.
        num_colors: Number of colors per site, at least 2.
        temp: Temperature, strictly positive.
    """

    n: int
    num_colors: int
    temp: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if self.num_colors < 2:
            raise ValueError(f"num_colors must be at least 2, got {self.num_colors}")
        if not self.temp > 0:
            raise ValueError(f"temp must be positive, got {self.temp}")

    @property
    def num_states(self) -> int:
        """Size of the state space, ``num_colors ** n``."""
        return self.num_colors**self.n


@dataclass(frozen=True)
class Configuration:
    """One point of the state space.

    Attributes:
        colors: Color index per site, values in ``[0, num_colors)``.
        rank: Big-endian base-``num_colors`` value of ``colors`` (site 1 is
            the most significant digit).
    """

    colors: tuple[int, ...]
    rank: int


def encode_rank(spec: ModelSpec, colors: Sequence[int]) -> int:
    """Encode a color vector as its big-endian base-``num_colors`` rank.

    Args:
        spec: Chain parameters.
        colors: Color index per site.

    Returns:
        Integer rank in ``[0, num_states)``.

    Raises:
        ValueError: If the length differs from ``spec.n`` or a color index
            is outside ``[0, num_colors)``.
    """
    if len(colors) != spec.n:
        raise ValueError(f"expected {spec.n} sites, got {len(colors)}")
    rank = 0
    for c in colors:
        if not 0 <= c < spec.num_colors:
            raise ValueError(
                f"color index {c} out of range for {spec.num_colors} colors"
            )
        rank = rank * spec.num_colors + int(c)
    return rank


def decode_rank(spec: ModelSpec, rank: int) -> tuple[int, ...]:
    """Decode a rank back into its color vector (inverse of :func:`encode_rank`)."""
    if not 0 <= rank < spec.num_states:
        raise ValueError(f"rank {rank} out of range for {spec.num_states} states")
    colors = [0] * spec.n
    r = int(rank)
    for i in range(spec.n - 1, -1, -1):
        colors[i] = r % spec.num_colors
        r //= spec.num_colors
    return tuple(colors)


def config_from_colors(spec: ModelSpec, colors: Sequence[int]) -> Configuration:
    """Build a :class:`Configuration` from a color vector."""
    return Configuration(tuple(int(c) for c in colors), encode_rank(spec, colors))


def config_from_rank(spec: ModelSpec, rank: int) -> Configuration:
    """Build a :class:`Configuration` from a rank."""
    return Configuration(decode_rank(spec, rank), int(rank))


def rank_roundtrip(x: Configuration, spec: ModelSpec) -> Configuration:
    """Re-encode and decode a configuration; the result must equal ``x``."""
    return config_from_rank(spec, encode_rank(spec, x.colors))


def energy(spec: ModelSpec, x: Configuration) -> int:
    """Hamiltonian of a configuration: agreements minus disagreements.

    Args:
        spec: Chain parameters.
        x: Configuration of length ``spec.n``.

    Returns:
        Integer in ``[-(n-1), n-1]`` with the same parity as ``n-1``.

    Raises:
        ValueError: If the configuration length does not match ``spec.n``.
    """
    if len(x.colors) != spec.n:
        raise ValueError(f"expected {spec.n} sites, got {len(x.colors)}")
    h = 0
    for a, b in zip(x.colors, x.colors[1:]):
        h += 1 if a == b else -1
    return h


def colors_table(spec: ModelSpec, budget: int = EXACT_STATES_BUDGET) -> np.ndarray:
    """Color vectors of every state, shape ``(num_states, n)``, rank order.

    Raises:
        BudgetExceededError: If ``num_states`` exceeds ``budget``.
    """
    check_budget(spec.num_states, budget, "state enumeration")
    ranks = np.arange(spec.num_states, dtype=np.int64)
    table = np.empty((spec.num_states, spec.n), dtype=np.int8)
    for i in range(spec.n):
        place = spec.num_colors ** (spec.n - 1 - i)
        table[:, i] = (ranks // place) % spec.num_colors
    return table


def energies_table(spec: ModelSpec, budget: int = EXACT_STATES_BUDGET) -> np.ndarray:
    """Hamiltonian of every state, shape ``(num_states,)``, rank order."""
    table = colors_table(spec, budget)
    if spec.n == 1:
        return np.zeros(spec.num_states, dtype=np.int32)
    agree = (table[:, :-1] == table[:, 1:]).astype(np.int32)
    return (2 * agree - 1).sum(axis=1)


@dataclass(frozen=True)
class GibbsMeasure:
    """Stationary distribution over all states.

    Attributes:
        weights: Probability per rank; strictly positive, sums to 1.
        log_z: Log of the normalizing constant.
    """

    weights: np.ndarray
    log_z: float


def stationary_measure(
    spec: ModelSpec, budget: int = EXACT_STATES_BUDGET
) -> GibbsMeasure:
    """Compute the stationary distribution exactly.

    Weights are evaluated in the log domain with a log-sum-exp normalizer so
    that small temperatures cannot overflow.

    Raises:
        BudgetExceededError: If the state space exceeds ``budget``.
    """
    log_weights = energies_table(spec, budget) / spec.temp
    log_z = float(logsumexp(log_weights))
    weights = np.exp(log_weights - log_z)
    weights.flags.writeable = False
    return GibbsMeasure(weights=weights, log_z=log_z)


def color_letter(index: int) -> str:
    """Presentation label of a color index: 0 is 'a', 1 is 'b', and so on."""
    if not 0 <= index < 26:
        raise ValueError(f"no letter label for color index {index}")
    return chr(ord("a") + index)


def color_index(letter: str) -> int:
    """Inverse of :func:`color_letter`."""
    if len(letter) != 1 or not "a" <= letter <= "z":
        raise ValueError(f"color letters are 'a'..'z', got {letter!r}")
    return ord(letter) - ord("a")


def colors_to_string(colors: Sequence[int]) -> str:
    """Render a color vector as a letter string, e.g. ``(0, 0, 1)`` to ``'aab'``."""
    return "".join(color_letter(c) for c in colors)


def string_to_colors(spec: ModelSpec, text: str) -> tuple[int, ...]:
    """Parse a letter string into a color vector, validating against ``spec``."""
    if len(text) != spec.n:
        raise ValueError(f"expected {spec.n} letters, got {len(text)}")
    colors = tuple(color_index(ch) for ch in text)
    for c in colors:
        if c >= spec.num_colors:
            raise ValueError(
                f"letter {color_letter(c)!r} out of range for {spec.num_colors} colors"
            )
    return colors
