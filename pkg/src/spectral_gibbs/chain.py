"""Exact distribution propagation, Monte Carlo simulation, and TV curves.

Total variation is half the L1 distance throughout.  Randomness comes from a
counter-based generator (numpy's Philox keyed with the seed), so every
trajectory is reproducible from its seed: each simulation step consumes two
uniforms, one for the site choice (``floor(n * u)``) and one for the color
choice (inverse CDF over colors in index order).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    DENSE_SOLVE_BUDGET,
    EXACT_STATES_BUDGET,
    Configuration,
    ModelSpec,
    config_from_colors,
)
from .kernel import SparseKernel, _conditional_dist, build_kernel
from .spectral import Spectrum, spectrum as compute_spectrum
from .serialize import canonical_csv, canonical_json


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator with a documented identity (Philox, keyed)."""
    return np.random.Generator(np.random.Philox(key=seed))


def propagate(kernel: SparseKernel, start: int, k: int) -> np.ndarray:
    """Distribution after ``k`` steps from a point mass at rank ``start``."""
    if k < 0:
        raise ValueError(f"step count must be nonnegative, got {k}")
    if not 0 <= start < kernel.dimension:
        raise ValueError(f"start rank {start} out of range")
    transposed = kernel.matrix.T.tocsr()
    dist = np.zeros(kernel.dimension)
    dist[start] = 1.0
    for _ in range(k):
        dist = transposed @ dist
    return dist


def tv_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Half the L1 distance between two distributions."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {q.shape}")
    return 0.5 * float(np.abs(p - q).sum())


def _cdf_table(spec: ModelSpec) -> np.ndarray:
    """Conditional CDFs indexed by (left color + 1, right color + 1).

    Index 0 stands for a missing neighbor, so the table covers boundary
    sites and the single-site chain with one lookup.
    """
    num_colors = spec.num_colors
    table = np.empty((num_colors + 1, num_colors + 1, num_colors))
    options: list[int | None] = [None] + list(range(num_colors))
    for li, left in enumerate(options):
        for ri, right in enumerate(options):
            table[li, ri] = np.cumsum(_conditional_dist(spec, left, right))
    return table


def _step_single(
    spec: ModelSpec,
    colors: np.ndarray,
    cdf: np.ndarray,
    u_site: float,
    u_color: float,
) -> None:
    n, num_colors = spec.n, spec.num_colors
    site = min(int(u_site * n), n - 1)
    li = colors[site - 1] + 1 if site >= 1 else 0
    ri = colors[site + 1] + 1 if site <= n - 2 else 0
    color = int(np.searchsorted(cdf[li, ri], u_color, side="right"))
    colors[site] = min(color, num_colors - 1)


def simulate(
    spec: ModelSpec, start: Configuration, steps: int, seed: int
) -> Configuration:
    """Run the chain and return the final configuration.

    Works at any chain length: only local conditionals are evaluated, the
    state space is never materialized.

    Raises:
        ValueError: On a negative step count or a start of the wrong length.
    """
    trajectory = simulate_trajectory(spec, start, steps, seed)
    return config_from_colors(spec, trajectory[-1])


def simulate_trajectory(
    spec: ModelSpec, start: Configuration, steps: int, seed: int
) -> np.ndarray:
    """Run the chain and return all visited color vectors.

    Returns:
        Array of shape ``(steps + 1, n)``; row 0 is the start.
    """
    if steps < 0:
        raise ValueError(f"step count must be nonnegative, got {steps}")
    if len(start.colors) != spec.n:
        raise ValueError(f"start must have {spec.n} sites")
    rng = make_rng(seed)
    cdf = _cdf_table(spec)
    colors = np.array(start.colors, dtype=np.int8)
    out = np.empty((steps + 1, spec.n), dtype=np.int8)
    out[0] = colors
    done = 0
    block = 8192
    while done < steps:
        todo = min(block, steps - done)
        uniforms = rng.random(2 * todo)
        for t in range(todo):
            _step_single(spec, colors, cdf, uniforms[2 * t], uniforms[2 * t + 1])
            out[done + t + 1] = colors
        done += todo
    return out


def _mc_distributions(
    kernel: SparseKernel, start: int, k_max: int, seed: int, replicas: int
) -> np.ndarray:
    """Empirical state distribution of many replicas at every step count.

    All replicas advance together; each step consumes one block of site
    uniforms and one block of color uniforms, so the result is a pure
    function of (seed, replicas, k_max).
    """
    spec = kernel.spec
    n, num_colors = spec.n, spec.num_colors
    m = spec.num_states
    rng = make_rng(seed)
    cdf = _cdf_table(spec)
    places = np.array(
        [num_colors ** (n - 1 - i) for i in range(n)], dtype=np.int64
    )
    colors = np.tile(
        np.array(
            [(start // num_colors ** (n - 1 - i)) % num_colors for i in range(n)],
            dtype=np.int64,
        ),
        (replicas, 1),
    )
    ranks = np.full(replicas, start, dtype=np.int64)
    rows = np.arange(replicas)
    out = np.empty((k_max + 1, m))
    out[0] = np.bincount(ranks, minlength=m) / replicas
    for k in range(1, k_max + 1):
        sites = np.minimum((rng.random(replicas) * n).astype(np.int64), n - 1)
        left = np.where(sites >= 1, colors[rows, np.maximum(sites - 1, 0)] + 1, 0)
        right = np.where(
            sites <= n - 2, colors[rows, np.minimum(sites + 1, n - 1)] + 1, 0
        )
        u = rng.random(replicas)
        new_colors = np.minimum(
            (cdf[left, right] <= u[:, None]).sum(axis=1), num_colors - 1
        )
        ranks += (new_colors - colors[rows, sites]) * places[sites]
        colors[rows, sites] = new_colors
        out[k] = np.bincount(ranks, minlength=m) / replicas
    return out


@dataclass(frozen=True)
class TvCurve:
    """Exact TV decay from one start state with its certified envelope.

    Attributes:
        spec: Chain parameters.
        start_state: Rank of the start state.
        ks: Step counts ``0..k_max``.
        exact_tv: Exact TV between the propagated distribution and the
            stationary one at each step count.
        envelope: Certified decay envelope at each step count.
        mc_tv: Empirical TV estimates, or None when no seed was given.  The
            estimate is biased upward by sampling noise and carries no
            certification.
        seed: Seed of the Monte Carlo arm, or None.
    """

    spec: ModelSpec
    start_state: int
    ks: np.ndarray
    exact_tv: np.ndarray
    envelope: np.ndarray
    mc_tv: np.ndarray | None
    seed: int | None

    @property
    def within_envelope(self) -> bool:
        """Whether ``exact_tv <= envelope + 1e-12`` holds at every step."""
        return bool(np.all(self.exact_tv <= self.envelope + 1e-12))

    def to_rows(self) -> tuple[list[str], list[list]]:
        header = ["k", "exact_tv", "envelope", "mc_tv"]
        rows = []
        for idx, k in enumerate(self.ks):
            mc = None if self.mc_tv is None else float(self.mc_tv[idx])
            rows.append(
                [int(k), float(self.exact_tv[idx]), float(self.envelope[idx]), mc]
            )
        return header, rows

    def to_csv(self) -> str:
        header, rows = self.to_rows()
        return canonical_csv(header, rows)

    def to_dict(self) -> dict:
        return {
            "model": {
                "n": self.spec.n,
                "colors": self.spec.num_colors,
                "temp": float(self.spec.temp),
            },
            "start_state": self.start_state,
            "seed": self.seed,
            "ks": [int(k) for k in self.ks],
            "exact_tv": [float(v) for v in self.exact_tv],
            "envelope": [float(v) for v in self.envelope],
            "mc_tv": None
            if self.mc_tv is None
            else [float(v) for v in self.mc_tv],
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())


def tv_curve(
    spec: ModelSpec,
    start: int | Configuration,
    k_max: int,
    seed: int | None = None,
    mc_replicas: int = 256,
    kernel: SparseKernel | None = None,
    spec_budget: int = EXACT_STATES_BUDGET,
    dense_budget: int = DENSE_SOLVE_BUDGET,
    spectrum: Spectrum | None = None,
) -> TvCurve:
    """Measure exact TV decay against the certified envelope.

    The exact arm propagates the start distribution step by step; the
    envelope uses the exact rate and the start state's stationary
    probability.  When a seed is given, a Monte Carlo arm with
    ``mc_replicas`` chains estimates the same curve empirically.

    Raises:
        BudgetExceededError: If the state space exceeds the exact budgets.
        ValueError: On a negative ``k_max`` or an out-of-range start.
    """
    if k_max < 0:
        raise ValueError(f"k_max must be nonnegative, got {k_max}")
    if kernel is None:
        kernel = build_kernel(spec, min(spec_budget, dense_budget))
    elif kernel.spec != spec:
        raise ValueError("kernel was built for a different spec")
    if spectrum is None:
        spectrum = compute_spectrum(kernel, dense_budget)
    start_rank = start.rank if isinstance(start, Configuration) else int(start)
    if not 0 <= start_rank < kernel.dimension:
        raise ValueError(f"start rank {start_rank} out of range")

    pi = kernel.pi.weights
    transposed = kernel.matrix.T.tocsr()
    dist = np.zeros(kernel.dimension)
    dist[start_rank] = 1.0
    exact = np.empty(k_max + 1)
    for k in range(k_max + 1):
        exact[k] = tv_distance(dist, pi)
        if k < k_max:
            dist = transposed @ dist

    ks = np.arange(k_max + 1)
    pi_start = float(pi[start_rank])
    prefactor = 0.5 * np.sqrt((1.0 - pi_start) / pi_start)
    envelope = prefactor * np.power(spectrum.beta_star, ks.astype(np.float64))

    mc = None
    if seed is not None:
        dists = _mc_distributions(kernel, start_rank, k_max, seed, mc_replicas)
        mc = 0.5 * np.abs(dists - pi[None, :]).sum(axis=1)

    return TvCurve(
        spec=spec,
        start_state=start_rank,
        ks=ks,
        exact_tv=exact,
        envelope=envelope,
        mc_tv=mc,
        seed=seed,
    )
