"""Canonical paths, the exact path-congestion constant, and its certificates.

For every ordered pair of distinct states ``(x, y)`` the canonical path
corrects the disagreeing sites of ``x`` one at a time, in increasing site
order, until ``y`` is reached.  The congestion constant is

    kappa = max over directed edges e of
            (1/Q(e)) * sum over paths traversing e of |path| * pi(x) * pi(y)

where ``Q(u, v) = pi(u) P(u, v)`` is the (symmetric) edge measure.  Loads are
accumulated per directed edge, matching the traversal orientation of the
paths; with one path per ordered pair this makes the single-pair, single-edge
chain carry exactly its own pair, so the degenerate one-site chain yields
``kappa = 1``.

The module also evaluates the closed-form upper bound ``(n^2/N)(N-1+e^{4/T})``
together with the per-edge quantities that prove it: the edge-local factors
``alpha`` and ``beta``, the per-edge interior bound ``(n^2/N)(alpha+beta)``,
the boundary bound ``(n^2/N)(N-1+e^{2/T})``, and the slice-sum identities the
derivation rests on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    KAPPA_BUDGET,
    Configuration,
    ModelSpec,
    check_budget,
    color_letter,
    colors_table,
    config_from_rank,
)
from .kernel import SparseKernel, bond_score, conditional_table
from .serialize import canonical_json


@dataclass(frozen=True)
class PathRecord:
    """Canonical path between two states.

    Attributes:
        source: Start configuration.
        target: End configuration.
        diffs: 1-based sites where source and target disagree, increasing.
        edges: Traversed directed edges as ``(rank_from, rank_to)`` pairs.
    """

    source: Configuration
    target: Configuration
    diffs: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def length(self) -> int:
        return len(self.edges)


def canonical_path(spec: ModelSpec, x: Configuration, y: Configuration) -> PathRecord:
    """Build the canonical path from ``x`` to ``y``.

    Disagreeing sites are corrected left to right, so the state after step
    ``j`` agrees with ``y`` up to the ``j``-th disagreeing site and with
    ``x`` beyond it.

    Raises:
        ValueError: If ``x == y`` (pairs must be distinct) or the
            configurations do not match ``spec``.
    """
    if len(x.colors) != spec.n or len(y.colors) != spec.n:
        raise ValueError(f"configurations must have {spec.n} sites")
    if x.colors == y.colors:
        raise ValueError("no path is defined from a state to itself")
    diffs = tuple(
        i + 1 for i in range(spec.n) if x.colors[i] != y.colors[i]
    )
    edges = []
    current = list(x.colors)
    rank = x.rank
    for site in diffs:
        place = spec.num_colors ** (spec.n - site)
        next_rank = rank + (y.colors[site - 1] - current[site - 1]) * place
        edges.append((rank, next_rank))
        current[site - 1] = y.colors[site - 1]
        rank = next_rank
    return PathRecord(source=x, target=y, diffs=diffs, edges=tuple(edges))


@dataclass(frozen=True)
class EdgeLoad:
    """Load data of one directed edge.

    Attributes:
        edge: ``(rank_from, rank_to)`` of the traversal direction.
        load: Sum of ``|path| * pi(x) * pi(y)`` over paths traversing it.
        q: Edge measure ``pi(rank_from) * P(rank_from, rank_to)``.
        ratio: ``load / q``.
        site: 1-based site where the two endpoint states differ.
        color_from: Color at that site before the move.
        color_to: Color at that site after the move.
    """

    edge: tuple[int, int]
    load: float
    q: float
    ratio: float
    site: int
    color_from: int
    color_to: int


@dataclass(frozen=True)
class KappaResult:
    """Exact congestion constant plus the full directed-edge tables.

    The tables are indexed ``[source rank, site - 1, target color]``; slots
    where the target color equals the source state's color are not edges and
    hold zeros.
    """

    spec: ModelSpec
    kappa: float
    argmax_edge: EdgeLoad
    loads: np.ndarray
    qs: np.ndarray
    ratios: np.ndarray


def _pairwise_sum(arrays: list[np.ndarray]) -> np.ndarray:
    """Merge partial load tables pairwise in a fixed order."""
    items = list(arrays)
    while len(items) > 1:
        merged = []
        for k in range(0, len(items) - 1, 2):
            merged.append(items[k] + items[k + 1])
        if len(items) % 2 == 1:
            merged.append(items[-1])
        items = merged
    return items[0]


def kappa_exact(
    kernel: SparseKernel, budget: int = KAPPA_BUDGET, block_size: int = 512
) -> KappaResult:
    """Compute the congestion constant by brute force over all ordered pairs.

    Every ordered pair ``(x, y)`` with ``x != y`` contributes
    ``|path| * pi(x) * pi(y)`` to each directed edge its canonical path
    traverses.  Source states are processed in fixed-size blocks and the
    per-block tables are merged pairwise in a fixed order, so the result does
    not depend on scheduling.

    Raises:
        BudgetExceededError: If the state space exceeds ``budget``.
    """
    spec = kernel.spec
    m = spec.num_states
    check_budget(m, budget, "pair enumeration")
    n, num_colors = spec.n, spec.num_colors
    pi = kernel.pi.weights
    table = colors_table(spec, budget).astype(np.int64)
    places = np.array(
        [num_colors ** (n - 1 - i) for i in range(n)], dtype=np.int64
    )
    cond = conditional_table(spec, budget)

    block_tables: list[np.ndarray] = []
    for start in range(0, m, block_size):
        stop = min(start + block_size, m)
        src = np.arange(start, stop, dtype=np.int64)
        src_colors = table[src]
        diff = src_colors[:, None, :] != table[None, :, :]
        weight = (
            pi[src][:, None] * pi[None, :] * diff.sum(axis=2, dtype=np.float64)
        )
        current = np.broadcast_to(src[:, None], (len(src), m)).copy()
        partial = np.zeros(m * n * num_colors, dtype=np.float64)
        for i in range(n):
            step = diff[:, :, i]
            if not step.any():
                continue
            target_color = np.broadcast_to(table[:, i][None, :], step.shape)[step]
            at = current[step]
            edge_ids = (at * n + i) * num_colors + target_color
            np.add.at(partial, edge_ids, weight[step])
            source_color = np.broadcast_to(
                src_colors[:, i][:, None], step.shape
            )[step]
            current[step] = at + (target_color - source_color) * places[i]
        block_tables.append(partial)

    loads = _pairwise_sum(block_tables).reshape(m, n, num_colors)
    qs = pi[:, None, None] * cond / n
    valid = table[:, :, None] != np.arange(num_colors)[None, None, :]
    ratios = np.where(valid, loads / qs, 0.0)
    for arr in (loads, qs, ratios):
        arr.flags.writeable = False

    flat = int(np.argmax(ratios))
    argmax = edge_load_at(
        kernel,
        loads,
        qs,
        source_rank=flat // (n * num_colors),
        site=(flat // num_colors) % n + 1,
        color_to=flat % num_colors,
    )
    return KappaResult(
        spec=spec,
        kappa=float(ratios.flat[flat]),
        argmax_edge=argmax,
        loads=loads,
        qs=qs,
        ratios=ratios,
    )


def edge_load_at(
    kernel: SparseKernel,
    loads: np.ndarray,
    qs: np.ndarray,
    source_rank: int,
    site: int,
    color_to: int,
) -> EdgeLoad:
    """Extract one directed edge's :class:`EdgeLoad` from the tables."""
    spec = kernel.spec
    source = config_from_rank(spec, source_rank)
    color_from = source.colors[site - 1]
    if color_from == color_to:
        raise ValueError("not an edge: target color equals the current color")
    place = spec.num_colors ** (spec.n - site)
    target_rank = source_rank + (color_to - color_from) * place
    load = float(loads[source_rank, site - 1, color_to])
    q = float(qs[source_rank, site - 1, color_to])
    return EdgeLoad(
        edge=(source_rank, target_rank),
        load=load,
        q=q,
        ratio=load / q,
        site=site,
        color_from=color_from,
        color_to=color_to,
    )


def kappa_closed_form(spec: ModelSpec) -> float:
    """Closed-form upper bound ``(n^2/N)(N-1+e^{4/T})`` for the constant."""
    n, num_colors = spec.n, spec.num_colors
    return (n * n / num_colors) * (num_colors - 1 + math.exp(4.0 / spec.temp))


def boundary_edge_bound(spec: ModelSpec) -> float:
    """Per-edge bound ``(n^2/N)(N-1+e^{2/T})`` for edges at site 1 or n."""
    n, num_colors = spec.n, spec.num_colors
    return (n * n / num_colors) * (num_colors - 1 + math.exp(2.0 / spec.temp))


def _alpha_beta(
    spec: ModelSpec, left: int, right: int, color_from: int, color_to: int
) -> tuple[float, float]:
    """Edge-local factors for an interior edge with the given neighbor colors."""
    t = spec.temp
    alpha = math.exp(
        (bond_score(left, color_to) - bond_score(left, color_from)) / t
    )
    prefactor = math.exp(
        (-bond_score(left, color_from) - bond_score(color_to, right)) / t
    )
    total = 0.0
    for c in range(spec.num_colors):
        if c == color_to:
            continue
        total += math.exp((bond_score(left, c) + bond_score(c, right)) / t)
    return alpha, prefactor * total


def edge_local_factors(kernel: SparseKernel, edge: EdgeLoad) -> tuple[float, float]:
    """The two factors ``(alpha, beta)`` of an interior edge.

    Both depend only on the colors of the two neighbors of the updated site.
    Their sum is at most ``N - 1 + e^{4/T}``, with equality exactly when both
    neighbors carry one shared color distinct from the edge's two colors.

    Raises:
        ValueError: If the edge sits at site 1 or ``n`` (no two neighbors).
    """
    spec = kernel.spec
    if edge.site in (1, spec.n):
        raise ValueError(
            f"edge at site {edge.site} is a boundary edge; the factors need "
            "two neighbors"
        )
    source = config_from_rank(spec, edge.edge[0])
    left = source.colors[edge.site - 2]
    right = source.colors[edge.site]
    return _alpha_beta(spec, left, right, edge.color_from, edge.color_to)


@dataclass(frozen=True)
class WorstFactors:
    """Maximum of ``alpha + beta`` over all neighbor-color patterns.

    Attributes:
        value: The maximum of the factor sum.
        argmax: Neighbor color pairs ``(left, right)`` attaining it.
        closed_form: ``N - 1 + e^{4/T}``.
    """

    value: float
    argmax: tuple[tuple[int, int], ...]
    closed_form: float


def worst_alpha_beta(
    spec: ModelSpec, color_from: int = 0, color_to: int = 1
) -> WorstFactors:
    """Scan all neighbor-color patterns of an interior edge for the worst sum.

    By color symmetry the result does not depend on the chosen edge colors.
    """
    if color_from == color_to:
        raise ValueError("edge colors must differ")
    best = -math.inf
    argmax: list[tuple[int, int]] = []
    for left in range(spec.num_colors):
        for right in range(spec.num_colors):
            alpha, beta = _alpha_beta(spec, left, right, color_from, color_to)
            total = alpha + beta
            if total > best + 1e-12:
                best = total
                argmax = [(left, right)]
            elif total > best - 1e-12:
                argmax.append((left, right))
    n, num_colors = spec.n, spec.num_colors
    return WorstFactors(
        value=best,
        argmax=tuple(argmax),
        closed_form=num_colors - 1 + math.exp(4.0 / spec.temp),
    )


@dataclass(frozen=True)
class EdgeCertificate:
    """Outcome of checking one edge's load ratio against its bound.

    Attributes:
        edge: The checked edge.
        bound: ``(n^2/N)(alpha+beta)`` for interior edges, the boundary
            closed form otherwise.
        slack: ``bound - ratio``; nonnegative when the certificate passes.
        interior: Whether the interior bound applied.
        passed: ``slack >= 0``.
    """

    edge: EdgeLoad
    bound: float
    slack: float
    interior: bool
    passed: bool


def per_edge_certificate(kernel: SparseKernel, edge: EdgeLoad) -> EdgeCertificate:
    """Check one edge's load ratio against its per-edge bound."""
    spec = kernel.spec
    interior = edge.site not in (1, spec.n)
    if interior:
        alpha, beta = edge_local_factors(kernel, edge)
        bound = (spec.n * spec.n / spec.num_colors) * (alpha + beta)
    else:
        bound = boundary_edge_bound(spec)
    slack = bound - edge.ratio
    return EdgeCertificate(
        edge=edge, bound=bound, slack=slack, interior=interior, passed=slack >= 0
    )


@dataclass(frozen=True)
class CertificateSummary:
    """Aggregate of the per-edge certificates over every directed edge."""

    num_edges: int
    min_slack: float
    worst: EdgeCertificate
    all_passed: bool


def certify_all_edges(kernel: SparseKernel, result: KappaResult) -> CertificateSummary:
    """Check every directed edge's ratio against its per-edge bound.

    Interior edges use their own ``(n^2/N)(alpha+beta)`` value computed from
    the neighbor colors; boundary edges use the boundary closed form.
    """
    spec = kernel.spec
    m, n, num_colors = spec.num_states, spec.n, spec.num_colors
    table = colors_table(spec, budget=m)
    t = spec.temp
    scale = n * n / num_colors

    bounds = np.full((m, n, num_colors), boundary_edge_bound(spec))
    for i in range(1, n - 1):
        left = table[:, i - 1].astype(np.int64)
        right = table[:, i + 1].astype(np.int64)
        for color_to in range(num_colors):
            color_from = table[:, i].astype(np.int64)
            s_l_to = np.where(left == color_to, 1.0, -1.0)
            s_l_from = np.where(left == color_from, 1.0, -1.0)
            alpha = np.exp((s_l_to - s_l_from) / t)
            s_to_r = np.where(right == color_to, 1.0, -1.0)
            prefactor = np.exp((-s_l_from - s_to_r) / t)
            total = np.zeros(m)
            for c in range(num_colors):
                if c == color_to:
                    continue
                s_l_c = np.where(left == c, 1.0, -1.0)
                s_c_r = np.where(right == c, 1.0, -1.0)
                total += np.exp((s_l_c + s_c_r) / t)
            bounds[:, i, color_to] = scale * (alpha + prefactor * total)

    valid = table[:, :, None] != np.arange(num_colors)[None, None, :]
    slack = np.where(valid, bounds - result.ratios, np.inf)
    flat = int(np.argmin(slack))
    worst_edge = edge_load_at(
        kernel,
        result.loads,
        result.qs,
        source_rank=flat // (n * num_colors),
        site=(flat // num_colors) % n + 1,
        color_to=flat % num_colors,
    )
    worst = per_edge_certificate(kernel, worst_edge)
    return CertificateSummary(
        num_edges=int(valid.sum()),
        min_slack=float(slack.flat[flat]),
        worst=worst,
        all_passed=bool(slack.flat[flat] >= 0),
    )


@dataclass(frozen=True)
class SliceIdentityReport:
    """Exactly summed slice identities at one site and color pair.

    For ``W^(k) = {w : w_i = color_from, w_{i+1} = c^(k)}`` the checked
    identities are: the agreeing slice outweighs each disagreeing slice by
    exactly ``e^{2/T}``; the slices total ``1/N``; and the two
    exponential-weighted slice sums (``a_prime`` over ``w_i = color_from``
    weighted by the bond change at ``(i, i+1)`` when that site is recolored
    to ``color_to``, and ``b_prime`` over ``w_i = color_to`` weighted by the
    bond change at ``(i-1, i)`` when it is recolored back) both equal
    ``1/N``.  ``b_prime`` needs a left neighbor and is skipped at site 1.

    Attributes:
        site: 1-based site ``i``.
        color_from: Color defining the ``W`` slices.
        color_to: Replacement color of the weighted sums.
        w_slice_sums: Measure of each ``W^(k)``, indexed by color ``k``.
        agree_ratio_error: Worst ``|W^(from) - e^{2/T} W^(k)|`` over
            ``k != color_from``.
        total_error: ``|sum_k W^(k) - 1/N|``.
        a_prime: Weighted sum over ``w_i = color_from``.
        b_prime: Weighted sum over ``w_i = color_to``, or None at site 1.
        max_error: Largest deviation among all applicable identities.
        passed: ``max_error <= 1e-12``.
    """

    site: int
    color_from: int
    color_to: int
    w_slice_sums: tuple[float, ...]
    agree_ratio_error: float
    total_error: float
    a_prime: float
    b_prime: float | None
    max_error: float
    passed: bool

SLICE_TOLERANCE = 1e-12


def verify_slice_identities(
    kernel: SparseKernel, site: int, color_from: int, color_to: int
) -> SliceIdentityReport:
    """Sum the slice identities exactly over the whole state space.

    Args:
        kernel: Built kernel (provides the stationary weights).
        site: 1-based site ``i`` with ``1 <= i <= n-1``; the identities
            involve the bond ``(i, i+1)``.
        color_from: Slice color (the color the site currently holds).
        color_to: Replacement color; must differ from ``color_from``.

    Raises:
        ValueError: If the site has no right neighbor or the colors match.
    """
    spec = kernel.spec
    if not 1 <= site <= spec.n - 1:
        raise ValueError(
            f"site {site} out of range 1..{spec.n - 1}; the identities need a "
            "right neighbor"
        )
    if color_from == color_to:
        raise ValueError("colors must differ")
    num_colors = spec.num_colors
    pi = kernel.pi.weights
    table = colors_table(spec, budget=spec.num_states)
    t = spec.temp
    i = site - 1

    at_i = table[:, i]
    at_next = table[:, i + 1]
    in_slice = at_i == color_from
    w_sums = tuple(
        float(pi[in_slice & (at_next == k)].sum()) for k in range(num_colors)
    )
    scale = math.exp(2.0 / t)
    agree_ratio_error = max(
        abs(w_sums[color_from] - scale * w_sums[k])
        for k in range(num_colors)
        if k != color_from
    )
    total_error = abs(sum(w_sums) - 1.0 / num_colors)

    s_next_to = np.where(at_next == color_to, 1.0, -1.0)
    s_next_from = np.where(at_next == color_from, 1.0, -1.0)
    a_prime = float(
        (pi[in_slice] * np.exp((s_next_to - s_next_from) / t)[in_slice]).sum()
    )
    errors = [agree_ratio_error, total_error, abs(a_prime - 1.0 / num_colors)]

    b_prime = None
    if site >= 2:
        at_prev = table[:, i - 1]
        in_target = at_i == color_to
        s_prev_from = np.where(at_prev == color_from, 1.0, -1.0)
        s_prev_to = np.where(at_prev == color_to, 1.0, -1.0)
        b_prime = float(
            (pi[in_target] * np.exp((s_prev_from - s_prev_to) / t)[in_target]).sum()
        )
        errors.append(abs(b_prime - 1.0 / num_colors))

    max_error = max(errors)
    return SliceIdentityReport(
        site=site,
        color_from=color_from,
        color_to=color_to,
        w_slice_sums=w_sums,
        agree_ratio_error=agree_ratio_error,
        total_error=total_error,
        a_prime=a_prime,
        b_prime=b_prime,
        max_error=max_error,
        passed=max_error <= SLICE_TOLERANCE,
    )


def kappa_report(kernel: SparseKernel, result: KappaResult) -> dict:
    """JSON-ready summary: the constant, its witness edge, and the bound."""
    spec = kernel.spec
    edge = result.argmax_edge
    source = config_from_rank(spec, edge.edge[0])
    left = (
        color_letter(source.colors[edge.site - 2]) if edge.site >= 2 else None
    )
    right = (
        color_letter(source.colors[edge.site]) if edge.site <= spec.n - 1 else None
    )
    closed = kappa_closed_form(spec)
    return {
        "kappa": result.kappa,
        "argmax_edge": {
            "site": edge.site,
            "colorFrom": color_letter(edge.color_from),
            "colorTo": color_letter(edge.color_to),
            "neighbors": {"left": left, "right": right},
        },
        "closed_form": closed,
        "slack": closed - result.kappa,
    }


def kappa_report_json(kernel: SparseKernel, result: KappaResult) -> str:
    """Serialized form of :func:`kappa_report`."""
    return canonical_json(kappa_report(kernel, result))
