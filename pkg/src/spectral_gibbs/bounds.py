"""Closed-form eigenvalue bounds and dominance verdicts against exact data.

All formulas are elementary functions of the chain length ``n``, the color
count ``N``, and the temperature ``T``.  The report assembler compares each
bound with the exact spectrum and the exact congestion constant and records a
pass/fail verdict per comparison.

Total variation here and everywhere in this package means half the L1
distance between two distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import ModelSpec
from .kernel import SparseKernel
from .spectral import Spectrum
from .paths import KappaResult, kappa_closed_form
from .serialize import canonical_json

# Exact eigenvalues carry at most ~1e-10 solver error; comparisons that are
# equalities in exact arithmetic get this much room.
EXACT_TOLERANCE = 1e-10


def theorem2_bound(n: int, temp: float) -> float:
    """Three-color upper bound for the second largest eigenvalue.

    Equals ``theorem3_bound(n, 3, temp)``.
    """
    return theorem3_bound(n, 3, temp)


def theorem3_bound(n: int, num_colors: int, temp: float) -> float:
    """N-color upper bound ``1 - N n^{-2} e^{-4/T} / (1 + (N-1) e^{-4/T})``.

    Algebraically identical to ``1 - 1/kappa_closed_form``.
    """
    if n < 1 or num_colors < 2 or not temp > 0:
        raise ValueError("need n >= 1, num_colors >= 2, temp > 0")
    u = math.exp(-4.0 / temp)
    return 1.0 - num_colors * u / (n * n * (1.0 + (num_colors - 1) * u))


def ingrassia_lambda_min_bound(num_colors: int, temp: float) -> float:
    """Lower bound ``-1 + 2 / (1 + (N-1) e^{2/T})`` for the smallest eigenvalue."""
    if num_colors < 2 or not temp > 0:
        raise ValueError("need num_colors >= 2, temp > 0")
    return -1.0 + 2.0 / (1.0 + (num_colors - 1) * math.exp(2.0 / temp))


def corollary_gate(n: int, num_colors: int) -> bool:
    """Whether ``n > N / sqrt(2)``, the regime where the second-eigenvalue
    bound also dominates the full eigenvalue modulus."""
    return n > num_colors / math.sqrt(2.0)


@dataclass(frozen=True)
class IngrassiaParams:
    """Path and landscape constants feeding the general-purpose bound.

    Attributes:
        c: Number of configurations reachable by one single-site move, ``N``.
        delta: Local energy swing of one move, 2.
        m: Least total elevation gain, 2.
        b_gamma: Most paths through any edge, ``N^{n-1}``.
        gamma_gamma: Longest path length, ``n``.
        lattice_size: Number of sites, ``n``.
        z_upper: Upper bound ``N (1 + (N-1) e^{-1/(2T)})^{n-1}`` for the
            normalizing constant.
    """

    c: float
    delta: float
    m: float
    b_gamma: float
    gamma_gamma: float
    lattice_size: float
    z_upper: float

    @classmethod
    def from_spec(cls, spec: ModelSpec) -> "IngrassiaParams":
        n, num_colors, temp = spec.n, spec.num_colors, spec.temp
        return cls(
            c=float(num_colors),
            delta=2.0,
            m=2.0,
            b_gamma=float(num_colors) ** (n - 1),
            gamma_gamma=float(n),
            lattice_size=float(n),
            z_upper=num_colors
            * (1.0 + (num_colors - 1) * math.exp(-1.0 / (2.0 * temp))) ** (n - 1),
        )


def ingrassia_beta1_bound(
    n: int, num_colors: int, temp: float, params: IngrassiaParams | None = None
) -> float:
    """Second-eigenvalue comparison bound assembled from the general recipe.

    With the default parameters this evaluates to
    ``1 - n^{-2} ((1 + (N-1) e^{-1/(2T)}) / N)^{n-1} e^{-2/T}``.  The
    normalizing constant enters through its upper bound ``z_upper``, which
    makes this the most favorable form of the general bound; it is used as a
    comparison quantity, not as a certified bound on the exact eigenvalue.
    """
    if params is None:
        params = IngrassiaParams.from_spec(ModelSpec(n, num_colors, temp))
    denominator = (
        params.b_gamma * params.gamma_gamma * params.c * params.lattice_size
    )
    return 1.0 - params.z_upper * math.exp(-params.m / temp) / denominator


def theta(n: int, num_colors: int, temp: float) -> float:
    """Ratio of the two gap terms; below 1 the path bound is the tighter one.

    Equals ``(e^{2/T} + (N-1) e^{-2/T}) / N`` times
    ``((1 + (N-1) e^{-1/(2T)}) / N)^{n-1}`` and is strictly decreasing in
    ``n``.
    """
    head = (
        math.exp(2.0 / temp) + (num_colors - 1) * math.exp(-2.0 / temp)
    ) / num_colors
    ratio = (1.0 + (num_colors - 1) * math.exp(-1.0 / (2.0 * temp))) / num_colors
    return head * ratio ** (n - 1)


def crossover_n(num_colors: int, temp: float) -> float:
    """Real chain length above which the ratio :func:`theta` drops below 1."""
    numerator = math.log(
        (math.exp(2.0 / temp) + (num_colors - 1) * math.exp(-2.0 / temp))
        / num_colors
    )
    denominator = math.log(
        num_colors / (1.0 + (num_colors - 1) * math.exp(-1.0 / (2.0 * temp)))
    )
    return numerator / denominator + 1.0


def ds_tv_envelope(pi_x: float, beta_star: float, k: int) -> float:
    """Total-variation envelope ``(1/2) sqrt((1-pi_x)/pi_x) beta_star^k``.

    The underlying inequality bounds ``4 TV^2`` by
    ``((1-pi_x)/pi_x) beta_star^{2k}``; this returns the equivalent direct
    TV form.

    Raises:
        ValueError: If ``pi_x`` is not strictly inside ``(0, 1)``, the rate
            is outside ``[0, 1)``, or ``k`` is negative.
    """
    if not 0.0 < pi_x < 1.0:
        raise ValueError(f"start-state probability must be in (0, 1), got {pi_x}")
    if not 0.0 <= beta_star < 1.0:
        raise ValueError(f"rate must be in [0, 1), got {beta_star}")
    if k < 0:
        raise ValueError(f"step count must be nonnegative, got {k}")
    return 0.5 * math.sqrt((1.0 - pi_x) / pi_x) * beta_star**k


@dataclass(frozen=True)
class BoundReport:
    """Every closed-form bound, the exact quantities, and the verdicts.

    Verdict values are "pass", "fail", or "not-applicable".

    Attributes:
        spec: Chain parameters.
        thm2: Three-color bound; None unless ``num_colors == 3``.
        thm3: N-color second-eigenvalue bound.
        ingrassia_beta1: General-recipe comparison bound.
        ingrassia_lambda_min: Smallest-eigenvalue lower bound.
        theta: Gap-term ratio.
        crossover_n: Real length threshold for ``theta < 1``.
        exact_beta1: Second largest eigenvalue.
        exact_beta_min: Smallest eigenvalue.
        exact_beta_star: Second largest eigenvalue modulus.
        exact_log_z: Log of the exact normalizing constant.
        kappa_exact: Brute-force congestion constant.
        kappa_closed_form: Its closed-form upper bound.
        envelope_start: Rank of the envelope's start state (least likely
            state by default).
        envelope_pi_start: Its stationary probability.
        ds_envelope: Map from step count to the envelope value.
        verdicts: Pass/fail per dominance relation.
    """

    spec: ModelSpec
    thm2: float | None
    thm3: float
    ingrassia_beta1: float
    ingrassia_lambda_min: float
    theta: float
    crossover_n: float
    exact_beta1: float
    exact_beta_min: float
    exact_beta_star: float
    exact_log_z: float
    kappa_exact: float
    kappa_closed_form: float
    envelope_start: int
    envelope_pi_start: float
    ds_envelope: Callable[[int], float]
    verdicts: dict[str, str]

    @property
    def all_passed(self) -> bool:
        return all(v != "fail" for v in self.verdicts.values())


def assemble_report(
    spec: ModelSpec,
    kernel: SparseKernel,
    spectrum: Spectrum,
    kappa: KappaResult,
    envelope_start: int | None = None,
) -> BoundReport:
    """Evaluate every bound for one chain and compare against exact data.

    Args:
        spec: Chain parameters; must match the kernel and the other inputs.
        kernel: Built kernel.
        spectrum: Exact spectrum of that kernel.
        kappa: Brute-force congestion result for that kernel.
        envelope_start: Start state for the envelope; defaults to the least
            likely state, which maximizes the envelope prefactor.

    Raises:
        ValueError: If the inputs come from different chains.
    """
    if kernel.spec != spec or kappa.spec != spec:
        raise ValueError("kernel, spectrum, and kappa must come from one spec")
    if len(spectrum.eigenvalues) != spec.num_states:
        raise ValueError("spectrum size does not match the state space")

    n, num_colors, temp = spec.n, spec.num_colors, spec.temp
    thm3 = theorem3_bound(n, num_colors, temp)
    thm2 = theorem2_bound(n, temp) if num_colors == 3 else None
    ing_beta1 = ingrassia_beta1_bound(n, num_colors, temp)
    ing_lmin = ingrassia_lambda_min_bound(num_colors, temp)
    theta_value = theta(n, num_colors, temp)
    closed = kappa_closed_form(spec)

    if envelope_start is None:
        envelope_start = int(np.argmin(kernel.pi.weights))
    pi_start = float(kernel.pi.weights[envelope_start])
    rate = spectrum.beta_star

    verdicts: dict[str, str] = {}
    verdicts["theorem3"] = "pass" if spectrum.beta1 < thm3 else "fail"
    if thm2 is not None:
        verdicts["theorem2"] = "pass" if spectrum.beta1 < thm2 else "fail"
    verdicts["lambda_min"] = (
        "pass" if spectrum.beta_min >= ing_lmin - EXACT_TOLERANCE else "fail"
    )
    if corollary_gate(n, num_colors):
        verdicts["corollary_beta_star"] = (
            "pass" if spectrum.beta_star < thm3 else "fail"
        )
    else:
        verdicts["corollary_beta_star"] = "not-applicable"
    verdicts["kappa_vs_beta1"] = (
        "pass"
        if spectrum.beta1 <= 1.0 - 1.0 / kappa.kappa + EXACT_TOLERANCE
        else "fail"
    )
    verdicts["kappa_vs_closed_form"] = (
        "pass" if kappa.kappa <= closed * (1.0 + 1e-12) else "fail"
    )
    improvement = theta_value < 1.0
    agrees = improvement == (thm3 < ing_beta1)
    near_boundary = abs(theta_value - 1.0) <= 1e-12
    verdicts["theta_consistency"] = (
        "pass" if agrees or near_boundary else "fail"
    )

    return BoundReport(
        spec=spec,
        thm2=thm2,
        thm3=thm3,
        ingrassia_beta1=ing_beta1,
        ingrassia_lambda_min=ing_lmin,
        theta=theta_value,
        crossover_n=crossover_n(num_colors, temp),
        exact_beta1=spectrum.beta1,
        exact_beta_min=spectrum.beta_min,
        exact_beta_star=rate,
        exact_log_z=kernel.pi.log_z,
        kappa_exact=kappa.kappa,
        kappa_closed_form=closed,
        envelope_start=envelope_start,
        envelope_pi_start=pi_start,
        ds_envelope=lambda k: ds_tv_envelope(pi_start, rate, k),
        verdicts=verdicts,
    )


def report_to_dict(report: BoundReport) -> dict:
    """JSON-ready form of a report with a fixed field order."""
    spec = report.spec
    payload: dict = {
        "model": {
            "n": spec.n,
            "colors": spec.num_colors,
            "temp": float(spec.temp),
        },
        "exact": {
            "beta1": report.exact_beta1,
            "beta_min": report.exact_beta_min,
            "beta_star": report.exact_beta_star,
            "log_z": report.exact_log_z,
        },
        "bounds": {
            "theorem2": report.thm2,
            "theorem3": report.thm3,
            "ingrassia_beta1": report.ingrassia_beta1,
            "ingrassia_lambda_min": report.ingrassia_lambda_min,
            "theta": report.theta,
            "crossover_n": report.crossover_n,
        },
        "kappa": {
            "exact": report.kappa_exact,
            "closed_form": report.kappa_closed_form,
            "poincare_beta1": 1.0 - 1.0 / report.kappa_exact,
        },
        "envelope": {
            "start_state": report.envelope_start,
            "pi_start": report.envelope_pi_start,
            "beta_star": report.exact_beta_star,
        },
        "verdicts": dict(report.verdicts),
        "all_passed": report.all_passed,
    }
    return payload


def report_to_json(report: BoundReport) -> str:
    """Serialized form of :func:`report_to_dict`."""
    return canonical_json(report_to_dict(report))
