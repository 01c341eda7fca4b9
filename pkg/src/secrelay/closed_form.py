"""Closed-form secrecy outage probability and ergodic secrecy rate.

Every combination of decode branch, combining scheme and CSI mode reduces
to the same small algebra.  A combiner's output CDF is a short exponential
mixture ``F(z) = 1 + sum_i c_i exp(-s_i z)``; outage probabilities then
need only the Laplace transform of the other side's density, and ergodic
rates only the scaled exponential integral :func:`secrelay.expint.eiexp`
at sums of mixture rates.  The per-scheme expressions are assembled from
those shared blocks rather than written out term by term, which keeps the
sixteen formulas short and individually testable against quadrature.

Rate pairs close enough to make the mixture weights singular (equal-rate
MRC branches) are routed to the quadrature oracle and tagged as the limit
form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import oracles
from .errors import DomainError
from .expint import eiexp
from .fading import (
    CsiMode,
    Scheme,
    SystemParams,
    decode_probability,
    rates_degenerate,
)

__all__ = [
    "Method",
    "SecrecyMetric",
    "sop",
    "esr",
    "sop_conditional",
    "esr_conditional",
]

_HALF_LOG2E = 0.5 / math.log(2.0)
_LIMIT_FORM_TOL = 1e-9


class Method(Enum):
    CLOSED_FORM = "closed_form"
    LIMIT_FORM = "limit_form"


@dataclass(frozen=True)
class SecrecyMetric:
    """Metric value plus which evaluation path produced it."""

    value: float
    method: Method


# ---------------------------------------------------------------------------
# Exponential-mixture blocks.
#
# Terms are (coefficient, rate) pairs of the combiner output CDF written as
# 1 + sum_i c_i exp(-s_i z).
# ---------------------------------------------------------------------------


def _single_terms(r):
    return ((-1.0, r),)


def _sum_terms(r1, r2):
    # Distinct-rate mixture for the sum of two exponentials; the weights
    # are singular at r1 == r2, which callers route away from.
    return ((-r2 / (r2 - r1), r1), (-r1 / (r1 - r2), r2))


def _max_terms(r1, r2):
    return ((-1.0, r1), (-1.0, r2), (1.0, r1 + r2))


def _dest_terms(params: SystemParams, scheme: Scheme, relay_on: bool):
    if not relay_on:
        return _single_terms(params.beta_sd)
    if scheme.mrc_at_destination:
        return _sum_terms(params.beta_sd, params.beta_rd)
    return _max_terms(params.beta_sd, params.beta_rd)


def _eaves_terms(params: SystemParams, scheme: Scheme, relay_on: bool):
    if not relay_on:
        return _single_terms(params.alpha_se)
    if scheme.mrc_at_eavesdropper:
        return _sum_terms(params.alpha_se, params.alpha_re)
    return _max_terms(params.alpha_se, params.alpha_re)


def _eaves_laplace(params: SystemParams, scheme: Scheme, relay_on: bool):
    """Laplace transform of the eavesdropper-side density.

    Written directly per combiner rather than through the CDF mixture: the
    sum-combiner transform is a plain rational function with no equal-rate
    singularity, which keeps every outage formula stable for any rate pair.
    """
    a1, a2 = params.alpha_se, params.alpha_re
    if not relay_on:
        return lambda t: a1 / (a1 + t)
    if scheme.mrc_at_eavesdropper:
        return lambda t: a1 * a2 / ((a1 + t) * (a2 + t))
    return lambda t: a1 / (a1 + t) + a2 / (a2 + t) - (a1 + a2) / (a1 + a2 + t)


def _sop_bracket(m_terms, e_laplace, rho, csi):
    # Expectation over the eavesdropper SNR of the destination CDF at the
    # outage boundary; the CSI variant subtracts the losing region.
    if csi is CsiMode.NOCSI:
        return 1.0 + sum(
            c * math.exp(-s * (rho - 1.0)) * e_laplace(rho * s) for c, s in m_terms
        )
    return sum(
        c * (math.exp(-s * (rho - 1.0)) * e_laplace(rho * s) - e_laplace(s))
        for c, s in m_terms
    )


def _log_moment(terms):
    # E[ln(1 + X)] for the mixture: integrates to eiexp combinations.
    return sum(c * eiexp(s) for c, s in terms)


def _esr_bracket(m_terms, e_terms, csi):
    if csi is CsiMode.NOCSI:
        return _log_moment(m_terms) - _log_moment(e_terms)
    # Conditioned on the destination winning, both one-sided moments share
    # the pattern sum_i c_i [eiexp(s_i) + sum_j eps_j eiexp(s_i + a_j)].
    total = 0.0
    for c, s in m_terms:
        inner = eiexp(s) + sum(eps * eiexp(s + a) for eps, a in e_terms)
        total += c * inner
    return total


def _sop_degenerate(params: SystemParams, scheme: Scheme) -> bool:
    return scheme.mrc_at_destination and rates_degenerate(params.beta_sd, params.beta_rd)


# The rate expressions amplify round-off by 1/gap per singular weight set.
# A single near-equal pair stays accurate down to a 1e-8 relative gap; with
# CSI and MRC on both sides the two amplifications multiply, so the product
# of the gaps is guarded as well.
_ESR_RTOL = 3e-8
_ESR_PRODUCT_GUARD = 1e-7


def _rel_gap(r1: float, r2: float) -> float:
    return abs(r1 - r2) / max(abs(r1), abs(r2))


def _esr_degenerate(params: SystemParams, scheme: Scheme, csi: CsiMode) -> bool:
    gap_b = _rel_gap(params.beta_sd, params.beta_rd) if scheme.mrc_at_destination else math.inf
    gap_a = (
        _rel_gap(params.alpha_se, params.alpha_re) if scheme.mrc_at_eavesdropper else math.inf
    )
    if gap_b <= _ESR_RTOL or gap_a <= _ESR_RTOL:
        return True
    return csi is CsiMode.CSI and gap_b * gap_a <= _ESR_PRODUCT_GUARD


def _validate(params, scheme, csi):
    if not isinstance(params, SystemParams):
        raise DomainError(f"params must be SystemParams, got {type(params).__name__}")
    if not isinstance(scheme, Scheme) or not isinstance(csi, CsiMode):
        raise DomainError("scheme/csi must be Scheme and CsiMode members")


# ---------------------------------------------------------------------------
# Conditional (per decode branch) values, shared with the asymptotics.
# ---------------------------------------------------------------------------


def sop_conditional(
    params: SystemParams, scheme: Scheme, csi: CsiMode, relay_on: bool
) -> float:
    """Conditional outage probability given the relay decode outcome."""
    _validate(params, scheme, csi)
    if relay_on and _sop_degenerate(params, scheme):
        return oracles.quadrature_sop_conditional(
            params, scheme, csi, relay_on, tol=_LIMIT_FORM_TOL
        ).value
    m = _dest_terms(params, scheme, relay_on)
    e_laplace = _eaves_laplace(params, scheme, relay_on)
    return min(1.0, max(0.0, _sop_bracket(m, e_laplace, params.rho, csi)))


def esr_conditional(
    params: SystemParams, scheme: Scheme, csi: CsiMode, relay_on: bool
) -> float:
    """Conditional ergodic secrecy rate (bpcu) given the decode outcome."""
    _validate(params, scheme, csi)
    if relay_on and _esr_degenerate(params, scheme, csi):
        return oracles.quadrature_esr_conditional(
            params, scheme, csi, relay_on, tol=_LIMIT_FORM_TOL
        ).value
    m = _dest_terms(params, scheme, relay_on)
    e = _eaves_terms(params, scheme, relay_on)
    return _HALF_LOG2E * _esr_bracket(m, e, csi)


# ---------------------------------------------------------------------------
# Public metrics.
# ---------------------------------------------------------------------------


def sop(params: SystemParams, scheme: Scheme, csi: CsiMode) -> SecrecyMetric:
    """Secrecy outage probability.

    Mixes the conditional outage of the decode-success and decode-failure
    branches with the relay decode probability.  Equal-rate destination MRC
    parameters take the quadrature limit path and are tagged
    ``Method.LIMIT_FORM``.
    """
    _validate(params, scheme, csi)
    if _sop_degenerate(params, scheme):
        r = oracles.quadrature_sop(params, scheme, csi, tol=_LIMIT_FORM_TOL)
        return SecrecyMetric(min(1.0, max(0.0, r.value)), Method.LIMIT_FORM)
    p_on = decode_probability(params)
    value = p_on * sop_conditional(params, scheme, csi, True) + (1.0 - p_on) * sop_conditional(
        params, scheme, csi, False
    )
    return SecrecyMetric(min(1.0, max(0.0, value)), Method.CLOSED_FORM)


def esr(params: SystemParams, scheme: Scheme, csi: CsiMode) -> SecrecyMetric:
    """Ergodic secrecy rate in bits per channel use.

    The CSI variant conditions on the destination outcombining the
    eavesdropper and is non-negative; the no-CSI variant is the raw
    expected log-ratio and may be negative.
    """
    _validate(params, scheme, csi)
    if _esr_degenerate(params, scheme, csi):
        r = oracles.quadrature_esr(params, scheme, csi, tol=_LIMIT_FORM_TOL)
        return SecrecyMetric(r.value, Method.LIMIT_FORM)
    p_on = decode_probability(params)
    value = p_on * esr_conditional(params, scheme, csi, True) + (1.0 - p_on) * esr_conditional(
        params, scheme, csi, False
    )
    return SecrecyMetric(value, Method.CLOSED_FORM)


def esr_mrc_sc_csi_variant(params: SystemParams) -> float:
    """Rejected transcription variant of the MRC-SC / CSI rate expression.

    Identical to the shipped formula except that the first scaled-Ei term
    of the decode-success bracket pairs one link's exponent with the other
    link's integral argument.  Kept only so the validation report can show
    the variant failing against quadrature; not part of the public API.
    """
    b_sd, b_rd = params.beta_sd, params.beta_rd
    if rates_degenerate(b_sd, b_rd):
        raise DomainError("variant is undefined at equal destination rates")
    shipped_first = b_rd * eiexp(b_sd) / (b_sd - b_rd)
    variant_first = b_rd * math.exp(b_sd) * math.exp(-b_rd) * eiexp(b_rd) / (b_sd - b_rd)
    p_on = decode_probability(params)
    on = esr_conditional(params, Scheme.MRC_SC, CsiMode.CSI, True)
    off = esr_conditional(params, Scheme.MRC_SC, CsiMode.CSI, False)
    on_variant = on + _HALF_LOG2E * (variant_first - shipped_first)
    return p_on * on_variant + (1.0 - p_on) * off
