"""Exact evaluation of the closed-form isolation bounds and step constants,
attached to verdicts as certificates.

Values are exact big rationals with a log10 companion for display; beyond a
configurable exponent cap the certificate degrades to formula-only (inputs and
log10 preserved, exact value omitted).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .model import format_rational, min_initial_probability, min_positive_probability

KINDS = ("eps_eventually", "eps_weakly", "N_weakly", "eps_always", "eps_strongly",
         "gap_strongly", "eps_adversarial", "N_adversarial", "lemma1_reach",
         "lemma2_step")

DEFAULT_EXPONENT_CAP_BITS = 1 << 24


@dataclass(frozen=True)
class BoundCert:
    """One evaluated bound: kind, exact value (or None beyond the cap), inputs."""

    kind: str
    value: object
    inputs: dict
    log10: float | None
    formula_only: bool = False

    def to_obj(self):
        if isinstance(self.value, (Fraction, int)):
            exact = format_rational(Fraction(self.value))
        elif isinstance(self.value, tuple):
            exact = list(self.value)
        else:
            exact = None
        inputs = {}
        for key, val in self.inputs.items():
            inputs[key] = format_rational(val) if isinstance(val, Fraction) else val
        return {"kind": self.kind, "exact": exact, "log10": self.log10, "inputs": inputs}


def _log10(value):
    value = Fraction(value)
    if value <= 0:
        return None
    return math.log10(value.numerator) - math.log10(value.denominator)


def _frac_bits(x):
    return x.numerator.bit_length() + x.denominator.bit_length()


def _pow_cost_bits(base, exponent):
    return exponent * max(_frac_bits(base), 1)


def compute_bound(kind, n, a_count, alpha, alpha0, i=None,
                  exponent_cap_bits=DEFAULT_EXPONENT_CAP_BITS):
    """Evaluate one bound formula exactly from the model constants.

    n: state count; a_count: action count; alpha: smallest positive transition
    probability; alpha0: smallest positive initial probability; i: step index,
    required for lemma2_step only.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown bound kind {kind!r}")
    if n < 1 or a_count < 1:
        raise ValueError("state and action counts must be positive")
    alpha = Fraction(alpha)
    alpha0 = Fraction(alpha0)
    if not 0 < alpha <= 1 or not 0 < alpha0 <= 1:
        raise ValueError("alpha and alpha0 must lie in (0, 1]")
    inputs = {"n": n, "a_count": a_count, "alpha": alpha, "alpha0": alpha0}

    if kind == "N_weakly":
        return BoundCert(kind, 2 ** n, inputs, None)
    if kind == "N_adversarial":
        return BoundCert(kind, n + n * n, inputs, None)
    if kind == "gap_strongly":
        # first position within n steps, later positions at most n apart
        return BoundCert(kind, (n, n), inputs, None)

    if kind == "lemma2_step":
        if i is None or i < 0:
            raise ValueError("lemma2_step needs a nonnegative step index")
        inputs["i"] = i
        exponent, base, denom_pow = i, alpha, None
    elif kind == "lemma1_reach":
        exponent, base, denom_pow = n, alpha, None
    elif kind == "eps_eventually":
        exponent, base, denom_pow = (n + 1) * 2 ** n, alpha, None
    elif kind == "eps_weakly":
        if n < 2:
            raise ValueError("eps_weakly is defined for n >= 2 only")
        exponent, base, denom_pow = (n + 2) * 4 ** n, alpha, 2 ** n + 1
    elif kind == "eps_always":
        exponent, base, denom_pow = n, alpha, 1
    elif kind == "eps_strongly":
        exponent, base, denom_pow = 2 * n, alpha, 2
    elif kind == "eps_adversarial":
        exponent, base, denom_pow = n + n * n, Fraction(alpha, a_count), None
    else:  # pragma: no cover - KINDS is closed
        raise AssertionError(kind)

    log10 = _log10(alpha0) + exponent * _log10(base)
    if denom_pow is not None:
        log10 -= denom_pow * math.log10(n) if n > 1 else 0.0
    if _pow_cost_bits(base, exponent) > exponent_cap_bits:
        return BoundCert(kind, None, inputs, log10, formula_only=True)
    value = alpha0 * base ** exponent
    if denom_pow is not None:
        value /= Fraction(n) ** denom_pow
    return BoundCert(kind, value, inputs, log10)


def attach_bounds(verdict, m, d0, exponent_cap_bits=DEFAULT_EXPONENT_CAP_BITS):
    """Attach the bound certificates a verdict carries; returns the verdict.

    No-verdicts for limit-sure eventually carry eps_eventually (with the
    refined alpha0 when the decider exposed a failing sub-support); no-verdicts
    for almost-sure/limit-sure weakly carry eps_weakly and N_weakly; always and
    strongly no-verdicts carry eps_always / eps_strongly with the position-gap
    constants; yes-verdicts for bounded modes carry eps_adversarial and
    N_adversarial.
    """
    q = verdict.query
    if q.initial_support != d0.support():
        raise ValueError("verdict initial support does not match the distribution")
    n, a_count = m.n, m.action_count
    alpha = min_positive_probability(m)
    alpha0 = min_initial_probability(d0)
    key = (q.sync_mode, q.win_mode, verdict.answer)

    def add(kind, **kw):
        verdict.bounds.append(compute_bound(
            kind, n, a_count, alpha, kw.pop("alpha0", alpha0),
            exponent_cap_bits=exponent_cap_bits, **kw))

    if key == ("eventually", "limit-sure", False):
        cert = verdict.certificate or {}
        exposed = cert.get("failing_subsupport")
        a0 = min_initial_probability(d0, exposed) if exposed else alpha0
        add("eps_eventually", alpha0=a0)
        if exposed:
            verdict.bounds[-1].inputs["alpha0_support"] = list(exposed)
    elif q.sync_mode == "weakly" and q.win_mode in ("almost-sure", "limit-sure") \
            and not verdict.answer:
        if n >= 2:
            add("eps_weakly")
        add("N_weakly")
    elif q.sync_mode == "always" and q.win_mode in ("sure", "almost-sure", "limit-sure") \
            and not verdict.answer:
        add("eps_always")
    elif q.sync_mode == "strongly" and q.win_mode == "sure" and not verdict.answer:
        add("gap_strongly")
    elif q.sync_mode == "strongly" and q.win_mode in ("almost-sure", "limit-sure") \
            and not verdict.answer:
        add("eps_strongly")
        add("gap_strongly")
    elif q.win_mode == "bounded" and verdict.answer:
        add("eps_adversarial")
        add("N_adversarial")
    return verdict
