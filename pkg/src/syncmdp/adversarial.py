"""Positive and bounded winning modes: support analysis under uniform play,
end-component conditions, the freezing witness strategy, and an independent
matrix-power verifier for support-lasso claims.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (DEFAULT_LIMITS, GuardExceeded, ModeQuery, StrategySpec,
                    SupportSet, Verdict, uniform_strategy)
from .regions import mec_decomposition


@dataclass(frozen=True)
class SupportLasso:
    """Ultimately periodic support sequence under the all-actions uniform strategy.

    prefix[i] is the support after i uniform rounds for i <= loop_start +
    period; the last entry repeats prefix[loop_start] and closes the lasso.
    """

    prefix: tuple
    loop_start: int   # l: first index on the loop
    period: int       # p >= 1

    def distinct(self):
        return self.prefix[:-1]

    def loop(self):
        return self.prefix[self.loop_start:self.loop_start + self.period]

    def at(self, i):
        if i < len(self.prefix):
            return self.prefix[i]
        l = self.loop_start
        return self.prefix[l + (i - l) % self.period]


def post_image(m, s):
    """One-step support image when every action is played with positive probability."""
    bits = 0
    for q in s:
        for a in range(m.action_count):
            bits |= m.succ_bits(q, a)
    return SupportSet(m.n, bits)


def support_lasso(m, s0, max_len=None):
    """Iterate the all-actions support image from s0 until the first repetition."""
    if not s0:
        raise ValueError("initial support must be nonempty")
    seen = {}
    sups = []
    cur = s0
    while cur not in seen:
        if max_len is not None and len(sups) >= max_len:
            raise GuardExceeded("support-lasso", f"no repetition within {max_len} supports")
        seen[cur] = len(sups)
        sups.append(cur)
        cur = post_image(m, cur)
    l = seen[cur]
    sups.append(cur)
    return SupportLasso(tuple(sups), l, len(sups) - 1 - l)


def switch_point(lasso):
    """Freezing switch index: the concrete lasso closure l + p."""
    return lasso.loop_start + lasso.period


def _bool_mul(a, b):
    out = []
    for row in a:
        acc = 0
        bits = row
        while bits:
            low = bits & -bits
            acc |= b[low.bit_length() - 1]
            bits ^= low
        out.append(acc)
    return out


def one_step_matrix(m):
    """Boolean one-step reachability matrix (rows as successor bitmasks)."""
    rows = []
    for q in range(m.n):
        acc = 0
        for a in range(m.action_count):
            acc |= m.succ_bits(q, a)
        rows.append(acc)
    return tuple(rows)


def matrix_power_witness(m, i):
    """Exact-step boolean reachability M^i, computed by successive squaring."""
    if i < 0:
        raise ValueError("exponent must be nonnegative")
    base = list(one_step_matrix(m))
    result = [1 << q for q in range(m.n)]
    e = i
    while e:
        if e & 1:
            result = _bool_mul(result, base)
        e >>= 1
        if e:
            base = _bool_mul(base, base)
    return tuple(result)


def rows_image(rows, s):
    """Row-or of a boolean matrix over a source support."""
    bits = 0
    for q in s:
        bits |= rows[q]
    return SupportSet(s.width, bits)


@dataclass(frozen=True)
class AdvVerdictDetail:
    """Support-lasso facts behind a positive/bounded verdict.

    condition1: every support (prefix and loop) meets the target.
    condition2: every loop support meets the target inside the end components.
    failing_index is the smallest failing index of the condition that decided a
    "no" (for existential conditions, the first index the condition ranges
    over, since every index fails). graph_test carries the reachable-and-self-
    reaching test for positive weakly, reported alongside when it disagrees
    with the definition-faithful answer.
    """

    condition1: bool
    condition2: bool
    failing_index: int | None
    loop_start: int
    period: int
    switch: int
    graph_test: bool | None = None


def _first_missing(supports, t, offset=0):
    for i, s in enumerate(supports):
        if not s & t:
            return offset + i
    return None


def _self_reaching(m, q):
    """Whether q can reach itself in >= 1 step in the all-actions graph."""
    cur = SupportSet.of(m.n, [q])
    seen = set()
    while cur not in seen:
        seen.add(cur)
        cur = post_image(m, cur)
        if q in cur:
            return True
    return False


def _graph_test_weakly(m, lasso, t):
    reachable = m.empty_support()
    for s in lasso.distinct():
        reachable = reachable | s
    return any(_self_reaching(m, q) for q in reachable & t)


def freezing_strategy(m, lasso, mec=None, label="freezing"):
    """Uniform play until the lasso closes, then only end-component-internal actions.

    The memory is a step counter saturating at the switch point; transient
    states keep playing all actions uniformly after the switch.
    """
    if mec is None:
        mec = mec_decomposition(m)
    sw = switch_point(lasso)
    share = Fraction(1, m.action_count)
    uniform_row = {a: share for a in range(m.action_count)}
    choice = {}
    update = {}
    for j in range(sw + 1):
        for q in range(m.n):
            if j == sw and mec.internal_actions[q]:
                acts = mec.internal_actions[q]
                row = {a: Fraction(1, len(acts)) for a in acts}
            else:
                row = dict(uniform_row)
            choice[(j, q)] = row
            update[(j, q)] = min(j + 1, sw)
    return StrategySpec(label, tuple(range(sw + 1)), 0, choice, update)


def _prepare(m, t, s0, lasso, mec, limits):
    limits = limits or DEFAULT_LIMITS
    if lasso is None:
        lasso = support_lasso(m, s0, max_len=limits.max_lasso)
    if mec is None:
        mec = mec_decomposition(m)
    return lasso, mec


def decide_positive(m, sync_mode, t, s0, *, lasso=None, mec=None, limits=None):
    """Membership in the positive winning mode, computed on the support lasso."""
    lasso, mec = _prepare(m, t, s0, lasso, mec, limits)
    supports = lasso.distinct()
    loop = lasso.loop()
    l, p = lasso.loop_start, lasso.period
    cond1 = all(s & t for s in supports)
    te = t & mec.union
    cond2 = all(s & te for s in loop)
    graph_test = None

    if sync_mode == "eventually":
        hit = next((i for i, s in enumerate(supports) if s & t), None)
        answer = hit is not None
        failing = None if answer else 0
    elif sync_mode == "always":
        answer = cond1
        failing = None if answer else _first_missing(supports, t)
        hit = None
    elif sync_mode == "weakly":
        hit = next((l + i for i, s in enumerate(loop) if s & t), None)
        answer = hit is not None
        failing = None if answer else l
        graph_test = _graph_test_weakly(m, lasso, t)
    elif sync_mode == "strongly":
        answer = all(s & t for s in loop)
        failing = None if answer else _first_missing(loop, t, offset=l)
        hit = None
    else:
        raise ValueError(f"unknown sync mode {sync_mode!r}")

    detail = AdvVerdictDetail(cond1, cond2, failing, l, p, switch_point(lasso),
                              graph_test=graph_test)
    cert = {"kind": f"positive-{sync_mode}", "loop_start": l, "period": p}
    if answer and hit is not None:
        cert["hit_index"] = hit
    witness = uniform_strategy(m) if answer else None
    return Verdict(ModeQuery(sync_mode, "positive", t, s0), answer,
                   witness=witness, certificate=cert, detail=detail)


def decide_bounded(m, sync_mode, t, s0, *, lasso=None, mec=None, limits=None):
    """Membership in the bounded winning mode (mass bounded away from zero)."""
    lasso, mec = _prepare(m, t, s0, lasso, mec, limits)
    supports = lasso.distinct()
    loop = lasso.loop()
    l, p = lasso.loop_start, lasso.period
    sw = switch_point(lasso)
    cond1 = all(s & t for s in supports)
    te = t & mec.union
    cond2 = all(s & te for s in loop)

    if sync_mode == "eventually":
        # coincides with the positive mode; uniform play is already a witness
        hit = next((i for i, s in enumerate(supports) if s & t), None)
        answer = hit is not None
        failing = None if answer else 0
        witness = uniform_strategy(m) if answer else None
    elif sync_mode == "weakly":
        hit = next((i for i, s in enumerate(supports) if s & te), None)
        answer = hit is not None
        failing = None if answer else 0
        witness = freezing_strategy(m, lasso, mec) if answer else None
    elif sync_mode == "strongly":
        answer = cond2
        hit = None
        failing = None if answer else _first_missing(loop, te, offset=l)
        witness = freezing_strategy(m, lasso, mec) if answer else None
    elif sync_mode == "always":
        answer = cond1 and cond2
        hit = None
        if answer:
            failing = None
        elif not cond1:
            failing = _first_missing(supports, t)
        else:
            failing = _first_missing(loop, te, offset=l)
        witness = freezing_strategy(m, lasso, mec) if answer else None
    else:
        raise ValueError(f"unknown sync mode {sync_mode!r}")

    detail = AdvVerdictDetail(cond1, cond2, failing, l, p, sw)
    cert = {"kind": f"bounded-{sync_mode}", "loop_start": l, "period": p, "switch": sw}
    if answer and hit is not None:
        cert["hit_index"] = hit
    return Verdict(ModeQuery(sync_mode, "bounded", t, s0), answer,
                   witness=witness, certificate=cert, detail=detail)
