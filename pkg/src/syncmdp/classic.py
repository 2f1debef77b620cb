"""Deciders for sure, almost-sure and limit-sure winning of the four
synchronizing modes, with re-checkable certificates and the witness strategies
the characterizations support directly.

All deciders work on initial supports (winning is support-only). A shared
`cache` dict keyed by set bits memoizes predecessor lassos, regions and
counter products across the many sub-queries a full matrix run triggers.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .model import (DEFAULT_LIMITS, GuardExceeded, ModeQuery, StrategySpec,
                    SupportSet, Verdict, lift_with_counter, product_with_counter)
from .regions import (almost_sure_reach_region, pre, pre_lasso, reach_layers,
                      sure_safety_region)


def _cached(cache, key, make):
    if cache is None:
        return make()
    if key not in cache:
        cache[key] = make()
    return cache[key]


def _lasso(m, t, cache, limits):
    return _cached(cache, ("pre-lasso", t.bits),
                   lambda: pre_lasso(m, t, max_len=limits.max_lasso))


def _product(m, r, cache):
    return _cached(cache, ("product", r), lambda: product_with_counter(m, r))


def _product_region(m, r, target_bits, cache):
    def make():
        prod = _product(m, r, cache)
        return almost_sure_reach_region(prod, SupportSet(prod.n, target_bits))
    return _cached(cache, ("product-as-region", r, target_bits), make)


def _safety(m, t, cache):
    return _cached(cache, ("safety", t.bits), lambda: sure_safety_region(m, t))


def _subsets_desc(t):
    """Nonempty subsets of a support in decreasing cardinality, then index order."""
    members = list(t)
    for size in range(len(members), 0, -1):
        for combo in combinations(members, size):
            yield SupportSet.of(t.width, combo)


def _uniform_row(m):
    share = Fraction(1, m.action_count)
    return {a: share for a in range(m.action_count)}


def _first_action_into(m, q, target):
    for a in range(m.action_count):
        s = m.succ_bits(q, a)
        if s & target.bits == s:
            return a
    return None


def _dirac(a):
    return {a: Fraction(1)}


def synthesize_sure_eventually_strategy(m, t, s0, k, *, lasso=None, limits=None):
    """Countdown witness: at memory j, push all mass from Pre^j(T) into Pre^(j-1)(T).

    Requires s0 inside the k-fold predecessor of t; simulation then puts the
    whole mass in t at step k exactly.
    """
    limits = limits or DEFAULT_LIMITS
    if lasso is None:
        lasso = pre_lasso(m, t, max_len=limits.max_lasso)
    chain = [lasso.at(j) for j in range(k + 1)]
    if not s0 <= chain[k]:
        raise ValueError("initial support is not contained in the k-fold predecessor")
    uniform = _uniform_row(m)
    choice = {}
    update = {}
    for j in range(k, -1, -1):
        for q in range(m.n):
            row = dict(uniform)
            if j >= 1 and q in chain[j]:
                a = _first_action_into(m, q, chain[j - 1])
                row = _dirac(a)
            choice[(j, q)] = row
            update[(j, q)] = max(j - 1, 0)
    return StrategySpec(f"countdown[{k}]", tuple(range(k, -1, -1)), k, choice, update)


def _safety_strategy(m, region, label="stay-safe"):
    """Memoryless: inside the safety region, pick an action that stays inside."""
    uniform = _uniform_row(m)
    choice = {}
    update = {}
    for q in range(m.n):
        row = dict(uniform)
        if q in region:
            row = _dirac(_first_action_into(m, q, region))
        choice[(0, q)] = row
        update[(0, q)] = 0
    return StrategySpec(label, (0,), 0, choice, update)


def _reach_then_stay_strategy(m, safe, layers, label="attract-then-stay"):
    """Memoryless: walk down the attractor layers into `safe`, then stay."""
    uniform = _uniform_row(m)
    choice = {}
    update = {}
    for q in range(m.n):
        row = dict(uniform)
        if q in safe:
            row = _dirac(_first_action_into(m, q, safe))
        else:
            rank = next((j for j, layer in enumerate(layers) if q in layer), None)
            if rank is not None:
                row = _dirac(_first_action_into(m, q, layers[rank - 1]))
        choice[(0, q)] = row
        update[(0, q)] = 0
    return StrategySpec(label, (0,), 0, choice, update)


def _cycle_strategy(m, s, k, r, lasso_of_s, label=None):
    """Countdown into the recurrent set, then cycle it through its r-step loop."""
    chain = [lasso_of_s.at(j) for j in range(max(k, r) + 1)]
    uniform = _uniform_row(m)
    memory = [("down", j) for j in range(k, 0, -1)] + [("cyc", phi) for phi in range(r)]
    choice = {}
    update = {}
    for j in range(k, 0, -1):
        for q in range(m.n):
            row = dict(uniform)
            if q in chain[j]:
                row = _dirac(_first_action_into(m, q, chain[j - 1]))
            choice[(("down", j), q)] = row
            update[(("down", j), q)] = ("down", j - 1) if j > 1 else ("cyc", 0)
    for phi in range(r):
        level = r - phi
        for q in range(m.n):
            row = dict(uniform)
            if q in chain[level]:
                row = _dirac(_first_action_into(m, q, chain[level - 1]))
            choice[(("cyc", phi), q)] = row
            update[(("cyc", phi), q)] = ("cyc", (phi + 1) % r)
    initial = ("down", k) if k >= 1 else ("cyc", 0)
    return StrategySpec(label or f"countdown-cycle[{k},{r}]",
                        tuple(memory), initial, choice, update)


def decide_sure(m, sync_mode, t, s0, *, cache=None, limits=None):
    """Sure winning for the given synchronizing mode from the support s0."""
    limits = limits or DEFAULT_LIMITS
    if not s0:
        raise ValueError("initial support must be nonempty")
    query = ModeQuery(sync_mode, "sure", t, s0)

    if sync_mode == "eventually":
        lasso = _lasso(m, t, cache, limits)
        k = next((i for i, sup in enumerate(lasso.distinct()) if s0 <= sup), None)
        if k is None:
            return Verdict(query, False)
        witness = synthesize_sure_eventually_strategy(m, t, s0, k, lasso=lasso)
        return Verdict(query, True, witness=witness,
                       certificate={"kind": "sure-eventually", "k": k})

    if sync_mode == "weakly":
        if len(t) > limits.subset_width:
            raise GuardExceeded("subset-search",
                                f"target has {len(t)} states, guard is {limits.subset_width}")
        for s in _subsets_desc(t):
            sl = _lasso(m, s, cache, limits)
            r = next((i for i in range(1, len(sl.supports)) if s <= sl.supports[i]), None)
            if r is None:
                continue
            k = next((i for i, sup in enumerate(sl.distinct()) if s0 <= sup), None)
            if k is None:
                continue
            witness = _cycle_strategy(m, s, k, r, sl)
            cert = {"kind": "sure-weakly", "set": s, "k": k, "r": r}
            return Verdict(query, True, witness=witness, certificate=cert)
        return Verdict(query, False)

    if sync_mode == "always":
        region = _safety(m, t, cache)
        if s0 <= region:
            return Verdict(query, True, witness=_safety_strategy(m, region),
                           certificate={"kind": "sure-always", "region": region})
        return Verdict(query, False, certificate={"kind": "sure-always", "region": region})

    if sync_mode == "strongly":
        safe = _safety(m, t, cache)
        layers = _cached(cache, ("reach-layers", safe.bits), lambda: reach_layers(m, safe))
        region = layers[-1]
        cert = {"kind": "sure-strongly", "safety_region": safe, "reach_region": region}
        if s0 <= region:
            return Verdict(query, True, certificate=cert,
                           witness=_reach_then_stay_strategy(m, safe, layers))
        return Verdict(query, False, certificate=cert)

    raise ValueError(f"unknown sync mode {sync_mode!r}")


def _limit_event_yes(m, t, s0, cache, limits):
    """Plain yes/no core of limit-sure eventually (memoized)."""
    key = ("limit-event", t.bits, s0.bits)

    def make():
        lasso = _lasso(m, t, cache, limits)
        if any(s0 <= sup for sup in lasso.distinct()):
            return True
        k, r = lasso.prefix_len, lasso.period
        region = _product_region(m, r, lift_with_counter(lasso.supports[k], r, 0).bits, cache)
        return any(lift_with_counter(s0, r, tt) <= region for tt in range(r))

    return _cached(cache, key, make)


def _expose_failing_subsupport(m, t, s0, cache, limits):
    """Greedy minimal sub-support that is still not limit-sure eventually winning."""
    cur = s0
    for q in list(cur):
        if len(cur) > 1:
            cand = cur - SupportSet.of(cur.width, [q])
            if not _limit_event_yes(m, t, cand, cache, limits):
                cur = cand
    return cur


def decide_limit_sure(m, sync_mode, t, s0, *, cache=None, limits=None):
    """Limit-sure winning; weakly/strongly/always delegate to their coinciding modes."""
    limits = limits or DEFAULT_LIMITS
    if not s0:
        raise ValueError("initial support must be nonempty")
    query = ModeQuery(sync_mode, "limit-sure", t, s0)

    if sync_mode == "eventually":
        lasso = _lasso(m, t, cache, limits)
        k, r = lasso.prefix_len, lasso.period
        big_r = lasso.supports[k]
        base = {"k": k, "r": r, "R": big_r}
        sure_v = decide_sure(m, "eventually", t, s0, cache=cache, limits=limits)
        if sure_v.answer:
            cert = {"kind": "limit-sure-eventually", "via": "sure",
                    "sure_k": sure_v.certificate["k"], **base}
            return Verdict(query, True, witness=sure_v.witness, certificate=cert)
        target = lift_with_counter(big_r, r, 0)
        region = _product_region(m, r, target.bits, cache)
        for tt in range(r):
            if lift_with_counter(s0, r, tt) <= region:
                cert = {"kind": "limit-sure-eventually", "via": "product",
                        "phase": tt, "product_region": region, **base}
                return Verdict(query, True, certificate=cert)
        exposed = _expose_failing_subsupport(m, t, s0, cache, limits)
        cert = {"kind": "limit-sure-eventually", "via": None,
                "failing_subsupport": exposed, **base}
        return Verdict(query, False, certificate=cert)

    if sync_mode in ("weakly", "strongly"):
        # limit-sure and almost-sure coincide for these modes
        inner = decide_almost_sure(m, sync_mode, t, s0, cache=cache, limits=limits)
        return Verdict(query, inner.answer, witness=inner.witness,
                       certificate=inner.certificate)

    if sync_mode == "always":
        # all three classic winning modes coincide for always
        inner = decide_sure(m, "always", t, s0, cache=cache, limits=limits)
        return Verdict(query, inner.answer, witness=inner.witness,
                       certificate=inner.certificate)

    raise ValueError(f"unknown sync mode {sync_mode!r}")


def decide_almost_sure(m, sync_mode, t, s0, *, cache=None, limits=None):
    """Almost-sure winning for the given synchronizing mode."""
    limits = limits or DEFAULT_LIMITS
    if not s0:
        raise ValueError("initial support must be nonempty")
    query = ModeQuery(sync_mode, "almost-sure", t, s0)

    if sync_mode == "weakly":
        if len(t) > limits.subset_width:
            raise GuardExceeded("subset-search",
                                f"target has {len(t)} states, guard is {limits.subset_width}")
        for t2 in _subsets_desc(t):
            if not _limit_event_yes(m, t2, s0, cache, limits):
                continue
            pre_t2 = pre(m, t2)
            if _limit_event_yes(m, pre_t2, t2, cache, limits):
                cert = {"kind": "almost-sure-weakly", "t_prime": t2}
                return Verdict(query, True, certificate=cert)
        return Verdict(query, False)

    if sync_mode == "eventually":
        sure_v = decide_sure(m, "eventually", t, s0, cache=cache, limits=limits)
        if sure_v.answer:
            cert = {"kind": "almost-sure-eventually", "via": "sure",
                    "sure_k": sure_v.certificate["k"]}
            return Verdict(query, True, witness=sure_v.witness, certificate=cert)
        weak = decide_almost_sure(m, "weakly", t, s0, cache=cache, limits=limits)
        if weak.answer:
            cert = {"kind": "almost-sure-eventually", "via": "weakly",
                    "t_prime": weak.certificate["t_prime"]}
            return Verdict(query, True, certificate=cert)
        return Verdict(query, False)

    if sync_mode == "always":
        inner = decide_sure(m, "always", t, s0, cache=cache, limits=limits)
        return Verdict(query, inner.answer, witness=inner.witness,
                       certificate=inner.certificate)

    if sync_mode == "strongly":
        safe = _safety(m, t, cache)
        region = _cached(cache, ("as-reach", safe.bits),
                         lambda: almost_sure_reach_region(m, safe))
        cert = {"kind": "almost-sure-strongly", "safety_region": safe,
                "as_reach_region": region}
        return Verdict(query, s0 <= region, certificate=cert)

    raise ValueError(f"unknown sync mode {sync_mode!r}")


def _iter_pre(m, s, k):
    cur = s
    for _ in range(k):
        cur = pre(m, cur)
    return cur


def recheck_certificate(m, verdict):
    """Re-verify a yes-certificate using only region-analysis primitives."""
    cert = verdict.certificate
    if not verdict.answer or cert is None:
        return True
    q = verdict.query
    kind = cert["kind"]
    if kind == "sure-eventually":
        return q.initial_support <= _iter_pre(m, q.target, cert["k"])
    if kind == "sure-weakly":
        s, k, r = cert["set"], cert["k"], cert["r"]
        return (s <= q.target and s <= _iter_pre(m, s, r)
                and q.initial_support <= _iter_pre(m, s, k))
    if kind == "sure-always":
        region = sure_safety_region(m, q.target)
        return cert["region"] == region and q.initial_support <= region
    if kind == "sure-strongly":
        safe = sure_safety_region(m, q.target)
        region = reach_layers(m, safe)[-1]
        return (cert["safety_region"] == safe and cert["reach_region"] == region
                and q.initial_support <= region)
    if kind == "limit-sure-eventually":
        k, r, big_r = cert["k"], cert["r"], cert["R"]
        if big_r != _iter_pre(m, q.target, k) or big_r != _iter_pre(m, big_r, r):
            return False
        if cert["via"] == "sure":
            return q.initial_support <= _iter_pre(m, q.target, cert["sure_k"])
        prod = product_with_counter(m, r)
        region = almost_sure_reach_region(prod, lift_with_counter(big_r, r, 0))
        return (cert["product_region"] == region
                and lift_with_counter(q.initial_support, r, cert["phase"]) <= region)
    if kind == "almost-sure-weakly":
        t2 = cert["t_prime"]
        return (t2 <= q.target and _limit_event_yes(m, t2, q.initial_support, None, DEFAULT_LIMITS)
                and _limit_event_yes(m, pre(m, t2), t2, None, DEFAULT_LIMITS))
    if kind == "almost-sure-eventually":
        if cert["via"] == "sure":
            return q.initial_support <= _iter_pre(m, q.target, cert["sure_k"])
        t2 = cert["t_prime"]
        return (t2 <= q.target and _limit_event_yes(m, t2, q.initial_support, None, DEFAULT_LIMITS)
                and _limit_event_yes(m, pre(m, t2), t2, None, DEFAULT_LIMITS))
    if kind == "almost-sure-strongly":
        safe = sure_safety_region(m, q.target)
        region = almost_sure_reach_region(m, safe)
        return (cert["safety_region"] == safe and cert["as_reach_region"] == region
                and q.initial_support <= region)
    return True
