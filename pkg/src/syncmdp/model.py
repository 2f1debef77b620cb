"""Exact data model for MDPs viewed as transformers of probability distributions.

States and actions live in declaration order and are referred to by index in
every algorithm; the JSON front end resolves names exactly once. Probabilities
are `fractions.Fraction` end to end, so all invariants in this package are
checked with exact equality (masses sum to 1, never "close to 1").
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

SYNC_MODES = ("always", "eventually", "weakly", "strongly")
WIN_MODES = ("sure", "almost-sure", "limit-sure", "positive", "bounded")

ZERO = Fraction(0)
ONE = Fraction(1)


class ModelFormatError(ValueError):
    """A model document violates the input format; `location` points at the culprit."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else str(message))


class GuardExceeded(RuntimeError):
    """An exponential-stage guard tripped; `stage` names the offending computation."""

    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


class BudgetExceeded(GuardExceeded):
    """A work budget was exhausted before the operation could finish."""


@dataclass(frozen=True)
class Limits:
    """Guard thresholds for the exponential stages of the analysis."""

    max_lasso: int = 1 << 16      # longest support/predecessor lasso explored
    subset_width: int = 16        # largest target set open to subset search
    budget: int = 10 ** 6         # strategy-enumeration work budget

DEFAULT_LIMITS = Limits()


_RATIONAL_RE = re.compile(r"\A(\d+)\s*(?:/\s*(\d+))?\Z")


def parse_rational(text, location=None):
    """Parse a decimal-integer "p" or "p/q" string into an exact Fraction."""
    if not isinstance(text, str) or (m := _RATIONAL_RE.match(text.strip())) is None:
        raise ModelFormatError(f"malformed rational {text!r}", location)
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ModelFormatError(f"zero denominator in rational {text!r}", location)
    return Fraction(int(m.group(1)), den)


def format_rational(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class SupportSet:
    """Subset of the state space as a fixed-width bit vector."""

    width: int
    bits: int = 0

    def __post_init__(self):
        if self.width < 0 or self.bits < 0 or self.bits >> self.width:
            raise ValueError(f"bits {self.bits:#x} out of range for width {self.width}")

    @classmethod
    def of(cls, width, indices):
        bits = 0
        for q in indices:
            if not 0 <= q < width:
                raise ValueError(f"state index {q} out of range for width {width}")
            bits |= 1 << q
        return cls(width, bits)

    @classmethod
    def full(cls, width):
        return cls(width, (1 << width) - 1)

    def __contains__(self, q):
        return 0 <= q < self.width and self.bits >> q & 1 == 1

    def __iter__(self):
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self):
        return self.bits.bit_count()

    def __bool__(self):
        return self.bits != 0

    def _compatible(self, other):
        if not isinstance(other, SupportSet) or other.width != self.width:
            raise ValueError("support-set width mismatch")
        return other

    def __or__(self, other):
        return SupportSet(self.width, self.bits | self._compatible(other).bits)

    def __and__(self, other):
        return SupportSet(self.width, self.bits & self._compatible(other).bits)

    def __sub__(self, other):
        return SupportSet(self.width, self.bits & ~self._compatible(other).bits)

    def __le__(self, other):
        return self.bits & ~self._compatible(other).bits == 0

    def complement(self):
        return SupportSet(self.width, ~self.bits & (1 << self.width) - 1)

    def names(self, state_names):
        return tuple(state_names[q] for q in self)

    def __repr__(self):
        return f"SupportSet({list(self)}, width={self.width})"


@dataclass(frozen=True, eq=True)
class Dist:
    """Exact probability distribution over state indices; only positive mass is stored."""

    width: int
    mass: dict

    def __post_init__(self):
        clean = {}
        total = ZERO
        for q in sorted(self.mass):
            p = self.mass[q]
            p = p if isinstance(p, Fraction) else Fraction(p)
            if not 0 <= q < self.width:
                raise ValueError(f"state index {q} out of range for width {self.width}")
            if p < 0:
                raise ValueError(f"negative mass {p} at state {q}")
            if p > 0:
                clean[q] = p
                total += p
        if total != 1:
            raise ValueError(f"distribution sums to {format_rational(total)}")
        object.__setattr__(self, "mass", clean)

    @classmethod
    def dirac(cls, width, q):
        return cls(width, {q: ONE})

    @classmethod
    def uniform(cls, width, indices):
        indices = list(indices)
        share = Fraction(1, len(indices))
        return cls(width, {q: share for q in indices})

    def __getitem__(self, q):
        return self.mass.get(q, ZERO)

    def support(self):
        bits = 0
        for q in self.mass:
            bits |= 1 << q
        return SupportSet(self.width, bits)

    def mass_in(self, s):
        return sum((p for q, p in self.mass.items() if q in s), ZERO)

    def __repr__(self):
        inner = ", ".join(f"{q}: {format_rational(p)}" for q, p in self.mass.items())
        return f"Dist({{{inner}}}, width={self.width})"


class Mdp:
    """Finite MDP (Q, A, delta) with a total, exact transition function."""

    def __init__(self, states, actions, delta):
        states = tuple(states)
        actions = tuple(actions)
        if not states:
            raise ValueError("an MDP needs at least one state")
        if not actions:
            raise ValueError("an MDP needs at least one action")
        if len(set(states)) != len(states):
            raise ValueError("duplicate state names")
        if len(set(actions)) != len(actions):
            raise ValueError("duplicate action names")
        n = len(states)
        rows = []
        for q in range(n):
            row = []
            for a in range(len(actions)):
                try:
                    d = delta[q][a]
                except (IndexError, KeyError, TypeError):
                    d = None
                if not isinstance(d, Dist) or d.width != n:
                    raise ValueError(
                        f"missing or malformed distribution for ({states[q]}, {actions[a]})")
                row.append(d)
            rows.append(tuple(row))
        self.states = states
        self.actions = actions
        self.delta = tuple(rows)
        self._state_index = {s: i for i, s in enumerate(states)}
        self._action_index = {a: i for i, a in enumerate(actions)}
        self._succ = tuple(tuple(row[a].support().bits for a in range(len(actions)))
                           for row in self.delta)

    @property
    def n(self):
        return len(self.states)

    @property
    def action_count(self):
        return len(self.actions)

    def state_index(self, name):
        if name not in self._state_index:
            raise KeyError(f"unknown state {name!r}")
        return self._state_index[name]

    def action_index(self, name):
        if name not in self._action_index:
            raise KeyError(f"unknown action {name!r}")
        return self._action_index[name]

    def succ_bits(self, q, a):
        """Bitmask of Supp(delta(q, a))."""
        return self._succ[q][a]

    def empty_support(self):
        return SupportSet(self.n)

    def full_support(self):
        return SupportSet.full(self.n)

    def support(self, names):
        return SupportSet.of(self.n, (self.state_index(s) for s in names))

    def __eq__(self, other):
        return (isinstance(other, Mdp) and self.states == other.states
                and self.actions == other.actions and self.delta == other.delta)

    def __repr__(self):
        return f"Mdp(n={self.n}, actions={list(self.actions)})"


def min_positive_probability(m):
    """Smallest positive transition probability of the MDP (alpha)."""
    best = None
    for row in m.delta:
        for d in row:
            for p in d.mass.values():
                if best is None or p < best:
                    best = p
    return best


def min_initial_probability(d0, restrict=None):
    """Smallest positive initial mass (alpha0), optionally over a sub-support."""
    if restrict is None:
        return min(d0.mass.values())
    if not restrict:
        raise ValueError("restriction set is empty")
    if not restrict <= d0.support():
        raise ValueError("restriction set not contained in the initial support")
    return min(d0.mass[q] for q in restrict)


@dataclass(frozen=True)
class StrategySpec:
    """Finite-memory strategy: randomized action choice, deterministic memory update.

    At step i the machine draws the action from choice[(mem_i, q_i)] and then
    advances the memory to update[(mem_i, q_i)]; mem_0 = initial_memory. The
    tables are total over memory x states of the MDP they were built for.
    """

    label: str
    memory: tuple
    initial_memory: object
    choice: dict
    update: dict

    def __post_init__(self):
        memo = set(self.memory)
        if self.initial_memory not in memo:
            raise ValueError("initial memory not a memory value")
        if set(self.choice) != set(self.update):
            raise ValueError("choice and update tables cover different keys")
        checked = set()  # row dicts are routinely shared; validate each object once
        for key, row in self.choice.items():
            if key[0] not in memo:
                raise ValueError(f"unknown memory value in key {key}")
            if id(row) in checked:
                continue
            total = sum(row.values(), ZERO)
            if total != 1 or any(p < 0 for p in row.values()):
                raise ValueError(f"action choice at {key} sums to {format_rational(total)}")
            checked.add(id(row))
        for key, nxt in self.update.items():
            if nxt not in memo:
                raise ValueError(f"memory update at {key} leaves the memory set")

    def action_row(self, mem, q):
        return self.choice[(mem, q)]

    def next_memory(self, mem, q):
        return self.update[(mem, q)]


def uniform_strategy(m, label="uniform"):
    """The memoryless strategy playing every action with equal probability."""
    share = Fraction(1, m.action_count)
    row = {a: share for a in range(m.action_count)}
    choice = {(0, q): dict(row) for q in range(m.n)}
    update = {(0, q): 0 for q in range(m.n)}
    return StrategySpec(label, (0,), 0, choice, update)


def step(m, d, strategy, mem):
    """One exact image of `d` under the strategy's action mixture at memory `mem`.

    The single-memory signature requires the update to agree across the current
    support; strategies whose memory depends on the visited state must go
    through the joint simulation in the oracle module instead.
    """
    nexts = {strategy.next_memory(mem, q) for q in d.mass}
    if len(nexts) != 1:
        raise ValueError("memory update depends on the state; use oracle.simulate")
    out = {}
    for q, w in d.mass.items():
        for a, pa in strategy.action_row(mem, q).items():
            if pa == 0:
                continue
            for q2, p in m.delta[q][a].mass.items():
                out[q2] = out.get(q2, ZERO) + w * pa * p
    return Dist(m.n, out), nexts.pop()


@dataclass(frozen=True)
class ModeQuery:
    """One membership question: a synchronizing mode, a winning mode, a target."""

    sync_mode: str
    win_mode: str
    target: SupportSet
    initial_support: SupportSet

    def __post_init__(self):
        if self.sync_mode not in SYNC_MODES:
            raise ValueError(f"unknown sync mode {self.sync_mode!r}")
        if self.win_mode not in WIN_MODES:
            raise ValueError(f"unknown win mode {self.win_mode!r}")
        if self.target.width != self.initial_support.width:
            raise ValueError("target and initial support widths differ")
        if not self.initial_support:
            raise ValueError("initial support must be nonempty")


@dataclass
class Verdict:
    """Answer to a ModeQuery plus whatever makes it re-checkable."""

    query: ModeQuery
    answer: bool
    witness: StrategySpec | None = None
    certificate: dict | None = None
    detail: object | None = None
    bounds: list = field(default_factory=list)


# --- tracking-counter product -------------------------------------------------

def product_index(r, q, i):
    """Index of product state <q, i> when counters are declared r-1 .. 0."""
    return q * r + (r - 1 - i)


def product_with_counter(m, r):
    """The MDP M x [r] tracking the step count modulo r alongside the state."""
    if r < 1:
        raise ValueError("counter modulus must be at least 1")
    n = m.n
    names = [f"{s}@{i}" for s in m.states for i in range(r - 1, -1, -1)]
    rows = []
    for q in range(n):
        for i in range(r - 1, -1, -1):
            j = (i - 1) % r
            row = []
            for a in range(m.action_count):
                row.append(Dist(n * r, {product_index(r, q2, j): p
                                        for q2, p in m.delta[q][a].mass.items()}))
            rows.append(tuple(row))
    return Mdp(names, m.actions, rows)


def lift_with_counter(s, r, t):
    """Support s x {t} inside the counter product."""
    if not 0 <= t < r:
        raise ValueError("counter value out of range")
    bits = 0
    for q in s:
        bits |= 1 << product_index(r, q, t)
    return SupportSet(s.width * r, bits)


def project_counter(sp, r):
    """Projection of a product support back onto the base state space."""
    if r < 1 or sp.width % r:
        raise ValueError("support width is not a multiple of the counter modulus")
    bits = 0
    for idx in sp:
        bits |= 1 << idx // r
    return SupportSet(sp.width // r, bits)


# --- model documents ------------------------------------------------------------

@dataclass
class ParsedModel:
    mdp: Mdp
    initial: Dist
    targets: dict


def parse_model(doc):
    """Parse a model document (JSON text or an already-decoded dict).

    Format: {"states": [...], "actions": [...],
             "transitions": [{"from", "action", "to", "prob"}...],
             "initial": {state: "p/q"...}, "targets": {name: [states...]}}.
    Rationals are decimal "p" or "p/q" strings; missing (state, action) pairs
    are rejected because the transition function is total.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelFormatError("top-level document must be an object")
    for key in ("states", "actions", "transitions", "initial"):
        if key not in doc:
            raise ModelFormatError(f"missing key {key!r}")

    states = doc["states"]
    actions = doc["actions"]
    if (not isinstance(states, list) or not states
            or any(not isinstance(s, str) or not s for s in states)):
        raise ModelFormatError("must be a nonempty list of names", "states")
    if len(set(states)) != len(states):
        raise ModelFormatError("duplicate state name", "states")
    if (not isinstance(actions, list) or not actions
            or any(not isinstance(a, str) or not a for a in actions)):
        raise ModelFormatError("must be a nonempty list of names", "actions")
    if len(set(actions)) != len(actions):
        raise ModelFormatError("duplicate action name", "actions")
    sidx = {s: i for i, s in enumerate(states)}
    aidx = {a: i for i, a in enumerate(actions)}
    n = len(states)

    entries = {}
    for pos, tr in enumerate(doc["transitions"]):
        loc = f"transitions[{pos}]"
        if not isinstance(tr, dict):
            raise ModelFormatError("transition must be an object", loc)
        for key in ("from", "action", "to", "prob"):
            if key not in tr:
                raise ModelFormatError(f"missing key {key!r}", loc)
        if tr["from"] not in sidx:
            raise ModelFormatError(f"unknown state {tr['from']!r}", loc)
        if tr["to"] not in sidx:
            raise ModelFormatError(f"unknown state {tr['to']!r}", loc)
        if tr["action"] not in aidx:
            raise ModelFormatError(f"unknown action {tr['action']!r}", loc)
        q, a, q2 = sidx[tr["from"]], aidx[tr["action"]], sidx[tr["to"]]
        if (q, a, q2) in entries:
            raise ModelFormatError(
                f"duplicate transition ({tr['from']}, {tr['action']}, {tr['to']})", loc)
        entries[(q, a, q2)] = parse_rational(tr["prob"], loc)

    rows = []
    for q in range(n):
        row = []
        for a in range(len(actions)):
            mass = {q2: p for (qq, aa, q2), p in entries.items() if (qq, aa) == (q, a)}
            if not mass:
                raise ModelFormatError(
                    f"missing distribution for ({states[q]}, {actions[a]})", "transitions")
            try:
                row.append(Dist(n, mass))
            except ValueError as exc:
                raise ModelFormatError(
                    f"distribution for ({states[q]}, {actions[a]}) {exc}",
                    "transitions") from exc
        rows.append(row)
    mdp = Mdp(states, actions, rows)

    init = doc["initial"]
    if not isinstance(init, dict) or not init:
        raise ModelFormatError("must be a nonempty object", "initial")
    mass = {}
    for name, text in init.items():
        if name not in sidx:
            raise ModelFormatError(f"unknown state {name!r}", "initial")
        mass[sidx[name]] = parse_rational(text, "initial")
    try:
        initial = Dist(n, mass)
    except ValueError as exc:
        raise ModelFormatError(str(exc), "initial") from exc

    targets = {}
    for name, members in doc.get("targets", {}).items():
        loc = f"targets[{name}]"
        if not isinstance(members, list):
            raise ModelFormatError("target must be a list of state names", loc)
        for s in members:
            if s not in sidx:
                raise ModelFormatError(f"unknown state {s!r}", loc)
        if len(set(members)) != len(members):
            raise ModelFormatError("duplicate state in target", loc)
        targets[name] = SupportSet.of(n, (sidx[s] for s in members))

    return ParsedModel(mdp, initial, targets)


def load_model(path):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_model(handle.read())


def model_to_obj(pm):
    """Inverse of parse_model, up to transition ordering."""
    m = pm.mdp
    transitions = []
    for q in range(m.n):
        for a in range(m.action_count):
            for q2, p in sorted(m.delta[q][a].mass.items()):
                transitions.append({"from": m.states[q], "action": m.actions[a],
                                    "to": m.states[q2], "prob": format_rational(p)})
    return {
        "states": list(m.states),
        "actions": list(m.actions),
        "transitions": transitions,
        "initial": {m.states[q]: format_rational(p) for q, p in pm.initial.mass.items()},
        "targets": {name: list(s.names(m.states)) for name, s in pm.targets.items()},
    }


def serialize_model(pm):
    return json.dumps(model_to_obj(pm), indent=2)
