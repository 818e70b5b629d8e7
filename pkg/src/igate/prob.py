"""Weighted-world semantics and the six conditional-probability forms.

Every probability-annotated statement owns an independent Bernoulli
switch. A world is one on/off assignment of all switches; its program is
the deterministic statements plus the enabled annotated ones, evaluated by
ordinary digital propagation. Contradictory worlds are dropped and the
remaining mass renormalized. The six dependency forms are additionally
computed literally over an explicit joint distribution, next to an exact
conditional oracle, so their agreements and deviations can be measured.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Mapping, Sequence

from .circuit import compile_program
from .digital import CONTRADICTION, FALSE, TRUE, Model, atom_values, propagate
from .dsl import OR, XOR, Choice, Literal, Program, Rule, canonicalize
from .errors import GuardError, ProbabilityError
from .grounding import ground_program

MAX_SWITCHES = 20


@dataclass(frozen=True)
class Switch:
    """Independent Bernoulli enabling switch of one annotated statement."""

    id: str
    owner: str
    probability: float


@dataclass(frozen=True)
class WeightedWorld:
    """One switch assignment, its probability mass, and its outcome.

    `outcome` is None when propagation reached a contradictory state.
    """

    assignment: tuple[tuple[str, bool], ...]
    weight: float
    outcome: Model | None


def _split_statements(program: Program) -> tuple[list, list[tuple[Rule, Switch]]]:
    deterministic: list = []
    annotated: list[tuple[Rule, Switch]] = []
    for stmt in program.statements:
        if isinstance(stmt, Choice):
            raise ProbabilityError(
                "probabilistic evaluation does not support choice statements"
            )
        if isinstance(stmt, Rule) and stmt.head_connective in (OR, XOR):
            raise ProbabilityError(
                "probabilistic evaluation does not support disjunctive heads"
            )
        if isinstance(stmt, Rule) and stmt.probability is not None:
            switch = Switch(f"s{len(annotated)}", str(stmt), stmt.probability)
            annotated.append((replace(stmt, probability=None), switch))
        else:
            deterministic.append(stmt)
    return deterministic, annotated


def enumerate_worlds(
    program: Program, max_switches: int = MAX_SWITCHES
) -> list[WeightedWorld]:
    """All 2^n switch assignments with their weights and propagation outcomes."""
    program = ground_program(program)
    deterministic, annotated = _split_statements(program)
    if len(annotated) > max_switches:
        raise GuardError(
            f"{len(annotated)} probabilistic switches exceed the limit"
            f" {max_switches}; raise --max-switches to override"
        )
    worlds: list[WeightedWorld] = []
    for bits in itertools.product((False, True), repeat=len(annotated)):
        weight = 1.0
        statements = list(deterministic)
        assignment = []
        for (stmt, switch), on in zip(annotated, bits):
            weight *= switch.probability if on else 1.0 - switch.probability
            assignment.append((switch.id, on))
            if on:
                statements.append(stmt)
        circuit = compile_program(
            canonicalize(Program(tuple(statements), program.domain))
        )
        active = propagate(circuit)
        values = atom_values(circuit, active)
        if any(v == CONTRADICTION for v in values.values()):
            outcome = None
        else:
            outcome = Model(
                tuple(
                    (atom, value == TRUE)
                    for atom, value in sorted(values.items())
                    if value in (TRUE, FALSE)
                )
            )
        worlds.append(WeightedWorld(tuple(assignment), weight, outcome))
    return worlds


def _holds(model: Model, literal: Literal) -> bool:
    # Queries read classically: a negative literal holds whenever the atom
    # is not derived true, matching P(-x) = 1 - P(x).
    truth = model.value(literal.atom_name) is True
    return not truth if literal.negative else truth


def query_prob(
    program: Program,
    query: Literal,
    given: Iterable[Literal] = (),
    max_switches: int = MAX_SWITCHES,
) -> float:
    """Probability of `query` (optionally conditioned on `given` literals),
    as renormalized mass over the consistent worlds."""
    given = tuple(given)
    worlds = [w for w in enumerate_worlds(program, max_switches) if w.outcome]
    denominator = sum(
        w.weight for w in worlds if all(_holds(w.outcome, g) for g in given)
    )
    if denominator <= 0.0:
        condition = ", ".join(str(g) for g in given) or "true"
        raise ProbabilityError(
            f"conditional undefined: the condition ({condition}) has zero mass"
        )
    numerator = sum(
        w.weight
        for w in worlds
        if _holds(w.outcome, query) and all(_holds(w.outcome, g) for g in given)
    )
    return numerator / denominator


# ---------------------------------------------------------------------------
# Joint tables, the six forms, and the exact oracle
# ---------------------------------------------------------------------------

Event = Callable[[Mapping[str, bool]], bool]


@dataclass(frozen=True)
class JointTable:
    """Explicit joint distribution over named Boolean propositions."""

    props: tuple[str, ...]
    masses: tuple[float, ...]  # indexed by the bits of the assignment

    def __post_init__(self):
        if len(self.masses) != 2 ** len(self.props):
            raise ProbabilityError("mass vector does not match proposition count")
        if any(m < 0 for m in self.masses):
            raise ProbabilityError("masses must be non-negative")
        if abs(sum(self.masses) - 1.0) > 1e-9:
            raise ProbabilityError(
                f"masses sum to {sum(self.masses)!r}, expected 1"
            )

    def assignments(self) -> Iterable[tuple[dict[str, bool], float]]:
        for index, mass in enumerate(self.masses):
            yield (
                {p: bool(index >> i & 1) for i, p in enumerate(self.props)},
                mass,
            )

    def mass_where(self, event: Event) -> float:
        return sum(mass for values, mass in self.assignments() if event(values))

    @classmethod
    def from_dict(cls, table: Mapping[str, float]) -> JointTable:
        """Build from {"a=1,b=0": mass, ...}; omitted assignments get 0."""
        parsed: list[tuple[dict[str, bool], float]] = []
        props: set[str] = set()
        for key, mass in table.items():
            values: dict[str, bool] = {}
            for part in key.split(","):
                name, _, bit = part.strip().partition("=")
                if bit not in ("0", "1") or not name:
                    raise ProbabilityError(
                        f"bad assignment {part.strip()!r}; expected name=0 or name=1"
                    )
                values[name.strip()] = bit == "1"
            props.update(values)
            parsed.append((values, float(mass)))
        ordered = tuple(sorted(props))
        masses = [0.0] * 2 ** len(ordered)
        for values, mass in parsed:
            if set(values) != props:
                raise ProbabilityError(
                    "every assignment must mention the same propositions"
                )
            index = sum(
                1 << i for i, p in enumerate(ordered) if values[p]
            )
            masses[index] += mass
        return cls(ordered, tuple(masses))

    @classmethod
    def from_json(cls, text: str) -> JointTable:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict[str, float]:
        return {
            ",".join(f"{p}={int(values[p])}" for p in self.props): mass
            for values, mass in self.assignments()
        }


def oracle_conditional(table: JointTable, event: Event, condition: Event) -> float:
    """Exact P(event | condition) by full assignment enumeration."""
    denominator = table.mass_where(condition)
    if denominator <= 0.0:
        raise ProbabilityError("conditional undefined: condition has zero mass")
    joint = table.mass_where(lambda v: event(v) and condition(v))
    return joint / denominator


def _p(table: JointTable, event: Event, condition: Event, label: str) -> float:
    denominator = table.mass_where(condition)
    if denominator <= 0.0:
        raise ProbabilityError(f"zero-mass conditioning sub-term {label}")
    return table.mass_where(lambda v: event(v) and condition(v)) / denominator


def _p_or_vacuous(table: JointTable, event: Event, condition: Event, label: str) -> float:
    # Inclusion-exclusion on the conditioning side: a disjunct whose event
    # never occurs contributes nothing, so its conditional term drops out.
    if table.mass_where(condition) <= 0.0:
        return 0.0
    return _p(table, event, condition, label)


_FORM_PROPS = {1: ("a", "b", "p"), 2: ("a", "b", "p"), 3: ("a", "p", "q"),
               4: ("a", "p", "q"), 5: ("a", "b", "p"), 6: ("a", "p", "q")}


def formula(form: int, table: JointTable) -> float:
    """Literal right-hand side of one of the six dependency forms.

    1: P(p|a&b)                       2: P(p|a) + P(p|b) - P(p|a&b)
    3: P(p|q&a) * P(q|a)              4: P(p|a) + P(q|a) - P(p&q|a)
    5: P(p|a&-b) + P(p|-a&b)          6: P(p&-q|a) + P(-p&q|a)

    The exact forms (1, 3, 4, 6) raise on a zero-mass conditioning
    sub-term. In the forms that combine on the conditioning side (2, 5) a
    sub-term conditioned on a zero-mass event is a vacuous disjunct and
    contributes 0, so e.g. with b never true form 2 reduces to P(p|a).
    """
    if form not in _FORM_PROPS:
        raise ValueError(f"unknown form {form}; expected 1..6")
    missing = [p for p in _FORM_PROPS[form] if p not in table.props]
    if missing:
        raise ProbabilityError(
            f"form {form} needs propositions {missing} absent from the table"
        )
    a = lambda v: v["a"]
    b = lambda v: v["b"]
    p = lambda v: v["p"]
    q = lambda v: v["q"]
    if form == 1:
        return _p(table, p, lambda v: a(v) and b(v), "P(p|a,b)")
    if form == 2:
        return (
            _p_or_vacuous(table, p, a, "P(p|a)")
            + _p_or_vacuous(table, p, b, "P(p|b)")
            - _p_or_vacuous(table, p, lambda v: a(v) and b(v), "P(p|a,b)")
        )
    if form == 3:
        return _p(table, p, lambda v: q(v) and a(v), "P(p|q,a)") * _p(
            table, q, a, "P(q|a)"
        )
    if form == 4:
        return (
            _p(table, p, a, "P(p|a)")
            + _p(table, q, a, "P(q|a)")
            - _p(table, lambda v: p(v) and q(v), a, "P(p,q|a)")
        )
    if form == 5:
        return _p_or_vacuous(
            table, p, lambda v: a(v) and not b(v), "P(p|a,-b)"
        ) + _p_or_vacuous(table, p, lambda v: not a(v) and b(v), "P(p|-a,b)")
    return _p(table, lambda v: p(v) and not q(v), a, "P(p,-q|a)") + _p(
        table, lambda v: not p(v) and q(v), a, "P(-p,q|a)"
    )


# The conditional each literal formula is meant to express.
_FORM_TARGETS: dict[int, tuple[Event, Event]] = {
    1: (lambda v: v["p"], lambda v: v["a"] and v["b"]),
    2: (lambda v: v["p"], lambda v: v["a"] or v["b"]),
    3: (lambda v: v["p"] and v["q"], lambda v: v["a"]),
    4: (lambda v: v["p"] or v["q"], lambda v: v["a"]),
    5: (lambda v: v["p"], lambda v: v["a"] != v["b"]),
    6: (lambda v: v["p"] != v["q"], lambda v: v["a"]),
}


@dataclass(frozen=True)
class FormComparison:
    form: int
    literal: float | None
    oracle: float | None
    deviation: float | None
    note: str = ""


def compare_formulas(table: JointTable) -> tuple[FormComparison, ...]:
    """Per-form |literal - oracle| deviations over one joint table.

    Forms 1, 3, 4, and 6 agree with the exact conditional whenever defined;
    forms 2 and 5 apply inclusion-exclusion or summation on the
    conditioning side and may deviate from the exact mass-weighted average,
    which the entries report rather than hide.
    """
    comparisons = []
    for form in range(1, 7):
        literal = oracle = deviation = None
        note = ""
        try:
            literal = formula(form, table)
        except ProbabilityError as exc:
            note = f"literal undefined: {exc}"
        event, condition = _FORM_TARGETS[form]
        try:
            if any(p not in table.props for p in _FORM_PROPS[form]):
                raise ProbabilityError("proposition absent from the table")
            oracle = oracle_conditional(table, event, condition)
        except ProbabilityError as exc:
            note = (note + "; " if note else "") + f"oracle undefined: {exc}"
        if literal is not None and oracle is not None:
            deviation = abs(literal - oracle)
        comparisons.append(FormComparison(form, literal, oracle, deviation, note))
    return tuple(comparisons)


def random_table(
    props: Sequence[str], rng, min_mass: float = 1e-3
) -> JointTable:
    """Strictly positive random joint table (rng: random.Random-compatible)."""
    raw = [min_mass + rng.random() for _ in range(2 ** len(props))]
    total = sum(raw)
    masses = [m / total for m in raw]
    # Pin the exact sum-to-one invariant against accumulated rounding.
    masses[-1] = 1.0 - math.fsum(masses[:-1])
    return JointTable(tuple(props), tuple(masses))
