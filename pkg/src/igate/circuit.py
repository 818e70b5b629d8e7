"""Compile ground programs into gate networks.

Every ground atom owns two stateful channels (positive and negative);
gates are stateless AND/OR functions wired between channels; generators
are non-deterministic inputs enumerated during model search. Constraints
are rewritten into their material-implication completion before wiring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .dsl import (
    AND,
    OR,
    SINGLE,
    XOR,
    Choice,
    Constraint,
    Literal,
    Program,
    Rule,
    canonicalize,
    canonicalize_statement,
)
from .errors import CircuitError

EXACTLY_ONE = "exactly_one"
NONEMPTY_SUBSET = "nonempty_subset"


def negate_channel(channel: str) -> str:
    return channel[1:] if channel.startswith("-") else "-" + channel


def atom_of_channel(channel: str) -> str:
    return channel.lstrip("-")


@dataclass(frozen=True)
class Gate:
    """Stateless function node; fires its output channel from its inputs."""

    kind: str  # "and" | "or" | "xor"
    inputs: tuple[str, ...]
    output: str
    scorer_id: str | None = None
    probability: float | None = None

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("a gate needs at least one input")
        if self.output in self.inputs:
            raise ValueError("gate output must be distinct from its inputs")


@dataclass(frozen=True)
class Generator:
    """Non-deterministic input: activates channel sets chosen from alternatives.

    `guard` channels must all be active before the generator fires. With
    cardinality "exactly_one" a single alternative is taken (deterministically
    when a scorer is attached); with "nonempty_subset" any non-empty set of
    alternatives may be taken together.
    """

    id: str
    alternatives: tuple[frozenset[str], ...]
    cardinality: str
    guard: tuple[str, ...] = ()
    scorer_id: str | None = None

    def __post_init__(self):
        if len(set(self.alternatives)) != len(self.alternatives):
            raise ValueError("generator alternatives must be distinct")
        if self.cardinality == EXACTLY_ONE and len(self.alternatives) < 2:
            raise ValueError("exactly-one generators need at least two alternatives")
        if self.cardinality == NONEMPTY_SUBSET and not self.alternatives:
            raise ValueError("generator needs at least one alternative")


@dataclass(frozen=True)
class Circuit:
    """Immutable gate network; evaluation state lives in the digital engine."""

    channels: frozenset[str]
    gates: tuple[Gate, ...]
    generators: tuple[Generator, ...]
    facts: frozenset[str]
    fact_probabilities: tuple[tuple[str, float], ...] = ()

    def atoms(self) -> list[str]:
        return sorted({atom_of_channel(c) for c in self.channels})


# ---------------------------------------------------------------------------
# Constraint completion and classicalization
# ---------------------------------------------------------------------------

def complete_constraint(constraint: Constraint) -> tuple[Rule, ...]:
    """Material-implication completion: one rule per literal.

    ":- l1, ..., ln." becomes the n rules "neg(li) :- {lj : j != i}." (with
    n = 1, a plain fact "neg(l1)."), the only gate placements that exclude
    exactly the assignments violating the constraint.
    """
    if not all(l.is_ground for l in constraint.body):
        raise CircuitError("constraint completion requires ground literals")
    rules = []
    for i, lit in enumerate(constraint.body):
        rest = tuple(l for j, l in enumerate(constraint.body) if j != i)
        conn = AND if len(rest) > 1 else (SINGLE if rest else "empty")
        rules.append(
            canonicalize_statement(
                Rule((lit.negated(),), rest, SINGLE, conn)
            )
        )
    return tuple(sorted(set(rules), key=str))


def classicalize(program: Program, extra_atoms: Iterable[str] = ()) -> Program:
    """Add an exactly-one choice over every atom not already pinned down.

    Atoms covered by an existing choice, or asserted by a deterministic
    (conjunctive) fact, keep their status; everything else gets
    "1{x; -x}1." so that enumeration explores all sign assignments.
    """
    if not program.is_ground:
        raise CircuitError("classicalize requires a ground program")
    covered: set[str] = set()
    for stmt in program.statements:
        if isinstance(stmt, Choice):
            covered.update(l.atom_name for l in stmt.literals_)
        elif isinstance(stmt, Rule) and stmt.is_fact and stmt.head_connective in (
            SINGLE,
            AND,
        ):
            covered.update(l.atom_name for l in stmt.head)
    atoms = sorted((program.atoms() | set(extra_atoms)) - covered)
    from .dsl import atom_literal

    choices = tuple(
        Choice((atom_literal(a), atom_literal(a, negative=True))) for a in atoms
    )
    return canonicalize(Program(program.statements + choices, program.domain))


# ---------------------------------------------------------------------------
# Compilation
# ---------------------------------------------------------------------------

def _gate(kind: str, inputs: tuple[str, ...], output: str, probability) -> Gate | None:
    # A head feeding on itself adds nothing under monotone propagation: an
    # AND needs the output already active, an OR reduces to its other inputs.
    if output in inputs:
        if kind == AND:
            return None
        inputs = tuple(i for i in inputs if i != output)
        if not inputs:
            return None
    return Gate(kind, inputs, output, probability=probability)


def compile_program(program: Program, xor_scorer: str | None = None) -> Circuit:
    """Wire a ground program into a Circuit.

    Conjunctive bodies become AND gates, disjunctive bodies OR gates, with
    one gate per head conjunct. Disjunctive heads become guarded generators
    (inclusive: any non-empty subset; exclusive: exactly one, resolved by
    `xor_scorer` when given). Choices become unguarded exactly-one
    generators, facts become unconditionally active channels. Probability
    annotations are stored inert; the digital engine ignores them.
    """
    if not program.is_ground:
        raise CircuitError("compilation requires a ground program; ground it first")

    statements: list = []
    for stmt in canonicalize(program).statements:
        if isinstance(stmt, Constraint):
            statements.extend(complete_constraint(stmt))
        else:
            statements.append(stmt)

    channels: set[str] = set()
    gates: list[Gate] = []
    generators: list[Generator] = []
    facts: set[str] = set()
    fact_probs: list[tuple[str, float]] = []

    def declare(literals: Iterable[Literal]) -> None:
        for lit in literals:
            channels.add(lit.atom_name)
            channels.add("-" + lit.atom_name)

    def add_generator(
        alternatives: tuple[frozenset[str], ...],
        cardinality: str,
        guard: tuple[str, ...],
        scorer_id: str | None,
    ) -> None:
        generators.append(
            Generator(
                f"gen{len(generators)}", alternatives, cardinality, guard, scorer_id
            )
        )

    for stmt in statements:
        declare(stmt.literals())
        if isinstance(stmt, Choice):
            add_generator(
                tuple(frozenset({l.channel}) for l in stmt.literals_),
                EXACTLY_ONE,
                (),
                None,
            )
            continue

        rule: Rule = stmt
        head_channels = tuple(l.channel for l in rule.head)
        body_channels = tuple(l.channel for l in rule.body)

        if rule.head_connective in (OR, XOR):
            alternatives = tuple(frozenset({c}) for c in head_channels)
            cardinality = EXACTLY_ONE if rule.head_connective == XOR else NONEMPTY_SUBSET
            scorer = xor_scorer if rule.head_connective == XOR else None
            # Disjunctive bodies split into one guard per disjunct, the
            # equivalent conjunction-free form.
            guards = (
                [(c,) for c in body_channels]
                if rule.body_connective == OR
                else [body_channels]
            )
            for guard in guards:
                add_generator(alternatives, cardinality, guard, scorer)
            continue

        if rule.is_fact:
            facts.update(head_channels)
            if rule.probability is not None:
                fact_probs.extend((c, rule.probability) for c in head_channels)
            continue

        kind = OR if rule.body_connective == OR else AND
        for out in head_channels:
            gate = _gate(kind, body_channels, out, rule.probability)
            if gate is not None:
                gates.append(gate)

    return Circuit(
        channels=frozenset(channels),
        gates=tuple(gates),
        generators=tuple(generators),
        facts=frozenset(facts),
        fact_probabilities=tuple(fact_probs),
    )


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------

def export_dot(circuit: Circuit) -> str:
    """Graphviz text form: channels as ellipses (negative dashed), gates as
    boxes, generators as diamonds; only referenced channels are drawn."""
    referenced: set[str] = set(circuit.facts)
    for gate in circuit.gates:
        referenced.update(gate.inputs)
        referenced.add(gate.output)
    for gen in circuit.generators:
        referenced.update(gen.guard)
        for alt in gen.alternatives:
            referenced.update(alt)

    lines = ["digraph circuit {"]
    for channel in sorted(referenced):
        style = ', style="dashed"' if channel.startswith("-") else ""
        peripheries = ', peripheries="2"' if channel in circuit.facts else ""
        lines.append(f'  "{channel}" [shape="ellipse"{style}{peripheries}];')
    for i, gate in enumerate(circuit.gates):
        lines.append(f'  "g{i}" [shape="box", label="{gate.kind.upper()}"];')
        for inp in sorted(gate.inputs):
            lines.append(f'  "{inp}" -> "g{i}";')
        lines.append(f'  "g{i}" -> "{gate.output}";')
    for gen in circuit.generators:
        lines.append(f'  "{gen.id}" [shape="diamond", label="⊕"];')
        for guard in sorted(gen.guard):
            lines.append(f'  "{guard}" -> "{gen.id}" [style="dotted"];')
        for alt_index, alt in enumerate(gen.alternatives):
            for channel in sorted(alt):
                lines.append(
                    f'  "{gen.id}" -> "{channel}" [label="{alt_index}"];'
                )
    lines.append("}")
    return "\n".join(lines) + "\n"
