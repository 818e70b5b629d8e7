"""Boolean fixpoint propagation and exhaustive model enumeration.

Propagation activates channels monotonically until nothing more fires.
Model search branches over every generator whose guard fires, prunes
branches in which both channels of an atom become active, deduplicates by
atom values, and returns models in a deterministic sorted order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .circuit import (
    EXACTLY_ONE,
    Circuit,
    Generator,
    classicalize,
    compile_program,
)
from .dsl import Program
from .errors import (
    GuardError,
    UnresolvedGeneratorError,
    VocabularyMismatchError,
)
from .grounding import ground_program

MAX_CHOICE_BITS = 24

Scorer = Callable[[frozenset[str]], float]

UNKNOWN = "unknown"
TRUE = "true"
FALSE = "false"
CONTRADICTION = "contradiction"


def atom_values(circuit: Circuit, active: frozenset[str]) -> dict[str, str]:
    """Per-atom view of an activation state."""
    values: dict[str, str] = {}
    for atom in circuit.atoms():
        pos, neg = atom in active, ("-" + atom) in active
        if pos and neg:
            values[atom] = CONTRADICTION
        elif pos:
            values[atom] = TRUE
        elif neg:
            values[atom] = FALSE
        else:
            values[atom] = UNKNOWN
    return values


@dataclass(frozen=True)
class Model:
    """A consistent assignment of the determined atoms.

    `assignment` holds (atom, value) pairs sorted by atom name; atoms whose
    channels never fired are absent. Equality and ordering ignore
    `provenance`, which records the generator selections that produced the
    model (generator id -> chosen alternative indices).
    """

    assignment: tuple[tuple[str, bool], ...]
    provenance: tuple[tuple[str, tuple[int, ...]], ...] = field(
        default=(), compare=False
    )

    def as_dict(self) -> dict[str, bool]:
        return dict(self.assignment)

    def value(self, atom: str) -> bool | None:
        return self.as_dict().get(atom)

    def active_channels(self) -> frozenset[str]:
        return frozenset(
            atom if value else "-" + atom for atom, value in self.assignment
        )

    def render(self) -> str:
        return " ".join(
            atom if value else "-" + atom for atom, value in self.assignment
        )


def _selection_channels(gen: Generator, selection: tuple[int, ...]) -> set[str]:
    channels: set[str] = set()
    for index in selection:
        if not 0 <= index < len(gen.alternatives):
            raise ValueError(
                f"{gen.id}: alternative index {index} out of range"
            )
        channels.update(gen.alternatives[index])
    return channels


def _validate_selection(gen: Generator, selection: tuple[int, ...]) -> None:
    if gen.cardinality == EXACTLY_ONE and len(selection) != 1:
        raise ValueError(f"{gen.id} takes exactly one alternative")
    if not selection:
        raise ValueError(f"{gen.id} requires a non-empty selection")
    if len(set(selection)) != len(selection):
        raise ValueError(f"{gen.id}: duplicate alternative indices")


def _score_alternative(gen: Generator, scorer: Scorer) -> tuple[int, ...]:
    best_index, best = None, None
    for index, alt in enumerate(gen.alternatives):
        score = scorer(alt)
        key = (-score, tuple(sorted(alt)))
        if best is None or key < best:
            best, best_index = key, index
    return (best_index,)


def _run(
    circuit: Circuit,
    inputs: Iterable[str],
    choices: Mapping[str, tuple[int, ...]],
    scorers: Mapping[str, Scorer],
    applied: frozenset[str] = frozenset(),
) -> tuple[frozenset[str], list[Generator]]:
    """Least fixpoint plus the list of fired-but-unresolved generators.

    Generators named in `applied` are treated as already resolved, with
    their selected channels present in `inputs`; model search uses this to
    avoid re-applying inherited selections on every branch.
    """
    active = set(circuit.facts)
    for channel in inputs:
        if channel not in circuit.channels:
            raise ValueError(f"unknown channel {channel!r}")
        active.add(channel)

    applied = set(applied)
    unresolved: list[Generator] = []
    changed = True
    while changed:
        changed = False
        for gate in circuit.gates:
            if gate.output in active:
                continue
            hits = sum(1 for c in gate.inputs if c in active)
            fired = (
                hits == len(gate.inputs)
                if gate.kind == "and"
                else hits >= 1
                if gate.kind == "or"
                else hits == 1  # xor: exactly one active input
            )
            if fired:
                active.add(gate.output)
                changed = True
        unresolved = []
        for gen in circuit.generators:
            if gen.id in applied:
                continue
            if not all(c in active for c in gen.guard):
                continue
            if gen.id in choices:
                selection = tuple(choices[gen.id])
                _validate_selection(gen, selection)
            elif gen.scorer_id is not None and gen.scorer_id in scorers:
                selection = _score_alternative(gen, scorers[gen.scorer_id])
            else:
                unresolved.append(gen)
                continue
            applied.add(gen.id)
            new = _selection_channels(gen, selection) - active
            if new:
                active |= new
                changed = True
    return frozenset(active), unresolved


def propagate(
    circuit: Circuit,
    inputs: Iterable[str] = (),
    choices: Mapping[str, Sequence[int]] | None = None,
    scorers: Mapping[str, Scorer] | None = None,
) -> frozenset[str]:
    """Activate `inputs` on top of the fact channels and run to fixpoint.

    `choices` maps generator ids to tuples of alternative indices; every
    generator whose guard ends up firing must be covered by a choice or a
    scorer, otherwise UnresolvedGeneratorError names the first offender.
    """
    normalized = {
        gen_id: tuple(sel) for gen_id, sel in (choices or {}).items()
    }
    active, unresolved = _run(circuit, inputs, normalized, scorers or {})
    if unresolved:
        gen = unresolved[0]
        raise UnresolvedGeneratorError(
            gen.id,
            f"generator {gen.id} fired without a choice or scorer"
            f" (alternatives: {[sorted(a) for a in gen.alternatives]})",
        )
    return active


def _contradictory(active: frozenset[str]) -> bool:
    return any(c[0] == "-" and c[1:] in active for c in active)


def _branch_count(gen: Generator) -> int:
    if gen.scorer_id is not None:
        return 1
    if gen.cardinality == EXACTLY_ONE:
        return len(gen.alternatives)
    return 2 ** len(gen.alternatives) - 1


def _selections(gen: Generator) -> list[tuple[int, ...]]:
    if gen.cardinality == EXACTLY_ONE:
        return [(i,) for i in range(len(gen.alternatives))]
    k = len(gen.alternatives)
    return [
        tuple(i for i in range(k) if mask >> i & 1) for mask in range(1, 2**k)
    ]


def enumerate_models(
    circuit: Circuit,
    max_choice_bits: int = MAX_CHOICE_BITS,
    scorers: Mapping[str, Scorer] | None = None,
    inputs: Iterable[str] = (),
) -> list[Model]:
    """All consistent models reachable by resolving every generator.

    Branches follow generator declaration order with alternatives in source
    order; contradictory branches are pruned as soon as both channels of an
    atom are active. The result is deduplicated by atom values and sorted.
    """
    bits = sum(math.log2(_branch_count(gen)) for gen in circuit.generators)
    if bits > max_choice_bits:
        raise GuardError(
            f"model search needs {bits:.1f} binary choice points"
            f" (limit {max_choice_bits}); raise --max-choices or"
            f" IG_MAX_CHOICES to override"
        )

    scorers = scorers or {}
    inputs = tuple(inputs)
    atoms = circuit.atoms()
    found: dict[tuple[tuple[str, bool], ...], Model] = {}

    def explore(
        choices: dict[str, tuple[int, ...]],
        seed: frozenset[str],
        done: frozenset[str],
    ) -> None:
        # Propagation is monotone, so each branch restarts from the parent's
        # fixpoint extended by the newly selected channels.
        active, unresolved = _run(circuit, seed, choices, scorers, done)
        if _contradictory(active):
            return
        if unresolved:
            gen = unresolved[0]
            branch_done = done | {gen.id}
            for selection in _selections(gen):
                explore(
                    {**choices, gen.id: selection},
                    active | _selection_channels(gen, selection),
                    branch_done,
                )
            return
        assignment = []
        for atom in atoms:
            if atom in active:
                assignment.append((atom, True))
            elif "-" + atom in active:
                assignment.append((atom, False))
        key = tuple(assignment)
        if key not in found:
            found[key] = Model(key, tuple(sorted(choices.items())))

    explore({}, frozenset(inputs), frozenset())
    return [found[key] for key in sorted(found)]


def check_equivalence(
    first: Program,
    second: Program,
    classical: bool = True,
    max_choice_bits: int = MAX_CHOICE_BITS,
) -> Model | None:
    """None when both programs have the same model set, else a witness model.

    With `classical` (the default) both programs are classicalized over the
    union of their ground atoms, mirroring all-possible-worlds semantics;
    without it the vocabularies must match exactly.
    """
    g1, g2 = ground_program(first), ground_program(second)
    atoms1, atoms2 = g1.atoms(), g2.atoms()
    if classical:
        union = atoms1 | atoms2
        g1, g2 = classicalize(g1, union), classicalize(g2, union)
    elif atoms1 != atoms2:
        raise VocabularyMismatchError(
            f"programs speak about different atoms:"
            f" {sorted(atoms1 ^ atoms2)}"
        )
    models1 = enumerate_models(compile_program(g1), max_choice_bits)
    models2 = enumerate_models(compile_program(g2), max_choice_bits)
    set1 = {m.assignment for m in models1}
    set2 = {m.assignment for m in models2}
    if set1 == set2:
        return None
    for model in sorted(models1 + models2, key=lambda m: m.assignment):
        if (model.assignment in set1) != (model.assignment in set2):
            return model
    return None
