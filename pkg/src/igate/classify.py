"""Label rules by dependency form and inferential mechanism.

Form 1 (conjunctive body) realizes comprehension via merge, form 2
(disjunctive body) generalization via fusion, form 3 (conjunctive head)
description via contrast, form 4 (disjunctive head) specification via
detachment. Forms 1/3 and 2/4 are dual pairs; operationalization must
start from comprehension and end at specification.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dsl import AND, OR, Program, Rule

COMPREHENSION = "comprehension"
GENERALIZATION = "generalization"
DESCRIPTION = "description"
SPECIFICATION = "specification"

FORM_MECHANISM = {
    1: COMPREHENSION,
    2: GENERALIZATION,
    3: DESCRIPTION,
    4: SPECIFICATION,
}

# Which forms each form presupposes (transitively closed below): the
# disjunctive-head pattern decomposes through the conjunctive-head one,
# and everything bottoms out in plain conjunction.
_FORM_PREREQUISITES = {1: set(), 2: {1}, 3: {1}, 4: {3, 1}}

_DUAL_FORMS = ((1, 3), (2, 4))


@dataclass(frozen=True)
class FormLabel:
    """Classification of one rule."""

    form: int
    mechanism: str
    merge_kind: str | None = None  # form 1: "morphism" | "composition"
    sublabel: str | None = None  # form 3: "individuation" | "instantiation"


def classify_rule(rule: Rule) -> FormLabel:
    """Assign the dependency form and mechanism of a single rule.

    Degenerate single-literal heads and bodies count as one-element
    conjunctions (form 1). When a rule has both a multi-literal head and a
    multi-literal body, the head pattern decides, since head disjunction
    and conjunction are the structurally rarer features.
    """
    if len(rule.head) > 1:
        if rule.head_connective == AND:
            binary_head = any(len(l.args) == 2 for l in rule.head)
            # Convention: extracting unary features individuates, extracting
            # relational structure instantiates.
            sublabel = "instantiation" if binary_head else "individuation"
            return FormLabel(3, DESCRIPTION, sublabel=sublabel)
        return FormLabel(4, SPECIFICATION)
    if rule.body_connective == OR:
        return FormLabel(2, GENERALIZATION)
    head_vars = set().union(*(l.variables() for l in rule.head))
    body_vars = (
        set().union(*(l.variables() for l in rule.body)) if rule.body else set()
    )
    composed = any(len(l.args) == 2 for l in rule.body) or bool(
        body_vars - head_vars
    )
    return FormLabel(1, COMPREHENSION, merge_kind="composition" if composed else "morphism")


@dataclass(frozen=True)
class MechanismReport:
    """Program-level aggregation of rule classifications."""

    entries: tuple[tuple[str, FormLabel | None], ...]  # (statement text, label)
    forms_present: tuple[int, ...]
    implicit_forms: tuple[int, ...]
    mechanisms: tuple[str, ...]
    duality_pairs: tuple[tuple[str, str], ...]
    emergence_order: tuple[str, ...]
    missing_prerequisites: tuple[int, ...]
    notes: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "rules": [
                {
                    "statement": text,
                    "form": label.form if label else None,
                    "mechanism": label.mechanism if label else None,
                    "merge_kind": label.merge_kind if label else None,
                    "sublabel": label.sublabel if label else None,
                }
                for text, label in self.entries
            ],
            "forms_present": list(self.forms_present),
            "implicit_forms": list(self.implicit_forms),
            "mechanisms": list(self.mechanisms),
            "duality_pairs": [list(pair) for pair in self.duality_pairs],
            "emergence_order": list(self.emergence_order),
            "missing_prerequisites": list(self.missing_prerequisites),
            "notes": list(self.notes),
        }

    def render(self) -> str:
        lines = []
        for text, label in self.entries:
            if label is None:
                lines.append(f"{text:<40} (not a rule)")
            else:
                extra = label.merge_kind or label.sublabel
                detail = f" [{extra}]" if extra else ""
                lines.append(
                    f"{text:<40} form {label.form}: {label.mechanism}{detail}"
                )
        lines.append(f"forms present: {list(self.forms_present)}")
        if self.implicit_forms:
            lines.append(f"implicit forms (split rules): {list(self.implicit_forms)}")
        if self.duality_pairs:
            pairs = ", ".join(f"{a} <-> {b}" for a, b in self.duality_pairs)
            lines.append(f"duality pairs: {pairs}")
        if self.emergence_order:
            lines.append(f"emergence order: {' -> '.join(self.emergence_order)}")
        if self.missing_prerequisites:
            lines.append(
                f"missing prerequisite forms: {list(self.missing_prerequisites)}"
            )
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


def _split_provenance(rules: list[Rule]) -> tuple[set[int], list[str]]:
    """Detect groups of single-conjunct rules that jointly realize a
    disjunctive body (same head) or a conjunctive head (same body)."""
    implicit: set[int] = set()
    notes: list[str] = []
    by_head: dict[tuple, list[Rule]] = {}
    by_body: dict[tuple, list[Rule]] = {}
    for rule in rules:
        if len(rule.head) == 1 and len(rule.body) == 1:
            by_head.setdefault(rule.head[0].sort_key(), []).append(rule)
            by_body.setdefault(rule.body[0].sort_key(), []).append(rule)
    for group in by_head.values():
        bodies = {r.body[0] for r in group}
        if len(bodies) > 1:
            implicit.add(2)
            notes.append(
                f"rules {{{' '.join(str(r) for r in group)}}} share a head and"
                f" jointly realize a form-2 disjunctive body"
            )
    for group in by_body.values():
        heads = {r.head[0] for r in group}
        if len(heads) > 1:
            implicit.add(3)
            notes.append(
                f"rules {{{' '.join(str(r) for r in group)}}} share a body and"
                f" jointly realize a form-3 conjunctive head"
            )
    return implicit, notes


def mechanism_report(program: Program) -> MechanismReport:
    """Classify every rule and summarize dualities and emergence order."""
    entries: list[tuple[str, FormLabel | None]] = []
    rules: list[Rule] = []
    for stmt in program.statements:
        if isinstance(stmt, Rule):
            label = classify_rule(stmt)
            rules.append(stmt)
        else:
            label = None
        entries.append((str(stmt), label))

    forms = sorted({label.form for _, label in entries if label})
    implicit, notes = _split_provenance(rules)
    effective = set(forms) | implicit
    pairs = tuple(
        (FORM_MECHANISM[a], FORM_MECHANISM[b])
        for a, b in _DUAL_FORMS
        if a in effective and b in effective
    )
    # The prerequisite edges all point from lower to higher form numbers, so
    # sorting mechanisms by form number realizes the dependency order
    # (comprehension first, specification last) with ties broken by form.
    order = tuple(FORM_MECHANISM[f] for f in forms)
    required: set[int] = set()
    for form in forms:
        required |= _FORM_PREREQUISITES[form]
    missing = tuple(sorted(required - set(forms)))
    return MechanismReport(
        entries=tuple(entries),
        forms_present=tuple(forms),
        implicit_forms=tuple(sorted(implicit)),
        mechanisms=tuple(FORM_MECHANISM[f] for f in forms),
        duality_pairs=pairs,
        emergence_order=order,
        missing_prerequisites=missing,
        notes=tuple(notes),
    )
