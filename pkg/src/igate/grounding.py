"""Variable elimination over finite constant domains.

Variables shared between head and body are universal: one ground statement
per constant assignment. Body-only variables are existential and expand
into an inclusive body disjunction (equivalently, one rule per assignment
when the body is a conjunction of several literals). Head-only variables
are existential on the output side and expand into an inclusive
disjunctive head. Constraint and choice variables are universal.
"""

from __future__ import annotations

import itertools
from dataclasses import replace
from typing import Iterable, Mapping

from .dsl import (
    AND,
    EMPTY,
    OR,
    SINGLE,
    XOR,
    Choice,
    Constraint,
    Literal,
    Program,
    Rule,
    Statement,
    Term,
    canonicalize,
)
from .errors import GroundingError

MAX_GROUND_RULES = 10_000


def _substitute(lit: Literal, binding: Mapping[str, str]) -> Literal:
    args = tuple(
        Term(binding[t.name]) if t.is_variable and t.name in binding else t
        for t in lit.args
    )
    return replace(lit, args=args)


def _assignments(variables: list[str], constants: list[str]) -> list[dict[str, str]]:
    return [
        dict(zip(variables, combo))
        for combo in itertools.product(constants, repeat=len(variables))
    ]


def _expand_literal(lit: Literal, constants: list[str]) -> list[Literal]:
    """All instantiations of a literal over its own remaining variables."""
    own = sorted(lit.variables())
    return [_substitute(lit, a) for a in _assignments(own, constants)]


def _dedup(literals: Iterable[Literal]) -> list[Literal]:
    return list(dict.fromkeys(literals))


def _ground_rule(rule: Rule, constants: list[str]) -> list[Rule]:
    head_vars = set().union(*(l.variables() for l in rule.head))
    body_vars = (
        set().union(*(l.variables() for l in rule.body)) if rule.body else set()
    )
    universal = sorted(head_vars & body_vars)
    body_only = sorted(body_vars - head_vars)
    head_only = head_vars - body_vars

    out: list[Rule] = []
    for binding in _assignments(universal, constants):
        head = [_substitute(l, binding) for l in rule.head]
        body = [_substitute(l, binding) for l in rule.body]

        # Body existentials: OR bodies (and single literals) flatten into a
        # wider disjunction; conjunctions of several literals split into one
        # rule per assignment instead, which is the equivalent reading.
        if not body_only:
            bodies = [(tuple(body), rule.body_connective)]
        elif len(body) <= 1 or rule.body_connective == OR:
            expanded = _dedup(
                inst for lit in body for inst in _expand_literal(lit, constants)
            )
            conn = OR if len(expanded) > 1 else (SINGLE if expanded else EMPTY)
            bodies = [(tuple(expanded), conn)]
        else:
            remaining = sorted(
                set().union(*(l.variables() for l in body)) & set(body_only)
            )
            bodies = [
                (tuple(_dedup(_substitute(l, extra) for l in body)), rule.body_connective)
                for extra in _assignments(remaining, constants)
            ]

        for ground_body, body_conn in bodies:
            if len(ground_body) == 1:
                body_conn = SINGLE
            out.extend(
                _ground_head(
                    rule, head, head_only, ground_body, body_conn, constants
                )
            )
    return out


def _ground_head(
    rule: Rule,
    head: list[Literal],
    head_only: set[str],
    body: tuple[Literal, ...],
    body_conn: str,
    constants: list[str],
) -> list[Rule]:
    def make(head_lits: list[Literal], conn: str) -> Rule:
        head_lits = _dedup(head_lits)
        if len(head_lits) == 1:
            conn = SINGLE
        return Rule(tuple(head_lits), body, conn, body_conn, rule.probability)

    if not head_only or all(l.is_ground for l in head):
        return [make(head, rule.head_connective)]

    if len(head) == 1 or rule.head_connective in (OR, XOR):
        # An existential head becomes an inclusive (or exclusive) disjunction
        # over the possible instantiations.
        expanded = _dedup(
            inst for lit in head for inst in _expand_literal(lit, constants)
        )
        conn = rule.head_connective if rule.head_connective in (OR, XOR) else OR
        return [make(expanded, conn)]

    # Conjunctive head with head-only variables: factor per head literal when
    # no variable spans two literals (the conjunction splits losslessly), or
    # substitute in place when the expansion is unique.
    per_literal = [_expand_literal(lit, constants) for lit in head]
    if all(len(insts) == 1 for insts in per_literal):
        return [make([insts[0] for insts in per_literal], rule.head_connective)]
    seen: set[str] = set()
    for lit in head:
        overlap = lit.variables() & head_only & seen
        if overlap:
            raise GroundingError(
                f"variable {sorted(overlap)[0]!r} spans several conjuncts of an"
                f" existential head in {rule}; such heads have no flat-rule"
                f" expansion"
            )
        seen |= lit.variables() & head_only
    return [
        make(insts, OR if len(insts) > 1 else SINGLE)
        for insts in (_dedup(i) for i in per_literal)
    ]


def _ground_universally(
    literals: tuple[Literal, ...], constants: list[str]
) -> list[tuple[Literal, ...]]:
    variables = sorted(set().union(*(l.variables() for l in literals)))
    return [
        tuple(_dedup(_substitute(l, binding) for l in literals))
        for binding in _assignments(variables, constants)
    ]


def ground_program(program: Program, max_rules: int = MAX_GROUND_RULES) -> Program:
    """Return the variable-free equivalent of `program`, canonicalized.

    Instantiation ranges over the declared domain plus any constants
    introduced by ground facts. Raises GroundingError when a variable has no
    constants to range over or when the output would exceed `max_rules`.
    """
    constants = set(program.domain)
    for stmt in program.statements:
        if isinstance(stmt, Rule) and stmt.is_fact:
            for lit in stmt.head:
                constants.update(t.name for t in lit.args if not t.is_variable)
    pool = sorted(constants)

    out: list[Statement] = []
    for stmt in program.statements:
        has_vars = any(lit.variables() for lit in stmt.literals())
        if has_vars and not pool:
            raise GroundingError(
                f"statement {stmt} has variables but the domain is empty;"
                f" declare constants with #entity"
            )
        if not has_vars:
            out.append(stmt)
        elif isinstance(stmt, Rule):
            out.extend(_ground_rule(stmt, pool))
        elif isinstance(stmt, Constraint):
            out.extend(Constraint(b) for b in _ground_universally(stmt.body, pool))
        elif isinstance(stmt, Choice):
            for lits in _ground_universally(stmt.literals_, pool):
                if len(lits) < 2:
                    raise GroundingError(
                        f"grounding collapsed the alternatives of {stmt}"
                    )
                out.append(Choice(lits))
        if len(out) > max_rules:
            raise GroundingError(
                f"grounding produced more than {max_rules} statements; raise"
                f" the limit (max_rules / --max-ground) to override"
            )
    return canonicalize(Program(tuple(out), program.domain))
