"""Classify rules into the four dependency forms and check the splits.

Form 1 puts conjunction in the body (comprehension via merge), form 2
disjunction in the body (generalization), form 3 conjunction in the head
(description), form 4 disjunction in the head (specification). Forms 2
and 3 are syntactic sugar for families of single-connective rules, which
model enumeration confirms.
"""

from igate import (
    check_equivalence,
    classify_rule,
    mechanism_report,
    parse_program,
)

examples = [
    "p :- a, b.",
    "p :- a; b.",
    "p, q :- a.",
    "p; q :- a.",
    "angrydog(X) :- dog(X), angry(X).",
    "dog(X); cat(X) :- mammal(X).",
    "car(X) :- engine(Y), wheels(Z), has(X, Y), has(X, Z).",
]
for text in examples:
    rule = parse_program(text).statements[0]
    label = classify_rule(rule)
    detail = label.merge_kind or label.sublabel or ""
    print(f"{text:<55} form {label.form} {label.mechanism:<15} {detail}")

print()
print("splitting a disjunctive body preserves the model set:")
same = check_equivalence(
    parse_program("p :- a; b."), parse_program("p :- a. p :- b.")
)
print("  p :- a; b.  vs  {p :- a.  p :- b.}  ->", "equivalent" if same is None else same)

same = check_equivalence(
    parse_program("p, q :- a."), parse_program("p :- a. q :- a.")
)
print("  p, q :- a.  vs  {p :- a.  q :- a.}  ->", "equivalent" if same is None else same)

witness = check_equivalence(parse_program("p :- a, b."), parse_program("p :- a."))
print("  p :- a, b.  vs  p :- a.             -> differs at", witness.render())

print()
report = mechanism_report(
    parse_program("m :- a, b. g :- a; b. x; y :- g.")
)
print(report.render())
