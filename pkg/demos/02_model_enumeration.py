"""Enumerate all consistent models of a circuit with free choices.

Classicalizing a program adds an exactly-one choice 1{x; -x}1. per atom,
so model search explores every sign assignment; branches in which both
channels of an atom fire are contradictory and get pruned. For the
completed conditional a & b -> p that leaves 7 of the 8 assignments.
"""

from itertools import product

from igate import (
    classicalize,
    compile_program,
    enumerate_models,
    parse_program,
    propagate,
)

program = parse_program(
    """
    p :- a, b.
    -a :- -p, b.
    -b :- -p, a.
    """
)
classical = classicalize(program)
circuit = compile_program(classical)

models = enumerate_models(circuit)
print(f"{len(models)} models:")
for model in models:
    print(f"  {model.render()}")

# Cross-check against the plain truth table of the implication.
rows = [
    dict(zip("abp", bits))
    for bits in product((False, True), repeat=3)
    if not (bits[0] and bits[1] and not bits[2])
]
assert len(rows) == len(models) == 7

# A single branch, driven by hand: choosing a=T, b=T, p=F forces both p
# channels active, the contradictory state that enumeration prunes.
choices = {"gen0": (0,), "gen1": (0,), "gen2": (1,)}  # a, b, then -p
active = propagate(circuit, choices=choices)
print()
print(f"forced branch activates: {sorted(active)}")
print("contradiction on p:", "p" in active and "-p" in active)
