"""Parse a rule program, complete its constraint, and wire the circuit.

A conditional like a & b -> p is not a single gate in disguise: its
contrapositive has no deterministic gate realization. Rewriting the
underlying constraint ":- a, b, -p." by material implication yields the
one family of rules whose gates all point the right way.
"""

from igate import (
    Program,
    compile_program,
    complete_constraint,
    export_dot,
    format_program,
    parse_program,
)

source = ":- a, b, -p."
program = parse_program(source)
constraint = program.statements[0]

print(f"constraint: {constraint}")
print("completed into:")
rules = complete_constraint(constraint)
for rule in rules:
    print(f"  {rule}")

completed = Program(rules)
print()
print("canonical text form:")
print(format_program(completed))

circuit = compile_program(completed)
print(
    f"circuit: {len(circuit.channels)} channels, {len(circuit.gates)} gates,"
    f" {len(circuit.generators)} generators"
)
print()
print("as Graphviz DOT (render with `dot -Tpng`):")
print(export_dot(circuit))
