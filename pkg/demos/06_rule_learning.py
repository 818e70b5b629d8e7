"""Induce rules from co-activation data.

Pairs that fire together far more often than chance (high positive PMI)
become compound concepts: "m_a_b :- a, b.". Pairs that never fire
together but live in the same contexts become generalizations:
"g_a_b :- a; b.". Applying a proposal is a pure topology edit: one new
rule, one new gate.
"""

from pathlib import Path

from igate import (
    apply_proposal,
    compile_program,
    count_associations,
    dump_vectors,  # noqa: F401  (see 05 for the vector side)
    generate_planted_episodes,
    parse_program,
    propose_rules,
)
from igate.learn import dump_episodes_jsonl

episodes = generate_planted_episodes(n_episodes=1000, seed=7)
print(f"{len(episodes)} episodes, e.g. {sorted(episodes[0])}")

stats = count_associations(episodes)
print(f"atoms: {', '.join(stats.atoms)}")
print(f"PMI(spark, flame) = {stats.pmi('spark', 'flame'):.3f} bits")
print(f"joint(day, night) = {stats.pair_count('day', 'night')}  "
      f"context cosine = {stats.context_cosine('day', 'night'):.3f}")

print()
proposals = propose_rules(stats, include_duals=True)
for proposal in proposals:
    pmi = proposal.evidence.pmi
    shown = f"{pmi:.3f}" if pmi is not None else "never co-occur"
    print(f"{proposal.kind:<15} {proposal.rule}  (PMI {shown})")
    if proposal.dual is not None:
        print(f"{'':<15} dual: {proposal.dual}")

# One proposal = one added rule = one added gate.
base = parse_program("spark. flame.")
plain = propose_rules(stats)  # without duals this time
top = next(p for p in plain if p.kind == "comprehension")
grown = apply_proposal(base, top)
before, after = compile_program(base), compile_program(grown)
print()
print(f"gates before: {len(before.gates)}  after: {len(after.gates)}")

# Episodes round-trip through the JSON-lines interchange format.
path = Path("/tmp/planted_episodes.jsonl")
path.write_text(dump_episodes_jsonl(episodes))
print(f"episodes written to {path} (feed them to `ig learn`)")
