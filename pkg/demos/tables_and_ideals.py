"""
Cayley tables, congruences and ideals
=====================================

Load a bundled group, list its ideals and take a quotient.
"""

from relcomm.algebra import congruence_generated, ideal_closure, quotient_by_ideal
from relcomm.commutators import ideal_lattice
from relcomm.corpus import bundled

# The dihedral group of order 8. Element i + 4j stands for r^i s^j.
entry = bundled("d4")
D4 = entry.algebra()
print(D4, "named ideals:", entry.ideals)

# Every ideal (normal subgroup), smallest first.
for J in ideal_lattice(D4):
    print(len(J), J.members.tolist())

# The ideal generated by the rotation r is the rotation subgroup.
rotations = ideal_closure(D4, [1])
print("generated by r:", rotations.members.tolist())

# Quotients are taken by congruences; the unit class is the ideal.
Q, q = quotient_by_ideal(rotations)
print("D4 / <r> has order", Q.order, "and projection", q.map.tolist())

# A congruence can also be generated by pairs of related elements.
c = congruence_generated(D4, [(0, 2)])
print("blocks of the congruence relating 1 and r^2:", [b.tolist() for b in c.blocks])
