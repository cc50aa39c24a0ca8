"""
Relative commutators of normal subgroups
========================================

The commutator of two ideals relative to a subvariety, computed from word
generators and from the double-centrality oracle, which must agree.
"""

from relcomm.algebra import full_ideal
from relcomm.commutators import commutator_report, commutator_square, ideal_lattice, relcomm_words
from relcomm.corpus import bundled
from relcomm.galois import double_central_verdicts, is_double_central
from relcomm.varieties import AB, nil, sol

D4 = bundled("d4").algebra()
lattice = ideal_lattice(D4)
whole = full_ideal(D4)

for V in (AB, nil(2), sol(2)):
    report = commutator_report(whole, whole, V)
    print(f"[D4, D4] relative to {V.name}: {report.results}  agree={report.agree}")

# For abelian groups this is the classical commutator of M and N.
for M in lattice:
    J = relcomm_words(M, whole, AB)
    print(f"[{M.members.tolist()}, D4] is trivial: {J.is_trivial()}")

# The commutator vanishes exactly when the square of quotients by M and N is
# double central; all four induced squares give the same verdict.
sq = commutator_square(whole, whole)
print("double central for Ab:", is_double_central(sq, AB), double_central_verdicts(sq, AB))
print("double central for Nil_2:", is_double_central(sq, nil(2)))
print("double central for Sol_2:", is_double_central(sq, sol(2)))
