"""
Loops, associators and commutators relative to groups
=====================================================

Enumerate the loops of order 5, then compare the associator commutator
[M, N, M.N] with the oracle on every pair of normal subloops.
"""

from relcomm.algebra import full_ideal, is_associative
from relcomm.commutators import associator_subloop, associator_sweep, division_identity_violations, ideal_lattice
from relcomm.corpus import gen_loops
from relcomm.galois import is_central_extension, quotient_extension
from relcomm.varieties import GP

loops = gen_loops(5)
nonassoc = [e for e in loops if not is_associative(e.algebra())]
print(f"{len(loops)} reduced loop tables of order 5, {len(nonassoc)} nonassociative")

pairs = 0
for e in nonassoc:
    report = associator_sweep(e.algebra())
    assert report.ok
    pairs += len(report.pairs)
print(f"associator commutator equals the oracle on all {pairs} pairs")

# A loop of order 6 with a proper normal subloop: centrality over groups is
# the vanishing of the associators [K, A, A].
for e in gen_loops(6):
    A = e.algebra()
    ideals = ideal_lattice(A)
    if len(ideals) > 2 and not is_associative(A):
        break
whole = full_ideal(A)
for K in ideals:
    central = is_central_extension(quotient_extension(K), GP)
    trivial = associator_subloop(K, whole, whole).is_trivial()
    print(f"{e.id} K={K.members.tolist()}: central={central} [K,A,A] trivial={trivial} "
          f"division identity violations={division_identity_violations(A, K) if trivial else '-'}")
