"""
Trivial and central extensions
==============================

An extension is a surjection. It is central relative to a subvariety when
its relative commutator with the whole algebra vanishes.
"""

from relcomm.algebra import ideal_closure
from relcomm.corpus import bundled
from relcomm.galois import (
    centralisation,
    is_central_extension,
    is_trivial_extension,
    quotient_extension,
    relative_commutator_of_extension,
)
from relcomm.varieties import AB


def extension(name, ideal):
    entry = bundled(name)
    return quotient_extension(ideal_closure(entry.algebra(), entry.ideals[ideal]))


# Q8 over its centre: central for abelian groups, but not trivial.
e = extension("q8", "center")
print("Q8 -> Q8/Z:  central", is_central_extension(e, AB), " trivial", is_trivial_extension(e, AB))

# S3 over A3 is not central; its relative commutator is A3 itself.
e = extension("s3", "A3")
print("S3 -> Z2:    central", is_central_extension(e, AB),
      " [K, A] =", relative_commutator_of_extension(e, AB).members.tolist())

# Centralisation divides out that commutator and leaves a central extension.
central, rho = centralisation(e, AB)
print("centralised source has order", central.src.order, " central:", is_central_extension(central, AB))

# Z4 over its subgroup of order 2 is already trivial.
e = extension("z4", "two")
print("Z4 -> Z2:    trivial", is_trivial_extension(e, AB))
