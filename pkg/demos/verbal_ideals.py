"""
Verbal ideals and reflections
=============================

A subvariety is given by identity words. The verbal ideal is the least
ideal whose quotient satisfies them, and the quotient is the reflection.
"""

from relcomm.corpus import bundled
from relcomm.varieties import AB, GP, in_subvariety, nil, reflection, sol, verbal_subobject
from relcomm.words import parse_word

A4 = bundled("a4").algebra()
for V in (AB, nil(1), nil(2), sol(1), sol(2)):
    J = verbal_subobject(A4, V)
    print(f"{V.name:6s} verbal ideal of A4: {J.members.tolist()}  A4 in {V.name}: {in_subvariety(A4, V)}")

# The reflection of S3 into abelian groups is Z2.
S3 = bundled("s3").algebra()
IA, eta = reflection(S3, AB)
print("S3 abelianised has order", IA.order, "via", eta.map.tolist())

# The smallest nonassociative loops have order 5. This one is simple, so its
# associator ideal is everything and its reflection into groups is trivial.
L5 = bundled("l5").algebra()
print("L5 in Gp:", in_subvariety(L5, GP), " reflection order:", reflection(L5, GP)[0].order)

# Words are written in prefix syntax; variables are numbered by first use.
w = parse_word("(mul (mul (mul x y) (inv x)) (inv y))")
print("parsed:", w, "arity", w.arity)
