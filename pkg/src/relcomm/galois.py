"""Extensions, double extensions and their classification relative to a subvariety.

An extension is a surjective homomorphism. It is trivial when the square
formed with the reflection units is a pullback, and central when the two
kernel-pair projections agree on verbal subobjects. A double extension is
central when the squares of verbal subobjects of its double relation are
pullbacks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import (
    EmbeddedAlgebra,
    FiniteAlgebra,
    Homomorphism,
    Ideal,
    PairAlgebra,
    ideal_closure,
    is_pullback_square,
    kernel,
    kernel_pair,
    pullback,
    quotient,
    trivial_algebra,
)
from .errors import InvariantBroken, NonCommutingSquare, NotEquivalenceRelation, NotSurjective
from .varieties import VarietyDescriptor, induced_verbal_hom, reflection, verbal_subobject


class Extension:
    """A surjective homomorphism ``f: A -> B`` with its kernel and kernel pair."""

    def __init__(self, f: Homomorphism):
        if not f.surjective:
            raise NotSurjective("an extension must be surjective")
        self.f = f

    @property
    def src(self) -> FiniteAlgebra:
        return self.f.src

    @property
    def dst(self) -> FiniteAlgebra:
        return self.f.dst

    @cached_property
    def kernel(self) -> Ideal:
        return kernel(self.f)

    @cached_property
    def pair(self) -> PairAlgebra:
        return kernel_pair(self.f)

    @property
    def f0(self) -> Homomorphism:
        return self.pair.proj0

    @property
    def f1(self) -> Homomorphism:
        return self.pair.proj1

    def __repr__(self):
        return f"Extension({self.src!r} -> {self.dst!r})"


def quotient_extension(J: Ideal) -> Extension:
    """The extension ``A -> A/J``."""
    _, q = quotient(J.parent, J.witness)
    return Extension(q)


# ---------------------------------------------------------------------------
# One-dimensional notions


def is_trivial_extension(e: Extension, V: VarietyDescriptor) -> bool:
    """Whether the naturality square of the reflection units at ``f`` is a pullback."""
    IA, eta_a = reflection(e.src, V)
    IB, eta_b = reflection(e.dst, V)
    induced = np.zeros(IA.order, dtype=np.int64)
    induced[eta_a.map] = eta_b.map[e.f.map]
    If = Homomorphism(IA, IB, induced)
    return is_pullback_square(e.f, eta_a, eta_b, If)


def verbal_pairs(e: Extension, V: VarietyDescriptor) -> np.ndarray:
    """The verbal subobject of the kernel pair, as an ``(m, 2)`` array of pairs of ``A``."""
    J = verbal_subobject(e.pair, V)
    return e.pair.tuples[J.members]


def relative_commutator_of_extension(e: Extension, V: VarietyDescriptor) -> Ideal:
    """``[K, A]_V``: the image under the second projection of the pairs ``(1, a)`` in ``[R[f]]_V``."""
    pairs = verbal_pairs(e, V)
    raw = np.unique(pairs[pairs[:, 0] == 0, 1])
    J = ideal_closure(e.src, raw)
    if not np.array_equal(J.members, raw):
        raise InvariantBroken("relative commutator of an extension is not an ideal")
    return J


def is_central_extension(e: Extension, V: VarietyDescriptor) -> bool:
    """Whether ``[K, A]_V`` is trivial; cross-checked against equality of the projections."""
    vanishes = relative_commutator_of_extension(e, V).is_trivial()
    pairs = verbal_pairs(e, V)
    projections_agree = bool(np.all(pairs[:, 0] == pairs[:, 1]))
    if vanishes != projections_agree:
        raise InvariantBroken("commutator and projection criteria for centrality disagree")
    return vanishes


def centralisation(e: Extension, V: VarietyDescriptor):
    """``(I1 f, rho)``: the extension ``A/[K,A]_V -> B`` and the quotient map ``rho: A -> A/[K,A]_V``."""
    J = relative_commutator_of_extension(e, V)
    Q, rho = quotient(e.src, J.witness)
    _, reps = np.unique(rho.map, return_index=True)
    central = Extension(Homomorphism(Q, e.dst, e.f.map[reps]))
    if not is_central_extension(central, V):
        raise InvariantBroken("centralisation is not central")
    return central, rho


def pullback_extension(e: Extension, g: Homomorphism) -> Extension:
    """The extension ``A x_B E -> E`` obtained by pulling ``f`` back along ``g: E -> B``."""
    return Extension(pullback(e.f, g).proj1)


def central_by_search(e: Extension, V: VarietyDescriptor, covers=None) -> Homomorphism | None:
    """Bounded diagnostic: the first ``g`` among ``covers`` along which ``f`` pulls back to a trivial extension.

    ``f`` itself is always tried first.
    """
    for g in [e.f] + list(covers or []):
        if g.dst is not e.dst or not g.surjective:
            continue
        if is_trivial_extension(pullback_extension(e, g), V):
            return g
    return None


# ---------------------------------------------------------------------------
# Double extensions and double relations


@dataclass(eq=False)
class DoubleExtension:
    """A commuting square ``g . c = f . d`` with ``c: X -> C``, ``d: X -> D``, ``g: C -> Z``, ``f: D -> Z``."""

    c: Homomorphism
    d: Homomorphism
    g: Homomorphism
    f: Homomorphism
    cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        c, d, g, f = self.c, self.d, self.g, self.f
        if c.src is not d.src or g.src is not c.dst or f.src is not d.dst or g.dst is not f.dst:
            raise NonCommutingSquare("maps do not form a square")
        if not np.array_equal(g.map[c.map], f.map[d.map]):
            raise NonCommutingSquare("square does not commute")

    @property
    def X(self) -> FiniteAlgebra:
        return self.c.src

    @cached_property
    def comparison(self) -> Homomorphism:
        """``(d, c): X -> D x_Z C``."""
        P = pullback(self.f, self.g)
        return Homomorphism(self.X, P, P.index_of(np.stack([self.d.map, self.c.map], axis=1)))


def is_double_extension(sq: DoubleExtension) -> bool:
    return all(h.surjective for h in (sq.c, sq.d, sq.g, sq.f)) and sq.comparison.surjective


class QuadrupleAlgebra(EmbeddedAlgebra):
    """``R box S``: quadruples ``(x, y, z, t)`` arranged as ``[[x, y], [z, t]]``.

    Columns ``(x, z)``, ``(y, t)`` lie in ``R`` and rows ``(x, y)``, ``(z, t)`` in ``S``.
    ``p0``, ``p1`` project to the rows and ``r0``, ``r1`` to the columns.
    """

    def __init__(self, R: PairAlgebra, S: PairAlgebra, quads):
        X = R.factors[0]
        super().__init__(X.kind, (X, X, X, X), quads, name=f"{R.name}box{S.name}")
        self.R = R
        self.S = S
        q = self.tuples
        self.p0 = Homomorphism(self, S, S.index_of(q[:, [0, 1]]))
        self.p1 = Homomorphism(self, S, S.index_of(q[:, [2, 3]]))
        self.r0 = Homomorphism(self, R, R.index_of(q[:, [0, 2]]))
        self.r1 = Homomorphism(self, R, R.index_of(q[:, [1, 3]]))


def equivalence_labels(R: PairAlgebra) -> np.ndarray:
    """Class labels of an equivalence relation given as pairs; raises if ``R`` is not one."""
    X = R.factors[0]
    if R.factors[1] is not X:
        raise NotEquivalenceRelation("relation between different algebras")
    pairs = R.tuples
    n = X.order
    label = np.full(n, n, dtype=np.int64)
    np.minimum.at(label, pairs[:, 0], pairs[:, 1])
    if np.any(label == n) or not np.all(R.contains(np.stack([X.elements, X.elements], axis=1))):
        raise NotEquivalenceRelation("relation is not reflexive")
    if np.any(label[pairs[:, 0]] != label[pairs[:, 1]]):
        raise NotEquivalenceRelation("relation is not symmetric and transitive")
    sizes = np.bincount(label, minlength=n)
    if int(np.dot(sizes, sizes)) != R.order:
        raise NotEquivalenceRelation("relation is not transitive")
    return label


def double_relation(R: PairAlgebra, S: PairAlgebra) -> QuadrupleAlgebra:
    if R.factors[0] is not S.factors[0]:
        raise NotEquivalenceRelation("relations on different algebras")
    lr = equivalence_labels(R)
    ls = equivalence_labels(S)
    # choose (x, y) in S, then z in the R-class of x, then t in the R-class of y and the S-class of z
    r_classes = _classes(lr)
    joint = lr * (ls.max() + 1) + ls
    j_classes = _classes(joint)
    x, y = S.tuples[:, 0], S.tuples[:, 1]
    x, y, z = _expand(r_classes, lr[x], x, y)
    x, y, z, t = _expand(j_classes, lr[y] * (ls.max() + 1) + ls[z], x, y, z)
    quads = np.stack([x, y, z, t], axis=1)
    order = np.lexsort(quads.T[::-1])
    return QuadrupleAlgebra(R, S, quads[order])


def _classes(labels: np.ndarray):
    """``(members sorted by label, start offset per label, size per label)``."""
    order = np.argsort(labels, kind="stable")
    size = np.bincount(labels)
    start = np.concatenate([[0], np.cumsum(size)[:-1]])
    return order, start, size


def _expand(classes, keys, *cols):
    """Repeat each row once per member of class ``keys[row]`` and append that member."""
    order, start, size = classes
    counts = size[keys]
    rows = np.repeat(np.arange(keys.size), counts)
    offset = np.arange(rows.size) - np.repeat(np.cumsum(counts) - counts, counts)
    member = order[start[keys][rows] + offset]
    return tuple(c[rows] for c in cols) + (member,)


def _double_relation_of(sq: DoubleExtension) -> QuadrupleAlgebra:
    if "box" not in sq.cache:
        sq.cache["box"] = double_relation(kernel_pair(sq.c), kernel_pair(sq.d))
    return sq.cache["box"]


def double_central_verdicts(sq: DoubleExtension, V: VarietyDescriptor) -> dict:
    """Pullback verdict of each induced square of verbal subobjects, keyed by ``(i, j)``.

    Square ``(i, j)`` has top ``[p_i]``, left ``[r_j]``, right ``[d_j]`` and bottom ``[c_i]``.
    """
    key = ("verdicts", V.key)
    if key in sq.cache:
        return sq.cache[key]
    C = _double_relation_of(sq)
    R, S = C.R, C.S
    top = [induced_verbal_hom(C.p0, V), induced_verbal_hom(C.p1, V)]
    left = [induced_verbal_hom(C.r0, V), induced_verbal_hom(C.r1, V)]
    right = [induced_verbal_hom(S.proj0, V), induced_verbal_hom(S.proj1, V)]
    bottom = [induced_verbal_hom(R.proj0, V), induced_verbal_hom(R.proj1, V)]
    out = {
        (i, j): is_pullback_square(top[i], left[j], right[j], bottom[i])
        for i in (0, 1)
        for j in (0, 1)
    }
    sq.cache[key] = out
    return out


def is_double_central(sq: DoubleExtension, V: VarietyDescriptor) -> bool:
    """Whether the double extension is central; all four induced squares must agree."""
    verdicts = double_central_verdicts(sq, V)
    values = set(verdicts.values())
    if len(values) != 1:
        raise InvariantBroken(f"induced squares disagree: {verdicts}")
    return values.pop()


def square_of_ideals(M: Ideal, N: Ideal) -> DoubleExtension:
    """The square ``M.N -> (M.N)/M``, ``M.N -> (M.N)/N`` over the one-element algebra.

    ``M`` and ``N`` must be ideals of the same algebra ``X``, which is taken to
    be ``M.N`` itself (callers restrict first).
    """
    X = M.parent
    C, c = quotient(X, M.witness)
    D, d = quotient(X, N.witness)
    Z = trivial_algebra(X.kind)
    g = Homomorphism(C, Z, np.zeros(C.order, dtype=np.int64))
    f = Homomorphism(D, Z, np.zeros(D.order, dtype=np.int64))
    return DoubleExtension(c, d, g, f)


__all__ = [
    "Extension",
    "DoubleExtension",
    "QuadrupleAlgebra",
    "quotient_extension",
    "is_trivial_extension",
    "relative_commutator_of_extension",
    "is_central_extension",
    "centralisation",
    "pullback_extension",
    "central_by_search",
    "is_double_extension",
    "double_relation",
    "equivalence_labels",
    "double_central_verdicts",
    "is_double_central",
    "square_of_ideals",
]
