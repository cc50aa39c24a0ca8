"""Subvarieties presented by finitely many identity words, verbal ideals and reflections."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import (
    Congruence,
    EmbeddedAlgebra,
    FiniteAlgebra,
    Homomorphism,
    Ideal,
    default_budget,
    ideal_closure,
    quotient,
    trivial_ideal,
)
from .errors import BudgetExceeded, InvariantBroken, SignatureMismatch
from .words import Word, associator, check_signature, commutator, eval_word, value_set, value_set_cost, var

# Word value sets are computed exactly when one level of the word costs at most
# this many evaluations; otherwise a fixed-seed sample seeds the ideal and the
# quotient is then checked exactly.
SEED_EXHAUSTIVE = 1 << 18
SAMPLES = 2048


@dataclass(frozen=True)
class VarietyDescriptor:
    name: str
    kind: str
    wgen: tuple

    def __post_init__(self):
        for w in self.wgen:
            check_signature(w, self.kind)
            w.arity

    @cached_property
    def key(self):
        return (self.kind, tuple(str(w) for w in self.wgen))

    @property
    def max_arity(self) -> int:
        return max((w.arity for w in self.wgen), default=0)


def lower_central_word(weight: int) -> Word:
    """Left-normed commutator ``[[...[x0, x1], x2], ..., x_{weight-1}]``."""
    w = var(0)
    for i in range(1, weight):
        w = commutator(w, var(i))
    return w


def derived_word(depth: int) -> Word:
    """``d1 = [x0, x1]``, ``d_k = [d_{k-1}(first half), d_{k-1}(second half)]``."""

    def build(d, offset):
        if d == 0:
            return var(offset)
        half = 2 ** (d - 1)
        return commutator(build(d - 1, offset), build(d - 1, offset + half))

    return build(depth, 0)


AB = VarietyDescriptor("Ab", "group", (commutator(var(0), var(1)),))
GP = VarietyDescriptor("Gp", "loop", (associator(var(0), var(1), var(2)),))


def nil(k: int) -> VarietyDescriptor:
    if not 1 <= k <= 3:
        raise ValueError("Nil_k ships for 1 <= k <= 3")
    return VarietyDescriptor(f"Nil_{k}", "group", (lower_central_word(k + 1),))


def sol(k: int) -> VarietyDescriptor:
    if not 1 <= k <= 3:
        raise ValueError("Sol_k ships for 1 <= k <= 3")
    return VarietyDescriptor(f"Sol_{k}", "group", (derived_word(k),))


def get_variety(name: str) -> VarietyDescriptor:
    """Look up a built-in descriptor: ``Ab``, ``Gp``, ``Nil_k`` / ``Nilk``, ``Sol_k`` / ``Solk``."""
    if name == "Ab":
        return AB
    if name == "Gp":
        return GP
    m = re.fullmatch(r"(Nil|Sol)_?([0-9]+)", name)
    if m:
        k = int(m.group(2))
        if 1 <= k <= 3:
            return nil(k) if m.group(1) == "Nil" else sol(k)
    raise KeyError(f"unknown variety {name!r}")


BUILTIN_NAMES = ("Ab", "Gp", "Nil_1", "Nil_2", "Nil_3", "Sol_1", "Sol_2", "Sol_3")


def _require_kind(A: FiniteAlgebra, V: VarietyDescriptor) -> None:
    if A.kind != V.kind:
        raise SignatureMismatch(f"{V.name} is a {V.kind} variety, algebra is a {A.kind}")


def _nonzero_values(w: Word, A: FiniteAlgebra, budget: int) -> np.ndarray:
    """Distinct non-unit values of ``w`` over all of ``A^r``."""
    vals = value_set(w, A, budget)
    return vals[vals != 0]


def _affordable(w: Word, A: FiniteAlgebra, budget: int) -> bool:
    return value_set_cost(w, A.order) <= budget


def _sampled_values(w: Word, A: FiniteAlgebra, rng, count: int) -> np.ndarray:
    args = [rng.integers(0, A.order, size=count) for _ in range(w.arity)]
    vals = np.asarray(eval_word(w, A, args))
    return np.unique(vals[vals != 0])


def in_subvariety(A: FiniteAlgebra, V: VarietyDescriptor, budget: int | None = None) -> bool:
    """Whether every defining word of ``V`` vanishes identically on ``A``."""
    _require_kind(A, V)
    key = ("in", V.key)
    if key in A.cache:
        return A.cache[key]
    budget = default_budget() if budget is None else budget
    if all(_affordable(w, A, budget) for w in V.wgen):
        result = all(_nonzero_values(w, A, budget).size == 0 for w in V.wgen)
    elif _factors_in(A, V, budget):
        result = True
    else:
        result = verbal_subobject(A, V, budget).is_trivial()
    A.cache[key] = result
    return result


def _factors_in(A: FiniteAlgebra, V: VarietyDescriptor, budget: int) -> bool:
    # subalgebras of products of members are members
    return isinstance(A, EmbeddedAlgebra) and all(
        f.kind == V.kind and in_subvariety(f, V, budget) for f in A.factors
    )


def _violations(Q: FiniteAlgebra, V: VarietyDescriptor, budget: int, rng) -> np.ndarray:
    """Non-unit word values in ``Q``; empty exactly when ``Q`` lies in ``V``."""
    for w in V.wgen:
        r = w.arity
        if _affordable(w, Q, budget):
            vals = _nonzero_values(w, Q, budget)
        else:
            vals = np.zeros(0, dtype=np.int64)
            for _ in range(8):
                vals = _sampled_values(w, Q, rng, 4 * SAMPLES)
                if vals.size:
                    break
            if not vals.size:
                raise BudgetExceeded(r, Q.order ** r, budget)
        if vals.size:
            return vals
    return np.zeros(0, dtype=np.int64)


def verbal_subobject(A: FiniteAlgebra, V: VarietyDescriptor, budget: int | None = None) -> Ideal:
    """The least ideal of ``A`` whose quotient satisfies every defining word of ``V``.

    Word values (all of them when affordable, otherwise a fixed-seed sample)
    generate a first ideal ``J``. The quotient ``A/J`` is then searched
    exhaustively for non-unit word values, whose lifts are added to ``J``,
    until the quotient lies in ``V``. Every added element is a word value
    modulo ``J``, so the result is exactly the verbal ideal.
    """
    _require_kind(A, V)
    key = ("verbal", V.key)
    if key in A.cache:
        return A.cache[key]
    budget = default_budget() if budget is None else budget
    if A.order == 1 or _factors_in(A, V, budget):
        J = trivial_ideal(A)
        A.cache[key] = J
        return J
    if _is_full_product(A):
        J = _product_of_verbals(A, V, budget)
        A.cache[key] = J
        return J
    rng = np.random.default_rng(0)
    seeds = []
    for w in V.wgen:
        if value_set_cost(w, A.order) <= SEED_EXHAUSTIVE:
            seeds.append(_nonzero_values(w, A, budget))
        else:
            seeds.append(_sampled_values(w, A, rng, SAMPLES))
    J = ideal_closure(A, np.concatenate(seeds))
    while not J.is_full():
        Q, q = quotient(A, J.witness)
        bad = _violations(Q, V, budget, rng)
        if bad.size == 0:
            break
        _, reps = np.unique(q.map, return_index=True)
        J = ideal_closure(A, np.concatenate([J.members, reps[bad]]))
    A.cache[key] = J
    return J


def _is_full_product(A: FiniteAlgebra) -> bool:
    return isinstance(A, EmbeddedAlgebra) and A.order == int(np.prod([f.order for f in A.factors], dtype=object))


def _product_of_verbals(A: EmbeddedAlgebra, V: VarietyDescriptor, budget: int) -> Ideal:
    # Word values at (a, 1, ..., 1) are (w(a), 1, ..., 1) because w(1, ..., 1) = 1,
    # so the verbal ideal of a full product is the product of the verbal ideals.
    parts = [verbal_subobject(f, V, budget).members for f in A.factors]
    grids = np.meshgrid(*parts, indexing="ij")
    comps = np.stack([g.ravel() for g in grids], axis=1)
    members = np.sort(A.index_of(comps))
    labels = np.zeros(A.order, dtype=np.int64)
    for i, f in enumerate(A.factors):
        labels = labels * f.order + verbal_subobject(f, V, budget).witness.labels[A.tuples[:, i]]
    J = Ideal(A, Congruence(A, labels))
    if not np.array_equal(J.members, members):
        raise InvariantBroken("product congruence does not match the product of verbal ideals")
    return J


def reflection(A: FiniteAlgebra, V: VarietyDescriptor, budget: int | None = None):
    """``(IA, eta)``: the quotient of ``A`` by its verbal ideal and the projection."""
    J = verbal_subobject(A, V, budget)
    IA, eta = quotient(A, J.witness)
    if not in_subvariety(IA, V, budget):
        raise InvariantBroken("reflection does not lie in the subvariety")
    return IA, eta


def induced_verbal_hom(f: Homomorphism, V: VarietyDescriptor, budget: int | None = None) -> Homomorphism:
    """The restriction ``[A']_V -> [A]_V`` of ``f: A' -> A``."""
    src_J = verbal_subobject(f.src, V, budget)
    dst_J = verbal_subobject(f.dst, V, budget)
    S, s_emb = src_J.subalgebra()
    T, t_emb = dst_J.subalgebra()
    img = f.map[s_emb.map]
    pos = np.searchsorted(t_emb.map, img)
    pos = np.minimum(pos, T.order - 1)
    if not np.array_equal(t_emb.map[pos], img):
        raise InvariantBroken("homomorphism does not map verbal ideal into verbal ideal")
    return Homomorphism(S, T, pos)
