"""Relative commutators of pairs of ideals, computed three ways, and the sweeps that compare them.

* ``relcomm_words``: the ideal of ``M.N`` generated by the values
  ``w(mn) w(n)^-1 w(m)^-1 w(p)`` of the defining words (groups only).
* ``relcomm_loops``: the associator subloop ``[M, N, M.N]`` (loops relative to groups).
* ``relcomm_oracle``: the least ideal ``J`` of ``M.N`` for which the square of
  quotients by the images of ``M`` and ``N`` in ``(M.N)/J`` is a double central extension.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    FiniteAlgebra,
    Ideal,
    default_budget,
    ideal_closure,
    image_ideal,
    meet,
    product_ideal,
    quotient,
    restrict_ideal,
    subalgebra,
    trivial_ideal,
)
from .errors import BudgetExceeded, InvariantBroken, KindUnsupported, NoCentralizingIdeal
from .galois import (
    DoubleExtension,
    double_central_verdicts,
    is_double_central,
    is_double_extension,
    square_of_ideals,
)
from .varieties import GP, VarietyDescriptor, in_subvariety
from .words import eval_word

LATTICE_ORDER_LIMIT = 4096
LATTICE_SIZE_LIMIT = 4096


# ---------------------------------------------------------------------------
# Ideal lattices and the ambient algebra M.N


def ideal_lattice(A: FiniteAlgebra) -> list[Ideal]:
    """Every ideal of ``A``, sorted by size and then by members.

    Principal ideals are closed under joins and meets until nothing new appears.
    """
    if "lattice" in A.cache:
        return A.cache["lattice"]
    if A.order > LATTICE_ORDER_LIMIT:
        raise BudgetExceeded(1, A.order, LATTICE_ORDER_LIMIT)
    found: dict[bytes, Ideal] = {}

    def add(J: Ideal) -> bool:
        key = J.members.tobytes()
        if key in found:
            return False
        found[key] = J
        return True

    add(trivial_ideal(A))
    for x in range(1, A.order):
        add(ideal_closure(A, [x]))
    # every ideal is a join of principal ideals; meets are added for completeness
    frontier = list(found.values())
    while frontier:
        if len(found) > LATTICE_SIZE_LIMIT:
            raise BudgetExceeded(1, len(found), LATTICE_SIZE_LIMIT)
        current = list(found.values())
        new = []
        for J in frontier:
            for K in current:
                if J <= K or K <= J:
                    continue
                for cand in (ideal_closure(A, np.union1d(J.members, K.members)), meet(J, K)):
                    if add(cand):
                        new.append(cand)
        frontier = new
    out = sorted(found.values(), key=lambda J: (len(J), J.members.tolist()))
    A.cache["lattice"] = out
    return out


def ambient(M: Ideal, N: Ideal):
    """``(X, emb, M', N')``: the subalgebra ``X = M.N`` with its embedding and ``M``, ``N`` as ideals of ``X``."""
    A = M.parent
    if N.parent is not A:
        raise InvariantBroken("ideals of different algebras")
    P = product_ideal(M, N)
    key = ("ambient", P.members.tobytes())
    if key not in A.cache:
        A.cache[key] = subalgebra(A, P.members)
    X, emb = A.cache[key]
    mkey = ("restricted", P.members.tobytes(), M.members.tobytes())
    nkey = ("restricted", P.members.tobytes(), N.members.tobytes())
    for k, J in ((mkey, M), (nkey, N)):
        if k not in A.cache:
            A.cache[k] = restrict_ideal(J, emb) if X is not A else J
    return X, emb, A.cache[mkey], A.cache[nkey]


def commutator_square(M: Ideal, N: Ideal) -> DoubleExtension:
    """The square ``M.N -> (M.N)/M``, ``M.N -> (M.N)/N`` over the one-element algebra."""
    X, _, Mx, Nx = ambient(M, N)
    key = ("square", Mx.members.tobytes(), Nx.members.tobytes())
    if key not in X.cache:
        X.cache[key] = square_of_ideals(Mx, Nx)
    return X.cache[key]


# ---------------------------------------------------------------------------
# Word generators (groups)


def _decode(sizes, start, stop):
    """Mixed-radix digits of ``range(start, stop)``, most significant first."""
    flat = np.arange(start, stop, dtype=np.int64)
    digits = []
    for s in reversed(sizes):
        digits.append(flat % s)
        flat = flat // s
    return digits[::-1]


def words_estimate(M: Ideal, N: Ideal, V: VarietyDescriptor, p_factor: bool = True) -> int:
    """Word evaluations needed by :func:`relcomm_words`."""
    common = np.intersect1d(M.members, N.members).size
    total = 0
    for w in V.wgen:
        r = w.arity
        total += (len(M) * len(N)) ** r + (common ** r if p_factor else 0)
    return total


def relcomm_words(M: Ideal, N: Ideal, V: VarietyDescriptor, budget: int | None = None, p_factor: bool = True) -> Ideal:
    """``[M, N]_V`` as the ideal of ``M.N`` generated by ``w(mn) w(n)^-1 w(m)^-1 w(p)``.

    Taking ``p = 1`` and then ``m = n = 1`` shows the generated ideal is the
    same as the one generated by the values ``w(mn) w(n)^-1 w(m)^-1`` together
    with the values ``w(p)``, so the two families are enumerated separately.
    With ``p_factor=False`` the ``w(p)`` family is dropped (diagnostic).
    """
    A = M.parent
    if A.kind != "group":
        raise KindUnsupported("word generators are defined for groups; use relcomm_loops")
    if V.kind != A.kind:
        raise KindUnsupported(f"{V.name} is a {V.kind} variety")
    budget = default_budget() if budget is None else budget
    X, emb, Mx, Nx = ambient(M, N)
    key = ("words", V.key, p_factor, Mx.members.tobytes(), Nx.members.tobytes())
    if key in X.cache:
        return X.cache[key]
    if in_subvariety(X, V, budget):
        result = trivial_ideal(X)
        X.cache[key] = result
        return result
    estimate = words_estimate(Mx, Nx, V, p_factor)
    if estimate > budget:
        raise BudgetExceeded(V.max_arity, estimate, budget)
    m_el, n_el = Mx.members, Nx.members
    p_el = np.intersect1d(m_el, n_el)
    values = []
    step = 1 << 18
    for w in V.wgen:
        r = w.arity
        sizes = [m_el.size] * r + [n_el.size] * r
        total = int(np.prod(sizes, dtype=object))
        for start in range(0, total, step):
            digits = _decode(sizes, start, min(total, start + step))
            ms = [m_el[d] for d in digits[:r]]
            ns = [n_el[d] for d in digits[r:]]
            mn = [X.op("mul", a, b) for a, b in zip(ms, ns)]
            v = X.op(
                "mul",
                X.op("mul", eval_word(w, X, mn), X.op("inv", eval_word(w, X, ns))),
                X.op("inv", eval_word(w, X, ms)),
            )
            values.append(np.unique(v))
        if p_factor:
            sizes = [p_el.size] * r
            total = p_el.size ** r
            for start in range(0, total, step):
                ps = [p_el[d] for d in _decode(sizes, start, min(total, start + step))]
                values.append(np.unique(eval_word(w, X, ps)))
    result = ideal_closure(X, np.concatenate(values) if values else [])
    X.cache[key] = result
    return result


# ---------------------------------------------------------------------------
# Associators (loops)


def _associators(A: FiniteAlgebra, xs, ys, zs) -> np.ndarray:
    x, y, z = xs[:, None, None], ys[None, :, None], zs[None, None, :]
    left = A.op("mul", A.op("mul", x, y), z)
    right = A.op("mul", x, A.op("mul", y, z))
    return np.unique(A.op("rdiv", left, right))


def associator_subloop(L: Ideal, M: Ideal, N: Ideal) -> Ideal:
    """``[L, M, N]``: the ideal of ``L.M.N`` generated by associators of every ordering of ``L x M x N``."""
    A = L.parent
    MN = product_ideal(M, N)
    LMN = product_ideal(MN, L)
    joined = ideal_closure(A, np.concatenate([L.members, M.members, N.members]))
    if not np.array_equal(LMN.members, joined.members):
        raise InvariantBroken("L.M.N differs from the join of L, M and N")
    X, emb, _, _ = ambient(MN, L)
    pos = np.full(A.order, -1, dtype=np.int64)
    pos[emb.map] = np.arange(X.order)
    key = ("assoc", L.members.tobytes(), M.members.tobytes(), N.members.tobytes())
    if key in X.cache:
        return X.cache[key]
    values = [
        _associators(A, a.members, b.members, c.members)
        for a, b, c in set(itertools.permutations((L, M, N)))
    ]
    result = ideal_closure(X, pos[np.concatenate(values)])
    X.cache[key] = result
    return result


def relcomm_loops(M: Ideal, N: Ideal) -> Ideal:
    """``[M, N, M.N]``, an ideal of ``M.N``."""
    if M.parent.kind != "loop":
        raise KindUnsupported("relcomm_loops needs a loop")
    return associator_subloop(M, N, product_ideal(M, N))


# ---------------------------------------------------------------------------
# Minimal centralising ideal


def _quotient_square(X: FiniteAlgebra, Mx: Ideal, Nx: Ideal, J: Ideal) -> DoubleExtension:
    key = ("qsquare", Mx.members.tobytes(), Nx.members.tobytes(), J.members.tobytes())
    if key not in X.cache:
        Y, q = quotient(X, J.witness)
        if Y is X:
            X.cache[key] = square_of_ideals(Mx, Nx)
        else:
            X.cache[key] = square_of_ideals(image_ideal(q, Mx), image_ideal(q, Nx))
    return X.cache[key]


def oracle_passing(M: Ideal, N: Ideal, V: VarietyDescriptor) -> list[tuple[Ideal, bool]]:
    """Every ideal ``J`` of ``M.N`` with the double-centrality verdict of its quotient square."""
    X, _, Mx, Nx = ambient(M, N)
    return [(J, is_double_central(_quotient_square(X, Mx, Nx, J), V)) for J in ideal_lattice(X)]


def relcomm_oracle(M: Ideal, N: Ideal, V: VarietyDescriptor) -> Ideal:
    """The intersection of all ideals ``J`` of ``M.N`` whose quotient square is double central."""
    X, _, Mx, Nx = ambient(M, N)
    key = ("oracle", V.key, Mx.members.tobytes(), Nx.members.tobytes())
    if key in X.cache:
        return X.cache[key]
    passing = [J for J, ok in oracle_passing(M, N, V) if ok]
    if not passing:
        raise NoCentralizingIdeal("no ideal of M.N centralises M and N")
    members = passing[0].members
    for J in passing[1:]:
        members = np.intersect1d(members, J.members)
    least = next((J for J in passing if np.array_equal(J.members, members)), None)
    if least is None:
        raise NoCentralizingIdeal("the centralising ideals have no least element")
    X.cache[key] = least
    return least


# ---------------------------------------------------------------------------
# Reports and sweeps


def lifted(J: Ideal, M: Ideal, N: Ideal) -> list[int]:
    """Members of an ideal of ``M.N`` as elements of the parent algebra."""
    _, emb, _, _ = ambient(M, N)
    return sorted(int(v) for v in emb.map[J.members])


@dataclass
class CommutatorReport:
    algebra: str
    variety: str
    M: list
    N: list
    results: dict = field(default_factory=dict)
    agree: bool = True
    timing: dict = field(default_factory=dict)

    def as_dict(self, with_timing: bool = True) -> dict:
        out = {
            "algebra": self.algebra,
            "variety": self.variety,
            "M": self.M,
            "N": self.N,
            "results": {k: {"members": v} for k, v in self.results.items()},
            "agree": self.agree,
        }
        if with_timing:
            out["timing"] = self.timing
        return out


METHODS = ("words", "loops", "oracle")


def commutator_report(M: Ideal, N: Ideal, V: VarietyDescriptor, methods=None, budget=None, p_factor=True) -> CommutatorReport:
    A = M.parent
    if methods is None:
        methods = ("words", "oracle") if A.kind == "group" else ("loops", "oracle")
    report = CommutatorReport(A.name, V.name, M.members.tolist(), N.members.tolist())
    for method in methods:
        t0 = time.perf_counter()
        if method == "words":
            J = relcomm_words(M, N, V, budget, p_factor)
        elif method == "loops":
            J = relcomm_loops(M, N)
        elif method == "oracle":
            J = relcomm_oracle(M, N, V)
        else:
            raise ValueError(f"unknown method {method!r}")
        report.results[method] = lifted(J, M, N)
        report.timing[method] = time.perf_counter() - t0
    sets = [tuple(v) for v in report.results.values()]
    report.agree = len(set(sets)) <= 1
    return report


@dataclass
class PairVerdict:
    M: list
    N: list
    commutator: list
    vanishes: bool
    double_extension: bool
    double_central: bool
    squares: dict

    @property
    def agree(self) -> bool:
        return self.double_extension and self.vanishes == self.double_central

    @property
    def squares_agree(self) -> bool:
        return len(set(self.squares.values())) == 1

    def as_dict(self) -> dict:
        return {
            "M": self.M,
            "N": self.N,
            "commutator": self.commutator,
            "vanishes": self.vanishes,
            "double_extension": self.double_extension,
            "double_central": self.double_central,
            "squares": {f"{i}{j}": v for (i, j), v in sorted(self.squares.items())},
            "agree": self.agree,
        }


@dataclass
class SweepReport:
    algebra: str
    variety: str
    pairs: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def disagreements(self) -> list:
        return [p for p in self.pairs if not p.agree]

    @property
    def ok(self) -> bool:
        return not self.errors and not self.disagreements

    def as_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "variety": self.variety,
            "pairs": [p.as_dict() for p in self.pairs],
            "disagreements": len(self.disagreements),
            "errors": self.errors,
        }


def _commutator_for_sweep(M: Ideal, N: Ideal, V: VarietyDescriptor, budget) -> Ideal:
    if M.parent.kind == "group":
        return relcomm_words(M, N, V, budget)
    if V.key != GP.key:
        raise KindUnsupported("loop sweeps are defined relative to Gp")
    return relcomm_loops(M, N)


def double_centrality_sweep(A: FiniteAlgebra, V: VarietyDescriptor, budget: int | None = None) -> SweepReport:
    """For every ordered pair of ideals compare vanishing of ``[M, N]_V`` with double centrality of the square."""
    report = SweepReport(A.name, V.name)
    lattice = ideal_lattice(A)
    for M in lattice:
        for N in lattice:
            try:
                J = _commutator_for_sweep(M, N, V, budget)
                sq = commutator_square(M, N)
                squares = dict(double_central_verdicts(sq, V))
            except BudgetExceeded as exc:
                report.errors.append({"M": M.members.tolist(), "N": N.members.tolist(), "error": str(exc)})
                continue
            report.pairs.append(PairVerdict(
                M.members.tolist(),
                N.members.tolist(),
                lifted(J, M, N),
                J.is_trivial(),
                is_double_extension(sq),
                all(squares.values()),
                squares,
            ))
    return report


@dataclass
class LoopPairResult:
    M: list
    N: list
    associator: list
    oracle: list

    @property
    def agree(self) -> bool:
        return self.associator == self.oracle

    def as_dict(self) -> dict:
        return {"M": self.M, "N": self.N, "associator": self.associator, "oracle": self.oracle, "agree": self.agree}


@dataclass
class LoopSweepReport:
    algebra: str
    pairs: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def disagreements(self) -> list:
        return [p for p in self.pairs if not p.agree]

    @property
    def ok(self) -> bool:
        return not self.errors and not self.disagreements

    def as_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "pairs": [p.as_dict() for p in self.pairs],
            "disagreements": len(self.disagreements),
            "errors": self.errors,
        }


def associator_sweep(A: FiniteAlgebra) -> LoopSweepReport:
    """For every ordered pair of ideals of a loop compare ``[M, N, M.N]`` with the oracle relative to Gp."""
    if A.kind != "loop":
        raise KindUnsupported("the associator sweep needs a loop")
    report = LoopSweepReport(A.name)
    lattice = ideal_lattice(A)
    for M in lattice:
        for N in lattice:
            try:
                assoc = lifted(relcomm_loops(M, N), M, N)
                oracle = lifted(relcomm_oracle(M, N, GP), M, N)
            except BudgetExceeded as exc:
                report.errors.append({"M": M.members.tolist(), "N": N.members.tolist(), "error": str(exc)})
                continue
            report.pairs.append(LoopPairResult(M.members.tolist(), N.members.tolist(), assoc, oracle))
    return report


def division_identity_violations(A: FiniteAlgebra, K: Ideal) -> int:
    """Number of triples ``(a, a', k)`` with ``(ak)/(a'k) != a/a'``."""
    a = A.elements[:, None, None]
    b = A.elements[None, :, None]
    k = K.members[None, None, :]
    lhs = A.op("rdiv", A.op("mul", a, k), A.op("mul", b, k))
    rhs = A.op("rdiv", a, b)
    return int(np.count_nonzero(lhs != rhs))


__all__ = [
    "ideal_lattice",
    "ambient",
    "commutator_square",
    "relcomm_words",
    "words_estimate",
    "associator_subloop",
    "relcomm_loops",
    "relcomm_oracle",
    "oracle_passing",
    "commutator_report",
    "CommutatorReport",
    "double_centrality_sweep",
    "associator_sweep",
    "SweepReport",
    "LoopSweepReport",
    "PairVerdict",
    "division_identity_violations",
    "lifted",
]
