"""Finite groups and loops stored as operation tables, plus the constructions
the rest of the package computes on: congruences, ideals, quotients, kernel
pairs, pullbacks and pullback-square tests.

Every algebra has carrier ``{0, ..., n-1}`` with the unit at index 0. Operations
are evaluated through ``A.op(name, *args)``, which accepts integers or numpy
arrays and broadcasts. Large relation algebras (subalgebras of a power of a
small algebra) never materialise dense tables; their operations are computed
componentwise on demand.
"""

from __future__ import annotations

import os
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    AxiomViolation,
    InvalidTable,
    InvariantBroken,
    NoUnit,
    NonCommutingSquare,
    NotAssociative,
    NotLatinSquare,
    SignatureMismatch,
)

KINDS = ("group", "loop")
SIGNATURES = {"group": ("mul", "inv"), "loop": ("mul", "ldiv", "rdiv")}
OP_ARITY = {"mul": 2, "ldiv": 2, "rdiv": 2, "inv": 1}

# Dense tables are built for derived algebras up to this order.
DENSE_LIMIT = 512
# Embedded algebras up to this order cache dense operation tables.
DENSE_EMBEDDED = 256
# Work-array size used when chunking vectorised evaluations.
CHUNK = 1 << 20
# Union-find in pure Python below this many edges; scipy components above.
SMALL_MERGE = 2048


def default_budget() -> int:
    """Evaluation cap, overridable through the RELCOMM_BUDGET environment variable."""
    raw = os.environ.get("RELCOMM_BUDGET")
    if raw:
        value = int(float(raw))
        if value <= 0:
            raise ValueError("RELCOMM_BUDGET must be positive")
        return value
    return 10**8


def _as_index(x):
    return np.asarray(x, dtype=np.int64)


class FiniteAlgebra:
    """A finite group or loop with carrier ``range(order)`` and unit 0."""

    kind: str
    order: int
    name: str

    def __init__(self, kind: str, order: int, name: str = ""):
        if kind not in KINDS:
            raise SignatureMismatch(f"unknown kind {kind!r}")
        self.kind = kind
        self.order = int(order)
        self.name = name
        self._tables: dict[str, np.ndarray] = {}
        self.cache: dict = {}

    @property
    def signature(self) -> tuple[str, ...]:
        return SIGNATURES[self.kind]

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def op(self, name: str, *args):
        raise NotImplementedError

    def table(self, name: str) -> np.ndarray:
        """Dense table of ``name``; built on first use."""
        if name not in self._tables:
            e = self.elements
            if OP_ARITY[name] == 1:
                self._tables[name] = _as_index(self.op(name, e))
            else:
                self._tables[name] = _as_index(self.op(name, e[:, None], e[None, :]))
        return self._tables[name]

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<{type(self).__name__}{label} {self.kind} of order {self.order}>"


class TableAlgebra(FiniteAlgebra):
    """An algebra given by dense tables (built by :func:`validate` or derived)."""

    def __init__(self, kind: str, tables: dict[str, np.ndarray], name: str = ""):
        mul = _as_index(tables["mul"])
        super().__init__(kind, mul.shape[0], name)
        self._tables = {k: _as_index(v) for k, v in tables.items()}
        n = self.order
        e = np.arange(n)
        if kind == "group":
            if "inv" not in self._tables:
                self._tables["inv"] = _inverse_from_mul(mul)
            inv = self._tables["inv"]
            self._tables.setdefault("ldiv", mul[inv[:, None], e[None, :]])
            self._tables.setdefault("rdiv", mul[e[:, None], inv[None, :]])
        else:
            if "ldiv" not in self._tables or "rdiv" not in self._tables:
                ldiv, rdiv = _divisions_from_mul(mul)
                self._tables.setdefault("ldiv", ldiv)
                self._tables.setdefault("rdiv", rdiv)

    def op(self, name: str, *args):
        return self._tables[name][tuple(args)]

    def table(self, name: str) -> np.ndarray:
        return self._tables[name]


class EmbeddedAlgebra(FiniteAlgebra):
    """A subalgebra of a product of algebras, stored as sorted tuples.

    Rows of ``tuples`` are lexicographically sorted and start with the unit
    tuple, so index 0 is the unit. Operations act componentwise.
    """

    def __init__(self, kind: str, factors: Sequence[FiniteAlgebra], tuples, name: str = ""):
        tuples = _as_index(tuples)
        super().__init__(kind, tuples.shape[0], name)
        self.factors = tuple(factors)
        self.tuples = tuples
        radix = [1] * len(self.factors)
        for i in range(len(self.factors) - 2, -1, -1):
            radix[i] = radix[i + 1] * self.factors[i + 1].order
        if radix and radix[0] * self.factors[0].order >= 2**62:
            raise InvalidTable("product carrier too large to encode")
        self._radix = np.array(radix, dtype=np.int64)
        self.codes = self.encode(tuples)
        if tuples.shape[0] and np.any(np.diff(self.codes) <= 0):
            raise InvalidTable("embedded tuples must be strictly sorted")
        if tuples.shape[0] == 0 or self.codes[0] != 0:
            raise InvalidTable("embedded algebra must contain the unit tuple")

    @property
    def arity(self) -> int:
        return len(self.factors)

    def encode(self, comps) -> np.ndarray:
        comps = _as_index(comps)
        return comps @ self._radix if comps.ndim > 1 else int(comps @ self._radix)

    def index_of(self, comps, strict: bool = True):
        """Indices of the given component tuples (shape ``(..., k)``)."""
        codes = self.encode(comps)
        idx = np.searchsorted(self.codes, codes)
        if strict:
            bad = (idx >= self.order) | (self.codes[np.minimum(idx, self.order - 1)] != codes)
            if np.any(bad):
                raise InvariantBroken("tuple outside the embedded carrier")
        return idx

    def contains(self, comps) -> np.ndarray:
        codes = self.encode(comps)
        idx = np.minimum(np.searchsorted(self.codes, codes), self.order - 1)
        return self.codes[idx] == codes

    def op(self, name: str, *args):
        if self.order <= DENSE_EMBEDDED:
            if name not in self._tables:
                e = self.elements
                grid = (e,) if OP_ARITY[name] == 1 else (e[:, None], e[None, :])
                self._tables[name] = self._lazy_op(name, *grid)
            return self._tables[name][tuple(_as_index(a) for a in args)]
        return self._lazy_op(name, *args)

    def _lazy_op(self, name: str, *args):
        args = [_as_index(a) for a in args]
        code = 0
        for i, f in enumerate(self.factors):
            comp = f.op(name, *(self.tuples[a, i] for a in args))
            code = code + comp * self._radix[i]
        return np.searchsorted(self.codes, code)

    def check_closed(self) -> bool:
        """Exhaustively verify closure under every operation of the kind."""
        e = self.elements
        for name in ("mul", "ldiv", "rdiv") + (("inv",) if self.kind == "group" else ()):
            for chunk in _chunks(self.order):
                a = e[chunk]
                if OP_ARITY[name] == 1:
                    comps = np.stack([f.op(name, self.tuples[a, i]) for i, f in enumerate(self.factors)], axis=-1)
                else:
                    comps = np.stack(
                        [f.op(name, self.tuples[a, i][:, None], self.tuples[e, i][None, :])
                         for i, f in enumerate(self.factors)],
                        axis=-1,
                    )
                if not np.all(self.contains(comps)):
                    return False
        return True


class ViewAlgebra(FiniteAlgebra):
    """A lazily evaluated subalgebra or quotient of ``parent``.

    ``to_parent[i]`` is a parent element representing ``i``; ``from_parent``
    maps parent elements back (positions for subalgebras, block ids for quotients).
    """

    def __init__(self, parent: FiniteAlgebra, to_parent, from_parent, name: str = ""):
        to_parent = _as_index(to_parent)
        super().__init__(parent.kind, to_parent.shape[0], name)
        self.parent = parent
        self.to_parent = to_parent
        self.from_parent = _as_index(from_parent)

    def op(self, name: str, *args):
        return self.from_parent[self.parent.op(name, *(self.to_parent[_as_index(a)] for a in args))]


def _chunks(n: int):
    """Row slices of an ``n x n`` evaluation, each at most CHUNK entries."""
    step = max(1, CHUNK // max(1, n))
    for start in range(0, n, step):
        yield slice(start, min(n, start + step))


def _inverse_from_mul(mul: np.ndarray) -> np.ndarray:
    rows, cols = np.nonzero(mul == 0)
    inv = np.full(mul.shape[0], -1, dtype=np.int64)
    inv[rows] = cols
    return inv


def _divisions_from_mul(mul: np.ndarray):
    """ldiv[x, y] solves x*z = y; rdiv[x, y] solves z*y = x (Latin square assumed)."""
    n = mul.shape[0]
    e = np.arange(n)
    ldiv = np.empty((n, n), dtype=np.int64)
    rdiv = np.empty((n, n), dtype=np.int64)
    ldiv[e[:, None], mul] = e[None, :]
    rdiv[mul, e[None, :]] = e[:, None]
    return ldiv, rdiv


def _first_bad(mask: np.ndarray):
    return np.argwhere(mask)[0]


def _as_array(raw) -> np.ndarray:
    try:
        return np.asarray(raw)
    except ValueError as exc:
        raise InvalidTable("table rows have unequal lengths") from exc


def validate(kind: str, raw_tables: dict, name: str = "") -> TableAlgebra:
    """Check the tables of a group or loop and return the validated algebra.

    Missing divisions of a loop are derived from its Latin square; a group's
    inverse is derived from its unit.
    """
    if kind not in KINDS:
        raise SignatureMismatch(f"unknown kind {kind!r}")
    if "mul" not in raw_tables:
        raise InvalidTable("a multiplication table is required")
    tables = {}
    mul = _as_array(raw_tables["mul"])
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise InvalidTable("mul must be a non-empty square table")
    n = mul.shape[0]
    for key, raw in raw_tables.items():
        arr = _as_array(raw)
        if key not in OP_ARITY:
            raise InvalidTable(f"unknown operation {key!r}")
        if (key == "inv" and kind != "group"):
            raise SignatureMismatch("inv is only part of the group signature")
        want = (n,) if OP_ARITY[key] == 1 else (n, n)
        if arr.shape != want:
            raise InvalidTable(f"{key} has shape {arr.shape}, expected {want}")
        if not np.issubdtype(arr.dtype, np.integer):
            raise InvalidTable(f"{key} entries must be integers")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise InvalidTable(f"{key} has entries outside 0..{n - 1}")
        tables[key] = arr.astype(np.int64)
    mul = tables["mul"]
    e = np.arange(n)
    if not (np.array_equal(mul[0], e) and np.array_equal(mul[:, 0], e)):
        raise NoUnit("element 0 is not a two-sided unit of mul")
    sorted_rows = np.sort(mul, axis=1)
    sorted_cols = np.sort(mul, axis=0)
    if not (np.all(sorted_rows == e[None, :]) and np.all(sorted_cols == e[:, None])):
        bad_rows = np.nonzero(np.any(sorted_rows != e[None, :], axis=1))[0]
        where = f"row {int(bad_rows[0])}" if bad_rows.size else "some column"
        raise NotLatinSquare(f"mul is not a Latin square ({where} repeats an entry)")
    if kind == "group":
        for i in range(n):
            lhs = mul[mul[i][:, None], e[None, :]]
            rhs = mul[i][mul]
            if not np.array_equal(lhs, rhs):
                j, k = _first_bad(lhs != rhs)
                raise NotAssociative((i, j, k))
        inv = _inverse_from_mul(mul)
        if "inv" in tables and not np.array_equal(tables["inv"], inv):
            x = int(np.nonzero(tables["inv"] != inv)[0][0])
            raise AxiomViolation("x*inv(x)=1", (x,))
        tables["inv"] = inv
        for key, derived in (("ldiv", mul[inv[:, None], e[None, :]]), ("rdiv", mul[e[:, None], inv[None, :]])):
            if key in tables and not np.array_equal(tables[key], derived):
                raise AxiomViolation(f"{key} agrees with inverse", _first_bad(tables[key] != derived))
            tables[key] = derived
    else:
        ldiv, rdiv = _divisions_from_mul(mul)
        tables.setdefault("ldiv", ldiv)
        tables.setdefault("rdiv", rdiv)
        check_loop_axioms(tables)
    return TableAlgebra(kind, tables, name)


def check_loop_axioms(tables: dict) -> None:
    mul, ldiv, rdiv = tables["mul"], tables["ldiv"], tables["rdiv"]
    n = mul.shape[0]
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    checks = (
        ("y = x*(x\\y)", mul[x, ldiv[x, y]], y),
        ("y = x\\(x*y)", ldiv[x, mul[x, y]], y),
        ("x = (x/y)*y", mul[rdiv[x, y], y], x),
        ("x = (x*y)/y", rdiv[mul[x, y], y], x),
    )
    for axiom, lhs, rhs in checks:
        bad = lhs != np.broadcast_to(rhs, lhs.shape)
        if np.any(bad):
            raise AxiomViolation(axiom, _first_bad(bad))


def as_loop(A: FiniteAlgebra, name: str | None = None) -> TableAlgebra:
    """The loop underlying a group (or a copy of a loop)."""
    tables = {k: A.table(k) for k in ("mul", "ldiv", "rdiv")}
    return TableAlgebra("loop", tables, A.name if name is None else name)


def trivial_algebra(kind: str) -> TableAlgebra:
    return validate(kind, {"mul": [[0]]}, name="1")


def is_associative(A: FiniteAlgebra) -> bool:
    mul = A.table("mul")
    e = np.arange(A.order)
    for i in range(A.order):
        if not np.array_equal(mul[mul[i][:, None], e[None, :]], mul[i][mul]):
            return False
    return True


# ---------------------------------------------------------------------------
# Homomorphisms


class Homomorphism:
    """A map between carriers; ``check()`` verifies it commutes with the operations."""

    def __init__(self, src: FiniteAlgebra, dst: FiniteAlgebra, mapping, check: bool = False):
        self.src = src
        self.dst = dst
        self.map = _as_index(mapping)
        if self.map.shape != (src.order,):
            raise InvalidTable("homomorphism map has the wrong length")
        if src.order and (self.map.min() < 0 or self.map.max() >= dst.order):
            raise InvalidTable("homomorphism map leaves the target carrier")
        self._surjective = None
        self._injective = None
        if check and not self.check():
            raise InvariantBroken("map does not commute with the operations")

    @property
    def surjective(self) -> bool:
        if self._surjective is None:
            self._surjective = np.unique(self.map).size == self.dst.order
        return self._surjective

    @property
    def injective(self) -> bool:
        if self._injective is None:
            self._injective = np.unique(self.map).size == self.src.order
        return self._injective

    def __call__(self, x):
        return self.map[_as_index(x)]

    def image(self) -> np.ndarray:
        return np.unique(self.map)

    def check(self) -> bool:
        if self.src.kind != self.dst.kind or self.map[0] != 0:
            return False
        e = self.src.elements
        for name in self.src.signature:
            if OP_ARITY[name] == 1:
                if not np.array_equal(self.map[self.src.op(name, e)], self.dst.op(name, self.map)):
                    return False
                continue
            for chunk in _chunks(self.src.order):
                a = e[chunk][:, None]
                lhs = self.map[self.src.op(name, a, e[None, :])]
                rhs = self.dst.op(name, self.map[a], self.map[None, :])
                if not np.array_equal(lhs, rhs):
                    return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, Homomorphism)
            and self.src is other.src
            and self.dst is other.dst
            and np.array_equal(self.map, other.map)
        )

    __hash__ = None

    def __repr__(self):
        return f"Homomorphism({self.src!r} -> {self.dst!r})"


def identity(A: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(A, A, A.elements)


def compose(g: Homomorphism, f: Homomorphism) -> Homomorphism:
    """``g after f``."""
    if f.dst is not g.src:
        raise InvariantBroken("maps are not composable")
    return Homomorphism(f.src, g.dst, g.map[f.map])


# ---------------------------------------------------------------------------
# Congruences and ideals


def _canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Relabel blocks 0, 1, 2, ... by first appearance (so the unit's block is 0)."""
    labels = _as_index(labels)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(first.size)
    return rank[inverse.ravel()]


class Congruence:
    """A compatible partition of ``parent``'s carrier, stored as block ids."""

    def __init__(self, parent: FiniteAlgebra, labels):
        self.parent = parent
        self.labels = _canonical_labels(labels)
        if self.labels.shape != (parent.order,):
            raise InvalidTable("congruence labels have the wrong length")
        self.nblocks = int(self.labels.max()) + 1 if parent.order else 0

    @property
    def blocks(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(np.bincount(self.labels, minlength=self.nblocks))[:-1]
        return np.split(order, bounds)

    def one_class(self) -> np.ndarray:
        return np.nonzero(self.labels == 0)[0]

    def related(self, a, b):
        return self.labels[_as_index(a)] == self.labels[_as_index(b)]

    def is_discrete(self) -> bool:
        return self.nblocks == self.parent.order

    def is_compatible(self) -> bool:
        A, lab = self.parent, self.labels
        e = A.elements
        # Block-level well-definedness: the label of f(a, c) depends only on the labels of a and c.
        for name in A.signature:
            if OP_ARITY[name] == 1:
                vals = lab[A.op(name, e)]
                ref = np.full(self.nblocks, -1)
                ref[lab] = vals
                if not np.array_equal(ref[lab], vals):
                    return False
                continue
            vals = lab[A.table(name) if A.order <= 4096 else A.op(name, e[:, None], e[None, :])]
            key = lab[:, None] * self.nblocks + lab[None, :]
            ref = np.full(self.nblocks * self.nblocks, -1)
            ref[key.ravel()] = vals.ravel()
            if not np.array_equal(ref[key], vals):
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, Congruence) and self.parent is other.parent and np.array_equal(self.labels, other.labels)

    __hash__ = None

    def __repr__(self):
        return f"Congruence({self.nblocks} blocks on {self.parent!r})"


def discrete_congruence(A: FiniteAlgebra) -> Congruence:
    return Congruence(A, A.elements)


class Ideal:
    """A normal subobject: the unit class of its witnessing congruence."""

    def __init__(self, parent: FiniteAlgebra, witness: Congruence, members=None):
        if witness.parent is not parent:
            raise InvariantBroken("witness congruence lives on another algebra")
        self.parent = parent
        self.witness = witness
        self.members = witness.one_class() if members is None else np.sort(_as_index(members))
        self._algebra = None

    @classmethod
    def from_congruence(cls, c: Congruence) -> "Ideal":
        return cls(c.parent, c)

    def __len__(self):
        return int(self.members.size)

    def __contains__(self, x):
        return bool(self.witness.labels[int(x)] == 0)

    def member_set(self) -> frozenset:
        return frozenset(int(v) for v in self.members)

    def is_trivial(self) -> bool:
        return self.members.size == 1

    def is_full(self) -> bool:
        return self.members.size == self.parent.order

    def subalgebra(self):
        """The ideal as an algebra in its own right, with its embedding."""
        if self._algebra is None:
            self._algebra = subalgebra(self.parent, self.members)
        return self._algebra

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.parent is other.parent and np.array_equal(self.members, other.members)

    def __le__(self, other):
        return self.parent is other.parent and bool(np.all(np.isin(self.members, other.members)))

    def __hash__(self):
        return hash((id(self.parent), self.members.tobytes()))

    def __repr__(self):
        shown = ",".join(str(int(v)) for v in self.members[:12])
        more = ",..." if self.members.size > 12 else ""
        return f"Ideal({{{shown}{more}}} of {self.parent!r})"


# Congruence generation ------------------------------------------------------


def generators(A: FiniteAlgebra) -> np.ndarray:
    """A small generating set of a group-kind algebra, chosen greedily by index."""
    if "generators" in A.cache:
        return A.cache["generators"]
    gens: list[int] = []
    mask = np.zeros(A.order, dtype=bool)
    mask[0] = True
    while not mask.all():
        g = int(np.argmin(mask))
        gens.append(g)
        mask = _subgroup_closure(A, np.array(gens), mask, new=np.array([g]))
    result = np.array(gens, dtype=np.int64)
    A.cache["generators"] = result
    return result


def _subgroup_closure(A, gens, mask, new=None):
    """Close ``mask`` (already a subgroup, or {1}) under right multiplication by ``gens``."""
    mask = mask.copy()
    frontier = np.nonzero(mask)[0]
    while frontier.size:
        prod = A.op("mul", frontier[:, None], gens[None, :]).ravel()
        prod = np.unique(prod[~mask[prod]])
        mask[prod] = True
        frontier = prod
    return mask


def _normal_closure(A: FiniteAlgebra, seeds) -> np.ndarray:
    """Normal subgroup generated by ``seeds`` (boolean mask)."""
    gens_a = generators(A)
    mask = np.zeros(A.order, dtype=bool)
    mask[0] = True
    ngens: list[int] = []
    pending = np.unique(_as_index(seeds))
    while True:
        pending = pending[~mask[pending]]
        if pending.size == 0:
            if not ngens:
                break
            t = np.array(ngens)
            g = gens_a[:, None]
            conj = A.op("mul", A.op("mul", g, t[None, :]), A.op("inv", g)).ravel()
            pending = np.unique(conj[~mask[conj]])
            if pending.size == 0:
                break
            continue
        s = int(pending[0])
        ngens.append(s)
        mask = _subgroup_closure(A, np.array(ngens), mask)
    return mask


def _coset_labels(A: FiniteAlgebra, mask: np.ndarray) -> np.ndarray:
    """Left cosets ``xN`` of a normal subgroup, labelled by their least element."""
    members = np.nonzero(mask)[0]
    n = A.order
    if n * members.size <= 4 * CHUNK:
        return A.op("mul", A.elements[:, None], members[None, :]).min(axis=1)
    labels = np.full(n, -1, dtype=np.int64)
    while True:
        free = np.nonzero(labels < 0)[0]
        if free.size == 0:
            return labels
        x = free[0]
        labels[A.op("mul", x, members)] = x


def _merge(rep: np.ndarray, u: np.ndarray, v: np.ndarray):
    """Join the classes of ``u[i]`` and ``v[i]``; returns new representatives and star edges.

    Every class is represented by its least element.
    """
    ru, rv = rep[u], rep[v]
    keep = ru != rv
    if not np.any(keep):
        return rep, None
    n = rep.size
    ru, rv = ru[keep], rv[keep]
    e = np.arange(n)
    if ru.size <= SMALL_MERGE and n <= 4 * SMALL_MERGE:
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in zip(ru.tolist(), rv.tolist()):
            a, b = find(a), find(b)
            if a != b:
                parent[max(a, b)] = min(a, b)
        roots = np.array([find(x) for x in range(n)], dtype=np.int64)
        new_rep = roots[rep]
    else:
        rows = np.concatenate([e, ru])
        cols = np.concatenate([rep, rv])
        graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
        _, comp = connected_components(graph, directed=False)
        least = np.full(comp.max() + 1, n, dtype=np.int64)
        np.minimum.at(least, comp, e)
        new_rep = least[comp]
    old_roots = np.nonzero(rep == e)[0]
    moved = old_roots[new_rep[old_roots] != old_roots]
    return new_rep, (moved, new_rep[moved])


def _congruence_closure(A: FiniteAlgebra, a, b) -> np.ndarray:
    """Least congruence containing the pairs ``(a[i], b[i])`` (generic union-find fixpoint)."""
    n = A.order
    rep = np.arange(n, dtype=np.int64)
    rep, edges = _merge(rep, _as_index(a), _as_index(b))
    ctx = A.elements
    while edges is not None and not np.all(rep == 0):
        src, dst = edges
        us, vs = [], []
        step = max(1, CHUNK // max(1, n))
        for start in range(0, src.size, step):
            s = src[start:start + step]
            d = dst[start:start + step]
            for name in A.signature:
                if OP_ARITY[name] == 1:
                    us.append(A.op(name, s))
                    vs.append(A.op(name, d))
                    continue
                for left in (True, False):
                    if left:
                        u = A.op(name, s[:, None], ctx[None, :])
                        v = A.op(name, d[:, None], ctx[None, :])
                    else:
                        u = A.op(name, ctx[None, :], s[:, None])
                        v = A.op(name, ctx[None, :], d[:, None])
                    ru, rv = rep[u.ravel()], rep[v.ravel()]
                    diff = ru != rv
                    if np.any(diff):
                        pairs = np.unique(ru[diff] * n + rv[diff])
                        us.append(pairs // n)
                        vs.append(pairs % n)
        if not us:
            break
        rep, edges = _merge(rep, np.concatenate(us), np.concatenate(vs))
    return rep


def congruence_generated(A: FiniteAlgebra, seed: Iterable = ()) -> Congruence:
    """The least congruence on ``A`` containing the given element pairs."""
    pairs = np.asarray(list(seed) if not isinstance(seed, np.ndarray) else seed, dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= A.order):
        raise InvalidTable("seed pair outside the carrier")
    if pairs.shape[0] == 0:
        return discrete_congruence(A)
    if A.kind == "group":
        diffs = A.op("ldiv", pairs[:, 0], pairs[:, 1])
        return Congruence(A, _coset_labels(A, _normal_closure(A, diffs)))
    return Congruence(A, _congruence_closure(A, pairs[:, 0], pairs[:, 1]))


def ideal_closure(A: FiniteAlgebra, S=()) -> Ideal:
    """The least ideal of ``A`` containing ``S``."""
    S = np.unique(_as_index(list(S) if not isinstance(S, np.ndarray) else S))
    S = S[S != 0]
    if S.size == 0:
        return Ideal(A, discrete_congruence(A))
    if A.kind == "group":
        mask = _normal_closure(A, S)
        return Ideal(A, Congruence(A, _coset_labels(A, mask)), np.nonzero(mask)[0])
    return Ideal(A, Congruence(A, _congruence_closure(A, S, np.zeros_like(S))))


def trivial_ideal(A: FiniteAlgebra) -> Ideal:
    return Ideal(A, discrete_congruence(A))


def full_ideal(A: FiniteAlgebra) -> Ideal:
    return Ideal(A, Congruence(A, np.zeros(A.order, dtype=np.int64)))


def is_ideal(A: FiniteAlgebra, S) -> bool:
    S = np.unique(_as_index(S))
    return np.array_equal(ideal_closure(A, S).members, S) and (S.size > 0 and S[0] == 0)


# Subalgebras and quotients --------------------------------------------------


def subalgebra(A: FiniteAlgebra, members):
    """The subalgebra on ``members`` (closed, containing 1) with its embedding."""
    members = np.unique(_as_index(members))
    if members.size == 0 or members[0] != 0:
        raise InvariantBroken("a subalgebra must contain the unit")
    if members.size == A.order:
        return A, identity(A)
    if isinstance(A, EmbeddedAlgebra):
        B = EmbeddedAlgebra(A.kind, A.factors, A.tuples[members], name=f"sub({A.name})")
    else:
        pos = np.full(A.order, -1, dtype=np.int64)
        pos[members] = np.arange(members.size)
        if isinstance(A, TableAlgebra) or members.size <= DENSE_LIMIT:
            tables = {}
            for name in A.signature:
                if OP_ARITY[name] == 1:
                    t = pos[A.op(name, members)]
                else:
                    t = pos[A.op(name, members[:, None], members[None, :])]
                if np.any(t < 0):
                    raise InvariantBroken("subset is not closed under the operations")
                tables[name] = t
            B = TableAlgebra(A.kind, tables, name=f"sub({A.name})")
        else:
            B = ViewAlgebra(A, members, pos, name=f"sub({A.name})")
    return B, Homomorphism(B, A, members)


def quotient(A: FiniteAlgebra, c: Congruence):
    """Quotient algebra on block ids with its canonical projection."""
    if c.parent is not A:
        raise InvariantBroken("congruence belongs to another algebra")
    if c.is_discrete():
        return A, identity(A)
    k = c.nblocks
    _, reps = np.unique(c.labels, return_index=True)
    if k <= DENSE_LIMIT or isinstance(A, TableAlgebra):
        tables = {}
        for name in A.signature:
            if OP_ARITY[name] == 1:
                tables[name] = c.labels[A.op(name, reps)]
            else:
                tables[name] = c.labels[A.op(name, reps[:, None], reps[None, :])]
        Q = TableAlgebra(A.kind, tables, name=f"{A.name}/~")
        if k ** 3 <= 10**6:
            _check_kind(Q)
    else:
        Q = ViewAlgebra(A, reps, c.labels, name=f"{A.name}/~")
    return Q, Homomorphism(A, Q, c.labels)


def _check_kind(Q: TableAlgebra) -> None:
    """Quotients of groups are groups and of loops are loops; verified on small tables."""
    raw = {"mul": Q.table("mul")}
    if Q.kind == "loop":
        raw["ldiv"] = Q.table("ldiv")
        raw["rdiv"] = Q.table("rdiv")
    else:
        raw["inv"] = Q.table("inv")
    validate(Q.kind, raw)


def quotient_by_ideal(J: Ideal):
    return quotient(J.parent, J.witness)


def image_ideal(f: Homomorphism, J: Ideal) -> Ideal:
    """Image of an ideal under a surjection (an ideal of the target; verified)."""
    img = np.unique(f.map[J.members])
    I = ideal_closure(f.dst, img)
    if not np.array_equal(I.members, img):
        raise InvariantBroken("image of an ideal under a surjection is not an ideal")
    return I


def restrict_ideal(J: Ideal, emb: Homomorphism) -> Ideal:
    """``J`` viewed inside a subalgebra containing it (``emb`` is the embedding)."""
    B = emb.src
    pos = np.full(J.parent.order, -1, dtype=np.int64)
    pos[emb.map] = np.arange(B.order)
    inside = pos[J.members]
    if np.any(inside < 0):
        raise InvariantBroken("ideal is not contained in the subalgebra")
    I = ideal_closure(B, inside)
    if not np.array_equal(I.members, np.sort(inside)):
        raise InvariantBroken("restricted set is not an ideal of the subalgebra")
    return I


def lift_members(J: Ideal, emb: Homomorphism) -> np.ndarray:
    """Members of an ideal of a subalgebra, as elements of the ambient algebra."""
    return np.sort(emb.map[J.members])


def product_ideal(M: Ideal, N: Ideal) -> Ideal:
    """The ideal ``M.N = {mn}``; checked against the join of ``M`` and ``N``."""
    if M.parent is not N.parent:
        raise InvariantBroken("ideals of different algebras")
    A = M.parent
    raw = np.unique(A.op("mul", M.members[:, None], N.members[None, :]))
    join = ideal_closure(A, np.concatenate([M.members, N.members]))
    if not np.array_equal(raw, join.members):
        raise InvariantBroken("elementwise product differs from the join of the ideals")
    return join


def meet(M: Ideal, N: Ideal) -> Ideal:
    common = np.intersect1d(M.members, N.members)
    labels = M.witness.labels * N.witness.nblocks + N.witness.labels
    return Ideal(M.parent, Congruence(M.parent, labels), common)


# Kernels, kernel pairs, pullbacks -------------------------------------------


def kernel(f: Homomorphism) -> Ideal:
    return Ideal(f.src, Congruence(f.src, f.map))


class PairAlgebra(EmbeddedAlgebra):
    """A subalgebra of ``D x C`` with its two projections."""

    def __init__(self, left: FiniteAlgebra, right: FiniteAlgebra, pairs, name: str = ""):
        if left.kind != right.kind:
            raise SignatureMismatch("pair algebra of different kinds")
        super().__init__(left.kind, (left, right), pairs, name)
        self.proj0 = Homomorphism(self, left, self.tuples[:, 0])
        self.proj1 = Homomorphism(self, right, self.tuples[:, 1])

    @property
    def pairs(self) -> np.ndarray:
        return self.tuples


def kernel_pair(f: Homomorphism) -> PairAlgebra:
    pairs = np.argwhere(f.map[:, None] == f.map[None, :])
    return PairAlgebra(f.src, f.src, pairs, name=f"R[{f.src.name}]")


def pullback(f: Homomorphism, g: Homomorphism) -> PairAlgebra:
    """``{(d, c) | f(d) = g(c)}`` for ``f: D -> Z`` and ``g: C -> Z``."""
    if f.dst is not g.dst:
        raise NonCommutingSquare("pullback of maps with different codomains")
    pairs = np.argwhere(f.map[:, None] == g.map[None, :])
    return PairAlgebra(f.src, g.src, pairs, name="pullback")


def is_pullback_square(top: Homomorphism, left: Homomorphism, right: Homomorphism, bottom: Homomorphism) -> bool:
    """Whether the square ``right . top = bottom . left`` is a pullback.

    ``top: P -> B``, ``left: P -> C``, ``right: B -> D``, ``bottom: C -> D``.
    """
    if top.src is not left.src or top.dst is not right.src or left.dst is not bottom.src or right.dst is not bottom.dst:
        raise NonCommutingSquare("maps do not form a square")
    if not np.array_equal(right.map[top.map], bottom.map[left.map]):
        raise NonCommutingSquare("square does not commute")
    P = top.src
    codes = top.map * left.dst.order + left.map
    if np.unique(codes).size != P.order:
        return False
    d = right.dst.order
    size = int(np.dot(np.bincount(right.map, minlength=d), np.bincount(bottom.map, minlength=d)))
    return size == P.order


# Homomorphism enumeration ----------------------------------------------------


def _spanning_words(A: FiniteAlgebra, gens: np.ndarray):
    """Express every element from ``gens`` by a BFS tree of operations.

    Returns a list of ``(element, op, left, right)`` steps in dependency order.
    """
    known = np.zeros(A.order, dtype=bool)
    known[0] = True
    known[gens] = True
    steps = []
    frontier = list(dict.fromkeys([0] + [int(g) for g in gens]))
    ops = ("mul", "ldiv", "rdiv")
    have = list(frontier)
    while not known.all():
        grown = False
        for name in ops:
            h = np.array(have)
            vals = A.op(name, h[:, None], h[None, :])
            new_mask = ~known[vals]
            if np.any(new_mask):
                for i, j in np.argwhere(new_mask):
                    v = int(vals[i, j])
                    if not known[v]:
                        known[v] = True
                        steps.append((v, name, int(h[i]), int(h[j])))
                        have.append(v)
                        grown = True
        if not grown:
            raise InvariantBroken("generating set does not generate")
    return steps


def loop_generators(A: FiniteAlgebra) -> np.ndarray:
    """A greedy generating set valid for either kind (closure under mul and divisions)."""
    if "loop_generators" in A.cache:
        return A.cache["loop_generators"]
    gens: list[int] = []
    mask = np.zeros(A.order, dtype=bool)
    mask[0] = True
    while not mask.all():
        g = int(np.argmin(mask))
        gens.append(g)
        mask = _subloop_closure(A, np.nonzero(mask | (np.arange(A.order) == g))[0])
    out = np.array(gens, dtype=np.int64)
    A.cache["loop_generators"] = out
    return out


def _subloop_closure(A: FiniteAlgebra, seeds) -> np.ndarray:
    mask = np.zeros(A.order, dtype=bool)
    mask[0] = True
    mask[_as_index(seeds)] = True
    while True:
        h = np.nonzero(mask)[0]
        new = np.concatenate([A.op(name, h[:, None], h[None, :]).ravel() for name in ("mul", "ldiv", "rdiv")])
        if mask[new].all():
            return mask
        mask[new] = True


def homomorphisms(A: FiniteAlgebra, C: FiniteAlgebra, surjective: bool = False) -> list[Homomorphism]:
    """All homomorphisms ``A -> C`` (optionally only surjective ones)."""
    if A.kind != C.kind:
        raise SignatureMismatch("homomorphisms between different kinds")
    gens = loop_generators(A)
    steps = _spanning_words(A, gens)
    g = gens.size
    # every assignment of generator images, evaluated simultaneously
    grid = np.stack(np.meshgrid(*([C.elements] * g), indexing="ij"), axis=-1).reshape(-1, g) if g else np.zeros((1, 0), dtype=np.int64)
    img = np.zeros((grid.shape[0], A.order), dtype=np.int64)
    img[:, gens] = grid
    for v, name, i, j in steps:
        img[:, v] = C.op(name, img[:, i], img[:, j])
    ok = np.ones(grid.shape[0], dtype=bool)
    e = A.elements
    for name in A.signature:
        if OP_ARITY[name] == 1:
            ok &= np.all(img[:, A.op(name, e)] == C.op(name, img), axis=1)
            continue
        tab = A.table(name)
        for a in range(A.order):
            ok &= np.all(img[:, tab[a]] == C.op(name, img[:, [a]], img), axis=1)
    maps = img[ok]
    if surjective:
        maps = np.array([m for m in maps if np.unique(m).size == C.order], dtype=np.int64).reshape(-1, A.order)
    return [Homomorphism(A, C, m) for m in maps]
