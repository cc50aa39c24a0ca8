"""Independent brute-force oracles over plain Python lists.

Nothing here calls into the library except to read tables, so agreement
with the library is a genuine cross-check.
"""

from itertools import permutations, product


def tables_of(A):
    """Plain nested lists for every operation of ``A``."""
    return {name: A.table(name).tolist() for name in A.signature}


def rdiv(mul, a, b):
    """The unique x with x*b == a."""
    return next(x for x in range(len(mul)) if mul[x][b] == a)


def ldiv(mul, a, b):
    """The unique x with a*x == b."""
    return next(x for x in range(len(mul)) if mul[a][x] == b)


def set_partitions(n):
    """Every partition of range(n) as a label list, in restricted-growth form."""
    def grow(prefix, top):
        if len(prefix) == n:
            yield list(prefix)
            return
        for label in range(top + 2):
            yield from grow(prefix + [label], max(top, label))

    if n == 0:
        yield []
        return
    yield from grow([0], 0)


def is_compatible(tables, labels):
    n = len(labels)
    for name, tab in tables.items():
        if isinstance(tab[0], list):
            seen = {}
            for a in range(n):
                for b in range(n):
                    key = (labels[a], labels[b])
                    val = labels[tab[a][b]]
                    if seen.setdefault(key, val) != val:
                        return False
        else:
            seen = {}
            for a in range(n):
                if seen.setdefault(labels[a], labels[tab[a]]) != labels[tab[a]]:
                    return False
    return True


def all_congruences(tables):
    n = len(tables["mul"])
    return [p for p in set_partitions(n) if is_compatible(tables, p)]


def least_congruence(tables, pairs):
    """The finest compatible partition relating every given pair."""
    best = None
    for p in all_congruences(tables):
        if all(p[a] == p[b] for a, b in pairs):
            if best is None or finer(p, best):
                best = p
    return best


def finer(p, q):
    return all(q[a] == q[b] for a in range(len(p)) for b in range(len(p)) if p[a] == p[b])


def unit_class(labels):
    return frozenset(i for i, v in enumerate(labels) if v == labels[0])


def all_ideals(tables):
    """Unit classes of all congruences."""
    return sorted({unit_class(p) for p in all_congruences(tables)}, key=lambda s: (len(s), sorted(s)))


def closure(mul, seeds, extra=()):
    """Subset closed under mul and the given extra binary operations."""
    s = set(seeds) | {0}
    ops = [lambda a, b: mul[a][b]] + list(extra)
    while True:
        new = {op(a, b) for op in ops for a in s for b in s} - s
        if not new:
            return frozenset(s)
        s |= new


def group_inverse(mul, a):
    return next(x for x in range(len(mul)) if mul[a][x] == 0)


def subgroup(mul, seeds):
    # finite: closure under multiplication is already a subgroup
    return closure(mul, seeds)


def normal_closure(mul, seeds):
    n = len(mul)
    s = set(seeds) | {0}
    while True:
        conj = {mul[mul[g][x]][group_inverse(mul, g)] for g in range(n) for x in s}
        H = subgroup(mul, s | conj)
        if H == s:
            return frozenset(s)
        s = set(H)


def classical_commutator(mul, M, N):
    """Subgroup generated by m n m^-1 n^-1; normal when M and N are."""
    inv = [group_inverse(mul, a) for a in range(len(mul))]
    return subgroup(mul, {mul[mul[mul[m][n]][inv[m]]][inv[n]] for m in M for n in N})


def normal_subgroups(mul):
    n = len(mul)
    found = set()
    for a in range(n):
        for b in range(n):
            found.add(normal_closure(mul, {a, b}))
    # joins of pairs cover the rest at these orders
    while True:
        more = {normal_closure(mul, x | y) for x in found for y in found} - found
        if not more:
            return found
        found |= more


def associator_value(mul, x, y, z):
    """The element u with (xy)z = u(x(yz))."""
    return rdiv(mul, mul[mul[x][y]][z], mul[x][mul[y][z]])


def loop_ideal_generated(tables, seeds):
    """Unit class of the least congruence relating every seed to the unit."""
    return unit_class(least_congruence(tables, [(s, 0) for s in seeds]))


def associator_ideal(tables, L, M, N, within):
    """Least normal subloop of ``within`` containing all [l, m, n] in every order."""
    mul = tables["mul"]
    seeds = set()
    for a, b, c in product(L, M, N):
        for x, y, z in set(permutations((a, b, c))):
            seeds.add(associator_value(mul, x, y, z))
    # ideal of the subloop ``within``: congruence closure on that subloop
    members = sorted(within)
    pos = {v: i for i, v in enumerate(members)}
    sub = {
        name: [[pos[tab[a][b]] for b in members] for a in members]
        for name, tab in tables.items()
    }
    return frozenset(members[i] for i in loop_ideal_generated(sub, [pos[s] for s in seeds]))


def is_associative(mul):
    n = len(mul)
    return all(mul[mul[a][b]][c] == mul[a][mul[b][c]] for a in range(n) for b in range(n) for c in range(n))


def count_reduced_latin_squares(n):
    """Row-by-row: each row after the first is a permutation starting with its index."""
    if n == 1:
        return 1
    rest = [p for p in permutations(range(n)) if p[0] != 0]
    count = 0

    def place(row, used_cols):
        nonlocal count
        if row == n:
            count += 1
            return
        for p in rest:
            if p[0] != row:
                continue
            if any(p[c] in used_cols[c] for c in range(n)):
                continue
            for c in range(n):
                used_cols[c].add(p[c])
            place(row + 1, used_cols)
            for c in range(n):
                used_cols[c].discard(p[c])

    place(1, [{c} for c in range(n)])
    return count
