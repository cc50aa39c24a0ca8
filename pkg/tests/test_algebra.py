import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_ideals, least_congruence, normal_subgroups, tables_of, unit_class
from relcomm.algebra import (
    Congruence,
    Homomorphism,
    compose,
    congruence_generated,
    full_ideal,
    homomorphisms,
    ideal_closure,
    identity,
    is_ideal,
    is_pullback_square,
    kernel,
    kernel_pair,
    meet,
    product_ideal,
    pullback,
    quotient,
    quotient_by_ideal,
    subalgebra,
    trivial_algebra,
    trivial_ideal,
    validate,
)
from relcomm.commutators import ideal_lattice
from relcomm.corpus import bundled, cyclic
from relcomm.errors import (
    AxiomViolation,
    InvalidTable,
    NoUnit,
    NonCommutingSquare,
    NotAssociative,
    NotLatinSquare,
    SignatureMismatch,
)
from samples import groups, loops, small


def test_validate_z2():
    A = validate("group", {"mul": [[0, 1], [1, 0]]})
    assert A.order == 2
    assert A.table("inv").tolist() == [0, 1]


def test_validate_rejects_missing_unit():
    with pytest.raises(NoUnit):
        validate("group", {"mul": [[1, 0], [0, 1]]})


def test_validate_rejects_repeated_row():
    with pytest.raises(NotLatinSquare):
        validate("loop", {"mul": [[0, 1, 2], [1, 1, 0], [2, 0, 1]]})


def test_validate_rejects_nonassociative_group(l5):
    with pytest.raises(NotAssociative):
        validate("group", {"mul": l5.table("mul")})


def test_validate_rejects_wrong_division(l5):
    bad = l5.table("ldiv").copy()
    bad[[1, 2]] = bad[[2, 1]]
    with pytest.raises(AxiomViolation):
        validate("loop", {"mul": l5.table("mul"), "ldiv": bad, "rdiv": l5.table("rdiv")})


def test_validate_rejects_wrong_inverse():
    with pytest.raises(AxiomViolation):
        validate("group", {"mul": cyclic(3), "inv": [0, 1, 2]})


def test_validate_rejects_shapes_and_entries():
    with pytest.raises(InvalidTable):
        validate("group", {"mul": [[0, 1], [1]]})
    with pytest.raises(InvalidTable):
        validate("group", {"mul": [[0, 1], [1, 2]]})
    with pytest.raises(InvalidTable):
        validate("group", {"mul": [[0.0, 1.0], [1.0, 0.0]]})
    with pytest.raises(SignatureMismatch):
        validate("loop", {"mul": cyclic(2), "inv": [0, 1]})
    with pytest.raises(SignatureMismatch):
        validate("ring", {"mul": cyclic(2)})


def test_derived_divisions_satisfy_loop_axioms():
    for A in loops()[:60]:
        mul, ld, rd = (A.table(k) for k in ("mul", "ldiv", "rdiv"))
        x = np.arange(A.order)[:, None]
        y = np.arange(A.order)[None, :]
        assert np.array_equal(mul[x, ld[x, y]], np.broadcast_to(y, mul.shape))
        assert np.array_equal(mul[rd[x, y], y], np.broadcast_to(x, mul.shape))


def test_s3_example(s3):
    assert s3.order == 6
    A3 = ideal_closure(s3, bundled("s3").ideals["A3"])
    assert A3.members.tolist() == [0, 1, 2]
    assert ideal_closure(s3, [3]).is_full()


def test_z4_congruence():
    A = validate("group", {"mul": cyclic(4)})
    c = congruence_generated(A, [(0, 2)])
    assert c.nblocks == 2
    assert c.labels.tolist() == [0, 1, 0, 1]


def test_ideal_lattice_sizes():
    sizes = {e: len(ideal_lattice(bundled(e).algebra())) for e in ("z2", "z4", "z2xz2", "s3", "d4", "q8", "a4")}
    assert sizes == {"z2": 2, "z4": 3, "z2xz2": 5, "s3": 3, "d4": 6, "q8": 6, "a4": 3}


def test_l5_is_simple(l5):
    assert [len(J) for J in ideal_lattice(l5)] == [1, 5]


@given(st.data())
def test_congruence_matches_brute_force(data):
    A = data.draw(st.sampled_from([B for B in small() if B.order <= 6]))
    pairs = data.draw(st.lists(st.tuples(st.integers(0, A.order - 1), st.integers(0, A.order - 1)), max_size=3))
    got = congruence_generated(A, pairs)
    want = least_congruence(tables_of(A), pairs)
    assert got.labels.tolist() == Congruence(A, want).labels.tolist()


@given(st.data())
def test_ideal_closure_matches_brute_force(data):
    A = data.draw(st.sampled_from([B for B in small() if B.order <= 6]))
    seeds = data.draw(st.lists(st.integers(0, A.order - 1), max_size=3))
    want = unit_class(least_congruence(tables_of(A), [(s, 0) for s in seeds]))
    assert ideal_closure(A, seeds).member_set() == want


def test_ideal_lattice_matches_brute_force():
    for A in [B for B in small() if B.order <= 6]:
        got = {J.member_set() for J in ideal_lattice(A)}
        assert got == set(all_ideals(tables_of(A)))


def test_group_lattice_matches_normal_subgroups():
    for A in groups():
        got = {J.member_set() for J in ideal_lattice(A)}
        assert got == normal_subgroups(A.table("mul").tolist())


@given(st.data())
def test_closure_is_a_closure_operator(data):
    A = data.draw(st.sampled_from(small()))
    S = data.draw(st.lists(st.integers(0, A.order - 1), max_size=3))
    T = data.draw(st.lists(st.integers(0, A.order - 1), max_size=3))
    cS = ideal_closure(A, S)
    assert set(S) <= cS.member_set()
    assert ideal_closure(A, cS.members) == cS
    assert cS <= ideal_closure(A, S + T)
    assert is_ideal(A, cS.members)


@given(st.data())
def test_product_ideal_is_join(data):
    A = data.draw(st.sampled_from(small()))
    lattice = ideal_lattice(A)
    M = data.draw(st.sampled_from(lattice))
    N = data.draw(st.sampled_from(lattice))
    MN = product_ideal(M, N)
    assert MN == ideal_closure(A, np.concatenate([M.members, N.members]))
    mul = A.table("mul")
    assert MN.member_set() == {int(mul[m, n]) for m in M.members for n in N.members}
    common = meet(M, N)
    assert common.member_set() == M.member_set() & N.member_set()


@given(st.data())
def test_quotient_kernel_recovers_ideal(data):
    A = data.draw(st.sampled_from(small()))
    J = data.draw(st.sampled_from(ideal_lattice(A)))
    Q, q = quotient_by_ideal(J)
    assert q.check()
    assert Q.order * len(J) == A.order
    assert kernel(q) == J


@given(st.data())
def test_pullback_of_map_with_itself_is_kernel_pair(data):
    A = data.draw(st.sampled_from(small()))
    J = data.draw(st.sampled_from(ideal_lattice(A)))
    _, q = quotient_by_ideal(J)
    R = kernel_pair(q)
    P = pullback(q, q)
    assert np.array_equal(R.pairs, P.pairs)
    assert R.order == A.order * len(J)
    assert is_pullback_square(R.proj0, R.proj1, q, q)


def test_non_pullback_square_detected():
    A = bundled("z2xz2").algebra()
    one = trivial_algebra("group")
    to_one = Homomorphism(A, one, np.zeros(4, dtype=np.int64))
    # A with identities onto A over the trivial group is not a pullback (A x A is bigger)
    assert not is_pullback_square(identity(A), identity(A), to_one, to_one)
    with pytest.raises(NonCommutingSquare):
        swap = Homomorphism(A, A, [0, 2, 1, 3])
        is_pullback_square(identity(A), identity(A), swap, identity(A))


def test_subalgebra_embedding_is_homomorphism(s3):
    B, emb = subalgebra(s3, ideal_closure(s3, [1]).members)
    assert B.order == 3
    assert emb.check()
    assert compose(identity(s3), emb) == emb


def test_homomorphism_counts():
    z2 = bundled("z2").algebra()
    s3 = bundled("s3").algebra()
    z4 = bundled("z4").algebra()
    assert len(homomorphisms(s3, z2)) == 2
    assert len(homomorphisms(z4, z4)) == 4
    assert len(homomorphisms(z2, s3)) == 4
    assert len(homomorphisms(s3, s3, surjective=True)) == 6


def test_trivial_and_full_ideals():
    for A in groups():
        assert trivial_ideal(A).is_trivial()
        assert full_ideal(A).is_full()
        Q, q = quotient_by_ideal(full_ideal(A))
        assert Q.order == 1
