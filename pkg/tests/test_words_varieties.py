import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import associator_ideal, classical_commutator, normal_closure, tables_of
from relcomm.algebra import (
    EmbeddedAlgebra,
    as_loop,
    compose,
    homomorphisms,
    ideal_closure,
    is_associative,
    quotient_by_ideal,
    validate,
)
from relcomm.commutators import ideal_lattice
from relcomm.corpus import bundled, direct_product
from relcomm.errors import ArityMismatch, ParseError, SignatureMismatch
from relcomm.varieties import (
    AB,
    GP,
    BUILTIN_NAMES,
    _is_full_product,
    get_variety,
    in_subvariety,
    induced_verbal_hom,
    nil,
    reflection,
    sol,
    verbal_subobject,
)
from relcomm.words import associator, commutator, eval_word, inv, mul, parse_word, split_word, value_set, var
from samples import groups, loops, nonassociative_loops

GROUP_VARIETIES = [AB, nil(1), nil(2), nil(3), sol(1), sol(2), sol(3)]


def test_commutator_word_in_s3(s3):
    w = commutator(var(0), var(1))
    # r = 1, s = 3: [r, s] = r s r^-1 s^-1 = r^2
    assert int(eval_word(w, s3, (1, 3))) == 2
    assert int(eval_word(w, s3, (1, 2))) == 0


def test_associator_word_in_l5(l5):
    w = associator(var(0), var(1), var(2))
    vals = eval_word(w, l5, np.meshgrid(l5.elements, l5.elements, l5.elements, indexing="ij"))
    assert np.any(vals != 0)
    assert int(eval_word(w, l5, (0, 3, 4))) == 0


def test_eval_word_arity_mismatch(s3):
    with pytest.raises(ArityMismatch):
        eval_word(commutator(var(0), var(1)), s3, (1,))


def test_inv_rejected_in_loops(l5):
    with pytest.raises(SignatureMismatch):
        eval_word(inv(var(0)), l5, (1,))


def test_parse_word_round_trip():
    w = parse_word("(rdiv (mul (mul x y) z) (mul x (mul y z)))")
    assert w == associator(var(0), var(1), var(2))
    assert parse_word("(mul a 1)") == mul(var(0), parse_word("1"))


@pytest.mark.parametrize(
    "text,column",
    [("(mul x", 1), ("(pow x y)", 2), ("(mul x y z)", 2), ("x y", 3), (")", 1), ("(mul X y)", 6), ("x $", 3)],
)
def test_parse_word_errors_carry_column(text, column):
    with pytest.raises(ParseError) as err:
        parse_word(text)
    assert err.value.column == column


def test_get_variety_names():
    assert [get_variety(n).name for n in BUILTIN_NAMES] == list(BUILTIN_NAMES)
    assert get_variety("Nil2") is not None
    with pytest.raises(KeyError):
        get_variety("Nil_9")


def test_verbal_s3_ab(s3):
    assert verbal_subobject(s3, AB).members.tolist() == [0, 1, 2]


def test_verbal_l5_gp_is_everything(l5):
    assert verbal_subobject(l5, GP).is_full()
    IA, eta = reflection(l5, GP)
    assert IA.order == 1


def test_verbal_kind_mismatch(l5):
    with pytest.raises(SignatureMismatch):
        verbal_subobject(l5, AB)


def test_derived_subgroup_matches_brute_force():
    for A in groups():
        mul_t = A.table("mul").tolist()
        everything = frozenset(range(A.order))
        assert verbal_subobject(A, AB).member_set() == classical_commutator(mul_t, everything, everything)


def test_lower_central_and_derived_series():
    for A in groups():
        mul_t = A.table("mul").tolist()
        everything = frozenset(range(A.order))
        gamma = everything
        derived = everything
        for k in (1, 2, 3):
            gamma = classical_commutator(mul_t, gamma, everything)
            derived = classical_commutator(mul_t, derived, derived)
            assert verbal_subobject(A, nil(k)).member_set() == gamma
            assert verbal_subobject(A, sol(k)).member_set() == derived


def test_gp_verbal_is_associator_ideal():
    for A in nonassociative_loops()[:40]:
        everything = frozenset(range(A.order))
        want = associator_ideal(tables_of(A), everything, everything, everything, everything)
        assert verbal_subobject(A, GP).member_set() == want


def test_gp_verbal_of_group_loop_is_trivial(s3):
    assert verbal_subobject(as_loop(s3), GP).is_trivial()


@given(st.data())
def test_in_subvariety_iff_verbal_trivial(data):
    A = data.draw(st.sampled_from(groups()))
    V = data.draw(st.sampled_from(GROUP_VARIETIES))
    assert in_subvariety(A, V) == verbal_subobject(A, V).is_trivial()


def test_in_subvariety_loops():
    for A in loops()[:200]:
        assert in_subvariety(A, GP) == is_associative(A) == verbal_subobject(A, GP).is_trivial()


@given(st.data())
def test_reflection_universal_property(data):
    A = data.draw(st.sampled_from(groups()))
    V = data.draw(st.sampled_from(GROUP_VARIETIES))
    IA, eta = reflection(A, V)
    assert in_subvariety(IA, V)
    for J in ideal_lattice(A):
        C, q = quotient_by_ideal(J)
        if not in_subvariety(C, V):
            continue
        factors = [g for g in homomorphisms(IA, C) if np.array_equal(g.map[eta.map], q.map)]
        assert len(factors) == 1


@given(st.data())
def test_verbal_image_under_surjection(data):
    # surjections map verbal ideals onto verbal ideals
    A = data.draw(st.sampled_from(groups()))
    V = data.draw(st.sampled_from(GROUP_VARIETIES))
    J = data.draw(st.sampled_from(ideal_lattice(A)))
    C, q = quotient_by_ideal(J)
    image = set(q.map[verbal_subobject(A, V).members].tolist())
    assert image == verbal_subobject(C, V).member_set()


@given(st.data())
def test_induced_verbal_hom_is_functorial(data):
    A = data.draw(st.sampled_from(groups()))
    V = data.draw(st.sampled_from(GROUP_VARIETIES))
    J = data.draw(st.sampled_from(ideal_lattice(A)))
    C, q = quotient_by_ideal(J)
    K = data.draw(st.sampled_from(ideal_lattice(C)))
    D, r = quotient_by_ideal(K)
    f = induced_verbal_hom(q, V)
    g = induced_verbal_hom(r, V)
    gf = induced_verbal_hom(compose(r, q), V)
    assert f.check() and g.check()
    assert np.array_equal(gf.map, compose(g, f).map)


def test_product_shortcut_matches_generic():
    pairs = [("s3", "z2"), ("s3", "s3"), ("d4", "z2"), ("q8", "z2")]
    for a, b in pairs:
        A = bundled(a).algebra()
        B = bundled(b).algebra()
        P = EmbeddedAlgebra("group", (A, B), np.array([(x, y) for x in range(A.order) for y in range(B.order)]))
        assert _is_full_product(P)
        T = validate("group", {"mul": direct_product(A.table("mul"), B.table("mul"))})
        for V in GROUP_VARIETIES:
            # index i*|B|+j in both encodings
            assert verbal_subobject(P, V).member_set() == verbal_subobject(T, V).member_set()


def test_normal_closure_oracle_agrees_with_library():
    for A in groups():
        mul_t = A.table("mul").tolist()
        for x in range(A.order):
            assert ideal_closure(A, [x]).member_set() == normal_closure(mul_t, {x})


def _all_values(w, A):
    grids = np.meshgrid(*([A.elements] * w.arity), indexing="ij")
    return sorted(set(np.asarray(eval_word(w, A, [g.ravel() for g in grids])).tolist()))


def test_split_word_of_nested_commutator():
    w = commutator(commutator(var(0), var(1)), var(2))
    outer, parts = split_word(w)
    assert outer == commutator(var(0), var(1))
    assert parts == [commutator(var(0), var(1)), var(2)]


def test_value_set_matches_full_enumeration():
    words = [nil(2).wgen[0], sol(2).wgen[0], commutator(var(0), mul(var(0), var(1)))]
    for A in groups()[:6]:
        for w in words:
            assert value_set(w, A, 10**8).tolist() == _all_values(w, A)
    w = associator(var(0), mul(var(1), var(2)), var(0))
    for A in nonassociative_loops()[:20]:
        assert value_set(w, A, 10**8).tolist() == _all_values(w, A)
