from __future__ import annotations

import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import GROUPS, intlex_elems, laurent_elems, localized_elems, solve_agrees_with_box
from lambdatree.oag import (
    Family,
    Half,
    IntLex,
    Laurent,
    LexPair,
    LinearHom,
    Localized,
    MonomialShift,
    NoSolution,
    OagError,
    PositiveScale,
    Triangular,
    UnipotentInt,
    Unique,
    aut_from_json,
    cmp,
    compose_aut,
    descriptor_from_json,
    elem_from_json,
    identity_aut,
    invert_aut,
    is_order_preserving,
    scaling_hom,
    solve_displacement,
    zero,
)

Z2, Z3 = IntLex(2), IntLex(3)
D2, D6 = Localized(2), Localized(6)
T = Laurent()


def unip(d, rows):
    return UnipotentInt(d, rows)


# -- arithmetic examples ------------------------------------------------------


def test_add_examples():
    assert Z2(1, 2) + Z2(0, -2) == Z2(1, 0)
    assert D2.elem(Fraction(1, 4)) + D2.elem(Fraction(1, 2)) == D2.elem(Fraction(3, 4))
    assert T.elem({2: 1, 0: 1}) + T.elem({2: -1}) == T.elem({0: 1})


def test_cmp_examples():
    assert cmp(Z2(1, -100), Z2(0, 100)) == 1
    x = Z3(4, -1, 2)
    assert cmp(x, x) == 0


def test_laurent_t_beats_constants():
    t, c = T.elem({1: 1}), T.elem({0: 1000})
    assert cmp(t, c) == 1
    # oracle: the difference is eventually positive as a real polynomial
    for big in (Fraction(10**4), Fraction(10**6), Fraction(10**9)):
        assert big - 1000 > 0


@given(laurent_elems(), laurent_elems())
def test_laurent_order_matches_evaluation_at_large_t(p, q):
    diff = p - q
    value = sum(Fraction(c) * Fraction(10**6) ** d for d, c in diff.v)
    assert (value > 0) - (value < 0) == cmp(p, q)


def test_descriptor_mismatch_rejected():
    with pytest.raises(OagError):
        Z2(1, 0) + Z3(1, 0, 0)
    with pytest.raises(OagError):
        cmp(D2.elem(1), D6.elem(1))


def test_canonical_forms():
    assert D2.elem(Fraction(2, 4)).v == Fraction(1, 2)
    assert T.elem({3: 0, 1: 2}).v == ((1, 2),)
    with pytest.raises(OagError):
        D2.elem(Fraction(1, 3))
    with pytest.raises(OagError):
        IntLex(0)
    with pytest.raises(OagError):
        Localized(1)


# -- automorphism examples ----------------------------------------------------


def test_unipotent_apply_convention():
    a = unip(Z2, ((1, 1), (0, 1)))
    assert a(Z2(2, 3)) == Z2(2, 5)


def test_identity_and_shift():
    x = T.elem({0: 1, 1: 1})
    assert identity_aut(T)(x) == x
    assert MonomialShift(T, 1)(x) == T.elem({1: 1, 2: 1})


def test_compose_and_invert_examples():
    a = unip(Z2, ((1, 1), (0, 1)))
    assert invert_aut(a) == unip(Z2, ((1, -1), (0, 1)))
    assert compose_aut(MonomialShift(T, 2), MonomialShift(T, -2)) == identity_aut(T)
    b = unip(Z3, ((1, 2, 0), (0, 1, 3), (0, 0, 1)))
    c = unip(Z3, ((1, 0, 5), (0, 1, -1), (0, 0, 1)))
    bc = compose_aut(b, c)
    for i, j in itertools.product(range(3), repeat=2):
        assert bc.matrix[i][j] == sum(c.matrix[i][k] * b.matrix[k][j] for k in range(3))
    assert all(bc.matrix[i][i] == 1 for i in range(3))


def test_invalid_automorphisms():
    with pytest.raises(OagError):
        unip(Z2, ((1, 0), (1, 1)))
    with pytest.raises(OagError):
        PositiveScale(D2, Fraction(3))
    with pytest.raises(OagError):
        PositiveScale(D2, Fraction(-2))


random_unipotents = st.tuples(*[st.integers(-3, 3)] * 3).map(
    lambda t: unip(Z3, ((1, t[0], t[1]), (0, 1, t[2]), (0, 0, 1)))
)
PAIR = LexPair(IntLex(1), Localized(2))
pair_auts = st.tuples(st.integers(-3, 3), st.integers(-2, 2)).map(
    lambda t: Triangular(PAIR, identity_aut(PAIR.left), PositiveScale(PAIR.right, Fraction(2) ** t[1]), ((t[0],),))
)


@given(random_unipotents, intlex_elems(3), intlex_elems(3))
def test_unipotent_order_preserving_and_bijective(a, x, y):
    if x < y:
        assert a(x) < a(y)
    assert invert_aut(a)(a(x)) == x
    assert compose_aut(invert_aut(a), a) == identity_aut(Z3)


@given(random_unipotents, random_unipotents)
def test_unipotent_closure(a, b):
    m = compose_aut(a, b).matrix
    assert all(m[i][i] == 1 for i in range(3))
    assert all(m[i][j] == 0 for i in range(3) for j in range(i))


@given(pair_auts, pair_auts, st.integers(-3, 3), localized_elems(2), st.integers(-3, 3), localized_elems(2))
def test_triangular_laws(a, b, x1, x2, y1, y2):
    x, y = PAIR.elem(PAIR.left.elem((x1,)), x2), PAIR.elem(PAIR.left.elem((y1,)), y2)
    ab = compose_aut(a, b)
    assert ab(x) == a(b(x))
    assert invert_aut(a)(a(x)) == x
    if x < y:
        assert a(x) < a(y)


@given(st.sampled_from(sorted(GROUPS)), st.data())
def test_translation_invariance_of_order(name, data):
    s = GROUPS[name]
    x, y, z = data.draw(s), data.draw(s), data.draw(s)
    if x < y:
        assert x + z < y + z
    assert sum(1 for f in (x < y, x == y, y < x) if f) == 1


# -- displacement equation ----------------------------------------------------


def test_solve_identity_is_everything():
    sol = solve_displacement(identity_aut(Z2), 1, zero(Z2))
    assert isinstance(sol, Family)
    assert sol.contains(Z2(7, -3))


def test_solve_nesting_example():
    assert isinstance(solve_displacement(PositiveScale(D2, Fraction(1, 2)), -1, D2.elem(2)), NoSolution)
    sol = solve_displacement(PositiveScale(D6, Fraction(1, 2)), -1, D6.elem(2))
    assert sol == Unique(D6.elem(Fraction(4, 3)))


def test_solve_non_subtree_family():
    a = unip(Z3, ((1, 0, 1), (0, 1, 1), (0, 0, 1)))
    sol = solve_displacement(a, 1, zero(Z3))
    assert isinstance(sol, Family)
    assert sol.contains(Z3(1, -1, 5)) and sol.contains(Z3(0, 0, 0))
    assert not sol.contains(Z3(1, 0, 0))


def test_solve_laurent_shift():
    # x = t x + 1 has no Laurent solution (it would be a geometric series)
    assert solve_displacement(MonomialShift(T, 1), 1, T.elem({0: 1})).is_empty()
    # x = -x + 2 gives x = 1
    assert solve_displacement(identity_aut(T), -1, T.elem({0: 2})) == Unique(T.elem({0: 1}))


@given(random_unipotents, st.sampled_from([1, -1]), intlex_elems(3))
def test_solve_soundness(a, s, lam):
    sol = solve_displacement(a, s, lam)
    if not sol.is_empty():
        x = sol.witness()
        y = a(x)
        assert x == (y if s == 1 else -y) + lam
    if isinstance(sol, Family):
        for p in sol.points():
            y = a(p)
            assert p == (y if s == 1 else -y) + lam


def test_solve_brute_force_small():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.choice([2, 3])
        d = IntLex(n)
        rows = [[int(i == j) if j <= i else rng.randint(-2, 2) for j in range(n)] for i in range(n)]
        a = UnipotentInt(d, tuple(tuple(r) for r in rows))
        lam = d.elem(tuple(rng.randint(-3, 3) for _ in range(n)))
        assert solve_agrees_with_box(a, rng.choice([1, -1]), lam, 3)


# -- half elements, homomorphisms, serialization ------------------------------


def test_half_canonical():
    h = Half(Z2(2, 4))
    assert h.in_lambda and h.value() == Z2(1, 2) and h.den == 1
    g = Half(Z2(1, 0))
    assert not g.in_lambda and g.den == 2
    assert g + g == Z2(1, 0)
    assert Half(D2.elem(1)).in_lambda


@given(localized_elems(2))
def test_half_of_roundtrip(x):
    assert Half.of(x).value() == x


def test_linear_hom_and_scaling():
    h = LinearHom(IntLex(1), Z2, ((0, 1),))
    assert h(IntLex(1).elem((5,))) == Z2(0, 5)
    assert is_order_preserving(h)
    assert scaling_hom(D2, 2)(D2.elem(Fraction(3, 4))) == D2.elem(Fraction(3, 2))
    assert not is_order_preserving(scaling_hom(D2, -1))


@pytest.mark.parametrize(
    "x",
    [Z3(1, -2, 3), D6.elem(Fraction(5, 36)), T.elem({-2: 3, 4: -1}), PAIR.elem(PAIR.left.elem((2,)), Fraction(1, 8))],
    ids=["intlex", "localized", "laurent", "pair"],
)
def test_json_roundtrip(x):
    d = descriptor_from_json(json.loads(json.dumps(x.desc.to_json())))
    assert d == x.desc
    assert elem_from_json(d, json.loads(json.dumps(x.to_json()))) == x


@pytest.mark.parametrize(
    "a",
    [
        unip(Z2, ((1, 3), (0, 1))),
        PositiveScale(D6, Fraction(2, 3)),
        MonomialShift(T, -2),
        Triangular(PAIR, identity_aut(PAIR.left), PositiveScale(PAIR.right, Fraction(4)), ((Fraction(1, 2),),)),
    ],
    ids=["unipotent", "scale", "shift", "triangular"],
)
def test_aut_json_roundtrip(a):
    assert aut_from_json(a.desc, json.loads(json.dumps(a.to_json()))) == a
