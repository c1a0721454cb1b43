from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import intlex_elems, localized_elems, random_line_map
from lambdatree.affine import (
    AffineError,
    AffineMap,
    Elliptic,
    Hyperbolic,
    Inversion,
    NestingReflection,
    NotElliptic,
    RadElliptic,
    a_formula,
    a_geometric,
    axis_point,
    classify,
    classify_on_ray,
    compose,
    conjugate,
    displacement_b,
    displacement_b_formula,
    elliptic_via_radius,
    fixed_points,
    identity,
    inverse,
    is_rigid,
    map_from_json,
    nesting_witness,
    power,
)
from lambdatree.examples import (
    bs,
    heisenberg,
    mixed_star,
    nesting_map,
    non_subtree_certificate,
    non_subtree_map,
    third_map,
)
from lambdatree.oag import (
    Family,
    Half,
    IntLex,
    Localized,
    PositiveScale,
    Unique,
    UnipotentInt,
    compose_aut,
    zero,
)
from lambdatree.trees import LinearTree, between
from lambdatree.words import commutator, letter, parse, power as wpow

Z, Z2 = IntLex(1), IntLex(2)
D2, D3, D6 = Localized(2), Localized(3), Localized(6)


def translation(desc, step):
    return AffineMap.make(desc, lam=step)


# ---------------------------------------------------------------------------
# application and composition


def test_apply_examples():
    H = heisenberg()
    assert H.generators["t"](zero(H.desc)) == H.desc(1, 0, 0)
    p = D6.elem(Fraction(5, 6))
    assert identity(LinearTree(D6))(p) == p
    assert nesting_map()(zero(D2)) == D2.elem(2)


def test_compose_inverse_is_identity():
    g = nesting_map(D6)
    assert compose(g, inverse(g)).is_identity()
    assert compose(inverse(g), g).is_identity()


def test_heisenberg_commutator_translation():
    H = heisenberg()
    m = H.realize(commutator(wpow(letter("s"), 2), wpow(letter("t"), 3)))
    assert m.auto.is_identity() and m.sign == 1
    assert m.lam == H.desc(0, 0, -6)


def test_bs_conjugate_is_half_translation():
    B = bs(2)
    m = B.realize(parse("s^-1 t s"))
    assert m.auto.is_identity()
    assert m(zero(B.desc)) == B.desc.elem(B.desc.left.elem((0,)), Fraction(1, 2))


def test_space_mismatch_rejected():
    with pytest.raises(AffineError):
        compose(nesting_map(D2), nesting_map(D6))
    with pytest.raises(AffineError):
        AffineMap(LinearTree(D2), 1, PositiveScale(D6, Fraction(2)), zero(D2))


def test_map_json_round_trip():
    for g in (nesting_map(), non_subtree_map(), third_map(D6)):
        assert map_from_json(json.loads(json.dumps(g.to_json()))) == g
    _, sm = mixed_star()
    assert map_from_json(sm.to_json()) == sm


# ---------------------------------------------------------------------------
# fixed points and classification


def test_fixed_points_not_a_subtree():
    g = non_subtree_map()
    sol = fixed_points(g)
    assert isinstance(sol, Family)
    p, q, m = non_subtree_certificate(g)
    assert sol.contains(p) and sol.contains(q)
    assert between(g.space, p, m, q) and g(m) != m


def test_fixed_points_examples():
    sol = fixed_points(nesting_map(D6))
    assert isinstance(sol, Unique) and sol.point == D6.elem(Fraction(4, 3))
    assert fixed_points(translation(Z, Z(1))).is_empty()


def test_classify_inversion_on_z2():
    g = AffineMap.make(Z2, -1, None, Z2(1, 0))
    c = classify(g)
    assert isinstance(c, Inversion)
    assert c.witness == Half(Z2(1, 0))
    assert g(c.witness) == c.witness


def test_classify_nesting_map_depends_on_group():
    assert isinstance(classify(nesting_map(D2)), NestingReflection)
    c = classify(nesting_map(D6))
    assert isinstance(c, Elliptic) and c.witness == D6.elem(Fraction(4, 3))


def test_mixed_star_elliptic_but_hyperbolic_on_ray():
    space, g = mixed_star(Fraction(1, 2))
    c = classify(g)
    assert isinstance(c, Elliptic) and c.witness == space.origin
    r = classify_on_ray(g, 3)
    assert isinstance(r, Hyperbolic)
    u = r.witness
    assert g(u) != u and u.ray == 3
    with pytest.raises(AffineError):
        classify_on_ray(g, 1)


def test_classification_json():
    for g in (nesting_map(D2), nesting_map(D6), translation(Z, Z(2))):
        assert json.loads(json.dumps(classify(g).to_json()))["kind"] in {
            "elliptic", "inversion", "nesting_reflection", "hyperbolic"}


# ---------------------------------------------------------------------------
# rigidity


def test_heisenberg_generators_rigid():
    H = heisenberg()
    for g in H.generators.values():
        assert is_rigid(g) and is_rigid(inverse(g))


def test_third_map_nests_a_segment():
    g = third_map(D3)
    assert isinstance(classify(g), Hyperbolic)
    assert not is_rigid(g)
    assert g(D3.elem(0)) == D3.elem(1)
    assert g(D3.elem(2)) == D3.elem(Fraction(5, 3))


def test_translations_rigid():
    for step in (1, -3, 7):
        assert is_rigid(translation(Z, Z(step)))
    assert is_rigid(translation(Z2, Z2(0, 4)))


def test_rigidity_rejects_star_maps():
    _, g = mixed_star()
    with pytest.raises(AffineError):
        is_rigid(g)


def test_rigidity_matches_segment_search():
    rng = random.Random(2024)
    for _ in range(40):
        g, box = random_line_map(rng)
        assert is_rigid(g) == (nesting_witness(g, box) is None), g.to_json()


# ---------------------------------------------------------------------------
# displacement b and radius criterion


def _b_by_hand(g, x):
    """Expand b from the three based lengths using exact fractions."""

    def val(e):
        return Fraction(e.v)

    def L(h):
        return abs(val(h(x)) - val(x))

    def f(h):
        return h.auto.factor

    gi, g2 = inverse(g), compose(g, g)
    return ((f(gi) + 1) * L(g2) - (f(g2) + 1) * L(gi)) / 2


def test_b_translation():
    assert displacement_b(translation(Z, Z(5)), Z(0)) == Half.of(Z(5))


def test_b_nesting_map_negative():
    g, x = nesting_map(D2), zero(D2)
    b = displacement_b(g, x)
    assert b.sign() < 0
    assert Fraction(b.twice.v) / 2 == _b_by_hand(g, x) == -1


def test_b_zero_at_fixed_point():
    g = nesting_map(D6)
    assert displacement_b(g, D6.elem(Fraction(4, 3))).sign() == 0


def test_radius_translation_not_elliptic():
    assert isinstance(elliptic_via_radius(translation(Z, Z(3)), Z(0)), NotElliptic)


def test_radius_third_map():
    assert isinstance(elliptic_via_radius(third_map(D3), D3.elem(0)), NotElliptic)
    r = elliptic_via_radius(third_map(D6), D6.elem(0))
    assert isinstance(r, RadElliptic) and r.witness == D6.elem(Fraction(3, 2))
    assert third_map(D6)(r.witness) == r.witness


def test_radius_needs_positive_b():
    with pytest.raises(AffineError):
        elliptic_via_radius(nesting_map(D2), zero(D2))


# ---------------------------------------------------------------------------
# properties over random maps

SCALES = [Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(3, 2)]


def z2_maps():
    auto = st.integers(-2, 2).map(lambda c: UnipotentInt(Z2, ((1, c), (0, 1))))
    return st.builds(lambda s, a, lam: AffineMap.make(Z2, s, a, lam), st.sampled_from([1, -1]), auto, intlex_elems(2))


def d6_maps():
    auto = st.sampled_from(SCALES).map(lambda f: PositiveScale(D6, f))
    return st.builds(lambda s, a, lam: AffineMap.make(D6, s, a, lam), st.sampled_from([1, -1]), auto, localized_elems(6))


def map_and_point():
    return st.one_of(
        st.tuples(z2_maps(), intlex_elems(2)),
        st.tuples(d6_maps(), localized_elems(6)),
    )


def map_pair_and_point():
    return st.one_of(
        st.tuples(z2_maps(), z2_maps(), intlex_elems(2)),
        st.tuples(d6_maps(), d6_maps(), localized_elems(6)),
    )


def _verify_witness(g, c):
    if isinstance(c, (Elliptic, Inversion)):
        return g(c.witness) == c.witness
    if isinstance(c, Hyperbolic):
        u = c.witness
        return g(u) != u and between(g.space, inverse(g)(u), u, g(u))
    return isinstance(c, NestingReflection) and fixed_points(compose(g, g)).is_empty()


@given(map_and_point())
def test_classification_witness_reverifies(gx):
    g, _ = gx
    assert _verify_witness(g, classify(g))


@given(map_pair_and_point())
def test_conjugation_covariance(ghx):
    g, h, _ = ghx
    c, k = classify(g), conjugate(h, g)
    ck = classify(k)
    assert ck.kind == c.kind
    if isinstance(c, Elliptic):
        assert k(h(c.witness)) == h(c.witness)


@given(map_and_point(), st.sampled_from([2, 3, -1, -2]))
def test_powers(gx, n):
    g, _ = gx
    c = classify(g)
    if isinstance(c, Hyperbolic):
        assert isinstance(classify(power(g, n)), Hyperbolic)
    if isinstance(c, NestingReflection):
        assert isinstance(classify(compose(g, g)), Hyperbolic)


@given(map_and_point())
def test_b_sign_law(gx):
    g, x = gx
    c, b = classify(g), displacement_b(g, x)
    if isinstance(c, Hyperbolic):
        assert b.sign() > 0
    elif isinstance(c, (NestingReflection, Inversion)):
        assert b.sign() < 0
    else:
        assert displacement_b(g, c.witness).sign() == 0


@given(map_and_point())
def test_b_geometric_matches_formula(gx):
    g, x = gx
    assert displacement_b(g, x) == displacement_b_formula(g, x)


@given(map_and_point())
def test_a_is_distance_to_axis_point(gx):
    g, x = gx
    assert a_formula(g, x) == Half.of(a_geometric(g, x))
    assert a_geometric(g, x) == g.space.distance(x, axis_point(g, x))


@given(map_pair_and_point(), st.data())
def test_dilation_identity(ghx, data):
    g, h, p = ghx
    q = data.draw(intlex_elems(2) if g.space.desc == Z2 else localized_elems(6))
    sp = g.space
    assert sp.distance(g(p), g(q)) == g.auto(sp.distance(p, q))
    gh = compose(g, h)
    assert gh.auto == compose_aut(g.auto, h.auto)
    assert gh(p) == g(h(p))
    assert inverse(g)(g(p)) == p
