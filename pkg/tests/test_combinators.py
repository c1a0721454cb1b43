from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from lambdatree.combinators import (
    CyclicLength,
    FreeProductError,
    FreeProductLength,
    NotFound,
    Witness,
    c_from_syllables,
    certify_free,
    cyclic_b_failures,
    fp_ancillary_c,
    fp_ball,
    fp_length,
    fp_syllable_ball,
    heisenberg_star_z,
    is_regular_pair,
    with_degenerate_factor,
    z_star_z,
)
from lambdatree.examples import translation_line
from lambdatree.lyndon import ActionLength, b_elem, c_elem, verify_axioms, verify_length_props
from lambdatree.oag import Half, IntLex, Localized, compose_aut, identity_aut, zero
from lambdatree.words import EMPTY, FpWord, fp_parse, letter, parse, power, reduce

ZZ = z_star_z()
HZ = heisenberg_star_z()
ZZ_BALL = fp_syllable_ball(ZZ, {1: 2, 2: 2}, 3)
HZ_BALL = fp_syllable_ball(HZ, {1: 1, 2: 2}, 3)


def oracle_length(ctx, w: FpWord):
    """The twisted syllable sum evaluated directly from the factors."""
    total = zero(ctx.desc)
    prefix = identity_aut(ctx.desc)
    for i, sw in w.syllables:
        F = ctx.factor(i)
        total = total + prefix(F.length(sw))
        prefix = compose_aut(prefix, F.alpha(sw))
    return total


# ---------------------------------------------------------------------------
# lengths


def test_fp_length_examples():
    assert fp_length(ZZ, fp_parse("1:a | 2:b")) == IntLex(1)((2,))
    assert fp_length(ZZ, fp_parse("1:a^3")) == IntLex(1)((3,))
    w = fp_parse("1:t | 2:a")
    d = HZ.desc
    expect = d.elem(d.left(1, 0, 0), d.right(1))
    assert fp_length(HZ, w) == expect == oracle_length(HZ, w)


def test_single_syllable_keeps_factor_length():
    for sw in (parse("s t"), parse("t^-2 s")):
        w = FpWord(((1, sw),))
        assert fp_length(HZ, w) == HZ.factor(1).length(sw)


@pytest.mark.parametrize("ctx,ball", [(ZZ, ZZ_BALL), (HZ, HZ_BALL)])
def test_length_matches_oracle_on_ball(ctx, ball):
    for w in ball:
        fw = ctx.split(w)
        assert ctx.length(w) == oracle_length(ctx, fw)


def test_split_and_trivial_syllables():
    fw = HZ.split(parse("s t a a^-1 t^-1"))
    assert fw == fp_parse("1:s")
    assert HZ.fp_element(fp_parse("1:s s^-1 | 2:a")) == HZ.element(letter("a"))
    with pytest.raises(FreeProductError):
        ZZ.split(parse("q"))


def test_factor_compatibility_checks():
    a = ActionLength(translation_line(1, "a"))
    with pytest.raises(FreeProductError):
        FreeProductLength([a, CyclicLength(Localized(2), "c", Localized(2).elem(1))])
    with pytest.raises(FreeProductError):
        FreeProductLength([a, ActionLength(translation_line(2, "a"))])
    with pytest.raises(FreeProductError):
        FreeProductLength([])


# ---------------------------------------------------------------------------
# ancillary c through syllable prefixes


def test_c_distinct_first_factors_is_zero():
    assert fp_ancillary_c(ZZ, fp_parse("1:a | 2:b"), fp_parse("2:b | 1:a")).sign() == 0


def test_c_diagonal():
    g = fp_parse("1:a^2 | 2:b^-1")
    assert fp_ancillary_c(ZZ, g, g) == Half.of(fp_length(ZZ, g))


def test_c_shared_prefix():
    g, h = fp_parse("1:a | 2:b"), fp_parse("1:a | 2:b^-1")
    via_prefix = fp_ancillary_c(ZZ, g, h)
    head = fp_length(ZZ, fp_parse("1:a"))
    F2 = ZZ.factor(2)
    c2 = c_elem(F2, F2.element(letter("b")), F2.element(letter("b", -1)))
    assert via_prefix == Half.of(head) + c2 == Half.of(IntLex(1)((1,)))
    assert via_prefix == c_elem(ZZ, ZZ.fp_element(g), ZZ.fp_element(h))


@pytest.mark.parametrize("ctx,ball", [(ZZ, ZZ_BALL), (HZ, HZ_BALL)])
def test_c_two_paths_agree(ctx, ball):
    elems = [ctx.element(w) for w in ball[:90]]
    for x, y in itertools.product(elems, repeat=2):
        assert c_from_syllables(ctx, x, y) == c_elem(ctx, x, y)


# ---------------------------------------------------------------------------
# axioms and freeness


@pytest.mark.parametrize("ctx,ball", [(ZZ, ZZ_BALL), (HZ, HZ_BALL)])
def test_axioms_transport(ctx, ball):
    ax = verify_axioms(ctx, ball)
    assert ax.ok, ax.to_json()
    pr = verify_length_props(ctx, ball)
    assert pr.ok, pr.to_json()


def test_certify_free_z_star_z():
    rep = certify_free(ZZ, 4)
    assert rep.ok
    assert rep.summary() == "free: true (radius 4)"
    # every distinct nonidentity element of the ball is judged once
    assert len(rep.verdicts) == len(fp_ball(ZZ, 4)) - 1


def test_certify_free_heisenberg_star_z():
    rep = certify_free(HZ, 3)
    assert rep.ok, rep.to_json()


def test_degenerate_factor_fails_at_its_syllable():
    bad = with_degenerate_factor(ZZ, "c")
    rep = certify_free(bad, 2)
    assert not rep.ok
    labels = [v.word for v in rep.failures]
    assert "3:c" in labels
    assert all("3:" in lab for lab in labels)
    assert rep.to_json()["free"] is False


def test_cyclically_reduced_words_hyperbolic():
    words = [ZZ.split(w) for w in ZZ_BALL]
    assert cyclic_b_failures(ZZ, words) == []
    assert cyclic_b_failures(HZ, [HZ.split(w) for w in HZ_BALL]) == []
    # with trivial dilations b equals the length at a basepoint on the axis
    for fw in words:
        x = ZZ.fp_element(fw)
        if len(x) >= 2 and x[0][0] != x[-1][0]:
            assert b_elem(ZZ, x) == Half.of(ZZ.length_elem(x))


# ---------------------------------------------------------------------------
# regularity


def test_regular_pair_equal_words():
    g = parse("a b^2")
    r = is_regular_pair(ZZ, g, g, 3)
    assert isinstance(r, Witness)
    assert ZZ.element(r.u) == ZZ.element(g)
    assert reduce(r.g1) == EMPTY and reduce(r.h1) == EMPTY


def test_regular_pair_translation():
    L = ActionLength(translation_line(1))
    r = is_regular_pair(L, power(letter("a"), 3), power(letter("a"), 5), 5)
    assert isinstance(r, Witness) and r.u == power(letter("a"), 3)
    assert r.to_json()["u"] == "a^3"


def test_regular_pair_bound_too_small():
    g, h = parse("a b a b"), parse("a b a b^-1")
    r = is_regular_pair(ZZ, g, h, 2)
    assert isinstance(r, NotFound) and r.searched > 0
    assert isinstance(is_regular_pair(ZZ, g, h, 3), Witness)


@settings(max_examples=30)
@given(st.sampled_from(fp_ball(ZZ, 2)), st.sampled_from(fp_ball(ZZ, 2)))
def test_regularity_transport(g, h):
    r = is_regular_pair(ZZ, g, h, 2)
    assert isinstance(r, Witness)
    assert ZZ.length(r.u) == c_elem(ZZ, ZZ.element(g), ZZ.element(h)).value()
