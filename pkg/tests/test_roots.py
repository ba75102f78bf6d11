import random

import numpy as np
import pytest

from oracles import NumericCoxeter
from rgdlin.coxeter import CoxeterMatrix, CoxeterSystem, reduce_word
from rgdlin.qfield import INF, SQRT2, ONE, ZERO
from rgdlin.roots import (
    OrderAnomalyError,
    SameWallError,
    find_chamber,
    is_positive,
    is_prenilpotent,
    parse_root,
    phi_w,
    reflection_order,
    root_from_expr,
    roots_up_to_depth,
    simple_root,
)


def test_simple_root_key(t444):
    a = root_from_expr(t444, t444.identity(), "s")
    assert a.key == (ZERO, ONE, ZERO)
    assert a == simple_root(t444, "s")


def test_444_s_alpha_t(t444):
    a = root_from_expr(t444, "s", "t")
    assert a.key == (ZERO, SQRT2, ONE)


def test_universal_alpha_n(universal):
    for n in range(5):
        a = root_from_expr(universal, "st" * n + "s", "t")
        assert a.key[0] == 0 and a.key[2] != 0
        assert a.key == (ZERO, 2 * n + 2, 2 * n + 1)


def test_positivity(universal):
    s = simple_root(universal, "s")
    assert is_positive(s) and not is_positive(-s)
    assert is_positive(root_from_expr(universal, "s", "t"))


def test_phi_w(t444, universal):
    assert phi_w(t444, t444.identity()) == frozenset()
    for S in (t444, universal):
        assert phi_w(S, reduce_word(S, "st")) == {simple_root(S, "s"), root_from_expr(S, "s", "t")}
    expected = {root_from_expr(t444, w, x) for w, x in (("", "s"), ("s", "t"), ("st", "s"), ("sts", "t"))}
    assert phi_w(t444, reduce_word(t444, "stst")) == expected


def test_reflection_orders(t444, universal):
    assert reflection_order(simple_root(t444, "s"), simple_root(t444, "t")) == 4
    assert reflection_order(simple_root(universal, "s"), simple_root(universal, "t")) == INF
    g = root_from_expr(t444, "rststrs", "t")
    g2 = root_from_expr(t444, "rststrt", "s")
    assert reflection_order(g, g2) == 4


def test_reflection_order_errors(t444):
    a = simple_root(t444, "s")
    with pytest.raises(SameWallError):
        reflection_order(a, a)
    with pytest.raises(SameWallError):
        reflection_order(a, -a)
    assert issubclass(OrderAnomalyError, ArithmeticError)


@pytest.mark.parametrize("name", ["universal", "t444", "mixed"])
def test_reflection_order_symmetry(name, request):
    S = request.getfixturevalue(name)
    roots = roots_up_to_depth(S, 3)
    for a in roots:
        for b in roots:
            if a == b or a == -b:
                continue
            k = reflection_order(a, b)
            assert k == reflection_order(b, a) == reflection_order(-a, b) == reflection_order(a, -b)


def test_reflection_order_matches_element_order(t444, mixed):
    # o(r_a r_b) computed from the group itself
    for S in (t444, mixed):
        roots = roots_up_to_depth(S, 2, negatives=False)
        for a in roots:
            for b in roots:
                if a == b:
                    continue
                k = reflection_order(a, b)
                x = a.reflection * b.reflection
                p, n = x, 1
                while p.word and n < 40:
                    p, n = p * x, n + 1
                assert (n if not p.word else INF) == k


def test_prenilpotent_examples(t444, universal):
    s = simple_root(t444, "s")
    assert not is_prenilpotent(s, -s)
    assert is_prenilpotent(s, simple_root(t444, "t"))
    assert not is_prenilpotent(simple_root(universal, "s"), simple_root(universal, "t"))
    assert is_prenilpotent(s, s)


def test_find_chamber_examples(t444, universal):
    for S in (t444, universal):
        r = find_chamber(simple_root(S, "s"), simple_root(S, "t"), (1, 1))
        assert r.found and r.chamber == S.identity()
    r = find_chamber(simple_root(t444, "s"), simple_root(t444, "t"), (-1, -1))
    assert r.chamber == reduce_word(t444, "stst")
    r = find_chamber(simple_root(universal, "s"), simple_root(universal, "t"), (-1, -1), depth=10)
    assert not r and r.bound == 10


@pytest.mark.parametrize("name", ["universal", "t444", "mixed"])
def test_norm_one_and_sign_coherence(name, request):
    S = request.getfixturevalue(name)
    for a in roots_up_to_depth(S, 5):
        assert S.pairing(a.key, a.key) == 1
        signs = {x.sign() for x in a.key} - {0}
        assert len(signs) == 1


@pytest.mark.parametrize("name", ["universal", "t444", "mixed"])
def test_key_soundness(name, request):
    """Different expressions of the same half-space give the same key, and vice versa."""
    S = request.getfixturevalue(name)
    rng = random.Random(11)
    N = NumericCoxeter(S.matrix.m)
    window = S.chambers(5)
    for _ in range(500 // 3):
        word = tuple(rng.randrange(3) for _ in range(rng.randint(0, 8)))
        s = rng.randrange(3)
        a = root_from_expr(S, word, s)
        # w.alpha_s = (w s).(-alpha_s)
        b = root_from_expr(S, word + (s,), s, negated=True)
        # unreduced witnesses reduce to the same key
        c = root_from_expr(S, reduce_word(S, word), s)
        assert a == b == c and hash(a) == hash(b)
        vec = N.root(word, s)
        assert [a.contains(x) for x in window] == [N.contains(x.word, vec) for x in window]
    # distinct keys are distinct half-spaces on a large enough window
    roots = roots_up_to_depth(S, 3)
    sig = {tuple(S.side_signs(r.key, 6)) for r in roots}
    assert len(sig) == len(roots)


@pytest.mark.parametrize("name", ["universal", "t444", "mixed"])
def test_action_equivariance(name, request):
    S = request.getfixturevalue(name)
    rng = random.Random(3)
    for _ in range(100):
        v = reduce_word(S, [rng.randrange(3) for _ in range(rng.randint(0, 6))])
        w = reduce_word(S, [rng.randrange(3) for _ in range(rng.randint(0, 6))])
        a = root_from_expr(S, [rng.randrange(3) for _ in range(rng.randint(0, 4))], rng.randrange(3))
        assert a.act(w).act(v) == a.act(v * w)


def test_positivity_matches_half_space(universal, t444):
    for S in (universal, t444):
        for a in roots_up_to_depth(S, 5):
            assert a.is_positive == a.contains(S.identity())


def test_parse_root_grammar(t444):
    assert parse_root(t444, "- e : r") == -simple_root(t444, "r")
    assert parse_root(t444, "s t s : t") == root_from_expr(t444, "sts", "t")
    assert parse_root(t444, "sts:t") == root_from_expr(t444, "sts", "t")
    assert parse_root(t444, ": s") == simple_root(t444, "s")
    for bad in ("s t", "s : ", "s : t : r", "s : x"):
        with pytest.raises((ValueError, KeyError)):
            parse_root(t444, bad)


@pytest.mark.parametrize("name", ["universal", "t444", "mixed"])
def test_expression_roundtrip(name, request):
    S = request.getfixturevalue(name)
    for a in roots_up_to_depth(S, 4):
        assert parse_root(S, a.expr) == a
        assert parse_root(S, a.witness_expr()) == a
        assert a.depth == len(a.canonical[0]) + 1


def test_roots_up_to_depth_counts(universal):
    pos = roots_up_to_depth(universal, 5, negatives=False)
    # in universal type each positive root of depth k is crossed last by exactly one chamber of length k
    assert len(pos) == sum(len(universal.level(k)) for k in range(1, 6))
    assert len(roots_up_to_depth(universal, 5)) == 2 * len(pos)


def test_reflection_fixes_wall(t444):
    a = root_from_expr(t444, "rst", "s")
    r = a.reflection
    assert r.length % 2 == 1
    assert a.act(r) == -a
