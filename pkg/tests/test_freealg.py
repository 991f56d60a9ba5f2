import random
from fractions import Fraction

import pytest

from skewalg.freealg import (
    RelationBudgetExceeded,
    build_free_quotient,
    canonicalize,
    enumerate_monomials,
    evaluate_word,
    expand_evaluate,
    mono_label,
    parse_word,
    relation_combination,
    sort_key,
)
from skewalg.identities import get_variety


# --- oracles ---------------------------------------------------------------


def brute_monomials(g, d):
    """All canonical monomials of degree d by exhausting unordered trees."""

    def all_trees(n):
        if n == 1:
            for i in range(g):
                yield i
            return
        for e in range(1, n):
            for left in all_trees(e):
                for right in all_trees(n - e):
                    yield (left, right)

    out = set()
    for t in all_trees(d):
        c = canonicalize(t)
        if c is not None:
            out.add(c[1])
    return out


def mobius(n):
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def witt(g, d):
    total = 0
    e = 1
    while e <= d:
        if d % e == 0:
            total += mobius(e) * g ** (d // e)
        e += 1
    return total // d


# --- canonical form ---------------------------------------------------------


def test_canonicalize_fixtures():
    assert canonicalize((1, 0)) == (-1, (0, 1))
    assert canonicalize((0, 0)) is None
    assert canonicalize(((0, 2), (0, 1))) == (-1, ((0, 1), (0, 2)))
    assert canonicalize(((1, 0), (2, 0))) == (1, ((0, 1), (0, 2)))
    assert canonicalize(((0, 1), (0, 1))) is None


def test_canonicalize_idempotent_on_canonical():
    for d in range(1, 5):
        for m in enumerate_monomials(3, 4)[d]:
            assert canonicalize(m) == (1, m)


def test_enumeration_matches_brute_force():
    for g in [1, 2, 3]:
        by_degree = enumerate_monomials(g, 6)
        for d in range(1, 7):
            expected = brute_monomials(g, d)
            assert set(by_degree[d]) == expected
            assert len(by_degree[d]) == len(expected)


def test_enumeration_counts():
    by_degree = enumerate_monomials(3, 6)
    assert [len(by_degree[d]) for d in range(1, 7)] == [3, 3, 9, 30, 117, 477]
    assert len(enumerate_monomials(1, 2)[2]) == 0
    by2 = enumerate_monomials(2, 5)
    assert [len(by2[d]) for d in range(1, 6)] == [2, 1, 2, 4, 10]


def test_enumeration_sorted_strictly():
    by_degree = enumerate_monomials(3, 5)
    for d in range(1, 6):
        keys = [sort_key(m) for m in by_degree[d]]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)


def test_mono_label():
    names = ("a", "b", "c")
    assert mono_label(0, names) == "a"
    assert mono_label((0, 1), names) == "(a*b)"
    assert mono_label(((0, 1), (0, 2)), names) == "((a*b)*(a*c))"


# --- quotient construction ---------------------------------------------------


def test_anticommutative_build_keeps_all_monomials():
    F = build_free_quotient(["x*x = 0"], 3, 4)
    assert F.dims() == [3, 3, 9, 30]
    for d in range(1, 5):
        for m in F.monomials[d]:
            assert F.rewrite[m] == {m: 1}


def test_free_lie_dims_match_witt():
    F = build_free_quotient(get_variety("lie"), 2, 5)
    assert F.dims() == [witt(2, d) for d in range(1, 6)]
    assert F.dims() == [2, 1, 2, 3, 6]
    G = build_free_quotient(get_variety("lie"), 3, 4)
    assert G.dims() == [witt(3, d) for d in range(1, 5)]
    assert G.dims() == [3, 3, 8, 18]


def test_v_variety_no_low_degree_consequences():
    F = build_free_quotient(get_variety("v"), 3, 2)
    assert F.dims() == [3, 3]


def test_variety_containments_are_monotone():
    free = build_free_quotient(["x*x = 0"], 3, 4).dims()
    w = build_free_quotient(get_variety("w"), 3, 4).dims()
    v = build_free_quotient(get_variety("v"), 3, 4).dims()
    bl = build_free_quotient(get_variety("binary-lie"), 3, 4).dims()
    lie = build_free_quotient(get_variety("lie"), 3, 4).dims()
    for d in range(4):
        assert w[d] <= v[d] <= bl[d] <= free[d]
        assert lie[d] <= w[d]


def test_identity_order_does_not_change_dims():
    idents = get_variety("lie")
    F = build_free_quotient(idents, 2, 4)
    G = build_free_quotient(list(reversed(idents)), 2, 4)
    assert F.dims() == G.dims()


def test_build_deterministic():
    F = build_free_quotient(get_variety("v"), 3, 4)
    G = build_free_quotient(get_variety("v"), 3, 4)
    assert F.dims() == G.dims()
    assert F.basis == G.basis
    assert F.rewrite == G.rewrite


def test_relation_budget():
    with pytest.raises(RelationBudgetExceeded):
        build_free_quotient(get_variety("lie"), 2, 3, budget=3)


# --- evaluation --------------------------------------------------------------


def test_evaluate_plain_product():
    F = build_free_quotient(["x*x = 0"], 3, 2)
    val = evaluate_word(F, "a*b")
    assert val.degree == 2
    assert val.coords == {(0, 1): 1}
    anti = evaluate_word(F, "b*a")
    assert anti.coords == {(0, 1): -1}


def test_evaluate_known_zero_in_v():
    F = build_free_quotient(get_variety("v"), 3, 4)
    val = evaluate_word(F, "J(a,b,a*c)")
    assert val.degree == 4
    assert val.coords == {}


def test_evaluate_forced_zero_in_w():
    F = build_free_quotient(get_variety("w"), 3, 4)
    val = evaluate_word(F, "J(a,b,a*b)")
    assert val.coords == {}


def test_evaluate_degree_overflow():
    F = build_free_quotient(["x*x = 0"], 3, 2)
    with pytest.raises(ValueError, match="degree"):
        evaluate_word(F, "(a*b)*c")


def test_evaluate_unknown_generator():
    F = build_free_quotient(["x*x = 0"], 3, 2)
    with pytest.raises(ValueError, match="generator"):
        evaluate_word(F, "a*z")


def test_routes_agree_on_random_words():
    rng = random.Random(20260819)
    F = build_free_quotient(get_variety("v"), 3, 5)

    def random_tree(d):
        if d == 1:
            return ("var", "abc"[rng.randrange(3)])
        e = rng.randint(1, d - 1)
        return ("prod", random_tree(e), random_tree(d - e))

    for _ in range(200):
        t = random_tree(rng.randint(1, 5))
        a = evaluate_word(F, t)
        b = expand_evaluate(F, t)
        assert a.degree == b.degree and a.coords == b.coords


def test_quotient_product_antisymmetry():
    F = build_free_quotient(get_variety("v"), 3, 4)
    for m1 in F.basis[1]:
        for m2 in F.basis[3][:4]:
            d1, v1 = F.product(1, {m1: Fraction(1)}, 3, {m2: Fraction(1)})
            d2, v2 = F.product(3, {m2: Fraction(1)}, 1, {m1: Fraction(1)})
            assert d1 == d2 == 4
            assert v1 == {k: -v for k, v in v2.items()}


def test_quotient_product_truncates_past_max_degree():
    F = build_free_quotient(["x*x = 0"], 3, 3)
    d, v = F.product(2, {(0, 1): Fraction(1)}, 2, {(0, 2): Fraction(1)})
    assert d == 4 and v == {}


# --- adjoined relations ------------------------------------------------------


def test_extra_relation_enters_ideal():
    F = build_free_quotient(get_variety("w"), 3, 4, extra_relations=["J(a,b,c)"])
    base = build_free_quotient(get_variety("w"), 3, 4)
    assert evaluate_word(F, "J(a,b,c)").coords == {}
    assert evaluate_word(F, "J(a,b,c)*a").coords == {}
    assert F.dims()[2] == base.dims()[2] - 1


def test_extra_relation_is_not_substituted():
    # adjoined words generate a plain ideal: the substitution c -> b*c of
    # J(a,b,c) need not vanish, only multiples of the word itself do
    F = build_free_quotient(["x*x = 0"], 3, 4, extra_relations=["J(a,b,c)"])
    assert evaluate_word(F, "J(a,b,c)").coords == {}
    assert evaluate_word(F, "J(a,b,b*c)").coords != {}


# --- certificates ------------------------------------------------------------


def test_relation_combination_reproduces_zero_word():
    F = build_free_quotient(get_variety("v"), 3, 4)
    cert = relation_combination(F, "J(a,b,a*c)")
    assert cert
    total = {}
    for coef, _desc, row in cert:
        for col, val in row.items():
            total[col] = total.get(col, 0) + coef * val
    total = {k: v for k, v in total.items() if v}
    expansion = {}
    for coef, mono in F.expand_to_monomials(parse_word("J(a,b,a*c)")):
        expansion[mono] = expansion.get(mono, 0) + coef
    expansion = {k: v for k, v in expansion.items() if v}
    assert total == expansion


def test_relation_combination_rejects_nonzero_word():
    F = build_free_quotient(get_variety("v"), 3, 2)
    with pytest.raises(ValueError, match="nonzero"):
        relation_combination(F, "a*b")


def test_self_check_runs_clean():
    F = build_free_quotient(get_variety("v"), 3, 4)
    F.self_check()
