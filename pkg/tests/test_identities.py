import random
from fractions import Fraction

import pytest

from skewalg.algebra import Algebra, jacobian
from skewalg.identities import (
    BudgetExceeded,
    IdentityParseError,
    builtin_varieties,
    check_identity,
    classify,
    evaluate_term,
    get_variety,
    parse_identity,
    polarize,
)

F = Fraction


def make_L():
    return Algebra("L4", ["a", "b", "c", "d"], {(1, 2): {3: 1}, (3, 0): {3: 1}})


def make_B001():
    return Algebra("B001", ["t", "a", "b", "c"], {(1, 2): {3: 1}, (3, 0): {3: 1}})


def make_heisenberg():
    return Algebra("heis", ["x", "y", "z"], {(0, 1): {2: 1}})


def random_anticommutative(rng, n):
    prods = {}
    for i in range(n):
        for j in range(i + 1, n):
            row = {k: v for k in range(n) if (v := rng.randint(-2, 2))}
            if row:
                prods[(i, j)] = row
    return Algebra("rnd", [f"e{i}" for i in range(n)], prods)


def rand_elt(rng, A):
    return A.element([F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(A.dim)])


# ---------- parsing ----------


def test_parse_w_identity():
    idf = parse_identity("J(x,y,z*u) = 0")
    assert idf.variables == ("x", "y", "z", "u")
    assert idf.profile == {"x": 1, "y": 1, "z": 1, "u": 1}


def test_parse_square():
    idf = parse_identity("x*x = 0")
    assert idf.variables == ("x",)
    assert idf.profile == {"x": 2}


def test_parse_malcev():
    idf = parse_identity("J(x,y,x*z) = J(x,y,z)*x")
    assert idf.variables == ("x", "y", "z")
    assert idf.profile == {"x": 2, "y": 1, "z": 1}


def test_parse_coefficients_and_parens():
    idf = parse_identity("1/2*(x*y) - 3*y*x = 2*x*y")
    # semantics: x*y/2 + 3*x*y - 2*x*y = 3/2*x*y; check by evaluation
    A = make_heisenberg()
    x, y = A.basis_element(0), A.basis_element(1)
    val = evaluate_term(idf.lhs_minus_rhs(), {"x": x.coords, "y": y.coords}, A)
    assert tuple(val) == tuple((F(3, 2) * (x * y)).coords)


def test_parse_errors_report_position():
    for text, pos in [("x* = 0", 3), ("J(x,y) = 0", 5), ("x@y = 0", 1), ("= 0", 0)]:
        with pytest.raises(IdentityParseError) as e:
            parse_identity(text)
        assert e.value.position == pos


def test_parse_rejects_trailing_garbage():
    with pytest.raises(IdentityParseError):
        parse_identity("x*y = 0 extra")


def test_parse_rejects_missing_star():
    with pytest.raises(IdentityParseError):
        parse_identity("2x = 0")


def test_parse_rejects_nonhomogeneous():
    for text in ["x*y = z", "x*x = x", "x*y + x = 0"]:
        with pytest.raises(IdentityParseError):
            parse_identity(text)


# ---------- polarization ----------


def test_polarize_multilinear_identity_unchanged():
    system = polarize(parse_identity("J(x,y,z*u) = 0"))
    assert len(system.components) == 1
    comp = system.components[0]
    assert comp.variables == ("x", "y", "z", "u")
    rng = random.Random(3)
    A = random_anticommutative(rng, 4)
    xs = [rand_elt(rng, A) for _ in range(4)]
    got = comp.evaluate(A, [x.coords for x in xs])
    want = jacobian(xs[0], xs[1], xs[2] * xs[3])
    assert tuple(got) == want.coords


def test_polarize_square():
    system = polarize(parse_identity("x*x = 0"))
    comp = system.components[0]
    assert comp.variables == ("x1", "x2")
    rng = random.Random(4)
    A = random_anticommutative(rng, 4)
    u, v = rand_elt(rng, A), rand_elt(rng, A)
    got = comp.evaluate(A, [u.coords, v.coords])
    want = u * v + v * u
    assert tuple(got) == want.coords


def test_polarize_malcev_component():
    system = polarize(parse_identity("J(x,y,x*z) = J(x,y,z)*x"))
    comp = system.components[0]
    assert comp.variables == ("x1", "x2", "y", "z")
    rng = random.Random(5)
    A = random_anticommutative(rng, 5)
    u1, u2, w, s = (rand_elt(rng, A) for _ in range(4))
    got = comp.evaluate(A, [u1.coords, u2.coords, w.coords, s.coords])
    want = (
        jacobian(u1, w, u2 * s)
        + jacobian(u2, w, u1 * s)
        - jacobian(u1, w, s) * u2
        - jacobian(u2, w, s) * u1
    )
    assert tuple(got) == want.coords


def test_polarized_component_is_multilinear():
    system = polarize(parse_identity("J(x,y,x*y) = 0"))
    comp = system.components[0]
    rng = random.Random(6)
    A = random_anticommutative(rng, 4)
    for slot in range(len(comp.variables)):
        args = [rand_elt(rng, A).coords for _ in comp.variables]
        u, v = rand_elt(rng, A), rand_elt(rng, A)
        al, be = F(2, 3), F(-3)
        args_u = list(args)
        args_u[slot] = u.coords
        args_v = list(args)
        args_v[slot] = v.coords
        args_mix = list(args)
        args_mix[slot] = tuple(al * a + be * b for a, b in zip(u.coords, v.coords))
        lhs = comp.evaluate(A, args_mix)
        rhs = [
            al * a + be * b
            for a, b in zip(comp.evaluate(A, args_u), comp.evaluate(A, args_v))
        ]
        assert list(lhs) == rhs


# ---------- checking ----------


def test_check_w_holds_on_L():
    L = make_L()
    for idf in get_variety("w"):
        assert check_identity(L, idf).holds


def test_check_malcev_fails_on_L_with_witness():
    L = make_L()
    res = check_identity(L, parse_identity("J(x,y,x*z) = J(x,y,z)*x"))
    assert not res.holds
    w = res.witness
    assert w.collapsed
    names = [n for n, _ in w.assignment]
    vals = [e for _, e in w.assignment]
    assert names == ["x", "y", "z"]
    assert [v.coords for v in vals] == [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)]
    # J(a,b,ac) - J(a,b,c)a = -d under the left-to-right product convention
    assert w.value.coords == (0, 0, 0, -1)


def test_check_malcev_fails_on_B001_with_witness():
    B = make_B001()
    res = check_identity(B, parse_identity("J(x,y,x*z) = J(x,y,z)*x"))
    assert not res.holds
    w = res.witness
    assert w.collapsed
    assert [e.coords for _, e in w.assignment] == [
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (0, 0, 1, 0),
    ]
    assert w.value.coords == (0, 0, 0, -1)


def test_check_jacobi_on_lie_algebra():
    assert check_identity(make_heisenberg(), parse_identity("J(x,y,z) = 0")).holds


def test_check_budget_guard():
    L = make_L()
    with pytest.raises(BudgetExceeded):
        check_identity(L, parse_identity("J(x,y,z*u) = 0"), budget=10)


# ---------- varieties and classification ----------


def test_builtin_varieties_names_and_shapes():
    vs = builtin_varieties()
    assert list(vs) == ["lie", "malcev", "binary-lie", "w", "v", "lam", "alam"]
    assert [i.text for i in vs["w"]] == ["x*x = 0", "J(x,y,z*u) = 0"]
    assert [i.text for i in vs["binary-lie"]] == ["x*x = 0", "J(x,y,x*y) = 0"]
    assert [i.text for i in vs["lie"]] == ["x*x = 0", "J(x,y,z) = 0"]
    assert len(vs["lam"]) == 3 and len(vs["alam"]) == 3


def test_get_variety_unknown():
    with pytest.raises(ValueError):
        get_variety("nope")


def test_classify_L():
    got = {v.variety: v.member for v in classify(make_L()).verdicts}
    assert got["w"] and got["v"] and got["binary-lie"]
    assert not got["malcev"] and not got["lie"]


def test_classify_B001():
    cls = classify(make_B001())
    got = {v.variety: v.member for v in cls.verdicts}
    assert got["w"] and not got["malcev"]


def test_classify_zero_algebra():
    Z = Algebra("zero", ["e0", "e1"], {})
    assert all(v.member for v in classify(Z).verdicts)


def test_classify_lie_algebra_everything_holds():
    cls = classify(make_heisenberg())
    assert all(v.member for v in cls.verdicts)


def test_containment_chains_on_fixtures():
    for A in [make_L(), make_B001(), make_heisenberg(), Algebra("z", ["u"], {})]:
        got = {v.variety: v.member for v in classify(A).verdicts}
        if got["w"]:
            assert got["v"]
        if got["v"]:
            assert got["binary-lie"]
        if got["lie"]:
            assert got["malcev"]
        if got["malcev"]:
            assert got["binary-lie"]


def test_polarization_agrees_with_direct_evaluation():
    rng = random.Random(20260819)
    fixtures = [make_L(), make_B001(), make_heisenberg()]
    fixtures += [random_anticommutative(rng, 4) for _ in range(3)]
    idfs = [
        parse_identity("x*x = 0"),
        parse_identity("J(x,y,x*z) = J(x,y,z)*x"),
        parse_identity("J(x,y,x*z) = 0"),
        parse_identity("J(x,y,x*y) = 0"),
    ]
    for A in fixtures:
        for idf in idfs:
            verdict = check_identity(A, idf).holds
            diff = idf.lhs_minus_rhs()
            seen_nonzero = False
            for _ in range(200):
                env = {v: rand_elt(rng, A).coords for v in idf.variables}
                val = evaluate_term(diff, env, A)
                if any(x != 0 for x in val):
                    seen_nonzero = True
                    break
            assert verdict == (not seen_nonzero)
