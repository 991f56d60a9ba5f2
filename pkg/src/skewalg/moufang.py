"""Moufang-theorem analog on concrete algebras and the conjecture driver.

The checker asks, for a triple with vanishing Jacobian, whether the
subalgebra it generates is a Lie algebra.  The conjecture driver evaluates
the degree-6 test word J(a,b,(a*b)*(a*c)) in the truncated free algebra of
the variety v and reports the outcome with a certificate; the verdict is
reported, never asserted, since the underlying question is open.
"""

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Algebra, Element, Subspace, jacobian, restrict, subalgebra_generated
from .freealg import (
    CONJECTURE_WORD,
    DEFAULT_RELATION_BUDGET,
    SANITY_WORD,
    FreeQuotient,
    WordValue,
    build_free_quotient,
    conjecture_certificate,
    evaluate_word,
    sort_key,
)
from .identities import Classification, classify, get_variety
from .linalg import Matrix, format_scalar, null_space
from .reports import Report, classification_items


@dataclass(frozen=True)
class MoufangReport:
    """Outcome of one hypothesis/conclusion check on a concrete triple.

    The conclusion is evaluated only when the hypothesis holds; otherwise
    the generated subalgebra and the conclusion flag stay None.
    """

    algebra: Algebra
    triple: tuple
    j_value: Element
    hypothesis_holds: bool
    generated: Subspace | None
    restricted: Algebra | None
    conclusion_holds: bool | None
    classification: Classification


def moufang_check(A: Algebra, x1, x2, x3, classification=None) -> MoufangReport:
    """Check the triple: J = 0 implies the generated subalgebra is Lie."""
    for x in (x1, x2, x3):
        if x.algebra is not A:
            raise ValueError("triple elements must belong to the given algebra")
    j = jacobian(x1, x2, x3)
    hypothesis = j.is_zero()
    generated = restricted = conclusion = None
    if hypothesis:
        generated = subalgebra_generated([x1, x2, x3])
        restricted = restrict(A, generated, name=f"{A.name}|gen")
        conclusion = True
        n = restricted.dim
        for i in range(n):
            for jj in range(i + 1, n):
                for k in range(jj + 1, n):
                    val = jacobian(
                        restricted.basis_element(i),
                        restricted.basis_element(jj),
                        restricted.basis_element(k),
                    )
                    if not val.is_zero():
                        conclusion = False
                        break
                if conclusion is False:
                    break
            if conclusion is False:
                break
    if classification is None:
        classification = classify(A)
    return MoufangReport(
        algebra=A,
        triple=(x1, x2, x3),
        j_value=j,
        hypothesis_holds=hypothesis,
        generated=generated,
        restricted=restricted,
        conclusion_holds=conclusion,
        classification=classification,
    )


def solve_null_triples(A: Algebra, x1, x2) -> Subspace:
    """All x3 with J(x1,x2,x3) = 0: the null space of a linear map."""
    images = [jacobian(x1, x2, A.basis_element(k)).coords for k in range(A.dim)]
    # constraint per output coordinate: transpose of the image rows
    constraints = [
        tuple(images[k][m] for k in range(A.dim)) for m in range(A.dim)
    ]
    kernel = null_space(Matrix(constraints, cols=A.dim))
    return Subspace.from_vectors(A, kernel)


def sample_null_triples(A: Algebra, rng, count):
    """Deterministic triples with J(x1,x2,x3) = 0, x3 solved rather than guessed."""
    triples = []
    for _ in range(count):
        x1 = A.element([Fraction(rng.randint(-3, 3)) for _ in range(A.dim)])
        x2 = A.element([Fraction(rng.randint(-3, 3)) for _ in range(A.dim)])
        S = solve_null_triples(A, x1, x2)
        x3 = A.zero()
        for v in S.basis_elements():
            x3 = x3 + rng.randint(-3, 3) * v
        triples.append((x1, x2, x3))
    return triples


def render_moufang(report: MoufangReport, command) -> Report:
    rep = Report(command)
    rep.add_section("input")
    rep.add("algebra", report.algebra.name)
    for label, el in zip(("x1", "x2", "x3"), report.triple):
        rep.add(label, el)
    rep.add_section("hypothesis")
    rep.add("J(x1,x2,x3)", report.j_value)
    rep.add("holds", "yes" if report.hypothesis_holds else "no")
    rep.add_section("conclusion")
    if report.hypothesis_holds:
        rep.add("generated dimension", report.generated.dim)
        rep.add(
            "generated basis",
            ", ".join(str(e) for e in report.generated.basis_elements()),
        )
        rep.add(
            "Jacobi on generated subalgebra",
            "holds" if report.conclusion_holds else "FAILS",
        )
    else:
        rep.add("status", "not evaluated (hypothesis fails)")
    rep.add_section("ambient memberships")
    for variety, verdict in classification_items(report.classification):
        rep.add(variety, verdict)
    return rep


def _quotient_jacobian(F: FreeQuotient, t1, t2, t3):
    """J over homogeneous coordinate dicts, multiplied inside the quotient."""
    out = {}
    for (da, va), (db, vb), (dc, vc) in ((t1, t2, t3), (t2, t3, t1), (t3, t1, t2)):
        dp, vp = F.product(da, va, db, vb)
        _, vq = F.product(dp, vp, dc, vc)
        for m, v in vq.items():
            nv = out.get(m, 0) + v
            if nv:
                out[m] = nv
            elif m in out:
                del out[m]
    return t1[0] + t2[0] + t3[0], out


def jacobi_on_quotient_basis(F: FreeQuotient):
    """Basis monomial triples of a free quotient with nonzero Jacobian."""
    flat = [(d, m) for d in range(1, F.max_degree + 1) for m in F.basis[d]]
    witnesses = []
    for i in range(len(flat)):
        for j in range(i + 1, len(flat)):
            for k in range(j + 1, len(flat)):
                packs = [(flat[p][0], {flat[p][1]: Fraction(1)}) for p in (i, j, k)]
                _, coords = _quotient_jacobian(F, *packs)
                if coords:
                    witnesses.append(tuple(F.label(flat[p][1]) for p in (i, j, k)))
    return witnesses


def value_text(F: FreeQuotient, value: WordValue):
    if not value.coords:
        return "0"
    parts = []
    for m in sorted(value.coords, key=sort_key):
        v = Fraction(value.coords[m])
        mag = format_scalar(abs(v))
        body = F.label(m) if mag == "1" else f"{mag}*{F.label(m)}"
        if not parts:
            parts.append(body if v > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if v > 0 else f"- {body}")
    return " ".join(parts)


def run_conjecture(variant_generators=False, budget=DEFAULT_RELATION_BUDGET) -> Report:
    """Full conjecture run: certificate, sanity lines, and contrast status."""
    cert = conjecture_certificate(budget=budget)
    F = cert.quotient
    command = "conjecture --variant-generators" if variant_generators else "conjecture"
    rep = Report(command)
    rep.add_section("free algebra")
    rep.add("variety", "v")
    rep.add("generators", ", ".join(F.generators))
    rep.add("max degree", cert.max_degree)
    rep.add("dims", ", ".join(f"{d}: {n}" for d, n in enumerate(cert.dims, start=1)))
    rep.add_section("word")
    rep.add("text", cert.word_text)
    rep.add("degree", cert.value.degree)
    rep.add("value", value_text(F, cert.value))
    rep.add("verdict", cert.verdict)
    rep.add("routes agree", "yes" if cert.routes_agree else "NO")
    rep.add_section("sanity")
    rep.add(SANITY_WORD, value_text(F, evaluate_word(F, SANITY_WORD)))
    Fw = build_free_quotient(get_variety("w"), 3, cert.max_degree, budget=budget)
    rep.add(
        f"{CONJECTURE_WORD} in free w",
        value_text(Fw, evaluate_word(Fw, CONJECTURE_WORD)),
    )
    rep.add_section("certificate")
    if cert.verdict == "zero":
        rep.add("status", "zero value; combination over degree-6 relation rows below")
        rep.add("rows", len(cert.zero_combination))
        for idx, (coef, desc, _row) in enumerate(cert.zero_combination, start=1):
            rep.add(idx, f"{format_scalar(coef)} * {desc}")
    else:
        rep.add("status", "nonzero value; coordinates below")
        for m in sorted(cert.value.coords, key=sort_key):
            rep.add(F.label(m), format_scalar(cert.value.coords[m]))
    if variant_generators:
        x1 = evaluate_word(F, "a")
        x2 = evaluate_word(F, "b")
        x3 = evaluate_word(F, "a*c")
        p = F.product(x1.degree, x1.coords, x2.degree, x2.coords)
        q = F.product(p[0], p[1], x3.degree, x3.coords)
        deg, coords = _quotient_jacobian(
            F, (x1.degree, x1.coords), (x2.degree, x2.coords), q
        )
        rep.add_section("variant a, b, a*c")
        rep.add("atoms", "x1 = a, x2 = b, x3 = a*c")
        rep.add("word over atoms", "J(x1,x2,(x1*x2)*x3)")
        rep.add("value", value_text(F, WordValue(deg, coords)))
        rep.add("verdict", "zero" if not coords else "nonzero")
        rep.add(
            "agrees with primary framing",
            "yes" if coords == cert.value.coords else "NO",
        )
    rep.add_section("contrast")
    if cert.verdict == "zero":
        rep.add(
            "status",
            "skipped (word value is zero; no failing triple arises from this run)",
        )
    else:
        rep.add("status", "witness triple inside the truncated free algebra")
        rep.add("algebra", f"free v quotient, generators a, b, c, max degree {cert.max_degree}")
        rep.add("x1 = a, x2 = b, x3", "a*c")
        rep.add("J(x1,x2,x3)", value_text(F, evaluate_word(F, SANITY_WORD)))
        rep.add("J(a,b,(a*b)*(a*c)) in the generated subalgebra", value_text(F, cert.value))
        rep.add(
            "conclusion",
            "FAILS (hypothesis holds while Jacobi fails on the generated subalgebra)",
        )
    return rep
