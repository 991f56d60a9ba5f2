"""Degree-truncated free algebras of identity-defined varieties.

Monomials are binary trees over generator indices kept in a canonical form
that realizes anticommutativity: at every node the left subtree strictly
precedes the right in the degree-then-structure order, one sign per swap,
equal children collapsing to zero.  A FreeQuotient records, degree by
degree up to a cap, the surviving monomial basis and a rewrite map sending
every canonical monomial into it.  Relations come from substitution
instances of the polarized defining identities plus monomial multiples of
lower-degree relations; adjoined words enter the ideal without the
substitution step.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from string import ascii_lowercase

from .identities import _flatten, get_variety, parse_identity, polarize

DEFAULT_RELATION_BUDGET = 5_000_000

CONJECTURE_WORD = "J(a,b,(a*b)*(a*c))"
SANITY_WORD = "J(a,b,a*c)"


class RelationBudgetExceeded(RuntimeError):
    def __init__(self, budget):
        super().__init__(f"relation budget of {budget} rows exceeded")
        self.budget = budget


# --- canonical monomials ----------------------------------------------------

_KEYS = {}


def degree(m) -> int:
    return 1 if isinstance(m, int) else degree(m[0]) + degree(m[1])


def sort_key(m):
    """Total order token: degree first, then (left, right) recursively."""
    k = _KEYS.get(m)
    if k is None:
        if isinstance(m, int):
            k = (1, 0, m)
        else:
            kl = sort_key(m[0])
            kr = sort_key(m[1])
            k = (kl[0] + kr[0], 1, kl, kr)
        _KEYS[m] = k
    return k


def canonicalize(tree):
    """(sign, canonical monomial), or None when the tree is identically zero."""
    if isinstance(tree, int):
        return 1, tree
    cl = canonicalize(tree[0])
    if cl is None:
        return None
    cr = canonicalize(tree[1])
    if cr is None:
        return None
    sign = cl[0] * cr[0]
    left, right = cl[1], cr[1]
    if left == right:
        return None
    if sort_key(left) > sort_key(right):
        left, right, sign = right, left, -sign
    return sign, (left, right)


def mono_label(m, names) -> str:
    if isinstance(m, int):
        return names[m]
    return f"({mono_label(m[0], names)}*{mono_label(m[1], names)})"


def enumerate_monomials(g: int, max_degree: int):
    """Canonical monomials per degree, index d of the result holding degree d."""
    if g < 1 or max_degree < 1:
        raise ValueError("need g >= 1 and max_degree >= 1")
    by = [[] for _ in range(max_degree + 1)]
    by[1] = list(range(g))
    for d in range(2, max_degree + 1):
        out = []
        for e in range(1, d // 2 + 1):
            f = d - e
            if e < f:
                out.extend((l, r) for l in by[e] for r in by[f])
            else:
                half = by[e]
                out.extend(
                    (half[i], half[j])
                    for i in range(len(half))
                    for j in range(i + 1, len(half))
                )
        out.sort(key=sort_key)
        by[d] = out
    return by


# --- integer echelon over sparse rows ----------------------------------------


def _row_normalize(row):
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if row[min(row)] < 0:
        g = -g
    if g != 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _eliminate(row, pivot_row, col):
    a, b = row[col], pivot_row[col]
    g = gcd(a, b)
    fa, fb = a // g, b // g
    out = {c: v * fb for c, v in row.items()}
    for c, v in pivot_row.items():
        nv = out.get(c, 0) - fa * v
        if nv:
            out[c] = nv
        elif c in out:
            del out[c]
    return out


class _Echelon:
    def __init__(self):
        self.rows = {}

    def insert(self, row):
        row = dict(row)
        while row:
            lead = min(row)
            piv = self.rows.get(lead)
            if piv is None:
                self.rows[lead] = _row_normalize(row)
                return lead
            row = _eliminate(row, piv, lead)
        return None

    def reduce_full(self):
        """Clear pivot columns from every other row (descending pass)."""
        for p in sorted(self.rows, reverse=True):
            row = self.rows[p]
            while True:
                hits = [c for c in row if c != p and c in self.rows]
                if not hits:
                    break
                c = min(hits)
                row = _eliminate(row, self.rows[c], c)
            self.rows[p] = _row_normalize(row)

    def sorted_rows(self):
        return [self.rows[p] for p in sorted(self.rows)]


def _scale_to_int(frow):
    denom = 1
    for v in frow.values():
        denom = denom * v.denominator // gcd(denom, v.denominator)
    return {c: int(v * denom) for c, v in frow.items() if v}


def _dedupe_key(row):
    return tuple(sorted(_row_normalize(dict(row)).items()))


# --- the quotient ------------------------------------------------------------


@dataclass(frozen=True)
class WordValue:
    """Homogeneous element of a FreeQuotient: degree plus monomial coordinates."""

    degree: int
    coords: dict

    def is_zero(self):
        return not self.coords


class FreeQuotient:
    """Degree-truncated free algebra of a variety; built by build_free_quotient."""

    def __init__(self, identities, generators, max_degree):
        self.identities = tuple(identities)
        self.generators = tuple(generators)
        self.max_degree = max_degree
        self.systems = tuple(polarize(i) for i in self.identities)
        self.monomials = enumerate_monomials(len(self.generators), max_degree)
        self.col = [
            {m: i for i, m in enumerate(lst)} for lst in self.monomials
        ]
        self.basis = [()] * (max_degree + 1)
        self.rewrite = {}
        self.relations_rref = [[] for _ in range(max_degree + 1)]
        self.extra = []
        self._pair_cache = {}

    def dims(self):
        return [len(self.basis[d]) for d in range(1, self.max_degree + 1)]

    def label(self, m):
        return mono_label(m, self.generators)

    def _pair_product(self, m1, m2):
        """Rewrite image of the product of two canonical monomials."""
        cached = self._pair_cache.get((m1, m2))
        if cached is None:
            res = canonicalize((m1, m2))
            if res is None:
                cached = {}
            else:
                sign, mono = res
                cached = {
                    bm: sign * bc for bm, bc in self.rewrite[mono].items()
                }
            self._pair_cache[(m1, m2)] = cached
        return cached

    def product(self, d1, v1, d2, v2):
        """Multiply homogeneous coordinate dicts; degrees past the cap give 0."""
        d = d1 + d2
        if d > self.max_degree:
            return d, {}
        out = {}
        for m1, c1 in v1.items():
            for m2, c2 in v2.items():
                f = c1 * c2
                for bm, bc in self._pair_product(m1, m2).items():
                    nv = out.get(bm, 0) + f * bc
                    if nv:
                        out[bm] = nv
                    elif bm in out:
                        del out[bm]
        return d, out

    def expand_to_monomials(self, tree):
        """Distribute a word AST into (coefficient, canonical monomial) pairs."""
        out = []
        for coef, prod_tree in _flatten(tree):
            res = canonicalize(self._to_leaf_tree(prod_tree))
            if res is not None:
                out.append((coef * res[0], res[1]))
        return out

    def _to_leaf_tree(self, tree):
        if tree[0] == "var":
            label = tree[1]
            try:
                return self.generators.index(label)
            except ValueError:
                raise ValueError(f"unknown generator {label!r}") from None
        return (self._to_leaf_tree(tree[1]), self._to_leaf_tree(tree[2]))

    def self_check(self):
        """Re-verify every defining relation vanishes under the rewrite map."""
        for d in range(2, self.max_degree + 1):
            for desc, row in _degree_rows(self, d, descriptions=True):
                image = {}
                for c, v in row.items():
                    for bm, bc in self.rewrite[self.monomials[d][c]].items():
                        nv = image.get(bm, 0) + v * bc
                        if nv:
                            image[bm] = nv
                        elif bm in image:
                            del image[bm]
                if image:
                    raise ValueError(f"self-check failed at degree {d}: {desc}")


def _ast_degree(tree):
    if tree[0] == "var":
        return 1
    if tree[0] == "prod":
        return _ast_degree(tree[1]) + _ast_degree(tree[2])
    degs = {_ast_degree(t) for _, t in tree[1]}
    if len(degs) != 1:
        raise ValueError("word is not homogeneous")
    return degs.pop()


def parse_word(text: str):
    """Parse a nonassociative word (identity grammar, no equation part)."""
    if "=" in text:
        raise ValueError("expected a word, not an identity")
    return parse_identity(f"{text} = 0").lhs


def _subst(tree, env):
    if tree[0] == "var":
        return env[tree[1]]
    return (_subst(tree[1], env), _subst(tree[2], env))


def _assignments(monomials, k, d):
    if k == 1:
        yield from ((m,) for m in monomials[d]) if d < len(monomials) else ()
        return
    for first in range(1, d - k + 2):
        for m in monomials[first]:
            for rest in _assignments(monomials, k - 1, d - first):
                yield (m,) + rest


def _degree_rows(F, d, descriptions=False):
    """Relation rows of degree d in a fixed deterministic order.

    Yields (description, row) pairs; descriptions are skipped (None) unless
    requested, since building them is pure string work.
    """
    for idf, system in zip(F.identities, F.systems):
        for comp in system.components:
            k = len(comp.variables)
            if k > d:
                continue
            for combo in _assignments(F.monomials, k, d):
                env = dict(zip(comp.variables, combo))
                frow = {}
                for coef, tree in comp.terms:
                    res = canonicalize(_subst(tree, env))
                    if res is None:
                        continue
                    c = F.col[d][res[1]]
                    nv = frow.get(c, 0) + coef * res[0]
                    if nv:
                        frow[c] = Fraction(nv)
                    elif c in frow:
                        del frow[c]
                desc = None
                if descriptions:
                    assign = ", ".join(
                        f"{v} = {F.label(m)}"
                        for v, m in zip(comp.variables, combo)
                    )
                    desc = f"{idf.text} [{assign}]"
                yield desc, _scale_to_int(frow)
    for e in range(1, d):
        for idx, r in enumerate(F.relations_rref[e]):
            for m in F.monomials[d - e]:
                row = {}
                for c, v in r.items():
                    res = canonicalize((F.monomials[e][c], m))
                    if res is None:
                        continue
                    c2 = F.col[d][res[1]]
                    nv = row.get(c2, 0) + v * res[0]
                    if nv:
                        row[c2] = nv
                    elif c2 in row:
                        del row[c2]
                desc = f"R{e}[{idx}] * {F.label(m)}" if descriptions else None
                yield desc, row
    for deg, text, row in F.extra:
        if deg == d:
            yield (f"adjoined: {text}" if descriptions else None), dict(row)


def build_free_quotient(
    identities,
    generators,
    max_degree,
    extra_relations=(),
    budget=DEFAULT_RELATION_BUDGET,
    self_check=True,
) -> FreeQuotient:
    """Construct the truncated free algebra of the given variety, degreewise."""
    idfs = tuple(
        parse_identity(t) if isinstance(t, str) else t for t in identities
    )
    if isinstance(generators, int):
        if not 1 <= generators <= 26:
            raise ValueError("generator count must be between 1 and 26")
        names = tuple(ascii_lowercase[:generators])
    else:
        names = tuple(generators)
    F = FreeQuotient(idfs, names, max_degree)
    for word in extra_relations:
        tree = parse_word(word) if isinstance(word, str) else word
        deg = _ast_degree(tree)
        if deg > max_degree:
            raise ValueError(
                f"adjoined relation has degree {deg} above the cap {max_degree}"
            )
        frow = {}
        for coef, mono in F.expand_to_monomials(tree):
            c = F.col[deg][mono]
            nv = frow.get(c, 0) + coef
            if nv:
                frow[c] = Fraction(nv)
            elif c in frow:
                del frow[c]
        text = word if isinstance(word, str) else "<word>"
        F.extra.append((deg, text, _scale_to_int(frow)))
    count = 0
    for d in range(1, max_degree + 1):
        ech = _Echelon()
        seen = set()
        for _desc, row in _degree_rows(F, d):
            count += 1
            if count > budget:
                raise RelationBudgetExceeded(budget)
            if not row:
                continue
            key = _dedupe_key(row)
            if key in seen:
                continue
            seen.add(key)
            ech.insert(row)
        ech.reduce_full()
        rows = ech.sorted_rows()
        F.relations_rref[d] = rows
        pivots = set(ech.rows)
        F.basis[d] = tuple(
            m for i, m in enumerate(F.monomials[d]) if i not in pivots
        )
        for m in F.basis[d]:
            F.rewrite[m] = {m: Fraction(1)}
        for row in rows:
            lead = min(row)
            lv = row[lead]
            F.rewrite[F.monomials[d][lead]] = {
                F.monomials[d][c]: Fraction(-v, lv)
                for c, v in row.items()
                if c != lead
            }
    if self_check:
        F.self_check()
    return F


# --- evaluation ---------------------------------------------------------------


def _eval_ast(F, tree):
    if tree[0] == "var":
        label = tree[1]
        try:
            idx = F.generators.index(label)
        except ValueError:
            raise ValueError(f"unknown generator {label!r}") from None
        return 1, dict(F.rewrite[idx])
    if tree[0] == "prod":
        dl, vl = _eval_ast(F, tree[1])
        dr, vr = _eval_ast(F, tree[2])
        return F.product(dl, vl, dr, vr)
    out = {}
    deg = None
    for coef, term in tree[1]:
        dt, vt = _eval_ast(F, term)
        deg = dt if deg is None else deg
        for m, v in vt.items():
            nv = out.get(m, 0) + coef * v
            if nv:
                out[m] = nv
            elif m in out:
                del out[m]
    return deg, out


def evaluate_word(F: FreeQuotient, word) -> WordValue:
    """Value of a word in the quotient, computed bottom-up through products."""
    tree = parse_word(word) if isinstance(word, str) else word
    d = _ast_degree(tree)
    if d > F.max_degree:
        raise ValueError(
            f"degree overflow: word degree {d} exceeds max degree {F.max_degree}"
        )
    deg, coords = _eval_ast(F, tree)
    return WordValue(deg, coords)


def expand_evaluate(F: FreeQuotient, word) -> WordValue:
    """Value of a word by full distribution first, one rewrite at the top."""
    tree = parse_word(word) if isinstance(word, str) else word
    d = _ast_degree(tree)
    if d > F.max_degree:
        raise ValueError(
            f"degree overflow: word degree {d} exceeds max degree {F.max_degree}"
        )
    out = {}
    for coef, mono in F.expand_to_monomials(tree):
        for bm, bc in F.rewrite[mono].items():
            nv = out.get(bm, 0) + coef * bc
            if nv:
                out[bm] = nv
            elif bm in out:
                del out[bm]
    return WordValue(d, out)


# --- certificates --------------------------------------------------------------


def relation_combination(F: FreeQuotient, word):
    """Express a vanishing word over the degree's relation rows.

    Returns a list of (coefficient, description, row) with rows keyed by
    monomial; the linear combination reproduces the word's expansion.
    """
    tree = parse_word(word) if isinstance(word, str) else word
    value = evaluate_word(F, tree)
    if value.coords:
        raise ValueError("word is nonzero in the quotient")
    d = value.degree
    originals = []
    ech_rows = {}
    for desc, row in _degree_rows(F, d, descriptions=True):
        if not row:
            continue
        tags = {len(originals): Fraction(1)}
        originals.append((desc, row))
        row = dict(row)
        while row:
            lead = min(row)
            hit = ech_rows.get(lead)
            if hit is None:
                g = 0
                for v in row.values():
                    g = gcd(g, v)
                if row[lead] < 0:
                    g = -g
                if g != 1:
                    row = {c: v // g for c, v in row.items()}
                    tags = {t: v / g for t, v in tags.items()}
                ech_rows[lead] = (row, tags)
                break
            prow, ptags = hit
            a, b = row[lead], prow[lead]
            cg = gcd(a, b)
            fa, fb = a // cg, b // cg
            row = _eliminate(row, prow, lead)
            ntags = {t: v * fb for t, v in tags.items()}
            for t, v in ptags.items():
                nv = ntags.get(t, 0) - fa * v
                if nv:
                    ntags[t] = nv
                elif t in ntags:
                    del ntags[t]
            tags = ntags
    v = {}
    for coef, mono in F.expand_to_monomials(tree):
        c = F.col[d][mono]
        nv = v.get(c, 0) + Fraction(coef)
        if nv:
            v[c] = nv
        elif c in v:
            del v[c]
    target = dict(v)
    acc = {}
    while v:
        lead = min(v)
        hit = ech_rows.get(lead)
        if hit is None:
            raise ValueError("reduction failed to close; quotient is inconsistent")
        prow, ptags = hit
        f = v[lead] / prow[lead]
        for c, val in prow.items():
            nv = v.get(c, 0) - f * val
            if nv:
                v[c] = nv
            elif c in v:
                del v[c]
        for t, val in ptags.items():
            nv = acc.get(t, 0) + f * val
            if nv:
                acc[t] = nv
            elif t in acc:
                del acc[t]
    check = {}
    for t, coef in acc.items():
        for c, val in originals[t][1].items():
            nv = check.get(c, 0) + coef * val
            if nv:
                check[c] = nv
            elif c in check:
                del check[c]
    if check != target:
        raise ValueError("relation combination does not reproduce the word")
    return [
        (
            acc[t],
            originals[t][0],
            {F.monomials[d][c]: val for c, val in originals[t][1].items()},
        )
        for t in sorted(acc)
    ]


@dataclass
class ConjectureCertificate:
    generators: tuple
    max_degree: int
    dims: list
    word_text: str
    value: WordValue
    verdict: str
    sanity_zero: bool
    routes_agree: bool
    zero_combination: list | None
    quotient: FreeQuotient


def conjecture_certificate(
    g=3, max_degree=6, budget=DEFAULT_RELATION_BUDGET, self_check=True
) -> ConjectureCertificate:
    """Evaluate the degree-6 test word in the truncated free algebra of v.

    The verdict reports what the computation found; neither outcome is
    asserted as ground truth.
    """
    if g < 3:
        raise ValueError("the test word needs the generators a, b, c")
    F = build_free_quotient(
        get_variety("v"), g, max_degree, budget=budget, self_check=self_check
    )
    sanity = evaluate_word(F, SANITY_WORD)
    via_products = evaluate_word(F, CONJECTURE_WORD)
    via_expansion = expand_evaluate(F, CONJECTURE_WORD)
    verdict = "zero" if via_products.is_zero() else "nonzero"
    combination = (
        relation_combination(F, CONJECTURE_WORD) if verdict == "zero" else None
    )
    return ConjectureCertificate(
        generators=F.generators,
        max_degree=max_degree,
        dims=F.dims(),
        word_text=CONJECTURE_WORD,
        value=via_products,
        verdict=verdict,
        sanity_zero=sanity.is_zero(),
        routes_agree=via_products == via_expansion,
        zero_combination=combination,
        quotient=F,
    )
