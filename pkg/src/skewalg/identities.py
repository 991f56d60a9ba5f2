"""Nonassociative polynomial identities: parsing, polarization, checking.

Grammar for identity text:

    identity   := expr '=' expr
    expr       := ['+'|'-'] term (('+'|'-') term)*
    term       := [rational '*'] factor ('*' factor)*   |   rational
    factor     := variable | 'J(' expr ',' expr ',' expr ')' | '(' expr ')'
    variable   := single lowercase letter
    rational   := digits ['/' digits]

`J(t1,t2,t3)` expands to (t1*t2)*t3 + (t2*t3)*t1 + (t3*t1)*t2 at parse time.
A bare rational term is only allowed when it is 0. Identities must be
homogeneous in every variable; checking works by full polarization, which is
equivalent over Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from math import comb

from .algebra import Algebra, Element

DEFAULT_EVAL_BUDGET = 10_000_000


class IdentityParseError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class BudgetExceeded(RuntimeError):
    def __init__(self, required, budget):
        super().__init__(
            f"identity check needs {required} evaluations, budget is {budget}"
        )
        self.required = required
        self.budget = budget


# term nodes: ("var", label) | ("prod", l, r) | ("sum", ((coef, node), ...))


def _jac(t1, t2, t3):
    return (
        "sum",
        (
            (1, ("prod", ("prod", t1, t2), t3)),
            (1, ("prod", ("prod", t2, t3), t1)),
            (1, ("prod", ("prod", t3, t1), t2)),
        ),
    )


class _Parser:
    def __init__(self, text):
        self.text = text
        self.i = 0

    def error(self, message, pos=None):
        raise IdentityParseError(message, self.i if pos is None else pos)

    def ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self):
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch):
        self.ws()
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.i += 1

    def number(self):
        start = self.i
        while self.peek().isdigit():
            self.i += 1
        num = int(self.text[start : self.i])
        if self.peek() == "/":
            self.i += 1
            dstart = self.i
            while self.peek().isdigit():
                self.i += 1
            if dstart == self.i:
                self.error("expected digits after '/'")
            den = int(self.text[dstart : self.i])
            if den == 0:
                self.error("zero denominator", start)
            return Fraction(num, den)
        return Fraction(num)

    def factor(self):
        self.ws()
        ch = self.peek()
        if ch == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if ch == "J":
            self.i += 1
            self.expect("(")
            t1 = self.expr()
            self.expect(",")
            t2 = self.expr()
            self.expect(",")
            t3 = self.expr()
            self.expect(")")
            return _jac(t1, t2, t3)
        if ch.isalpha() and ch.islower():
            self.i += 1
            return ("var", ch)
        self.error("expected a variable, 'J(', or '('")

    def term(self):
        self.ws()
        coef = Fraction(1)
        if self.peek().isdigit():
            pos = self.i
            coef = self.number()
            self.ws()
            if self.peek() == "*":
                self.i += 1
            else:
                if coef != 0:
                    self.error("constant terms are not allowed", pos)
                return coef, None
        tree = self.factor()
        while True:
            save = self.i
            self.ws()
            if self.peek() == "*":
                self.i += 1
                tree = ("prod", tree, self.factor())
            else:
                self.i = save
                break
        return coef, tree

    def expr(self):
        items = []
        self.ws()
        sign = 1
        if self.peek() in ("+", "-"):
            sign = 1 if self.peek() == "+" else -1
            self.i += 1
        while True:
            coef, tree = self.term()
            if tree is not None:
                items.append((sign * coef, tree))
            self.ws()
            if self.peek() in ("+", "-"):
                sign = 1 if self.peek() == "+" else -1
                self.i += 1
            else:
                break
        return ("sum", tuple(items))

    def identity(self):
        lhs = self.expr()
        self.expect("=")
        rhs = self.expr()
        self.ws()
        if self.i != len(self.text):
            self.error("unexpected trailing input")
        return lhs, rhs


def _flatten(tree):
    """Distribute sums: list of (coef, tree-with-only-prod/var-nodes)."""
    kind = tree[0]
    if kind == "var":
        return [(Fraction(1), tree)]
    if kind == "prod":
        out = []
        for cl, tl in _flatten(tree[1]):
            for cr, tr in _flatten(tree[2]):
                out.append((cl * cr, ("prod", tl, tr)))
        return out
    out = []
    for c, t in tree[1]:
        for c2, t2 in _flatten(t):
            out.append((c * c2, t2))
    return out


def _collect_vars(tree, seen, order):
    kind = tree[0]
    if kind == "var":
        if tree[1] not in seen:
            seen.add(tree[1])
            order.append(tree[1])
    elif kind == "prod":
        _collect_vars(tree[1], seen, order)
        _collect_vars(tree[2], seen, order)
    else:
        for _, t in tree[1]:
            _collect_vars(t, seen, order)


def _term_profile(tree, acc):
    if tree[0] == "var":
        acc[tree[1]] = acc.get(tree[1], 0) + 1
    else:
        _term_profile(tree[1], acc)
        _term_profile(tree[2], acc)


@dataclass(frozen=True)
class IdentityDef:
    text: str
    variables: tuple
    lhs: tuple
    rhs: tuple
    profile: dict

    def lhs_minus_rhs(self):
        items = list(self.lhs[1]) + [(-c, t) for c, t in self.rhs[1]]
        return ("sum", tuple(items))

    def __repr__(self):
        return f"IdentityDef({self.text!r})"


def parse_identity(text: str) -> IdentityDef:
    p = _Parser(text)
    lhs, rhs = p.identity()
    seen, order = set(), []
    _collect_vars(lhs, seen, order)
    _collect_vars(rhs, seen, order)
    terms = _flatten(lhs) + _flatten(rhs)
    profile = None
    for _, t in terms:
        acc = {}
        _term_profile(t, acc)
        if profile is None:
            profile = acc
        elif acc != profile:
            raise IdentityParseError(
                f"non-homogeneous identity: term degrees {acc} vs {profile}", 0
            )
    if profile is None:
        profile = {}
    return IdentityDef(text, tuple(order), lhs, rhs, profile)


def _replace_occurrences(tree, var, labels, pos):
    if tree[0] == "var":
        if tree[1] == var:
            lab = labels[pos[0]]
            pos[0] += 1
            return ("var", lab)
        return tree
    return (
        "prod",
        _replace_occurrences(tree[1], var, labels, pos),
        _replace_occurrences(tree[2], var, labels, pos),
    )


class Component:
    """One multilinear component of a polarized identity."""

    __slots__ = ("variables", "groups", "origin_vars", "terms", "_leaves")

    def __init__(self, variables, groups, origin_vars, terms):
        self.variables = tuple(variables)
        self.groups = tuple(tuple(g) for g in groups)
        self.origin_vars = tuple(origin_vars)
        self.terms = tuple(terms)
        leaves = {}

        def walk(t):
            if t[0] == "var":
                leaves[id(t)] = (t[1],)
            else:
                walk(t[1])
                walk(t[2])
                leaves[id(t)] = leaves[id(t[1])] + leaves[id(t[2])]

        for _, t in self.terms:
            walk(t)
        self._leaves = leaves

    def evaluate(self, A: Algebra, vectors):
        """Dense evaluation: vectors aligned with self.variables."""
        env = {
            v: {i: c for i, c in enumerate(vec) if c}
            for v, vec in zip(self.variables, vectors)
        }
        out = [0] * A.dim
        for coef, tree in self.terms:
            val = _eval_sparse(A, tree, env)
            for k, x in val.items():
                out[k] += coef * x
        return out

    def evaluate_on_basis(self, A: Algebra, idx_env, memo):
        out = {}
        leaves = self._leaves
        for coef, tree in self.terms:
            val = _eval_basis(A, tree, idx_env, leaves, memo)
            for k, x in val.items():
                v = out.get(k, 0) + coef * x
                if v:
                    out[k] = v
                elif k in out:
                    del out[k]
        return out


def _eval_sparse(A, tree, env):
    if tree[0] == "var":
        return env[tree[1]]
    if tree[0] == "prod":
        return A.mul_sparse(_eval_sparse(A, tree[1], env), _eval_sparse(A, tree[2], env))
    out = {}
    for c, t in tree[1]:
        for k, x in _eval_sparse(A, t, env).items():
            v = out.get(k, 0) + c * x
            if v:
                out[k] = v
            elif k in out:
                del out[k]
    return out


def _eval_basis(A, tree, idx_env, leaves, memo):
    if tree[0] == "var":
        return {idx_env[tree[1]]: 1}
    key = (id(tree), tuple(idx_env[l] for l in leaves[id(tree)]))
    hit = memo.get(key)
    if hit is not None:
        return hit
    val = A.mul_sparse(
        _eval_basis(A, tree[1], idx_env, leaves, memo),
        _eval_basis(A, tree[2], idx_env, leaves, memo),
    )
    memo[key] = val
    return val


def evaluate_term(tree, env, A: Algebra):
    """Evaluate any term tree on dense coordinate vectors; returns a list."""
    sparse_env = {v: {i: c for i, c in enumerate(vec) if c} for v, vec in env.items()}
    val = _eval_sparse(A, tree, sparse_env)
    out = [0] * A.dim
    for k, x in val.items():
        out[k] = x
    return out


@dataclass(frozen=True)
class MultilinearSystem:
    parent: IdentityDef
    components: tuple


def polarize(idf: IdentityDef) -> MultilinearSystem:
    terms = _flatten(idf.lhs) + [(-c, t) for c, t in _flatten(idf.rhs)]
    groups = []
    variables = []
    for v in idf.variables:
        m = idf.profile.get(v, 0)
        copies = (v,) if m <= 1 else tuple(f"{v}{i}" for i in range(1, m + 1))
        groups.append(copies)
        variables.extend(copies)
    new_terms = []
    for coef, tree in terms:
        expansions = [(coef, tree)]
        for v, copies in zip(idf.variables, groups):
            if len(copies) == 1:
                continue
            nxt = []
            for c, t in expansions:
                for perm in permutations(copies):
                    nxt.append((c, _replace_occurrences(t, v, perm, [0])))
            expansions = nxt
        new_terms.extend(expansions)
    component = Component(variables, groups, idf.variables, new_terms)
    return MultilinearSystem(idf, (component,))


@dataclass(frozen=True)
class Witness:
    assignment: tuple
    value: Element
    collapsed: bool

    def describe(self):
        pairs = ", ".join(f"{n} = {e}" for n, e in self.assignment)
        return f"{pairs} gives {self.value}"


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    identity: IdentityDef
    witness: Witness | None


def _count_evaluations(A, system):
    n = A.dim
    total = 0
    for comp in system.components:
        cnt = 1
        for g in comp.groups:
            cnt *= comb(n + len(g) - 1, len(g))
        total += cnt
    return total


def check_identity(A: Algebra, idf: IdentityDef, budget=DEFAULT_EVAL_BUDGET) -> CheckResult:
    """Exhaustively evaluate the polarized identity on basis tuples.

    Copies of a polarized variable only range over sorted index tuples: the
    component is symmetric in them, so this both prunes the search and keeps
    the reported witness the lexicographically first failing assignment.
    """
    system = polarize(idf)
    required = _count_evaluations(A, system)
    if required > budget:
        raise BudgetExceeded(required, budget)
    n = A.dim
    for comp in system.components:
        memo = {}
        pools = [
            list(combinations_with_replacement(range(n), len(g))) for g in comp.groups
        ]
        for combo in product(*pools):
            idx_env = {}
            for g, picks in zip(comp.groups, combo):
                for label, i in zip(g, picks):
                    idx_env[label] = i
            val = comp.evaluate_on_basis(A, idx_env, memo)
            if val:
                return CheckResult(False, idf, _build_witness(A, idf, comp, combo, val))
    return CheckResult(True, idf, None)


def _build_witness(A, idf, comp, combo, sparse_value):
    collapsed = all(len(set(picks)) == 1 for picks in combo)
    if collapsed:
        assignment = tuple(
            (v, A.basis_element(picks[0]))
            for v, picks in zip(comp.origin_vars, combo)
        )
        env = {v: e.coords for v, e in assignment}
        value = A.element(evaluate_term(idf.lhs_minus_rhs(), env, A))
    else:
        assignment = tuple(
            (label, A.basis_element(i))
            for g, picks in zip(comp.groups, combo)
            for label, i in zip(g, picks)
        )
        dense = [0] * A.dim
        for k, x in sparse_value.items():
            dense[k] = x
        value = A.element(dense)
    return Witness(assignment, value, collapsed)


_VARIETY_TEXTS = {
    "lie": ("x*x = 0", "J(x,y,z) = 0"),
    "malcev": ("x*x = 0", "J(x,y,x*z) = J(x,y,z)*x"),
    "binary-lie": ("x*x = 0", "J(x,y,x*y) = 0"),
    "w": ("x*x = 0", "J(x,y,z*u) = 0"),
    "v": ("x*x = 0", "J(x,y,x*z) = 0"),
    "lam": ("x*x = 0", "J(x,y,z*t) = 0", "J(x,y,z)*t = 0"),
    "alam": ("x*x = 0", "J(x,y,x*z) = 0", "J(x,y,z)*x = 0"),
}

_BUILTINS = None


def builtin_varieties():
    """The named identity systems, in fixed report order."""
    global _BUILTINS
    if _BUILTINS is None:
        _BUILTINS = {
            name: tuple(parse_identity(t) for t in texts)
            for name, texts in _VARIETY_TEXTS.items()
        }
    return _BUILTINS


def get_variety(name):
    vs = builtin_varieties()
    if name not in vs:
        raise ValueError(f"unknown variety {name!r}; available: {', '.join(vs)}")
    return vs[name]


@dataclass(frozen=True)
class VarietyVerdict:
    variety: str
    member: bool
    failed_identity: str | None
    witness: Witness | None


@dataclass(frozen=True)
class Classification:
    algebra_name: str
    verdicts: tuple

    def member(self, variety):
        for v in self.verdicts:
            if v.variety == variety:
                return v.member
        raise KeyError(variety)


def classify(A: Algebra, budget=DEFAULT_EVAL_BUDGET) -> Classification:
    verdicts = []
    for name, idfs in builtin_varieties().items():
        entry = VarietyVerdict(name, True, None, None)
        for idf in idfs:
            res = check_identity(A, idf, budget)
            if not res.holds:
                entry = VarietyVerdict(name, False, idf.text, res.witness)
                break
        verdicts.append(entry)
    return Classification(A.name, tuple(verdicts))
