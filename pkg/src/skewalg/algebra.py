"""Finite-dimensional anticommutative algebras given by structure constants.

An algebra is specified by the products e_i*e_j for i != j; the diagonal is
forced to zero and e_j*e_i = -e_i*e_j is filled in automatically, so x*x = 0
holds structurally for every element (we are over Q).
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import Matrix, format_scalar, null_space, rref_rows


class Algebra:
    """Structure-constant algebra; products stored sparsely per (i<j) pair."""

    __slots__ = ("name", "dim", "basis_names", "_rows")

    def __init__(self, name, basis_names, products):
        self.name = name
        self.basis_names = tuple(basis_names)
        self.dim = len(self.basis_names)
        rows = {}
        seen = set()
        for (i, j), combo in products.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise ValueError(f"basis index out of range in pair ({i},{j})")
            if i == j:
                raise ValueError(f"diagonal product e{i}*e{i} must be zero")
            key = (i, j) if i < j else (j, i)
            if key in seen:
                raise ValueError(f"duplicate product pair for basis ({key[0]},{key[1]})")
            seen.add(key)
            sign = 1 if i < j else -1
            row = {}
            for k, v in combo.items():
                if not 0 <= k < self.dim:
                    raise ValueError(f"coefficient index {k} out of range")
                if v:
                    row[k] = sign * v
            if row:
                rows[key] = row
        self._rows = rows

    def c(self, i, j, k):
        """Structure constant: coefficient of e_k in e_i * e_j."""
        if i == j:
            return 0
        key, sign = ((i, j), 1) if i < j else ((j, i), -1)
        row = self._rows.get(key)
        if not row:
            return 0
        return sign * row.get(k, 0)

    def table_pairs(self):
        """Iterate ((i, j), {k: c}) over the stored i<j pairs with nonzero rows."""
        return self._rows.items()

    def element(self, coords):
        coords = tuple(coords)
        if len(coords) != self.dim:
            raise ValueError("coordinate length mismatch")
        return Element(self, coords)

    def basis_element(self, i):
        return Element(self, tuple(1 if k == i else 0 for k in range(self.dim)))

    def zero(self):
        return Element(self, (0,) * self.dim)

    def mul_coords(self, xc, yc):
        out = [0] * self.dim
        for i, xi in enumerate(xc):
            if not xi:
                continue
            for j, yj in enumerate(yc):
                if not yj or i == j:
                    continue
                key, f = ((i, j), xi * yj) if i < j else ((j, i), -(xi * yj))
                row = self._rows.get(key)
                if row:
                    for k, ck in row.items():
                        out[k] += f * ck
        return tuple(out)

    def mul_sparse(self, xs, ys):
        """Product on sparse {index: coeff} vectors; much faster near the basis."""
        out = {}
        rows = self._rows
        for i, xi in xs.items():
            for j, yj in ys.items():
                if i == j:
                    continue
                key, f = ((i, j), xi * yj) if i < j else ((j, i), -(xi * yj))
                row = rows.get(key)
                if row:
                    for k, ck in row.items():
                        v = out.get(k, 0) + f * ck
                        if v:
                            out[k] = v
                        elif k in out:
                            del out[k]
        return out

    def __repr__(self):
        return f"Algebra({self.name!r}, dim={self.dim})"


class Element:
    """Algebra element: a coordinate vector tied to its algebra."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        self.algebra = algebra
        self.coords = tuple(coords)

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return Element(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Element(self.algebra, tuple(-a for a in self.coords))

    def __rmul__(self, scalar):
        return Element(self.algebra, tuple(scalar * a for a in self.coords))

    def __mul__(self, other):
        if not isinstance(other, Element):
            return Element(self.algebra, tuple(a * other for a in self.coords))
        self._check(other)
        return Element(self.algebra, self.algebra.mul_coords(self.coords, other.coords))

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.algebra is other.algebra
            and all(a == b for a, b in zip(self.coords, other.coords))
        )

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return all(v == 0 for v in self.coords)

    def __str__(self):
        return render_coords(self.coords, self.algebra.basis_names)

    __repr__ = __str__


def render_coords(coords, names):
    """Linear combination as text: "a + 2*b - 1/2*d", zero as "0"."""
    parts = []
    for v, name in zip(coords, names):
        if v == 0:
            continue
        v = Fraction(v)
        mag = format_scalar(abs(v))
        body = name if mag == "1" else f"{mag}*{name}"
        if not parts:
            parts.append(body if v > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if v > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def multiply(x: Element, y: Element) -> Element:
    return x * y


def jacobian(x: Element, y: Element, z: Element) -> Element:
    """J(x,y,z) = (xy)z + (yz)x + (zx)y."""
    return (x * y) * z + (y * z) * x + (z * x) * y


class Subspace:
    """Subspace of an algebra, kept in canonical reduced echelon form."""

    __slots__ = ("algebra", "rows", "pivots")

    def __init__(self, algebra, rows, pivots):
        self.algebra = algebra
        self.rows = tuple(tuple(r) for r in rows)
        self.pivots = tuple(pivots)

    @classmethod
    def from_vectors(cls, algebra, vectors):
        rows, pivots = rref_rows(list(vectors), algebra.dim)
        return cls(algebra, rows, pivots)

    @property
    def dim(self):
        return len(self.rows)

    def coords_of(self, x):
        """Coefficients over the echelon basis, or None if x is outside."""
        v = list(x.coords if isinstance(x, Element) else x)
        coeffs = []
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            coeffs.append(c)
            if c:
                for k, rv in enumerate(row):
                    if rv:
                        v[k] -= c * rv
        if any(val != 0 for val in v):
            return None
        return coeffs

    def contains(self, x):
        return self.coords_of(x) is not None

    def basis_elements(self):
        return [Element(self.algebra, r) for r in self.rows]

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.algebra is other.algebra
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Subspace(dim={self.dim} of {self.algebra.name})"


def _closure(algebra, start_vectors, expand):
    """Span-closure iteration: grow by expand(basis rows) until stable."""
    span = Subspace.from_vectors(algebra, start_vectors)
    for _ in range(algebra.dim + 1):
        new = expand(span.rows)
        grown = Subspace.from_vectors(algebra, list(span.rows) + new)
        if grown.dim == span.dim:
            return span
        span = grown
    raise AssertionError("closure failed to stabilize within dim steps")


def subalgebra_generated(gens) -> Subspace:
    if not gens:
        raise ValueError("need at least one generator")
    A = gens[0].algebra
    vectors = [g.coords for g in gens]

    def expand(rows):
        return [A.mul_coords(r, s) for ri, r in enumerate(rows) for s in rows[ri + 1 :]]

    return _closure(A, vectors, expand)


def ideal_generated(gens) -> Subspace:
    if not gens:
        raise ValueError("need at least one generator")
    A = gens[0].algebra
    units = [tuple(1 if k == i else 0 for k in range(A.dim)) for i in range(A.dim)]

    def expand(rows):
        return [A.mul_coords(r, u) for r in rows for u in units]

    return _closure(A, [g.coords for g in gens], expand)


def product_space(A: Algebra) -> Subspace:
    vecs = [
        tuple(row.get(k, 0) for k in range(A.dim)) for _, row in A.table_pairs()
    ]
    return Subspace.from_vectors(A, vecs)


def center(A: Algebra) -> Subspace:
    rows = []
    for i in range(A.dim):
        for k in range(A.dim):
            rows.append([A.c(j, i, k) for j in range(A.dim)])
    return Subspace.from_vectors(A, null_space(Matrix(rows, cols=A.dim)))


def lie_center(A: Algebra) -> Subspace:
    n = A.dim
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            ei, ej = A.basis_element(i), A.basis_element(j)
            jess = [jacobian(A.basis_element(m), ei, ej).coords for m in range(n)]
            for k in range(n):
                rows.append([jess[m][k] for m in range(n)])
    if not rows:
        return Subspace.from_vectors(A, [A.basis_element(i).coords for i in range(n)])
    return Subspace.from_vectors(A, null_space(Matrix(rows, cols=n)))


def jacobian_ideal(A: Algebra) -> Subspace:
    n = A.dim
    gens = [
        jacobian(A.basis_element(i), A.basis_element(j), A.basis_element(k))
        for i in range(n)
        for j in range(i + 1, n)
        for k in range(j + 1, n)
    ]
    if not gens:
        gens = [A.zero()]
    return ideal_generated(gens)


def _space_product(A, S, T):
    return [A.mul_coords(r, s) for r in S.rows for s in T.rows]


def derived_series(A: Algebra):
    whole = Subspace.from_vectors(A, [tuple(1 if k == i else 0 for k in range(A.dim)) for i in range(A.dim)])
    series = [whole]
    while True:
        cur = series[-1]
        vecs = [A.mul_coords(r, s) for ri, r in enumerate(cur.rows) for s in cur.rows[ri + 1 :]]
        nxt = Subspace.from_vectors(A, vecs)
        if nxt.dim == cur.dim:
            return series
        series.append(nxt)
        if nxt.dim == 0:
            return series


def lower_central_series(A: Algebra):
    whole = Subspace.from_vectors(A, [tuple(1 if k == i else 0 for k in range(A.dim)) for i in range(A.dim)])
    series = [whole]
    while True:
        vecs = []
        n = len(series)
        # C_{n+1} = sum of C_i * C_{n+1-i}; indices here are 1-based
        for i in range(1, n + 1):
            j = n + 1 - i
            if j < 1 or j > n:
                continue
            vecs.extend(_space_product(A, series[i - 1], series[j - 1]))
        nxt = Subspace.from_vectors(A, vecs)
        if nxt.dim == series[-1].dim:
            return series
        series.append(nxt)
        if nxt.dim == 0:
            return series


def is_solvable(A: Algebra) -> bool:
    return derived_series(A)[-1].dim == 0


def is_nilpotent(A: Algebra) -> bool:
    return lower_central_series(A)[-1].dim == 0


def restrict(A: Algebra, S: Subspace, name=None) -> Algebra:
    """Re-express a product-closed subspace as a standalone algebra."""
    rows = S.rows
    products = {}
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            prod = A.mul_coords(rows[i], rows[j])
            coeffs = S.coords_of(prod)
            if coeffs is None:
                raise ValueError("subspace is not closed under multiplication")
            combo = {k: v for k, v in enumerate(coeffs) if v}
            if combo:
                products[(i, j)] = combo
    names = []
    for idx, r in enumerate(rows):
        hot = [k for k, v in enumerate(r) if v != 0]
        if len(hot) == 1 and r[hot[0]] == 1:
            names.append(A.basis_names[hot[0]])
        else:
            names.append(f"v{idx}")
    return Algebra(name or f"{A.name}|sub", names, products)


def change_basis(A: Algebra, new_basis_rows, names, name=None) -> Algebra:
    """Same algebra in a new ordered basis (rows = new vectors in old coords)."""
    from .linalg import invert_rows

    n = A.dim
    if len(new_basis_rows) != n:
        raise ValueError("need exactly dim basis vectors")
    inv = invert_rows(new_basis_rows)
    if inv is None:
        raise ValueError("basis change matrix is singular")
    products = {}
    for i in range(n):
        for j in range(i + 1, n):
            prod_old = A.mul_coords(new_basis_rows[i], new_basis_rows[j])
            new_coords = [
                sum(prod_old[c] * inv[c][k] for c in range(n)) for k in range(n)
            ]
            combo = {k: v for k, v in enumerate(new_coords) if v}
            if combo:
                products[(i, j)] = combo
    return Algebra(name or f"{A.name}|rebased", names, products)
