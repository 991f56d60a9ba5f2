"""Exact linear algebra over the rationals.

Scalars are `fractions.Fraction`; plain ints are accepted anywhere a scalar
is and mix freely (Fraction arithmetic already interoperates with int, and
keeping ints as ints is noticeably faster on the large eliminations).
Everything is dense and deterministic: no floats, no pivot heuristics.
"""

from __future__ import annotations

import re
from fractions import Fraction

Scalar = Fraction

_SCALAR_RE = re.compile(r"-?\d+(/\d+)?\Z")


def parse_scalar(text: str) -> Fraction:
    """Parse "p" or "p/q" (optional leading minus, no whitespace)."""
    if not _SCALAR_RE.match(text):
        raise ValueError(f"bad rational literal: {text!r}")
    num, _, den = text.partition("/")
    if den:
        d = int(den)
        if d == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(num), d)
    return Fraction(int(num))


def format_scalar(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Matrix:
    """Immutable rectangular grid of exact scalars."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, cols: int | None = None):
        entries = tuple(tuple(row) for row in entries)
        if entries:
            cols = len(entries[0])
            if any(len(row) != cols for row in entries):
                raise ValueError("ragged rows")
        elif cols is None:
            cols = 0
        object.__setattr__(self, "rows", len(entries))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.cols == other.cols
            and len(self.entries) == len(other.entries)
            and all(
                all(a == b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.entries, other.entries)
            )
        )

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(v) for v in row) for row in self.entries)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        return Matrix([[0] * cols for _ in range(rows)], cols=cols)


def rref_rows(rows, cols: int | None = None):
    """Reduced row echelon form of a list of row vectors.

    Pivoting is fixed: columns left to right, first row with a nonzero
    entry. Returns (reduced nonzero rows, pivot column indices); the result
    is the canonical rref of the row space, so it doubles as a normal form.
    """
    work = [list(r) for r in rows]
    if work:
        cols = len(work[0])
    elif cols is None:
        cols = 0
    pivots = []
    row = 0
    for col in range(cols):
        pick = None
        for i in range(row, len(work)):
            if work[i][col] != 0:
                pick = i
                break
        if pick is None:
            continue
        work[row], work[pick] = work[pick], work[row]
        piv = work[row][col]
        if piv != 1:
            inv = Fraction(1, 1) / piv
            work[row] = [inv * v for v in work[row]]
        cur = work[row]
        for i in range(len(work)):
            if i != row:
                f = work[i][col]
                if f != 0:
                    work[i] = [a - f * b for a, b in zip(work[i], cur)]
        pivots.append(col)
        row += 1
        if row == len(work):
            break
    return work[:row], pivots


def rref(m: Matrix):
    """rref of a Matrix; keeps the original row count (zero rows trail)."""
    reduced, pivots = rref_rows(m.entries, m.cols)
    pad = [[0] * m.cols for _ in range(m.rows - len(reduced))]
    return Matrix(reduced + pad, cols=m.cols), pivots


def null_space(m: Matrix):
    """Basis of the right kernel, one vector per non-pivot column."""
    reduced, pivots = rref_rows(m.entries, m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -Fraction(reduced[i][free])
        basis.append(tuple(v))
    return basis


def invert_rows(rows):
    """Inverse of a square matrix given as rows, or None if singular."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    reduced, pivots = rref_rows(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return [row[n:] for row in reduced]


def span_membership(basis, v):
    """Coefficients expressing v in the given spanning vectors, or None.

    The coefficient vector returned is the one with zeros in the positions
    rref marks as free, which makes it reproducible.
    """
    n = len(v)
    if any(len(b) != n for b in basis):
        raise ValueError("basis/vector length mismatch")
    if not basis:
        return [] if all(x == 0 for x in v) else None
    # solve B^T c = v via an augmented rref
    aug = [[basis[j][i] for j in range(len(basis))] + [v[i]] for i in range(n)]
    reduced, pivots = rref_rows(aug, len(basis) + 1)
    if len(basis) in pivots:
        return None
    coeffs = [Fraction(0)] * len(basis)
    for i, c in enumerate(pivots):
        coeffs[c] = Fraction(reduced[i][-1])
    return coeffs
