"""Exact linear algebra over the Gaussian rationals Q(i).

Everything here is value-semantic and exact: scalars are pairs of
``fractions.Fraction``, matrices are tuples of tuples, and subspaces are
kept in reduced row-echelon form so that structural equality of bases is
equality of subspaces.  No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

_F0 = Fraction(0)
_F1 = Fraction(1)

RationalLike = Union[int, str, Fraction]


def parse_rational(value) -> Fraction:
    """Parse a rational from an int, a Fraction or a "p/q" string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    return str(q)


class GaussianRational:
    """An element a + b*i of Q(i), with a, b stored as reduced Fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        self.re = parse_rational(re)
        self.im = parse_rational(im)

    @classmethod
    def _new(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return cls._new(parse_rational(value), _F0)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_rational(self) -> bool:
        return not self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._new(self.re, -self.im)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational._new(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational._new(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __neg__(self):
        return GaussianRational._new(-self.re, -self.im)

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        if not self.im and not other.im:
            return GaussianRational._new(self.re * other.re, _F0)
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational._new(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Q(i)")
        if not self.im and not other.im:
            return GaussianRational._new(self.re / other.re, _F0)
        c, d = other.re, other.im
        norm = c * c + d * d
        a, b = self.re, self.im
        return GaussianRational._new((a * c + b * d) / norm, (b * c - a * d) / norm)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"

    def to_json(self):
        """"p/q" string for rationals, {"re": .., "im": ..} otherwise."""
        if not self.im:
            return format_rational(self.re)
        return {"re": format_rational(self.re), "im": format_rational(self.im)}

    @classmethod
    def from_json(cls, data) -> "GaussianRational":
        if isinstance(data, dict):
            return cls(data.get("re", 0), data.get("im", 0))
        return cls(parse_rational(data))


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)

Vector = tuple  # tuple[GaussianRational, ...]


def make_vector(entries: Iterable) -> Vector:
    return tuple(GaussianRational.coerce(e) for e in entries)


def vector_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vector_scale(c: GaussianRational, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def vector_conjugate(v: Vector) -> Vector:
    return tuple(a.conjugate() for a in v)


def vector_is_zero(v: Vector) -> bool:
    return all(a.is_zero() for a in v)


def vector_is_rational(v: Vector) -> bool:
    return all(a.is_rational() for a in v)


def vector_to_json(v: Vector) -> list:
    return [a.to_json() for a in v]


class Matrix:
    """Dense matrix over Q(i) with immutable tuple-of-tuples entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(GaussianRational.coerce(e) for e in row) for row in entries)
        self.entries = rows
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        if any(len(r) != self.cols for r in rows):
            raise ValueError("ragged matrix")

    @classmethod
    def _from_tuples(cls, rows: tuple, nrows: int, ncols: int) -> "Matrix":
        obj = object.__new__(cls)
        obj.entries = rows
        obj.rows = nrows
        obj.cols = ncols
        return obj

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._from_tuples(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls._from_tuples(tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows)), rows, cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def is_rational(self) -> bool:
        return all(e.is_rational() for row in self.entries for e in row)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix._from_tuples(
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
            self.rows,
            self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix._from_tuples(
            tuple(tuple(-a for a in row) for row in self.entries), self.rows, self.cols
        )

    def scale(self, c) -> "Matrix":
        c = GaussianRational.coerce(c)
        return Matrix._from_tuples(
            tuple(tuple(c * a for a in row) for row in self.entries), self.rows, self.cols
        )

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        bt = tuple(zip(*other.entries)) if other.entries else ()
        out = []
        for row in self.entries:
            out_row = []
            for col in bt:
                acc = ZERO
                for a, b in zip(row, col):
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                out_row.append(acc)
            out.append(tuple(out_row))
        return Matrix._from_tuples(tuple(out), self.rows, other.cols)

    def __pow__(self, k: int) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("power of non-square matrix")
        if k < 0:
            raise ValueError("negative power")
        result = Matrix.identity(self.rows)
        base = self
        for _ in range(k):
            result = result * base
        return result

    def apply(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for row in self.entries:
            acc = ZERO
            for a, x in zip(row, v):
                if a.is_zero() or x.is_zero():
                    continue
                acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix._from_tuples(tuple(zip(*self.entries)), self.cols, self.rows)

    def conjugate(self) -> "Matrix":
        return Matrix._from_tuples(
            tuple(tuple(a.conjugate() for a in row) for row in self.entries), self.rows, self.cols
        )

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of non-square matrix")
        n = self.rows
        aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(self.entries)]
        reduced, pivots = _rref_rows(aug)
        if len(pivots) < n or any(p >= n for p in pivots):
            raise ValueError("matrix is singular")
        return Matrix(tuple(tuple(row[n:]) for row in reduced[:n]))

    def to_json(self):
        return [[e.to_json() for e in row] for row in self.entries]

    @classmethod
    def from_json(cls, data) -> "Matrix":
        return cls([[GaussianRational.from_json(e) for e in row] for row in data])

    def __repr__(self):
        body = "; ".join(" ".join(repr(e) for e in row) for row in self.entries)
        return f"Matrix[{body}]"


def _rref_rows(rows: list) -> tuple:
    """In-place reduced row echelon form of a list of row lists.

    Returns (rows, pivot_columns).
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    pr = 0
    for pc in range(ncols):
        pivot_row = None
        for r in range(pr, nrows):
            if not rows[r][pc].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[pr], rows[pivot_row] = rows[pivot_row], rows[pr]
        inv = ONE / rows[pr][pc]
        if inv != ONE:
            rows[pr] = [inv * a for a in rows[pr]]
        for r in range(nrows):
            if r == pr:
                continue
            factor = rows[r][pc]
            if factor.is_zero():
                continue
            prow = rows[pr]
            rows[r] = [a - factor * b for a, b in zip(rows[r], prow)]
        pivots.append(pc)
        pr += 1
        if pr == nrows:
            break
    return rows, tuple(pivots)


def rref(m: Matrix) -> tuple:
    """Reduced row echelon form and pivot columns; rank = len(pivots)."""
    rows = [list(row) for row in m.entries]
    if not rows:
        return m, ()
    reduced, pivots = _rref_rows(rows)
    return Matrix(reduced), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


class Subspace:
    """A subspace of Q(i)^n held as a reduced-row-echelon basis.

    The RREF basis is unique, so structural equality of bases is equality
    of subspaces.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Sequence[Vector] = ()):
        # callers must pass an already-canonical basis; use span() otherwise
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(v) for v in basis)

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        rows = [list(GaussianRational.coerce(e) for e in v) for v in vectors]
        for row in rows:
            if len(row) != ambient_dim:
                raise ValueError("vector length differs from ambient dimension")
        if not rows:
            return cls(ambient_dim, ())
        reduced, pivots = _rref_rows(rows)
        return cls(ambient_dim, tuple(tuple(r) for r in reduced[: len(pivots)]))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(
            ambient_dim,
            tuple(tuple(ONE if i == j else ZERO for j in range(ambient_dim)) for i in range(ambient_dim)),
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return len(self.basis) == self.ambient_dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def _require_same_ambient(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def __add__(self, other: "Subspace") -> "Subspace":
        self._require_same_ambient(other)
        return Subspace.span(self.ambient_dim, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._require_same_ambient(other)
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.ambient_dim)
        if self.is_full():
            return other
        if other.is_full():
            return self
        # v = sum x_i a_i = sum y_j b_j  <=>  (x, y) in ker [A^T | -B^T]
        n = self.ambient_dim
        p, q = self.dim, other.dim
        stacked = Matrix(
            [
                [self.basis[i][r] for i in range(p)] + [-other.basis[j][r] for j in range(q)]
                for r in range(n)
            ]
        )
        ker = kernel(stacked)
        vectors = []
        for w in ker.basis:
            v = [ZERO] * n
            for i in range(p):
                c = w[i]
                if c.is_zero():
                    continue
                for r in range(n):
                    v[r] = v[r] + c * self.basis[i][r]
            vectors.append(tuple(v))
        return Subspace.span(n, vectors)

    def contains_vector(self, v: Vector) -> bool:
        return self.coordinates_of(v) is not None

    def contains(self, other: "Subspace") -> bool:
        self._require_same_ambient(other)
        return all(self.contains_vector(v) for v in other.basis)

    def coordinates_of(self, v: Vector) -> Optional[Vector]:
        """Coefficients of v in this basis, or None if v is outside."""
        if len(v) != self.ambient_dim:
            raise ValueError("vector length differs from ambient dimension")
        coords = []
        residual = list(v)
        # RREF basis: eliminate by pivot positions
        for row in self.basis:
            pc = next(j for j, e in enumerate(row) if not e.is_zero())
            c = residual[pc]
            coords.append(c)
            if not c.is_zero():
                for j in range(pc, self.ambient_dim):
                    residual[j] = residual[j] - c * row[j]
        if any(not e.is_zero() for e in residual):
            return None
        return tuple(coords)

    def conjugate(self) -> "Subspace":
        # conjugating an RREF basis keeps it in RREF (pivots are 1)
        return Subspace(self.ambient_dim, tuple(vector_conjugate(v) for v in self.basis))

    def is_rational(self) -> bool:
        return all(vector_is_rational(v) for v in self.basis)

    def image_under(self, m: Matrix) -> "Subspace":
        if m.cols != self.ambient_dim:
            raise ValueError("matrix does not act on this ambient space")
        return Subspace.span(m.rows, [m.apply(v) for v in self.basis])

    def preimage_under(self, m: Matrix) -> "Subspace":
        """{v : m @ v in self} as a subspace of the domain."""
        if m.rows != self.ambient_dim:
            raise ValueError("matrix codomain does not match ambient space")
        n = m.cols
        d = self.dim
        if self.is_full():
            return Subspace.full(n)
        # m v = sum y_j b_j  <=>  (v, y) in ker [m | -B^T]
        stacked = Matrix(
            [
                list(m.entries[r]) + [-self.basis[j][r] for j in range(d)]
                for r in range(self.ambient_dim)
            ]
        )
        ker = kernel(stacked)
        return Subspace.span(n, [w[:n] for w in ker.basis])

    def to_json(self):
        return [vector_to_json(v) for v in self.basis]

    @classmethod
    def from_json(cls, ambient_dim: int, data) -> "Subspace":
        return cls.span(ambient_dim, [[GaussianRational.from_json(e) for e in v] for v in data])

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim})"


def kernel(m: Matrix) -> Subspace:
    """Exact null space of m, canonical."""
    reduced, pivots = rref(m)
    n = m.cols
    pivot_set = set(pivots)
    free_cols = [j for j in range(n) if j not in pivot_set]
    vectors = []
    for fc in free_cols:
        v = [ZERO] * n
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -reduced.entries[r][fc]
        vectors.append(tuple(v))
    return Subspace.span(n, vectors)


def image(m: Matrix) -> Subspace:
    """Column space of m as a subspace of the codomain."""
    return Subspace.span(m.rows, [m.column(j) for j in range(m.cols)])


def kernel_image(m: Matrix) -> tuple:
    """(kernel, image); dim ker + dim im = cols."""
    return kernel(m), image(m)


def solve(m: Matrix, target: Vector) -> Optional[Vector]:
    """One exact solution x of m @ x = target, or None."""
    n = m.cols
    rows = [list(row) + [GaussianRational.coerce(target[i])] for i, row in enumerate(m.entries)]
    reduced, pivots = _rref_rows(rows)
    if any(p == n for p in pivots):
        return None
    x = [ZERO] * n
    for r, pc in enumerate(pivots):
        x[pc] = reduced[r][n]
    return tuple(x)
