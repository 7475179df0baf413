"""Multivariate polynomials over Q, univariate gcd and Sturm root counting.

Polynomials are sparse maps exponent-vector -> Fraction over a fixed ordered
variable tuple.  The univariate machinery (division, gcd, square-free part,
Sturm sequences) is what certifies whether a degeneracy polynomial has roots
inside an open interval, so all of it is exact.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactalg import GaussianRational, Matrix, parse_rational

_F0 = Fraction(0)
_F1 = Fraction(1)

Exponents = Tuple[int, ...]


class Poly:
    """Polynomial over Q in the ordered variables `variables`."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Dict[Exponents, Fraction]] = None):
        self.variables = tuple(variables)
        clean: Dict[Exponents, Fraction] = {}
        if terms:
            width = len(self.variables)
            for exps, coeff in terms.items():
                if len(exps) != width:
                    raise ValueError("exponent vector width differs from variable count")
                coeff = parse_rational(coeff)
                if coeff:
                    clean[tuple(exps)] = coeff
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Poly":
        return cls(variables, {})

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Poly":
        value = parse_rational(value)
        if not value:
            return cls.zero(variables)
        return cls(variables, {tuple([0] * len(variables)): value})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Poly":
        variables = tuple(variables)
        idx = variables.index(name)
        exps = [0] * len(variables)
        exps[idx] = 1
        return cls(variables, {tuple(exps): _F1})

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return _F0
        (exps, coeff), = self.terms.items()
        if any(exps):
            raise ValueError("not a constant polynomial")
        return coeff

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        idx = self.variables.index(name)
        if not self.terms:
            return -1
        return max(e[idx] for e in self.terms)

    def used_variables(self) -> Tuple[str, ...]:
        used = set()
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used.add(self.variables[i])
        return tuple(v for v in self.variables if v in used)

    def univariate_name(self) -> Optional[str]:
        """The single effective variable, or None if constant/multivariate."""
        used = self.used_variables()
        if len(used) == 1:
            return used[0]
        return None

    def _check_same_ring(self, other: "Poly"):
        if self.variables != other.variables:
            raise ValueError("polynomials live in different rings")

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        self._check_same_ring(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            c = terms.get(exps, _F0) + coeff
            if c:
                terms[exps] = c
            else:
                terms.pop(exps, None)
        out = Poly.__new__(Poly)
        out.variables = self.variables
        out.terms = terms
        return out

    def __neg__(self) -> "Poly":
        out = Poly.__new__(Poly)
        out.variables = self.variables
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            q = parse_rational(other)
            out = Poly.__new__(Poly)
            out.variables = self.variables
            out.terms = {} if not q else {e: c * q for e, c in self.terms.items()}
            return out
        self._check_same_ring(other)
        terms: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = terms.get(e, _F0) + c1 * c2
                if c:
                    terms[e] = c
                else:
                    terms.pop(e, None)
        out = Poly.__new__(Poly)
        out.variables = self.variables
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.constant(self.variables, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, tuple(sorted(self.terms.items()))))

    # -- evaluation / substitution -------------------------------------

    def evaluate(self, point: Dict[str, Fraction]) -> Fraction:
        vals = [parse_rational(point[v]) for v in self.variables]
        total = _F0
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(vals, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def substitute(self, name: str, value) -> "Poly":
        """Set one variable to a rational; result lives in the remaining ring."""
        idx = self.variables.index(name)
        value = parse_rational(value)
        rest = tuple(v for i, v in enumerate(self.variables) if i != idx)
        terms: Dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            c = coeff * value ** exps[idx]
            e = tuple(x for i, x in enumerate(exps) if i != idx)
            if not c:
                continue
            acc = terms.get(e, _F0) + c
            if acc:
                terms[e] = acc
            else:
                terms.pop(e, None)
        return Poly(rest, terms)

    def rename_variables(self, new_names: Sequence[str]) -> "Poly":
        if len(new_names) != len(self.variables):
            raise ValueError("variable count mismatch")
        return Poly(tuple(new_names), dict(self.terms))

    def derivative(self, name: str) -> "Poly":
        idx = self.variables.index(name)
        terms: Dict[Exponents, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[idx]
            if not e:
                continue
            new = list(exps)
            new[idx] = e - 1
            terms[tuple(new)] = coeff * e
        return Poly(self.variables, terms)

    # -- univariate views ----------------------------------------------

    def univariate_coeffs(self, name: Optional[str] = None) -> List[Fraction]:
        """Ascending coefficient list; requires at most one effective variable."""
        used = self.used_variables()
        if len(used) > 1:
            raise ValueError("polynomial is not univariate")
        if name is None:
            name = used[0] if used else (self.variables[0] if self.variables else "x")
        if used and used[0] != name:
            raise ValueError(f"polynomial does not involve {name!r}")
        if not self.terms:
            return []
        idx = self.variables.index(name) if name in self.variables else None
        deg = self.degree_in(name) if idx is not None else 0
        coeffs = [_F0] * (deg + 1)
        for exps, coeff in self.terms.items():
            coeffs[exps[idx] if idx is not None else 0] += coeff
        return _trim(coeffs)

    @classmethod
    def from_univariate_coeffs(cls, name: str, coeffs: Sequence[Fraction]) -> "Poly":
        return cls((name,), {(i,): c for i, c in enumerate(coeffs) if c})

    # -- printing --------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        # descending by total degree, then by exponent tuple
        keys = sorted(self.terms, key=lambda e: (sum(e), e), reverse=True)
        parts = []
        for pos, exps in enumerate(keys):
            coeff = self.terms[exps]
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in zip(self.variables, exps) if e
            )
            mag = abs(coeff)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if pos == 0:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


# ---------------------------------------------------------------------------
# raw univariate helpers on ascending Fraction lists
# ---------------------------------------------------------------------------


def _trim(coeffs: List[Fraction]) -> List[Fraction]:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _udeg(p: List[Fraction]) -> int:
    return len(p) - 1


def _uscale(p: List[Fraction], c: Fraction) -> List[Fraction]:
    return [a * c for a in p]


def _usub(p: List[Fraction], q: List[Fraction]) -> List[Fraction]:
    n = max(len(p), len(q))
    out = [(p[i] if i < len(p) else _F0) - (q[i] if i < len(q) else _F0) for i in range(n)]
    return _trim(out)


def _umul(p: List[Fraction], q: List[Fraction]) -> List[Fraction]:
    if not p or not q:
        return []
    out = [_F0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] += a * b
    return _trim(out)


def _udivmod(p: List[Fraction], q: List[Fraction]) -> tuple:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(p)
    quo = [_F0] * max(0, len(p) - len(q) + 1)
    lead = q[-1]
    while len(p) >= len(q) and p:
        shift = len(p) - len(q)
        factor = p[-1] / lead
        quo[shift] = factor
        for i, b in enumerate(q):
            p[shift + i] -= factor * b
        _trim(p)
    return _trim(quo), p


def _ugcd(p: List[Fraction], q: List[Fraction]) -> List[Fraction]:
    a, b = list(p), list(q)
    while b:
        a, b = b, _udivmod(a, b)[1]
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _ueval(p: List[Fraction], x: Fraction) -> Fraction:
    acc = _F0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _uderiv(p: List[Fraction]) -> List[Fraction]:
    return _trim([c * i for i, c in enumerate(p)][1:])


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# public univariate operations
# ---------------------------------------------------------------------------


def gcd_univariate(polys: Iterable[Poly]) -> Poly:
    """Monic gcd of univariate polynomials in a common variable."""
    polys = [p for p in polys]
    if not polys:
        raise ValueError("empty input")
    name = None
    for p in polys:
        n = p.univariate_name()
        if n is not None:
            if name is None:
                name = n
            elif n != name:
                raise ValueError("polynomials involve different variables")
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        raise ValueError("all polynomials are zero")
    if name is None:
        name = nonzero[0].variables[0] if nonzero[0].variables else "x"
    acc: List[Fraction] = []
    for p in nonzero:
        acc = _ugcd(acc, p.univariate_coeffs(name))
        if _udeg(acc) == 0:
            break
    return Poly.from_univariate_coeffs(name, acc)


def square_free_part(p: Poly) -> Poly:
    """Monic square-free part p / gcd(p, p') of a univariate polynomial."""
    name = p.univariate_name()
    if name is None:
        if p.is_zero():
            raise ValueError("zero polynomial")
        return Poly.constant(p.variables, 1)
    coeffs = p.univariate_coeffs(name)
    g = _ugcd(coeffs, _uderiv(coeffs))
    quo, rem = _udivmod(coeffs, g)
    if rem:
        raise ArithmeticError("square-free division left a remainder")
    lead = quo[-1]
    return Poly.from_univariate_coeffs(name, [c / lead for c in quo])


def sturm_sequence(coeffs: List[Fraction]) -> List[List[Fraction]]:
    chain = [list(coeffs), _uderiv(coeffs)]
    while chain[-1]:
        rem = _udivmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append([-c for c in rem])
    return [c for c in chain if c]


def _sign_variations(chain: List[List[Fraction]], x: Optional[Fraction], at_pos_inf: bool = False) -> int:
    signs = []
    for p in chain:
        if x is not None:
            s = _sign(_ueval(p, x))
        elif at_pos_inf:
            s = _sign(p[-1])
        else:
            s = _sign(p[-1]) * (-1 if _udeg(p) % 2 else 1)
        if s:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def real_roots_in_interval(p: Poly, lo: Optional[Fraction], hi: Optional[Fraction]) -> int:
    """Count distinct real roots of p in the open interval (lo, hi).

    lo=None means -infinity, hi=None means +infinity.  The square-free part
    is taken first; roots exactly at finite endpoints are excluded.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no root count")
    name = p.univariate_name()
    if name is None:
        return 0  # nonzero constant
    if lo is not None and hi is not None and not lo < hi:
        raise ValueError("empty interval")
    coeffs = square_free_part(p).univariate_coeffs(name)
    # exclude endpoint roots so the Sturm half-open count becomes an open count
    for endpoint in (lo, hi):
        if endpoint is None:
            continue
        endpoint = parse_rational(endpoint)
        while coeffs and not _ueval(coeffs, endpoint):
            coeffs = _udivmod(coeffs, [-endpoint, _F1])[0]
    if _udeg(coeffs) < 1:
        return 0
    chain = sturm_sequence(coeffs)
    va = _sign_variations(chain, None if lo is None else parse_rational(lo))
    vb = _sign_variations(chain, None if hi is None else parse_rational(hi), at_pos_inf=True)
    return va - vb


# ---------------------------------------------------------------------------
# polynomial matrices
# ---------------------------------------------------------------------------


class PolyMatrix:
    """Matrix with Poly entries over a shared variable tuple."""

    __slots__ = ("rows", "cols", "variables", "entries")

    def __init__(self, entries: Sequence[Sequence[Poly]]):
        rows = tuple(tuple(row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("empty polynomial matrix")
        self.entries = rows
        self.rows = len(rows)
        self.cols = len(rows[0])
        self.variables = rows[0][0].variables
        for row in rows:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")
            for e in row:
                if e.variables != self.variables:
                    raise ValueError("mixed variable rings in matrix")

    @classmethod
    def from_scalar_matrices(
        cls, variables: Sequence[str], coefficients: Sequence[Matrix]
    ) -> "PolyMatrix":
        """sum_i variables[i] * coefficients[i], coefficients rational."""
        variables = tuple(variables)
        if len(variables) != len(coefficients):
            raise ValueError("one variable per coefficient matrix required")
        n_rows = coefficients[0].rows
        n_cols = coefficients[0].cols
        entries = []
        for i in range(n_rows):
            row = []
            for j in range(n_cols):
                terms: Dict[Exponents, Fraction] = {}
                for k, mat in enumerate(coefficients):
                    val = mat.entries[i][j]
                    if not val.is_rational():
                        raise ValueError("coefficient matrices must be rational")
                    if val.re:
                        exps = [0] * len(variables)
                        exps[k] = 1
                        terms[tuple(exps)] = val.re
                row.append(Poly(variables, terms))
            entries.append(row)
        return cls(entries)

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        zero = Poly.zero(self.variables)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def __pow__(self, k: int) -> "PolyMatrix":
        if self.rows != self.cols:
            raise ValueError("power of non-square matrix")
        result = PolyMatrix(
            [
                [
                    Poly.constant(self.variables, 1 if i == j else 0)
                    for j in range(self.cols)
                ]
                for i in range(self.rows)
            ]
        )
        for _ in range(k):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def substitute(self, name: str, value) -> "PolyMatrix":
        return PolyMatrix([[e.substitute(name, value) for e in row] for row in self.entries])

    def rename_variables(self, new_names: Sequence[str]) -> "PolyMatrix":
        return PolyMatrix([[e.rename_variables(new_names) for e in row] for row in self.entries])

    def evaluate(self, point: Dict[str, Fraction]) -> Matrix:
        return Matrix(
            [[GaussianRational(e.evaluate(point)) for e in row] for row in self.entries]
        )


def _poly_det(rows: List[List[Poly]]) -> Poly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    variables = rows[0][0].variables
    acc = Poly.zero(variables)
    for i in range(n):
        lead = rows[i][0]
        if lead.is_zero():
            continue
        minor_rows = [
            [rows[r][c] for c in range(1, n)] for r in range(n) if r != i
        ]
        sub = _poly_det(minor_rows)
        term = lead * sub
        acc = acc + term if i % 2 == 0 else acc - term
    return acc


def minors(m: PolyMatrix, k: int) -> List[Poly]:
    """All k x k minor determinants, in row-major combination order."""
    if k < 1 or k > min(m.rows, m.cols):
        raise ValueError(f"minor size {k} out of range for {m.rows}x{m.cols} matrix")
    out = []
    for rows in itertools.combinations(range(m.rows), k):
        for cols in itertools.combinations(range(m.cols), k):
            grid = [[m.entries[r][c] for c in cols] for r in rows]
            out.append(_poly_det(grid))
    return out


def reduce_mod(p: Poly, rel: Poly, var: str) -> Poly:
    """Remainder of p modulo rel with respect to var.

    rel must have a nonzero rational leading coefficient in var (monic after
    scaling), so division terminates with deg_var(result) < deg_var(rel).
    """
    if rel.degree_in(var) < 1:
        raise ValueError(f"relation does not contain variable {var!r}")
    p._check_same_ring(rel)
    d = rel.degree_in(var)
    idx = rel.variables.index(var)
    lead_terms = {
        tuple(x for i, x in enumerate(e) if i != idx): c
        for e, c in rel.terms.items()
        if e[idx] == d
    }
    if len(lead_terms) != 1 or any(lead_terms):
        raise ValueError("leading coefficient of the relation must be a rational constant")
    lead = next(iter(lead_terms.values()))
    rel_monic = rel * (_F1 / lead)
    remainder = p
    while True:
        dp = remainder.degree_in(var)
        if dp < d:
            return remainder
        # subtract (leading slice of remainder) * var^(dp-d) * rel_monic
        slice_terms = {e: c for e, c in remainder.terms.items() if e[idx] == dp}
        factor_terms = {}
        for e, c in slice_terms.items():
            moved = list(e)
            moved[idx] = dp - d
            factor_terms[tuple(moved)] = c
        factor = Poly(p.variables, factor_terms)
        remainder = remainder - factor * rel_monic
