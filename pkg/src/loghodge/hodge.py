"""Pure polarized Hodge structures, mixed Hodge structures, and
N-polarized mixed Hodge structures, decided exactly.

All verdicts are exact: positivity is decided by Sylvester's criterion on
Hermitian Gram matrices of Gaussian rationals, and there is no tolerance
parameter anywhere.  Failed checks carry the first violated clause and a
witness that can be re-checked independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .exactalg import (
    GaussianRational,
    Matrix,
    ONE,
    Subspace,
    Vector,
    ZERO,
    kernel,
    vector_add,
    vector_conjugate,
    vector_scale,
    vector_to_json,
)
from .filtration import (
    DecreasingFiltration,
    GradedPiece,
    IncreasingFiltration,
    NilpotentOperator,
    induce_on_graded,
    weight_filtration,
)

_I_POWERS = (GaussianRational(1), GaussianRational(0, 1), GaussianRational(-1), GaussianRational(0, -1))


def i_power(e: int) -> GaussianRational:
    """i^e for any integer e."""
    return _I_POWERS[e % 4]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a predicate: ok, or the first violated clause plus witness."""

    ok: bool
    failed_clause: Optional[str] = None
    witness: Optional[dict] = None
    evidence: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        if self.failed_clause is not None:
            out["failed_clause"] = self.failed_clause
        if self.witness is not None:
            out["witness"] = self.witness
        if self.evidence is not None:
            out["evidence"] = self.evidence
        return out


class BilinearForm:
    """Nondegenerate rational bilinear form with parity (-1)^weight."""

    __slots__ = ("matrix", "weight_parity_sign")

    def __init__(self, matrix: Matrix, weight_parity_sign: int):
        if weight_parity_sign not in (1, -1):
            raise ValueError("parity sign must be +1 or -1")
        if matrix.rows != matrix.cols:
            raise ValueError("form matrix must be square")
        self.matrix = matrix
        self.weight_parity_sign = weight_parity_sign

    def validate(self) -> Optional[str]:
        """None if well formed, else a description of the first problem."""
        if not self.matrix.is_rational():
            return "form matrix has non-rational entries"
        sign = self.weight_parity_sign
        n = self.matrix.rows
        for i in range(n):
            for j in range(n):
                lhs = self.matrix.entries[i][j]
                rhs = self.matrix.entries[j][i] * sign
                if lhs != rhs:
                    return (
                        f"form parity violated at ({i},{j}): "
                        f"S[{i}][{j}]={lhs!r} but {sign}*S[{j}][{i}]={rhs!r}"
                    )
        if len(kernel(self.matrix).basis) != 0:
            return "form is degenerate"
        return None

    def pair(self, x: Vector, y: Vector) -> GaussianRational:
        """Bilinear pairing x^T S y (no conjugation)."""
        acc = ZERO
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            row = self.matrix.entries[i]
            for j, yj in enumerate(y):
                if yj.is_zero() or row[j].is_zero():
                    continue
                acc = acc + xi * row[j] * yj
        return acc

    def restrict(self, basis: Tuple[Vector, ...]) -> "Matrix":
        """Gram matrix of the bilinear pairing on the given vectors."""
        return Matrix([[self.pair(u, v) for v in basis] for u in basis])

    def to_json(self):
        return self.matrix.to_json()


@dataclass(frozen=True)
class HodgeDatum:
    """Candidate pure Hodge structure: weight, polarization form, filtration."""

    weight: int
    form: BilinearForm
    filtration: DecreasingFiltration

    def __post_init__(self):
        expected = 1 if self.weight % 2 == 0 else -1
        if self.form.weight_parity_sign != expected:
            raise ValueError("form parity does not match the weight")
        if self.form.matrix.rows != self.filtration.ambient_dim:
            raise ValueError("form and filtration dimensions differ")


def _hermitian_leading_minors(gram: List[List[GaussianRational]]) -> List[GaussianRational]:
    """Determinants of the leading principal submatrices, by expansion."""

    def det(sub: List[List[GaussianRational]]) -> GaussianRational:
        k = len(sub)
        if k == 0:
            return ONE
        if k == 1:
            return sub[0][0]
        acc = ZERO
        for i in range(k):
            lead = sub[i][0]
            if lead.is_zero():
                continue
            minor = [[sub[r][c] for c in range(1, k)] for r in range(k) if r != i]
            term = lead * det(minor)
            acc = acc + term if i % 2 == 0 else acc - term
        return acc

    return [det([row[: k + 1] for row in gram[: k + 1]]) for k in range(len(gram))]


def _hermitian_nonpositive_witness(
    gram: List[List[GaussianRational]],
) -> Optional[Tuple[Vector, GaussianRational]]:
    """A coordinate vector v with v^* G v <= 0, or None if G is positive definite.

    Exact Gram-Schmidt: if a pivot goes nonpositive the accumulated vector is
    the witness; a zero pivot with a nonzero off-diagonal residual yields an
    indefinite 2x2 block to extract a negative vector from.
    """
    n = len(gram)

    def h(x: Vector, y: Vector) -> GaussianRational:
        acc = ZERO
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            xc = xi.conjugate()
            for j, yj in enumerate(y):
                if yj.is_zero() or gram[i][j].is_zero():
                    continue
                acc = acc + xc * gram[i][j] * yj
        return acc

    basis: List[Vector] = []
    pivots: List[GaussianRational] = []
    for j in range(n):
        c = tuple(ONE if t == j else ZERO for t in range(n))
        for prev, piv in zip(basis, pivots):
            coeff = h(prev, c) / piv
            if not coeff.is_zero():
                c = tuple(a - coeff * b for a, b in zip(c, prev))
        p = h(c, c)
        if p.im:
            raise AssertionError("Hermitian Gram produced a non-real norm")
        if p.re < 0:
            return c, p
        if p.re == 0:
            for k in range(n):
                ek = tuple(ONE if t == k else ZERO for t in range(n))
                a = h(c, ek)
                if a.is_zero():
                    continue
                d = h(ek, ek)
                if d.im:
                    raise AssertionError("Hermitian Gram produced a non-real norm")
                s = Fraction(1) if d.re <= 0 else Fraction(1) / (2 * d.re)
                v = tuple(
                    x - GaussianRational(s) * a.conjugate() * y for x, y in zip(c, ek)
                )
                return v, h(v, v)
            return c, p  # null vector orthogonal to everything
        basis.append(c)
        pivots.append(p)
    return None


def is_pure_polarized(h: HodgeDatum) -> CheckResult:
    """Pure weight-w Hodge structure, polarized by the form.

    Clauses, in order: (a) F^p (+) conj(F^(w-p+1)) = H for every p;
    (b) S(F^p, F^(w-p+1)) = 0; (c) the Hermitian form i^(p-q) S(v, conj v)
    is positive definite on each H^(p,q) = F^p meet conj(F^q), decided by
    Sylvester's criterion on exact leading minors.
    """
    f = h.filtration
    n = f.ambient_dim
    w = h.weight
    jumps = f.jumps()
    lo0 = min(jumps) - 1 if jumps else 0
    hi0 = max(jumps) + 1 if jumps else 0
    # widen so that both p and w-p+1 sweep the jump range
    lo = min(lo0, w + 1 - hi0)
    hi = max(hi0, w + 1 - lo0)

    for p in range(lo, hi + 1):
        a = f.at(p)
        b = f.at(w - p + 1).conjugate()
        meet = a.intersect(b)
        if a.dim + b.dim != n or not meet.is_zero():
            witness = {"p": p}
            if not meet.is_zero():
                witness["vector"] = vector_to_json(meet.basis[0])
            else:
                witness["dims"] = [a.dim, b.dim, n]
            return CheckResult(False, "decomposition", witness)

    for p in range(lo, hi + 1):
        a = f.at(p)
        b = f.at(w - p + 1)
        for u in a.basis:
            for v in b.basis:
                val = h.form.pair(u, v)
                if not val.is_zero():
                    return CheckResult(
                        False,
                        "orthogonality",
                        {
                            "p": p,
                            "u": vector_to_json(u),
                            "v": vector_to_json(v),
                            "value": val.to_json(),
                        },
                    )

    for p in range(lo, hi + 1):
        q = w - p
        piece = f.at(p).intersect(f.at(q).conjugate())
        if piece.dim == 0:
            continue
        weil = i_power(p - q)
        gram = [
            [weil * h.form.pair(u, vector_conjugate(v)) for v in piece.basis]
            for u in piece.basis
        ]
        minors_ = _hermitian_leading_minors(gram)
        bad = next((k for k, d in enumerate(minors_) if d.im or d.re <= 0), None)
        if bad is not None:
            witness = {
                "p": p,
                "q": q,
                "leading_minor_index": bad + 1,
                "leading_minor": minors_[bad].to_json(),
            }
            found = _hermitian_nonpositive_witness(gram)
            if found is not None:
                coords, value = found
                ambient_vec = tuple(ZERO for _ in range(n))
                for c, bvec in zip(coords, piece.basis):
                    if not c.is_zero():
                        ambient_vec = vector_add(ambient_vec, vector_scale(c, bvec))
                witness["vector"] = vector_to_json(ambient_vec)
                witness["hermitian_value"] = value.to_json()
            return CheckResult(False, "positivity", witness)

    return CheckResult(True)


def is_mhs(w: IncreasingFiltration, f: DecreasingFiltration) -> CheckResult:
    """(W, F) is a mixed Hodge structure: F induces a pure structure of
    weight k on every graded piece gr_k (decomposition clause)."""
    if w.ambient_dim != f.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if not w.is_conjugation_stable():
        raise ValueError("weight filtration is not defined over the reals")
    jumps = w.jumps()
    if not jumps:
        return CheckResult(True)
    for k in range(jumps[0], jumps[-1] + 1):
        dim_k = w.at(k).dim - w.at(k - 1).dim
        if dim_k == 0:
            continue
        fk = induce_on_graded(f, w, k)
        gjumps = fk.jumps()
        lo0 = min(gjumps) - 1 if gjumps else 0
        hi0 = max(gjumps) + 1 if gjumps else 0
        lo = min(lo0, k + 1 - hi0)
        hi = max(hi0, k + 1 - lo0)
        for p in range(lo, hi + 1):
            a = fk.at(p)
            b = fk.at(k - p + 1).conjugate()
            meet = a.intersect(b)
            if a.dim + b.dim != dim_k or not meet.is_zero():
                witness = {"graded_index": k, "p": p}
                if not meet.is_zero():
                    witness["vector"] = vector_to_json(meet.basis[0])
                else:
                    witness["dims"] = [a.dim, b.dim, dim_k]
                return CheckResult(False, "graded_purity", witness)
    return CheckResult(True)


def _restrict_filtration(
    f: DecreasingFiltration, sub: Subspace
) -> DecreasingFiltration:
    """F^p meet sub, rewritten in coordinates of sub's basis."""
    d = sub.dim
    steps: Dict[int, Subspace] = {}
    jumps = f.jumps()
    lo = min(jumps) - 1 if jumps else 0
    hi = max(jumps) + 1 if jumps else 0
    for p in range(lo, hi + 1):
        meet = f.at(p).intersect(sub)
        coords = []
        for v in meet.basis:
            c = sub.coordinates_of(v)
            if c is None:
                raise AssertionError("intersection left the subspace")
            coords.append(c)
        steps[p] = Subspace.span(d, coords)
    return DecreasingFiltration(d, steps)


def is_polarized_mhs_by_n(
    w: IncreasingFiltration,
    f: DecreasingFiltration,
    n: NilpotentOperator,
    s: BilinearForm,
    weight: int,
) -> CheckResult:
    """(W, F) is a mixed Hodge structure polarized by n, centered at `weight`.

    Requires w to equal the weight filtration of n shifted to the center.
    Clauses: (1) mixed Hodge structure; (2) n F^p inside F^(p-1);
    (3) S(n x, y) + S(x, n y) = 0; (4) each primitive part
    P_(weight+k) = ker(n^(k+1): gr_(weight+k) -> gr_(weight-k-2)) is pure
    polarized of weight weight+k for the form S_k(x, y) = S(x, n^k y).
    """
    expected = weight_filtration(n).shift(weight)
    if w != expected:
        raise ValueError("w is not the weight filtration of n centered at the given weight")

    r1 = is_mhs(w, f)
    if not r1.ok:
        return CheckResult(False, "mhs:" + (r1.failed_clause or ""), r1.witness)

    for p in f.jumps():
        moved = f.at(p).image_under(n.matrix)
        target = f.at(p - 1)
        if not target.contains(moved):
            bad = next(v for v in moved.basis if not target.contains_vector(v))
            return CheckResult(
                False, "transversality", {"p": p, "vector": vector_to_json(bad)}
            )

    commuted = n.matrix.transpose() * s.matrix + s.matrix * n.matrix
    if not commuted.is_zero():
        i, j = next(
            (i, j)
            for i, row in enumerate(commuted.entries)
            for j, e in enumerate(row)
            if not e.is_zero()
        )
        return CheckResult(
            False,
            "infinitesimal_isometry",
            {"entry": [i, j], "value": commuted.entries[i][j].to_json()},
        )

    grams: Dict[str, list] = {}
    for k in range(0, n.nilpotency_index + 1):
        piece = GradedPiece(w, weight + k)
        if piece.dim == 0:
            continue
        target = GradedPiece(w, weight - k - 2)
        if target.dim:
            induced_rows = [
                piece_coords
                for piece_coords in zip(
                    *(target.project(n.power(k + 1).apply(rep)) for rep in piece.reps)
                )
            ]
            induced = Matrix(induced_rows)
            primitive = kernel(induced)
        else:
            primitive = Subspace.full(piece.dim)
        if primitive.dim == 0:
            continue
        nk = n.power(k)
        gram_full = [
            [s.pair(u, nk.apply(v)) for v in piece.reps] for u in piece.reps
        ]
        prim_basis = primitive.basis
        gram = Matrix(
            [
                [
                    sum(
                        (
                            x * gram_full[a][b] * y
                            for a, x in enumerate(u)
                            for b, y in enumerate(v)
                            if not x.is_zero() and not y.is_zero() and not gram_full[a][b].is_zero()
                        ),
                        ZERO,
                    )
                    for v in prim_basis
                ]
                for u in prim_basis
            ]
        )
        f_on_piece = induce_on_graded(f, w, weight + k)
        f_on_primitive = _restrict_filtration(f_on_piece, primitive)
        parity = 1 if (weight + k) % 2 == 0 else -1
        datum = HodgeDatum(weight + k, BilinearForm(gram, parity), f_on_primitive)
        result = is_pure_polarized(datum)
        grams[str(weight + k)] = gram.to_json()
        if not result.ok:
            witness = dict(result.witness or {})
            witness["graded_index"] = weight + k
            witness["primitive_gram"] = gram.to_json()
            return CheckResult(
                False, f"primitive_polarization:{result.failed_clause}", witness
            )

    return CheckResult(True, evidence={"primitive_gram": grams})
