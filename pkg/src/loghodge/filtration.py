"""Filtrations and the monodromy weight filtration of a nilpotent endomorphism.

Increasing filtrations W store only their jump indices; W_k for an index
below the lowest jump is 0 and interpolation is from below.  Decreasing
filtrations F interpolate from above and vanish above their highest jump.
Weight filtrations are always computed centered at 0; callers shift by the
weight when a different center is needed.

Two independent algorithms are provided:

* ``weight_filtration`` uses the closed formula
  W_k = sum_j  ker N^(k+j+1)  meet  im N^j, and
* ``weight_filtration_recursive`` peels the outermost graded pieces
  (W_{m-1} = ker N^m, W_{-m} = im N^m) and recurses on the quotient.

Both verify the two defining axioms -- N W_k inside W_{k-2} and
N^k : gr_k -> gr_{-k} an isomorphism -- before returning; the axioms pin
the filtration uniquely, so a verified answer is correct regardless of the
algorithm that produced it.
"""

from __future__ import annotations

from typing import Dict, Iterable, Optional, Sequence, Tuple

from .exactalg import (
    GaussianRational,
    Matrix,
    Subspace,
    Vector,
    ZERO,
    image,
    kernel,
    make_vector,
    vector_add,
    vector_scale,
)


class IncreasingFiltration:
    """Increasing chain of subspaces stored at its jump indices."""

    __slots__ = ("ambient_dim", "steps")

    def __init__(self, ambient_dim: int, steps: Dict[int, Subspace]):
        self.ambient_dim = ambient_dim
        cleaned: Dict[int, Subspace] = {}
        previous = Subspace.zero(ambient_dim)
        for k in sorted(steps):
            space = steps[k]
            if space.ambient_dim != ambient_dim:
                raise ValueError("step ambient dimension mismatch")
            if not space.contains(previous):
                raise ValueError(f"filtration not increasing at index {k}")
            if space != previous:
                cleaned[k] = space
                previous = space
        if ambient_dim and (not cleaned or not previous.is_full()):
            raise ValueError("increasing filtration must reach the full space")
        self.steps = cleaned

    def at(self, k: int) -> Subspace:
        best = None
        for idx in self.steps:
            if idx <= k and (best is None or idx > best):
                best = idx
        if best is None:
            return Subspace.zero(self.ambient_dim)
        return self.steps[best]

    def jumps(self) -> Tuple[int, ...]:
        return tuple(sorted(self.steps))

    def shift(self, offset: int) -> "IncreasingFiltration":
        return IncreasingFiltration(self.ambient_dim, {k + offset: v for k, v in self.steps.items()})

    def is_rational(self) -> bool:
        return all(s.is_rational() for s in self.steps.values())

    def is_conjugation_stable(self) -> bool:
        return all(s.conjugate() == s for s in self.steps.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, IncreasingFiltration):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.steps == other.steps

    def __hash__(self):
        return hash((self.ambient_dim, tuple(sorted((k, v) for k, v in self.steps.items()))))

    def to_json(self):
        return {str(k): v.to_json() for k, v in sorted(self.steps.items())}

    def __repr__(self):
        parts = ", ".join(f"W_{k}:dim {v.dim}" for k, v in sorted(self.steps.items()))
        return f"IncreasingFiltration({parts})"


class DecreasingFiltration:
    """Decreasing chain of subspaces stored at its jump indices."""

    __slots__ = ("ambient_dim", "steps")

    def __init__(self, ambient_dim: int, steps: Dict[int, Subspace]):
        self.ambient_dim = ambient_dim
        cleaned: Dict[int, Subspace] = {}
        previous = Subspace.zero(ambient_dim)
        for p in sorted(steps, reverse=True):
            space = steps[p]
            if space.ambient_dim != ambient_dim:
                raise ValueError("step ambient dimension mismatch")
            if not space.contains(previous):
                raise ValueError(f"filtration not decreasing at index {p}")
            if space != previous:
                cleaned[p] = space
                previous = space
        if ambient_dim and (not cleaned or not previous.is_full()):
            raise ValueError("decreasing filtration must be exhaustive (reach the full space)")
        self.steps = cleaned

    def at(self, p: int) -> Subspace:
        best = None
        for idx in self.steps:
            if idx >= p and (best is None or idx < best):
                best = idx
        if best is None:
            return Subspace.zero(self.ambient_dim)
        return self.steps[best]

    def jumps(self) -> Tuple[int, ...]:
        return tuple(sorted(self.steps))

    def graded_dimension(self, p: int) -> int:
        return self.at(p).dim - self.at(p + 1).dim

    def map_basis(self, transform) -> "DecreasingFiltration":
        """Apply a vector transform to every stored basis vector."""
        return DecreasingFiltration(
            self.ambient_dim,
            {
                p: Subspace.span(self.ambient_dim, [transform(v) for v in s.basis])
                for p, s in self.steps.items()
            },
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, DecreasingFiltration):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.steps == other.steps

    def __hash__(self):
        return hash((self.ambient_dim, tuple(sorted((k, v) for k, v in self.steps.items()))))

    def to_json(self):
        return {str(p): v.to_json() for p, v in sorted(self.steps.items())}

    def __repr__(self):
        parts = ", ".join(f"F^{p}:dim {v.dim}" for p, v in sorted(self.steps.items()))
        return f"DecreasingFiltration({parts})"


class NilpotentOperator:
    """A nilpotent endomorphism with its power chain precomputed."""

    __slots__ = ("matrix", "nilpotency_index", "_powers")

    def __init__(self, matrix: Matrix):
        if matrix.rows != matrix.cols:
            raise ValueError("endomorphism must be square")
        n = matrix.rows
        powers = [Matrix.identity(n)]
        for _ in range(n + 1):
            if powers[-1].is_zero():
                break
            powers.append(powers[-1] * matrix)
        if not powers[-1].is_zero() and n > 0:
            raise ValueError("matrix is not nilpotent")
        self.matrix = matrix
        self._powers = tuple(powers)
        # smallest m with N^(m+1) = 0; the zero map has index 0
        self.nilpotency_index = max(len(powers) - 2, 0)

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def power(self, k: int) -> Matrix:
        if k < len(self._powers):
            return self._powers[k]
        return Matrix.zero(self.dim, self.dim)

    def is_zero(self) -> bool:
        return self.nilpotency_index == 0

    def scale(self, c) -> "NilpotentOperator":
        return NilpotentOperator(self.matrix.scale(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, NilpotentOperator):
            return NotImplemented
        return self.matrix == other.matrix

    def __repr__(self):
        return f"NilpotentOperator(dim {self.dim}, index {self.nilpotency_index})"


def verify_weight_axioms(n: NilpotentOperator, w: IncreasingFiltration) -> None:
    """Raise unless w satisfies both defining axioms of the weight filtration."""
    m = n.nilpotency_index
    dim = n.dim
    if w.ambient_dim != dim:
        raise ValueError("filtration ambient dimension mismatch")
    lo, hi = -m - 1, m
    if dim and (not w.at(hi).is_full() or not w.at(lo).is_zero()):
        raise AssertionError("weight filtration has wrong support")
    for k in range(lo + 1, hi + 1):
        wk = w.at(k)
        target = w.at(k - 2)
        moved = wk.image_under(n.matrix)
        if not target.contains(moved):
            raise AssertionError(f"N W_{k} is not inside W_{k - 2}")
    for k in range(0, m + 1):
        nk = n.power(k)
        wk, wk1 = w.at(k), w.at(k - 1)
        wmk, wmk1 = w.at(-k), w.at(-k - 1)
        # surjectivity of N^k : gr_k -> gr_{-k}
        if wk.image_under(nk) + wmk1 != wmk:
            raise AssertionError(f"N^{k}: gr_{k} -> gr_{-k} is not surjective")
        # injectivity: anything in W_k killed into W_{-k-1} already sits in W_{k-1}
        pulled = wmk1.preimage_under(nk).intersect(wk)
        if not wk1.contains(pulled):
            raise AssertionError(f"N^{k}: gr_{k} -> gr_{-k} is not injective")


def weight_filtration(n: NilpotentOperator) -> IncreasingFiltration:
    """Monodromy weight filtration of n, centered at 0, axiom-verified."""
    m = n.nilpotency_index
    dim = n.dim
    kernels = [kernel(n.power(e)) for e in range(m + 2)]
    images = [image(n.power(j)) for j in range(m + 2)]
    steps: Dict[int, Subspace] = {}
    for k in range(-m, m + 1):
        acc = Subspace.zero(dim)
        for j in range(max(0, -k), m + 1):
            e = min(k + j + 1, m + 1)
            if e < 1:
                continue
            acc = acc + kernels[e].intersect(images[j])
        steps[k] = acc
    if not steps:
        steps[0] = Subspace.full(dim)
    result = IncreasingFiltration(dim, steps)
    verify_weight_axioms(n, result)
    return result


def _quotient_data(sup: Subspace, sub: Subspace):
    """Representatives for sup/sub and a coordinate solver for the quotient."""
    if not sup.contains(sub):
        raise ValueError("quotient of non-nested subspaces")
    ambient = sup.ambient_dim
    reps = []
    working = sub
    for v in sup.basis:
        if not working.contains_vector(v):
            reps.append(v)
            working = working + Subspace.span(ambient, [v])
    # columns: chosen representatives then a basis of sub
    solver_cols = list(reps) + list(sub.basis)
    solver = (
        Matrix([[col[r] for col in solver_cols] for r in range(ambient)])
        if solver_cols
        else None
    )
    return tuple(reps), solver


class GradedPiece:
    """A quotient W_k / W_(k-1) with chosen representatives and coordinates."""

    __slots__ = ("index", "reps", "_solver", "_sup")

    def __init__(self, w: IncreasingFiltration, k: int):
        sup, sub = w.at(k), w.at(k - 1)
        reps, solver = _quotient_data(sup, sub)
        self.index = k
        self.reps = reps
        self._solver = solver
        self._sup = sup

    @property
    def dim(self) -> int:
        return len(self.reps)

    def project(self, v: Vector) -> Vector:
        """Quotient coordinates of a vector of W_k."""
        if self.dim == 0:
            if not self._sup.contains_vector(v):
                raise ValueError("vector is not in the filtration step")
            return ()
        from .exactalg import solve

        sol = solve(self._solver, v)
        if sol is None:
            raise ValueError("vector is not in the filtration step")
        return tuple(sol[: self.dim])

    def lift(self, coords: Vector) -> Vector:
        out = tuple(ZERO for _ in range(self._sup.ambient_dim))
        for c, rep in zip(coords, self.reps):
            if not GaussianRational.coerce(c).is_zero():
                out = vector_add(out, vector_scale(GaussianRational.coerce(c), rep))
        return out

    def project_subspace(self, s: Subspace) -> Subspace:
        return Subspace.span(self.dim, [self.project(v) for v in s.basis])


def weight_filtration_recursive(n: NilpotentOperator) -> IncreasingFiltration:
    """Weight filtration by peeling outer graded pieces; axiom-verified."""

    def recurse(mat: Matrix) -> Dict[int, Subspace]:
        op = NilpotentOperator(mat)
        dim = mat.rows
        m = op.nilpotency_index
        if m == 0:
            return {0: Subspace.full(dim)}
        top = kernel(op.power(m))
        bottom = image(op.power(m))
        reps, solver = _quotient_data(top, bottom)
        from .exactalg import solve

        def project(v):
            sol = solve(solver, v)
            return tuple(sol[: len(reps)])

        induced = Matrix(
            [[ZERO] * len(reps) for _ in range(len(reps))]
            if not reps
            else [list(col) for col in zip(*(project(mat.apply(r)) for r in reps))]
        )
        inner = recurse(induced) if reps else {}
        steps = {m: Subspace.full(dim), m - 1: top}
        for k in range(-m, m - 1):
            inner_space = _filtration_lookup_increasing(inner, k, len(reps))
            lifted = [
                _lift(coords, reps, dim) for coords in inner_space.basis
            ]
            steps[k] = bottom + Subspace.span(dim, lifted)
        return steps

    def _lift(coords, reps, dim):
        out = tuple(ZERO for _ in range(dim))
        for c, rep in zip(coords, reps):
            if not c.is_zero():
                out = vector_add(out, vector_scale(c, rep))
        return out

    def _filtration_lookup_increasing(steps: Dict[int, Subspace], k: int, dim: int) -> Subspace:
        best = None
        for idx in steps:
            if idx <= k and (best is None or idx > best):
                best = idx
        if best is None:
            return Subspace.zero(dim)
        return steps[best]

    result = IncreasingFiltration(n.dim, recurse(n.matrix))
    verify_weight_axioms(n, result)
    return result


def graded_dims(w: IncreasingFiltration) -> Dict[int, int]:
    """Dimensions of the graded pieces W_k / W_(k-1); zero entries omitted."""
    jumps = w.jumps()
    if not jumps:
        return {}
    out: Dict[int, int] = {}
    for k in range(jumps[0], jumps[-1] + 1):
        d = w.at(k).dim - w.at(k - 1).dim
        if d:
            out[k] = d
    return out


def induce_on_graded(f: DecreasingFiltration, w: IncreasingFiltration, k: int) -> DecreasingFiltration:
    """The filtration F^p(gr_k) = image of F^p meet W_k in W_k / W_(k-1)."""
    if f.ambient_dim != w.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    piece = GradedPiece(w, k)
    wk = w.at(k)
    if piece.dim == 0:
        return DecreasingFiltration(0, {})
    jumps = f.jumps()
    steps: Dict[int, Subspace] = {}
    lo = (jumps[0] - 1) if jumps else 0
    hi = (jumps[-1] + 1) if jumps else 0
    for p in range(lo, hi + 1):
        meet = f.at(p).intersect(wk)
        steps[p] = piece.project_subspace(meet)
    return DecreasingFiltration(piece.dim, steps)
