"""Totally real number fields and their full-diversity lattices.

A field is given by a monic integer minimal polynomial (coefficients in
ascending order) and an integral basis written as rational polynomials in a
root ``theta``.  The ``i``-th real embedding sends ``theta`` to the ``i``-th
root, roots sorted in decreasing order.  Exact arithmetic on elements uses
``Fraction``; embeddings are floats.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import EmptyShell, NotTotallyReal, SingularEmbedding
from .lattice import DEFAULT_BUDGET, Lattice, enumerate_points

NORM_ROUND_TOL = 1e-6
DIVERSITY_EPS = 1e-9


class NormNotIntegral(UserWarning):
    """A field norm that should be an integer was not within rounding tolerance."""


@dataclass(frozen=True)
class AlgebraicInteger:
    """Element of the ring spanned by the integral basis, by its coordinates."""

    coords: tuple[int, ...]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype or np.int64)


# -- exact polynomial helpers (ascending coefficient lists) ------------------

def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_mod(p, m):
    """Remainder of p modulo the monic polynomial m."""
    p = [Fraction(c) for c in p]
    n = len(m) - 1
    for k in range(len(p) - 1, n - 1, -1):
        c = p[k]
        if c:
            for j in range(n + 1):
                p[k - n + j] -= c * m[j]
    p = p[:n] + [Fraction(0)] * max(0, n - len(p))
    return p


def _poly_eval(p, x):
    acc = 0.0
    for c in reversed(p):
        acc = acc * x + float(c)
    return acc


def _frac_solve_inverse(A):
    """Exact inverse of a square Fraction matrix (Gauss-Jordan)."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise SingularEmbedding("basis polynomials are linearly dependent")
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [v / pv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def _frac_det(A):
    A = [[Fraction(v) for v in row] for row in A]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


def _real_roots(min_poly):
    n = len(min_poly) - 1
    if n == 1:
        return np.array([-float(min_poly[0])])
    raw = np.roots([float(c) for c in reversed(min_poly)])
    scale = max(1.0, float(np.max(np.abs(raw))))
    if np.max(np.abs(raw.imag)) > 1e-6 * scale:
        raise NotTotallyReal(f"minimal polynomial {min_poly} has non-real roots")
    roots = np.sort(raw.real)[::-1].copy()
    dp = [k * c for k, c in enumerate(min_poly)][1:]
    # Newton polishing; the roots are simple so this converges quadratically
    for i, r in enumerate(roots):
        for _ in range(50):
            f = _poly_eval(min_poly, r)
            d = _poly_eval(dp, r)
            if d == 0:
                break
            step = f / d
            r -= step
            if abs(step) <= 1e-16 * max(1.0, abs(r)):
                break
        roots[i] = r
    return roots


@dataclass(frozen=True, eq=False)
class NumberField:
    min_poly: tuple[int, ...]
    basis: tuple[tuple[Fraction, ...], ...]
    name: str = ""
    roots: np.ndarray = field(init=False, repr=False)
    embedding: np.ndarray = field(init=False, repr=False)
    mult_table: np.ndarray = field(init=False, repr=False)
    _basis_inv: list = field(init=False, repr=False)

    def __post_init__(self):
        mp = tuple(int(c) for c in self.min_poly)
        n = len(mp) - 1
        if n < 1 or mp[-1] != 1:
            raise ValueError("minimal polynomial must be monic of degree >= 1")
        basis = tuple(tuple(Fraction(c) for c in b) + (Fraction(0),) * (n - len(b))
                      for b in self.basis)
        if len(basis) != n or any(len(b) != n for b in basis):
            raise ValueError(f"need {n} basis elements of length {n}")
        roots = _real_roots(mp)
        if n > 1 and np.min(np.abs(np.diff(roots))) <= 1e-8:
            raise ValueError("minimal polynomial has repeated roots")
        for r in roots:
            size = sum(abs(c) * abs(r) ** k for k, c in enumerate(mp))
            if abs(_poly_eval(mp, r)) > 1e-10 * max(1.0, size):
                raise ValueError(f"root {r!r} does not satisfy the minimal polynomial")
        emb = np.array([[_poly_eval(b, r) for b in basis] for r in roots])
        if abs(np.linalg.det(emb)) <= 1e-12:
            raise SingularEmbedding("embedding matrix of the basis is singular")
        binv = _frac_solve_inverse([[basis[j][i] for j in range(n)] for i in range(n)])
        table = np.empty((n, n, n), dtype=object)
        for k in range(n):
            for l in range(n):
                prod = _poly_mod(_poly_mul(basis[k], basis[l]), mp)
                table[k, l] = [sum(binv[i][j] * prod[j] for j in range(n)) for i in range(n)]
        if any(Fraction(v).denominator != 1 for v in table.flat):
            raise ValueError("basis is not closed under multiplication over Z "
                             "(not an integral basis)")
        emb.setflags(write=False)
        roots.setflags(write=False)
        object.__setattr__(self, "min_poly", mp)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "embedding", emb)
        object.__setattr__(self, "mult_table", table.astype(np.int64))
        object.__setattr__(self, "_basis_inv", binv)

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def embed(self, x) -> np.ndarray:
        """``(sigma_1(x), ..., sigma_n(x))`` for coordinates ``x`` (or rows of them)."""
        return np.asarray(x) @ self.embedding.T

    def multiply(self, x, y) -> np.ndarray:
        """Exact product of two elements, in basis coordinates."""
        x = [int(v) for v in np.asarray(x).ravel()]
        y = [int(v) for v in np.asarray(y).ravel()]
        n = self.degree
        out = [0] * n
        for k in range(n):
            if x[k]:
                for l in range(n):
                    if y[l]:
                        c = x[k] * y[l]
                        for m in range(n):
                            out[m] += c * int(self.mult_table[k, l, m])
        return np.array(out, dtype=object)

    def multiplication_matrix(self, x):
        """Integer matrix of ``y -> x y`` in the basis (column l is ``x b_l``)."""
        x = [int(v) for v in np.asarray(x).ravel()]
        n = self.degree
        return [[sum(x[k] * int(self.mult_table[k, l, m]) for k in range(n))
                 for l in range(n)] for m in range(n)]

    def norm_exact(self, x) -> int:
        """Field norm as the determinant of the multiplication map (exact)."""
        d = _frac_det(self.multiplication_matrix(x))
        assert d.denominator == 1
        return int(d)

    def __repr__(self):
        return f"<NumberField {self.name or self.min_poly} degree={self.degree}>"


def make_field(min_poly, basis=None, name="") -> NumberField:
    """Field from a minimal polynomial; the power basis is used when none is given."""
    n = len(min_poly) - 1
    if basis is None:
        basis = [[int(i == j) for i in range(n)] for j in range(n)]
    return NumberField(tuple(min_poly), tuple(tuple(Fraction(c) for c in b) for b in basis), name)


def rationals() -> NumberField:
    return make_field([0, 1], [[1]], "Q")


def _squarefree(d):
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def quadratic_field(d: int) -> NumberField:
    """Q(sqrt d) for squarefree d > 1 with its ring of integers."""
    d = int(d)
    if d <= 1 or not _squarefree(d):
        raise ValueError("d must be a squarefree integer > 1")
    if d % 4 == 1:
        basis = [[1, 0], [Fraction(1, 2), Fraction(1, 2)]]
    else:
        basis = [[1, 0], [0, 1]]
    return make_field([-d, 0, 1], basis, f"Q(sqrt{d})")


def _chebyshev_sums(m):
    # theta_k = zeta^k + zeta^-k as integer polynomials in theta_1
    polys = [[2], [0, 1]]
    for _ in range(2, m + 1):
        a, b = polys[-1], polys[-2]
        nxt = [0] + list(a)
        for i, c in enumerate(b):
            nxt[i] -= c
        polys.append(_trim(nxt))
    return polys


def cyclotomic_real_field(p: int) -> NumberField:
    """Maximal real subfield of Q(zeta_p), p an odd prime, basis zeta^k + zeta^-k."""
    p = int(p)
    if p < 3 or any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
        raise ValueError("p must be an odd prime")
    m = (p - 1) // 2
    polys = _chebyshev_sums(m)
    mp = [0] * (m + 1)
    mp[0] = 1
    for k in range(1, m + 1):
        for i, c in enumerate(polys[k]):
            mp[i] += c
    basis = [_poly_mod(polys[k], mp) for k in range(1, m + 1)]
    return make_field(mp, basis, f"Q(zeta{p})+")


def catalog_field(catalog: str, **params) -> NumberField:
    key = catalog.strip().lower()
    if key == "qsqrt":
        return quadratic_field(params["d"])
    if key == "cyclotomic_real":
        return cyclotomic_real_field(params["p"])
    if key in ("q", "rationals"):
        return rationals()
    raise ValueError(f"unknown field catalog {catalog!r}")


# -- lattices and norms ------------------------------------------------------

def canonical_embedding_lattice(nf: NumberField) -> Lattice:
    """Lattice whose column j is the embedding of basis element j."""
    return Lattice(np.array(nf.embedding), f"O[{nf.name}]")


def conjugate_row_lattice(nf: NumberField, L: int) -> Lattice:
    """``Ln``-dim lattice of ``vec(X)`` where each column of X is an embedded
    algebraic integer; row i of X is then ``sigma_i`` applied to the first row.
    """
    return Lattice(np.kron(np.eye(L), nf.embedding), f"O[{nf.name}]^{L}")


def _coords(x):
    return np.asarray(x.coords if isinstance(x, AlgebraicInteger) else x)


def field_norms(nf: NumberField, coords):
    """Vectorized norms for rows of coordinates: ``(values, rounded_mask)``."""
    vals = np.prod(nf.embed(np.atleast_2d(coords).astype(float)), axis=1)
    near = np.rint(vals)
    ok = np.abs(vals - near) <= NORM_ROUND_TOL
    return np.where(ok, near, vals), ok


def field_norm(nf: NumberField, x) -> float:
    """``prod_i sigma_i(x)``, snapped to the nearest integer when within 1e-6."""
    vals, ok = field_norms(nf, _coords(x))
    if not ok[0]:
        warnings.warn(f"norm {vals[0]!r} is not within {NORM_ROUND_TOL} of an integer",
                      NormNotIntegral, stacklevel=2)
    return float(vals[0])


def diversity(lattice: Lattice, radius: float, *, budget: int = DEFAULT_BUDGET) -> int:
    """Fewest nonzero coordinates over the nonzero points within ``radius``.

    This bounds the lattice diversity from above and is exact whenever the
    ball holds a diversity-minimizing vector.
    """
    pts = enumerate_points(lattice, radius, budget=budget).nonzero().points
    if len(pts) == 0:
        raise EmptyShell(f"no nonzero lattice point within radius {radius}")
    scale = np.max(np.abs(pts), axis=1, keepdims=True)
    return int(np.min(np.sum(np.abs(pts) > DIVERSITY_EPS * np.maximum(scale, 1.0), axis=1)))


def rows_of(points, L: int, n_rows: int) -> np.ndarray:
    """Reshape vectorized codewords ``vec(X)`` (column-major) to ``(N, n_rows, L)``."""
    pts = np.atleast_2d(points)
    return pts.reshape(len(pts), L, n_rows).transpose(0, 2, 1)


def block_rows_nonzero(lattice: Lattice, L: int, n_rows: int, radius: float, *,
                       budget: int = DEFAULT_BUDGET) -> bool:
    """True when no nonzero point within ``radius`` has an all-zero row.

    This is the condition the block-fading criterion needs; a coordinate
    diversity of at least ``L(n-1)+1`` implies it.
    """
    pts = enumerate_points(lattice, radius, budget=budget).nonzero().points
    if len(pts) == 0:
        raise EmptyShell(f"no nonzero lattice point within radius {radius}")
    r2 = np.sum(rows_of(pts, L, n_rows) ** 2, axis=2)
    scale = np.max(r2, axis=1, keepdims=True)
    return bool(np.all(r2 > (DIVERSITY_EPS ** 2) * np.maximum(scale, 1.0)))


def conjugate_row_codeword(nf: NumberField, first_row) -> np.ndarray:
    """``n x L`` matrix with entry ``(i, j) = sigma_i(x_{1j})``."""
    rows = np.atleast_2d(np.array([_coords(x) for x in first_row], dtype=float))
    return nf.embedding @ rows.T


def squared_row_norm(nf: NumberField, first_row) -> np.ndarray:
    """Exact coordinates of ``sum_j x_{1j}^2`` as an element of the field."""
    n = nf.degree
    acc = np.zeros(n, dtype=object)
    for x in first_row:
        acc = acc + nf.multiply(_coords(x), _coords(x))
    return acc


def squared_row_norms(nf: NumberField, first_rows) -> np.ndarray:
    """Vectorized :func:`squared_row_norm` for integer array ``(N, L, n)``."""
    u = np.asarray(first_rows, dtype=np.int64)
    return np.einsum("pjk,pjl,klm->pm", u, u, nf.mult_table)


def row_norm_product_identity_check(nf: NumberField, first_row):
    """Both sides of ``prod_i |sigma_i(x_1)|^2 = N(|x_1|^2)``.

    The left side is taken from the codeword matrix, the right side from the
    exactly computed element ``|x_1|^2`` pushed through the embeddings.
    """
    X = conjugate_row_codeword(nf, first_row)
    lhs = float(np.prod(np.sum(X * X, axis=1)))
    s = squared_row_norm(nf, first_row).astype(float)
    rhs = float(np.prod(nf.embed(s)))
    return lhs, rhs
