"""Real lattices given by a square generator matrix.

Convention: a lattice point is ``x = M @ u`` for an integer column vector
``u``, so the *columns* of ``M`` are the basis vectors.  Fading acts on the
left (``diag(h) @ M``), which is why the column convention matters.
Use :meth:`Lattice.from_rows` when the basis is written row by row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EnumerationBudgetExceeded, SingularGenerator

DET_EPS = 1e-12
ENUM_REL_EPS = 1e-9
DEFAULT_BUDGET = 10**7


@dataclass(frozen=True, eq=False)
class Lattice:
    """An n-dimensional full-rank lattice ``{M u : u in Z^n}``."""

    generator: np.ndarray
    label: str = ""
    _inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = np.array(self.generator, dtype=float)
        if m.ndim == 0:
            m = m.reshape(1, 1)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise SingularGenerator(f"generator must be square, got shape {m.shape}")
        det = np.linalg.det(m)
        if not np.isfinite(det) or abs(det) <= DET_EPS:
            raise SingularGenerator(f"|det M| = {abs(det):.3g} <= {DET_EPS}")
        m.setflags(write=False)
        inv = np.linalg.inv(m)
        inv.setflags(write=False)
        object.__setattr__(self, "generator", m)
        object.__setattr__(self, "_inverse", inv)

    @classmethod
    def from_rows(cls, rows, label=""):
        """Build from basis vectors written as rows (transposed internally)."""
        return cls(np.asarray(rows, dtype=float).T, label)

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse

    @property
    def gram(self) -> np.ndarray:
        return self.generator.T @ self.generator

    def point(self, coords) -> np.ndarray:
        return np.asarray(coords) @ self.generator.T

    def coordinates(self, x) -> np.ndarray:
        """Real coordinates ``M^{-1} x`` (not rounded)."""
        return np.asarray(x, dtype=float) @ self._inverse.T

    def scaled(self, c: float) -> "Lattice":
        return Lattice(c * self.generator, self.label and f"{c:g}*{self.label}")

    def twisted(self, h) -> "Lattice":
        """The lattice seen through a diagonal channel, generator ``diag(h) M``."""
        return Lattice(np.asarray(h, dtype=float)[:, None] * self.generator, self.label)

    def __repr__(self):
        name = self.label or "Lattice"
        return f"<{name} dim={self.dim} vol={volume(self):.6g}>"


def volume(lattice: Lattice) -> float:
    """``det(M M^T)^{1/2} = |det M|``."""
    return float(abs(np.linalg.det(lattice.generator)))


def second_moment(lattice: Lattice) -> float:
    """Unnormalized second moment of the origin-centred fundamental parallelotope.

    Integrating ``|M u|^2`` over ``u in [-1/2, 1/2)^n`` kills the cross terms
    and leaves ``1/12`` per diagonal entry of the Gram matrix, so the result is
    ``vol * trace(M^T M) / 12``.
    """
    return volume(lattice) * float(np.trace(lattice.gram)) / 12.0


# -- catalogue ---------------------------------------------------------------

def integer_lattice(n: int) -> Lattice:
    return Lattice(np.eye(n), f"Z{n}")


def checkerboard_lattice(n: int) -> Lattice:
    """D_n: integer vectors with even coordinate sum (volume 2)."""
    if n < 2:
        raise ValueError("D_n needs n >= 2")
    m = np.eye(n)
    m[0, 0] = 2.0
    for j in range(1, n):
        m[j - 1, j] = -1.0
    return Lattice(m, f"D{n}")


def e8_lattice() -> Lattice:
    rows = [[2, 0, 0, 0, 0, 0, 0, 0]]
    for k in range(6):
        r = [0] * 8
        r[k], r[k + 1] = -1, 1
        rows.append(r)
    rows.append([0.5] * 8)
    return Lattice.from_rows(rows, "E8")


def catalog_lattice(name: str, dim: int | None = None) -> Lattice:
    key = name.strip().upper()
    if key == "E8":
        if dim not in (None, 8):
            raise ValueError("E8 has dimension 8")
        return e8_lattice()
    if dim is None or dim < 1:
        raise ValueError(f"catalog lattice {name!r} needs a positive dim")
    if key == "ZN":
        return integer_lattice(dim)
    if key == "DN":
        return checkerboard_lattice(dim)
    raise ValueError(f"unknown catalog lattice {name!r}")


# -- enumeration -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ShellEnumeration:
    """All lattice points inside a ball, sorted by norm then by coordinates.

    ``points`` is ``(N, n)`` float, ``coords`` the matching ``(N, n)`` integer
    coordinates with ``points == coords @ M.T``.
    """

    radius: float
    points: np.ndarray
    coords: np.ndarray
    complete: bool = True
    inner_radius: float = 0.0

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return zip(self.points, self.coords)

    @property
    def norms(self) -> np.ndarray:
        return np.sqrt(np.einsum("ij,ij->i", self.points, self.points))

    def nonzero(self) -> "ShellEnumeration":
        keep = np.any(self.coords != 0, axis=1)
        return ShellEnumeration(self.radius, self.points[keep], self.coords[keep],
                                self.complete, self.inner_radius)


def _fincke_pohst(generator, center, radius2, budget):
    """Integer vectors u with |M (u - center)|^2 <= radius2 (with a little slack).

    Depth-first over the upper-triangular Cholesky factor of the Gram matrix;
    the innermost coordinate is produced as a numpy range.
    """
    n = generator.shape[0]
    R = np.linalg.cholesky(generator.T @ generator).T
    diag = np.diag(R).copy()
    bound = radius2 * (1 + ENUM_REL_EPS) + 1e-300
    blocks = []
    count = 0
    u = np.zeros(n, dtype=np.int64)

    def level(i, partial):
        nonlocal count
        # shift of coordinate i induced by the already-fixed coordinates above it
        s = 0.0
        for j in range(i + 1, n):
            s += R[i, j] * (u[j] - center[j])
        c = center[i] - s / diag[i]
        rem = bound - partial
        if rem < 0:
            return
        w = math.sqrt(rem) / diag[i]
        lo, hi = math.ceil(c - w - 1e-12), math.floor(c + w + 1e-12)
        if lo > hi:
            return
        if i == 0:
            vals = np.arange(lo, hi + 1, dtype=np.int64)
            tot = partial + (diag[0] * (vals - c)) ** 2
            vals = vals[tot <= bound]
            if len(vals):
                count += len(vals)
                if count > budget:
                    raise EnumerationBudgetExceeded(
                        f"more than {budget} lattice points within radius {math.sqrt(radius2):.6g}")
                blk = np.empty((len(vals), n), dtype=np.int64)
                blk[:, 1:] = u[1:]
                blk[:, 0] = vals
                blocks.append(blk)
            return
        for v in range(lo, hi + 1):
            u[i] = v
            level(i - 1, partial + (diag[i] * (v - c)) ** 2)
        u[i] = 0

    level(n - 1, 0.0)
    if not blocks:
        return np.zeros((0, n), dtype=np.int64)
    return np.concatenate(blocks)


def _sort_key_order(norm2, coords, radius2):
    tol = ENUM_REL_EPS * max(radius2, 1.0)
    qnorm = np.round(norm2 / tol)
    keys = [coords[:, k] for k in range(coords.shape[1] - 1, -1, -1)] + [qnorm]
    return np.lexsort(keys)


def enumerate_points(lattice: Lattice, radius: float, *, inner_radius: float = 0.0,
                     budget: int = DEFAULT_BUDGET) -> ShellEnumeration:
    """All points with ``inner_radius < |x| <= radius`` (the origin is kept when
    ``inner_radius == 0``).

    Ordered by nondecreasing norm, ties broken lexicographically on the integer
    coordinates.  Raises :class:`EnumerationBudgetExceeded` past ``budget`` points.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    n = lattice.dim
    M = lattice.generator
    coords = _fincke_pohst(M, np.zeros(n), radius * radius, budget)
    points = coords @ M.T
    norm2 = np.einsum("ij,ij->i", points, points)
    keep = norm2 <= (radius * (1 + ENUM_REL_EPS)) ** 2
    if inner_radius > 0:
        keep &= norm2 > (inner_radius * (1 + ENUM_REL_EPS)) ** 2
    coords, points, norm2 = coords[keep], points[keep], norm2[keep]
    order = _sort_key_order(norm2, coords, radius * radius)
    return ShellEnumeration(float(radius), points[order], coords[order], True,
                            float(inner_radius))


def first_minimum(lattice: Lattice) -> float:
    """Length of a shortest nonzero vector."""
    r = min(np.linalg.norm(lattice.generator, axis=0))
    shell = enumerate_points(lattice, r).nonzero()
    return float(shell.norms[0])


def nearest_point(lattice: Lattice, y, mode: str = "rounding") -> np.ndarray:
    """Decode ``y`` to a lattice point.

    ``rounding`` returns ``M round(M^{-1} y)``, i.e. the decision regions are
    fundamental parallelotopes centred on lattice points.  ``exact`` returns a
    true closest point, searching the ball through the rounding solution;
    ties go to the lexicographically smallest integer coordinates.
    """
    return lattice.point(nearest_coords(lattice, y, mode))


def nearest_coords(lattice: Lattice, y, mode: str = "rounding") -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.shape != (lattice.dim,):
        raise ValueError(f"expected a vector of length {lattice.dim}, got shape {y.shape}")
    t = lattice.coordinates(y)
    u0 = np.rint(t).astype(np.int64)
    if mode == "rounding":
        return u0
    if mode != "exact":
        raise ValueError(f"unknown decoder mode {mode!r}")
    d2 = float(np.sum((y - lattice.point(u0)) ** 2))
    if d2 == 0.0:
        return u0
    cand = _fincke_pohst(lattice.generator, t, d2, DEFAULT_BUDGET)
    diff = y - cand @ lattice.generator.T
    dist2 = np.einsum("ij,ij->i", diff, diff)
    order = _sort_key_order(dist2, cand, d2)
    return cand[order[0]]
