"""Independent numerical oracles for the closed forms.

Nothing here calls the sphere enumerator or the closed-form criteria; each
routine reaches the same quantity by a different route (integer-box brute
force, adaptive quadrature, direct 1-D summation, Poisson duality).
:func:`run_checks` wires them against the library for the ``check`` command.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy import integrate

from .lattice import Lattice


def box_bound(lattice: Lattice, radius: float) -> int:
    """Per-axis integer bound ``ceil(radius / s_min)`` with ``s_min`` the smallest singular value."""
    s_min = np.linalg.svd(lattice.generator, compute_uv=False).min()
    return int(math.ceil(radius / s_min))


def brute_force_points(lattice: Lattice, radius: float):
    """Integer coordinates of every point with norm <= radius, by exhaustive box search."""
    b = box_bound(lattice, radius)
    n = lattice.dim
    grid = np.array(list(itertools.product(range(-b, b + 1), repeat=n)), dtype=np.int64)
    pts = grid @ lattice.generator.T
    keep = np.sum(pts * pts, axis=1) <= (radius * (1 + 1e-9)) ** 2
    return grid[keep]


def brute_force_nearest(lattice: Lattice, y, radius: float):
    """Closest lattice point to ``y`` among points within ``radius`` of ``y``.

    Ties go to the lexicographically smallest coordinates.
    """
    y = np.asarray(y, dtype=float)
    t = np.rint(lattice.coordinates(y)).astype(np.int64)
    b = box_bound(lattice, radius)
    n = lattice.dim
    grid = np.array(list(itertools.product(range(-b, b + 1), repeat=n)), dtype=np.int64) + t
    d2 = np.sum((grid @ lattice.generator.T - y) ** 2, axis=1)
    best = d2.min()
    ties = grid[d2 <= best + 1e-12 * max(1.0, best)]
    return min(map(tuple, ties))


def quad_fading_factor(row_norm2: float, sigma_e2: float, sigma_he2: float, L: int) -> float:
    """``int_0^inf rho^L exp(-rho^2 |x|^2 / (2 s_e2)) (rho / s_h2) exp(-rho^2 / (2 s_h2)) drho``."""
    def f(rho):
        return rho ** (L + 1) / sigma_he2 * math.exp(
            -rho * rho * (row_norm2 / (2 * sigma_e2) + 1 / (2 * sigma_he2)))

    scale = 1.0 / math.sqrt(row_norm2 / (2 * sigma_e2) + 1 / (2 * sigma_he2))
    # split at the bulk of the integrand so quad sees its shape
    a, _ = integrate.quad(f, 0, 3 * scale, epsabs=0, epsrel=1e-12, limit=200)
    b, _ = integrate.quad(f, 3 * scale, np.inf, epsabs=0, epsrel=1e-12, limit=200)
    return a + b


def direct_theta_1d(step: float, sigma2: float, m_max: int = 200) -> float:
    """``sum_{|m| <= m_max} exp(-(step m)^2 / (2 sigma2))`` for ``step * Z``."""
    return math.fsum(math.exp(-(step * m) ** 2 / (2 * sigma2)) for m in range(-m_max, m_max + 1))


def poisson_theta_z(sigma2: float, k_max: int = 50) -> float:
    """Theta of Z at ``exp(-1/(2 sigma2))`` via the dual sum
    ``sqrt(2 pi sigma2) sum_k exp(-2 pi^2 sigma2 k^2)``."""
    return math.sqrt(2 * math.pi * sigma2) * math.fsum(
        math.exp(-2 * math.pi ** 2 * sigma2 * k * k) for k in range(-k_max, k_max + 1))


def rayleigh_moment(sigma_h2: float, L: int) -> float:
    """``E[rho^L]`` for Rayleigh rho by quadrature."""
    v, _ = integrate.quad(lambda r: r ** (L + 1) / sigma_h2 * math.exp(-r * r / (2 * sigma_h2)),
                          0, np.inf, epsrel=1e-12)
    return v


def run_checks(quick: bool = True):
    """Yield ``(name, passed, detail)`` for a compact oracle suite."""
    from . import criteria, lattice as lat, numfield
    from .channel import mc_average_theta
    from .coset import build_coset_code

    rng = np.random.default_rng(20240601)

    worst = 0.0
    for _ in range(20 if quick else 200):
        r2 = float(rng.uniform(0, 10))
        se, sh = float(rng.uniform(0.2, 3)), float(rng.uniform(0.2, 3))
        L = int(rng.integers(1, 5))
        closed = criteria.fading_factor(r2, criteria.FadingParams(sigma_e2=se, sigma_he2=sh, L=L))
        worst = max(worst, abs(closed - quad_fading_factor(r2, se, sh, L)) / closed)
    yield "fading_factor_vs_quadrature", worst <= 1e-8, f"max rel err {worst:.2e}"

    theta = criteria.gaussian_theta_sum(lat.integer_lattice(1), 1.0, 3.0).value
    err = abs(theta - poisson_theta_z(1.0))
    yield "theta_Z_poisson", err <= 1e-10, f"|theta - poisson| = {err:.2e}"

    ok = True
    for _ in range(10 if quick else 50):
        n = int(rng.integers(1, 4))
        M = rng.normal(size=(n, n)) + 2 * np.eye(n)
        L_ = lat.Lattice(M)
        R = float(rng.uniform(0.5, 4))
        got = {tuple(u) for u in lat.enumerate_points(L_, R).coords}
        want = {tuple(u) for u in brute_force_points(L_, R)}
        ok &= got == want
    yield "enumeration_vs_brute_force", ok, "set equality"

    Z1 = lat.integer_lattice(1)
    code = build_coset_code(Z1, Z1.scaled(2))
    p = criteria.FadingParams(sigma_e2=1.0, sigma_he2=1.0, L=1)
    fast = criteria.fast_fading_pce(code, p, 4.0, auto_extend=False)
    block = criteria.block_fading_pce(code, p, 4.0, 1, auto_extend=False)
    yield "block_L1_equals_fast", fast.value == block.value, f"{fast.value!r}"

    mc = mc_average_theta(Z1.scaled(2), p, 1, 8.0, 20000 if quick else 100000, seed=7)
    closed = criteria.average_fading_sum(Z1.scaled(2), p, 8.0)
    z = abs(mc.value - closed) / mc.std_err
    yield "mc_fading_average", z <= 4, f"{z:.2f} std errors"

    K = numfield.quadratic_field(2)
    worst = 0.0
    for x in itertools.product(range(-5, 6), repeat=2):
        if any(x):
            e = K.embed(np.array(x, dtype=float))
            worst = max(worst, abs(abs(np.prod(e)) - abs(K.norm_exact(x))) / abs(K.norm_exact(x)))
    yield "norm_product_identity", worst <= 1e-9, f"max rel err {worst:.2e}"
