"""Eavesdropper correct-decision probabilities and design criteria.

Every lattice sum runs over enumerated ball/annulus shells of the coarse
lattice.  Exact (non-asymptotic) sums extend the radius by a factor 1.25
until the newest shell adds less than 1e-12 of the running total, or until
the next shell would exceed the point budget.  Asymptotic sums (inverse
coordinate products, inverse norms) are evaluated on the given radius only:
over algebraic lattices they diverge along unit directions, so only a fixed
truncation set is meaningful.

Zero vector: the exact sums include ``x = 0`` (its term is finite); the
asymptotic sums exclude it because ``1/|x_i|^3`` is infinite there.

Rayleigh convention: ``|h|`` has density ``(r / s2) exp(-r^2 / (2 s2))`` with
parameter ``s2 = sigma_h^2``, so ``E|h|^2 = 2 s2``, and Eve's average SNR is
``gamma_e = sigma_he2 / sigma_e2`` (no factor 2).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import (DimensionMismatch, ExpansionInvalid, LatticeError, NotFullDiversity,
                     RowAnnihilated)
from .lattice import DEFAULT_BUDGET, Lattice, enumerate_points, second_moment, volume
from .numfield import (DIVERSITY_EPS, NumberField, canonical_embedding_lattice,
                       conjugate_row_lattice, field_norms, rows_of, squared_row_norms)

EXTEND_FACTOR = 1.25
SHELL_REL_TOL = 1e-12


class Formula(str, enum.Enum):
    THETA = "theta"
    PCB_GAUSS = "pcb_gauss"
    PCE_GAUSS_LEAD = "pce_gauss_lead"
    PCE_GAUSS_2ND = "pce_gauss_2nd"
    PCE_FAST = "pce_fast"
    PCE_FAST_ASYM = "pce_fast_asym"
    NORM_SUM_FAST = "norm_sum_fast"
    PCE_BLOCK = "pce_block"
    PCE_BLOCK_ASYM = "pce_block_asym"
    NORM_SUM_BLOCK = "norm_sum_block"


@dataclass(frozen=True)
class FadingParams:
    """Noise and fading statistics; ``L = 1`` is fast fading."""

    sigma_e2: float = 1.0
    sigma_b2: float = 1.0
    sigma_he2: float = 1.0
    sigma_hb2: float = 1.0
    L: int = 1

    def __post_init__(self):
        for name in ("sigma_e2", "sigma_b2", "sigma_he2", "sigma_hb2"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
        if int(self.L) != self.L or self.L < 1:
            raise ValueError(f"L must be a positive integer, got {self.L!r}")

    @property
    def gamma_e(self) -> float:
        return self.sigma_he2 / self.sigma_e2

    @classmethod
    def from_gamma_e(cls, gamma_e: float, sigma_he2: float = 1.0, **kw) -> "FadingParams":
        return cls(sigma_e2=sigma_he2 / gamma_e, sigma_he2=sigma_he2, **kw)


@dataclass(frozen=True)
class CriterionReport:
    """A criterion value with truncation diagnostics.

    ``tail_bound`` is a geometric extrapolation from the last two shell
    contributions (``inf`` when they do not decrease); it is an estimate,
    not a rigorous bound.
    """

    value: float
    terms_used: int
    truncation_radius: float
    tail_bound: float
    formula: Formula
    flags: tuple = field(default_factory=tuple)

    def scaled(self, c: float, formula: Formula | None = None, flags=()) -> "CriterionReport":
        return CriterionReport(self.value * c, self.terms_used, self.truncation_radius,
                               self.tail_bound * abs(c), formula or self.formula,
                               self.flags + tuple(flags))


class MCEstimate(NamedTuple):
    value: float
    std_err: float


# -- Gamma(L/2 + 1) / pi^(L/2) without a general Gamma function -------------

def _gamma_ratio_parts(L: int):
    """Return ``(r, k)`` with ``Gamma(L/2+1) / pi^(L/2) = r / pi^k``, r rational."""
    if L % 2 == 0:
        return Fraction(math.factorial(L // 2)), L // 2
    r = Fraction(1)
    for j in range(L // 2 + 1):
        r *= Fraction(2 * j + 1, 2)
    return r, L // 2


def gamma_half_plus_one(L: int) -> float:
    """``Gamma(L/2 + 1)`` by the half-integer recursion from ``Gamma(1/2) = sqrt(pi)``."""
    r, _ = _gamma_ratio_parts(L)
    return float(r) * (math.sqrt(math.pi) if L % 2 else 1.0)


# -- truncated lattice sums ---------------------------------------------------

def _ball_count(dim, radius, vol):
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1) * radius ** dim / vol


def _tail(s_prev, s_last):
    if s_last == 0.0:
        return 0.0
    if s_prev > 0 and s_last < s_prev:
        q = s_last / s_prev
        return s_last * q / (1 - q)
    return math.inf


def _lookahead_tail(lattice, term, r, s_last, vol, budget):
    # one extra shell beyond the fixed radius, used only to estimate the tail
    nr = r * EXTEND_FACTOR
    if _ball_count(lattice.dim, nr, vol) > budget:
        return math.inf
    try:
        sh = enumerate_points(lattice, nr, inner_radius=r, budget=budget)
        a = math.fsum(np.asarray(term(sh), dtype=float)) if len(sh) else 0.0
    except LatticeError:
        return math.inf
    return a + _tail(s_last, a)


def lattice_sum(lattice: Lattice, term, radius: float, formula: Formula, *,
                auto_extend: bool = True, include_origin: bool = True,
                budget: int = DEFAULT_BUDGET, flags=()) -> CriterionReport:
    """``sum term(shell)`` over lattice points, shell by shell in radius order.

    ``term`` maps a :class:`ShellEnumeration` to an array of per-point values.
    """
    shell = enumerate_points(lattice, radius, budget=budget)
    if not include_origin:
        shell = shell.nonzero()
    vals = np.asarray(term(shell), dtype=float) if len(shell) else np.zeros(0)
    total = math.fsum(vals)
    terms = len(vals)
    r = radius
    inner = radius / EXTEND_FACTOR
    s_last = math.fsum(vals[shell.norms > inner * (1 + 1e-9)]) if terms else 0.0
    s_prev = total - s_last
    vol = volume(lattice)
    if not auto_extend:
        tail = _lookahead_tail(lattice, term, r, s_last, vol, budget)
        return CriterionReport(total, terms, r, tail, formula, tuple(flags))
    while True:
        nr = r * EXTEND_FACTOR
        if _ball_count(lattice.dim, nr, vol) > budget:
            flags = tuple(flags) + ("budget_reached",)
            break
        sh = enumerate_points(lattice, nr, inner_radius=r, budget=budget)
        r = nr
        if not len(sh):
            continue
        v = np.asarray(term(sh), dtype=float)
        s = math.fsum(v)
        total += s
        terms += len(v)
        s_prev, s_last = s_last, s
        if abs(s) <= SHELL_REL_TOL * abs(total):
            break
    return CriterionReport(total, terms, r, _tail(s_prev, s_last), formula, tuple(flags))


def gaussian_theta_sum(coarse: Lattice, sigma2: float, radius: float, *,
                       auto_extend: bool = True, budget: int = DEFAULT_BUDGET) -> CriterionReport:
    """``sum_{r in coarse} exp(-|r|^2 / (2 sigma2))``."""
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")

    def term(sh):
        return np.exp(-np.einsum("ij,ij->i", sh.points, sh.points) / (2 * sigma2))

    return lattice_sum(coarse, term, radius, Formula.THETA, auto_extend=auto_extend,
                       budget=budget)


def gaussian_pcb(code, params: FadingParams, mc_samples: int = 10**5, seed: int = 0) -> MCEstimate:
    """Bob's correct-decision probability on a Gaussian channel, keeping only
    the zero coset: the Gaussian mass of the centred fundamental parallelotope.

    Uniform Monte Carlo over ``u in [-1/2, 1/2)^n``; returns mean and standard error.
    """
    if mc_samples < 10**4:
        raise ValueError("mc_samples must be at least 1e4")
    fine = code.fine
    n = fine.dim
    s2 = params.sigma_b2
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 0x5EED])))
    u = rng.random((mc_samples, n)) - 0.5
    x = u @ fine.generator.T
    f = np.exp(-np.einsum("ij,ij->i", x, x) / (2 * s2))
    c = volume(fine) / (2 * math.pi * s2) ** (n / 2)
    return MCEstimate(float(c * f.mean()), float(c * f.std(ddof=1) / math.sqrt(mc_samples)))


def _taylor_factor(fine: Lattice, sigma_e2: float) -> tuple[float, float]:
    vol = volume(fine)
    return vol, vol - second_moment(fine) / (2 * sigma_e2)


def gaussian_pce_leading(code, params: FadingParams, radius: float, **kw) -> CriterionReport:
    """``vol(fine) / (2 pi sigma_e2)^{n/2} * theta_coarse``."""
    n = code.coarse.dim
    vol, second = _taylor_factor(code.fine, params.sigma_e2)
    flags = ()
    if second <= 0 or (vol - second) > 0.01 * vol:
        flags = ("second_order_correction_large",)
    theta = gaussian_theta_sum(code.coarse, params.sigma_e2, radius, **kw)
    c = vol / (2 * math.pi * params.sigma_e2) ** (n / 2)
    return theta.scaled(c, Formula.PCE_GAUSS_LEAD, flags)


def gaussian_pce_second_order(code, params: FadingParams, radius: float, **kw) -> CriterionReport:
    """``(2 pi sigma_e2)^{-n/2} theta_coarse (vol - U / (2 sigma_e2))``."""
    n = code.coarse.dim
    _, factor = _taylor_factor(code.fine, params.sigma_e2)
    if factor <= 0:
        raise ExpansionInvalid(
            f"vol - U/(2 sigma_e^2) = {factor:.6g} <= 0; sigma_e^2 too small for the expansion")
    theta = gaussian_theta_sum(code.coarse, params.sigma_e2, radius, **kw)
    return theta.scaled(factor / (2 * math.pi * params.sigma_e2) ** (n / 2),
                        Formula.PCE_GAUSS_2ND)


def fading_factor(x_row_norm2, params: FadingParams):
    """Closed-form ``E[rho^L exp(-rho^2 |x_i|^2 / (2 sigma_e2))]`` for Rayleigh rho.

    With ``a = |x_i|^2 / (2 sigma_e2) + 1 / (2 sigma_he2)`` this is
    ``Gamma(L/2+1) / (2 sigma_he2 a^{L/2+1})``.
    """
    r2 = np.asarray(x_row_norm2, dtype=float)
    if np.any(r2 < 0):
        raise ValueError("row norm must be nonnegative")
    L = params.L
    a = r2 / (2 * params.sigma_e2) + 1 / (2 * params.sigma_he2)
    out = gamma_half_plus_one(L) / (2 * params.sigma_he2 * a ** (L / 2 + 1))
    return out if out.ndim else float(out)


def average_fading_sum(coarse: Lattice, params: FadingParams, radius: float,
                       n_rows: int | None = None) -> float:
    """``sum_x prod_i fading_factor(|x_i|^2)`` over the fixed ball of radius ``radius``."""
    L = params.L
    n_rows = coarse.dim // L if n_rows is None else n_rows
    if L * n_rows != coarse.dim:
        raise DimensionMismatch(f"dim {coarse.dim} != L*n = {L}*{n_rows}")
    sh = enumerate_points(coarse, radius)
    r2 = np.sum(rows_of(sh.points, L, n_rows) ** 2, axis=2)
    return math.fsum(np.prod(fading_factor(r2, params), axis=1))


def _require_fast(params):
    if params.L != 1:
        raise ValueError(f"fast-fading criterion needs L = 1, got L = {params.L}")


def fast_fading_pce(code, params: FadingParams, radius: float, *, auto_extend: bool = True,
                    include_origin: bool = True, budget: int = DEFAULT_BUDGET) -> CriterionReport:
    """``(gamma/4)^{n/2} vol(fine) sum_x prod_i (1 + gamma x_i^2)^{-3/2}``."""
    _require_fast(params)
    g = params.gamma_e
    n = code.coarse.dim

    def term(sh):
        return np.prod((1 + sh.points ** 2 * g) ** -1.5, axis=1)

    rep = lattice_sum(code.coarse, term, radius, Formula.PCE_FAST, auto_extend=auto_extend,
                      include_origin=include_origin, budget=budget)
    const = (math.sqrt(g) / 2.0) ** n
    return rep.scaled(const * volume(code.fine))


def _full_diversity_points(sh):
    pts = sh.points
    scale = np.maximum(np.max(np.abs(pts), axis=1, keepdims=True), 1.0)
    if len(pts) and np.any(np.abs(pts) <= DIVERSITY_EPS * scale):
        bad = pts[np.any(np.abs(pts) <= DIVERSITY_EPS * scale, axis=1)][0]
        raise NotFullDiversity(f"point {bad.tolist()} has a zero coordinate")
    return pts


def fast_fading_asymptotic(code, params: FadingParams, radius: float, *,
                           budget: int = DEFAULT_BUDGET) -> CriterionReport:
    """High-SNR form ``(4 gamma^2)^{-n/2} vol(fine) sum_{x != 0} prod_i |x_i|^{-3}``.

    Needs full diversity; raises :class:`NotFullDiversity` otherwise.
    """
    _require_fast(params)
    g = params.gamma_e
    n = code.coarse.dim

    def term(sh):
        return np.prod(np.abs(_full_diversity_points(sh)) ** -3.0, axis=1)

    rep = lattice_sum(code.coarse, term, radius, Formula.PCE_FAST_ASYM, auto_extend=False,
                      include_origin=False, budget=budget)
    return rep.scaled((4 * g * g) ** (-n / 2) * volume(code.fine))


def norm_sum_criterion(nf: NumberField, radius: float, *,
                       budget: int = DEFAULT_BUDGET) -> CriterionReport:
    """``sum_{x != 0} |N(x)|^{-3}`` over algebraic integers embedded within ``radius``."""
    lat = canonical_embedding_lattice(nf)

    def term(sh):
        norms, _ = field_norms(nf, sh.coords)
        return np.abs(norms) ** -3.0

    return lattice_sum(lat, term, radius, Formula.NORM_SUM_FAST, auto_extend=False,
                       include_origin=False, budget=budget)


def _block_prefactor(params, n_rows):
    # gamma^{Ln/2} Gamma(L/2+1)^n / pi^{Ln/2}
    L = params.L
    r, k = _gamma_ratio_parts(L)
    per_row = math.sqrt(params.gamma_e) ** L * float(r) / math.pi ** k
    return per_row ** n_rows


def _check_block_dims(code, params, n_rows):
    if params.L * n_rows != code.coarse.dim:
        raise DimensionMismatch(
            f"lattice dim {code.coarse.dim} != L * n_rows = {params.L} * {n_rows}")


def block_fading_pce(code, params: FadingParams, radius: float, n_rows: int, *,
                     auto_extend: bool = True, include_origin: bool = True,
                     budget: int = DEFAULT_BUDGET) -> CriterionReport:
    """Block-fading average over ``vec(X)`` codewords of an ``L n``-dim lattice::

        gamma^{Ln/2} Gamma(L/2+1)^n pi^{-Ln/2} vol(fine)
            * sum_x prod_i (1 + gamma |x_i|^2)^{-(L/2+1)}

    where ``x_i`` is row i of X, read from the vector with stride ``n_rows``.
    """
    _check_block_dims(code, params, n_rows)
    L, g = params.L, params.gamma_e

    def term(sh):
        r2 = np.sum(rows_of(sh.points, L, n_rows) ** 2, axis=2)
        return np.prod((1 + r2 * g) ** -(L / 2 + 1), axis=1)

    rep = lattice_sum(code.coarse, term, radius, Formula.PCE_BLOCK, auto_extend=auto_extend,
                      include_origin=include_origin, budget=budget)
    return rep.scaled(_block_prefactor(params, n_rows) * volume(code.fine))


def block_fading_asymptotic(code, params: FadingParams, radius: float, n_rows: int, *,
                            budget: int = DEFAULT_BUDGET) -> CriterionReport:
    """``(Gamma(L/2+1) / (pi^{L/2} gamma))^n vol(fine) sum_{x != 0} prod_i |x_i|^{-(L+2)}``.

    Raises :class:`RowAnnihilated` if a nonzero codeword in the ball has a zero row.
    """
    _check_block_dims(code, params, n_rows)
    L, g = params.L, params.gamma_e

    def term(sh):
        r2 = np.sum(rows_of(sh.points, L, n_rows) ** 2, axis=2)
        scale = np.maximum(np.max(r2, axis=1, keepdims=True), 1.0)
        dead = np.any(r2 <= DIVERSITY_EPS ** 2 * scale, axis=1)
        if np.any(dead):
            raise RowAnnihilated(f"codeword {sh.points[dead][0].tolist()} has a zero row")
        return np.prod(r2 ** -(L / 2 + 1), axis=1)

    rep = lattice_sum(code.coarse, term, radius, Formula.PCE_BLOCK_ASYM, auto_extend=False,
                      include_origin=False, budget=budget)
    r, k = _gamma_ratio_parts(L)
    const = (float(r) / math.pi ** k / g) ** n_rows
    return rep.scaled(const * volume(code.fine))


def block_norm_criterion(nf: NumberField, L: int, radius: float, *,
                         budget: int = DEFAULT_BUDGET) -> CriterionReport:
    """``sum N(|x_1|^2)^{-(L/2+1)}`` over nonzero first rows ``x_1`` (L algebraic
    integers) whose conjugate-row codeword lies within ``radius``.

    ``|x_1|^2`` is formed exactly in the ring before taking its norm.
    """
    lat = conjugate_row_lattice(nf, L)
    n = nf.degree

    def term(sh):
        first_rows = sh.coords.reshape(len(sh), L, n)
        s = squared_row_norms(nf, first_rows)
        norms, _ = field_norms(nf, s)
        return np.abs(norms) ** -(L / 2 + 1)

    return lattice_sum(lat, term, radius, Formula.NORM_SUM_BLOCK, auto_extend=False,
                       include_origin=False, budget=budget)
