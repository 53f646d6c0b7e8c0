"""Monte Carlo simulation of the fading wiretap channel with coset coding.

Each trial draws a label, a coarse-lattice randomizer, a Rayleigh fading
vector and Gaussian noise; the receiver decodes on the faded fine lattice
``diag(h) M_fine`` (perfect CSI) and succeeds when the decoded coset label
equals the transmitted one.

Randomness is counter-based: trials are grouped in fixed batches of
``BATCH`` and batch ``b`` uses a Philox stream keyed by ``(seed, b)``, so a
run is reproducible from ``(seed, trial index)`` regardless of how batches
are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coset import CosetCode
from .criteria import FadingParams, MCEstimate
from .errors import DimensionMismatch
from .lattice import _fincke_pohst, _sort_key_order, enumerate_points
from .numfield import rows_of

BATCH = 1 << 14


def batch_rng(seed: int, batch: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(batch)])))


def rayleigh_from_uniform(u, sigma_h2: float):
    """Inverse CDF: ``sigma_h sqrt(-2 ln u)`` for ``u`` in (0, 1)."""
    u = np.asarray(u, dtype=float)
    return math.sqrt(sigma_h2) * np.sqrt(-2.0 * np.log(u))


def sample_rayleigh(sigma_h2: float, rng: np.random.Generator, size=None):
    """Rayleigh draws with density ``(r / s2) exp(-r^2 / (2 s2))``, ``s2 = sigma_h2``."""
    if not sigma_h2 > 0:
        raise ValueError("sigma_h2 must be positive")
    u = rng.random(size)
    # rng.random() lies in [0, 1); map 0 to the smallest positive double
    u = np.where(u == 0.0, np.finfo(float).tiny, u)
    out = rayleigh_from_uniform(u, sigma_h2)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class SimConfig:
    """One simulation point.

    ``fading="none"`` forces ``h = 1`` (plain Gaussian channel).  The
    randomizer has integer coordinates (in the coarse basis) uniform on
    ``[-randomizer_box, randomizer_box]``.
    """

    code: CosetCode
    params: FadingParams
    trials: int
    seed: int = 0
    decoder: str = "rounding"
    who: str = "eve"
    randomizer_box: int = 2
    fading: str = "rayleigh"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.randomizer_box < 1:
            raise ValueError("randomizer_box must be >= 1")
        if self.decoder not in ("rounding", "exact"):
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if self.who not in ("bob", "eve"):
            raise ValueError(f"who must be 'bob' or 'eve', got {self.who!r}")
        if self.fading not in ("rayleigh", "none"):
            raise ValueError(f"unknown fading mode {self.fading!r}")
        if self.code.dim % self.params.L:
            raise DimensionMismatch(
                f"code dimension {self.code.dim} is not a multiple of L = {self.params.L}")

    @property
    def noise_var(self) -> float:
        return self.params.sigma_e2 if self.who == "eve" else self.params.sigma_b2

    @property
    def fading_var(self) -> float:
        return self.params.sigma_he2 if self.who == "eve" else self.params.sigma_hb2


@dataclass(frozen=True)
class SimResult:
    p_correct: float
    std_err: float
    trials: int
    successes: int


def _exact_decode(gen, y):
    """Closest point of the lattice generated by ``gen`` (integer coordinates)."""
    t = np.linalg.solve(gen, y)
    u0 = np.rint(t).astype(np.int64)
    d2 = float(np.sum((y - gen @ u0) ** 2))
    if d2 == 0.0:
        return u0
    cand = _fincke_pohst(gen, t, d2, 10**7)
    diff = y - cand @ gen.T
    dist2 = np.einsum("ij,ij->i", diff, diff)
    return cand[_sort_key_order(dist2, cand, d2)[0]]


def _run_batch(cfg: SimConfig, batch: int, m: int) -> int:
    code = cfg.code
    n = code.dim
    L = cfg.params.L
    n_rows = n // L
    rng = batch_rng(cfg.seed, batch)
    labels = rng.integers(0, code.index, size=m)
    B = cfg.randomizer_box
    r = rng.integers(-B, B + 1, size=(m, n))
    if cfg.fading == "rayleigh":
        h_rows = sample_rayleigh(cfg.fading_var, rng, (m, n_rows))
    else:
        h_rows = np.ones((m, n_rows))
    noise = rng.standard_normal((m, n)) * math.sqrt(cfg.noise_var)

    # transmitted fine coordinates: coarse randomizer plus coset representative
    w = r @ code.coarse_in_fine.T + code.rep_coords(labels)
    x = w @ code.fine.generator.T
    # vec(X) is column-major: coordinate j*n_rows + i carries row i's fading
    h = np.tile(h_rows, (1, L))
    y = h * x + noise

    if cfg.decoder == "rounding":
        w_hat = np.rint((y / h) @ code.fine.inverse.T).astype(np.int64)
    else:
        M = code.fine.generator
        w_hat = np.array([_exact_decode(hk[:, None] * M, yk) for hk, yk in zip(h, y)])
    return int(np.sum(code.labels_from_coords(w_hat) == labels))


def simulate_correct_decision(cfg: SimConfig) -> SimResult:
    """Empirical probability that the receiver recovers the transmitted coset."""
    successes = 0
    done = 0
    batch = 0
    while done < cfg.trials:
        m = min(BATCH, cfg.trials - done)
        successes += _run_batch(cfg, batch, m)
        done += m
        batch += 1
    p = successes / cfg.trials
    return SimResult(p, math.sqrt(p * (1 - p) / cfg.trials), cfg.trials, successes)


def mc_average_theta(coarse, params: FadingParams, L: int, radius: float,
                     fading_draws: int, seed: int = 0) -> MCEstimate:
    """Monte Carlo fading average of ``sum_x prod_i h_i^L exp(-h_i^2 |x_i|^2 / (2 sigma_e2))``
    over the points of ``coarse`` within ``radius`` (a fixed shell).

    ``x_i`` is row i of the codeword ``vec^{-1}(x)``, ``n = dim / L`` rows.
    """
    if fading_draws < 1000:
        raise ValueError("fading_draws must be at least 1000")
    if coarse.dim % L:
        raise DimensionMismatch(f"dim {coarse.dim} is not a multiple of L = {L}")
    n_rows = coarse.dim // L
    sh = enumerate_points(coarse, radius)
    r2 = np.sum(rows_of(sh.points, L, n_rows) ** 2, axis=2)  # (P, n_rows)
    rng = batch_rng(seed, 0)
    h = sample_rayleigh(params.sigma_he2, rng, (fading_draws, n_rows))
    vals = np.empty(fading_draws)
    step = max(1, 2**22 // max(1, r2.size))
    for s in range(0, fading_draws, step):
        hk = h[s:s + step]
        expo = (L * np.log(hk))[:, None, :] - (hk ** 2)[:, None, :] * r2[None] / (2 * params.sigma_e2)
        vals[s:s + step] = np.exp(expo.sum(axis=2)).sum(axis=1)
    return MCEstimate(float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(fading_draws)))


def sweep(code: CosetCode, gamma_db, *, trials: int, seed: int = 0, decoder: str = "rounding",
          who: str = "eve", L: int = 1, sigma_h2: float = 1.0, randomizer_box: int = 2,
          fading: str = "rayleigh"):
    """Simulate over a grid of average SNRs ``gamma = sigma_h2 / sigma^2`` (dB).

    The SNR applies to the chosen receiver; the other receiver keeps unit
    parameters.  Every grid point reuses ``seed`` (common random numbers).
    Yields ``(gamma_db, SimResult)``.
    """
    for gdb in gamma_db:
        g = 10.0 ** (gdb / 10.0)
        if who == "eve":
            params = FadingParams(sigma_e2=sigma_h2 / g, sigma_he2=sigma_h2, L=L)
        else:
            params = FadingParams(sigma_b2=sigma_h2 / g, sigma_hb2=sigma_h2, L=L)
        cfg = SimConfig(code, params, trials, seed, decoder, who, randomizer_box, fading)
        yield gdb, simulate_correct_decision(cfg)
