"""Coset coding over a nested pair of lattices.

The secret label picks a coset ``coarse + c_j`` of the fine lattice; the
transmitter then adds a random point of the coarse lattice.  The quotient
``fine / coarse`` is computed from the Smith normal form of the integer
matrix ``B = M_fine^{-1} M_coarse``: with ``U B V = D``, fine coordinates
``w`` lie in the coarse lattice iff ``(U w)_i = 0 mod d_i`` for every i.
Labels are mixed-radix numbers in the digits ``(U w)_i mod d_i`` with the
first digit least significant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (DimensionMismatch, IndexOverflow, LabelOutOfRange, NotInFineLattice,
                     NotNested)
from .lattice import Lattice, volume
from .snf import smith_normal_form

NEST_TOL = 1e-9
MAX_INDEX = 2**32


class LatticePair(NamedTuple):
    """Fine/coarse pair without a nesting check.

    The criteria only read ``fine`` and ``coarse``, so a pair is enough to
    evaluate them on rescaled candidates that are no longer nested.
    """

    fine: Lattice
    coarse: Lattice


@dataclass(frozen=True, eq=False)
class CosetCode:
    fine: Lattice
    coarse: Lattice
    index: int
    secret_bits: int
    coarse_in_fine: np.ndarray
    invariants: tuple
    transform: np.ndarray
    transform_inv: np.ndarray

    @property
    def dim(self) -> int:
        return self.fine.dim

    def rates(self, random_bits: float = 0.0):
        """``(R, R_s, R_r)`` in bits per real dimension.

        ``random_bits`` is the entropy spent choosing the coarse-lattice point.
        """
        rs = self.secret_bits / self.dim
        rr = random_bits / self.dim
        return rs + rr, rs, rr

    def rep_coords(self, labels) -> np.ndarray:
        """Fine-lattice integer coordinates of the representatives ``c_label``."""
        lab = np.array(labels, dtype=np.int64, ndmin=1)
        digits = np.zeros((len(lab), len(self.invariants)), dtype=np.int64)
        for pos, d in enumerate(self.invariants):
            if d > 1:
                digits[:, pos] = lab % d
                lab = lab // d
        return digits @ self.transform_inv.T

    def rep(self, label: int) -> np.ndarray:
        if not 0 <= label < self.index:
            raise LabelOutOfRange(f"label {label} not in [0, {self.index})")
        return self.fine.point(self.rep_coords(label)[0])

    @property
    def reps(self) -> np.ndarray:
        """All representatives in label order, shape ``(index, n)``."""
        return self.fine.point(self.rep_coords(np.arange(self.index)))

    def labels_from_coords(self, w) -> np.ndarray:
        """Coset labels of fine-lattice points given by integer coordinates (rows)."""
        w = np.atleast_2d(np.asarray(w, dtype=np.int64))
        z = w @ self.transform.T
        label = np.zeros(len(w), dtype=np.int64)
        radix = 1
        for i, d in enumerate(self.invariants):
            if d > 1:
                label += np.mod(z[:, i], d) * radix
                radix *= d
        return label


def build_coset_code(fine: Lattice, coarse: Lattice) -> CosetCode:
    if fine.dim != coarse.dim:
        raise DimensionMismatch(f"fine has dim {fine.dim}, coarse has dim {coarse.dim}")
    B = fine.inverse @ coarse.generator
    Bint = np.rint(B)
    err = np.max(np.abs(B - Bint))
    if err > NEST_TOL * max(1.0, np.max(np.abs(B))):
        raise NotNested(f"M_fine^-1 M_coarse is not integral (max deviation {err:.3g})")
    Bi = [[int(v) for v in row] for row in Bint]
    D, U, _, Uinv = smith_normal_form(Bi)
    diag = tuple(D[i][i] for i in range(len(D)))
    index = math.prod(diag)
    if index == 0:
        raise NotNested("coarse lattice is degenerate inside the fine lattice")
    if index > MAX_INDEX:
        raise IndexOverflow(f"index {index} exceeds 2^32")
    return CosetCode(
        fine=fine,
        coarse=coarse,
        index=index,
        secret_bits=index.bit_length() - 1,
        coarse_in_fine=np.array(Bi, dtype=np.int64),
        invariants=diag,
        transform=np.array(U, dtype=np.int64),
        transform_inv=np.array(Uinv, dtype=np.int64),
    )


def encode(code: CosetCode, label: int, randomizer) -> np.ndarray:
    """Transmit point ``r + c_label`` for a randomizer ``r`` in the coarse lattice."""
    if not 0 <= label < code.index:
        raise LabelOutOfRange(f"label {label} not in [0, {code.index})")
    r = np.asarray(randomizer, dtype=float)
    u = code.coarse.coordinates(r)
    if np.max(np.abs(u - np.rint(u))) > NEST_TOL * max(1.0, np.max(np.abs(u))):
        raise ValueError("randomizer is not a point of the coarse lattice")
    return r + code.rep(label)


def fine_coords(code: CosetCode, x) -> np.ndarray:
    w = code.fine.coordinates(x)
    wi = np.rint(w)
    if np.max(np.abs(w - wi)) > NEST_TOL * max(1.0, np.max(np.abs(w))):
        raise NotInFineLattice("point is not in the fine lattice")
    return wi.astype(np.int64)


def coset_label(code: CosetCode, x) -> int:
    """Index j with ``x - c_j`` in the coarse lattice."""
    return int(code.labels_from_coords(fine_coords(code, x))[0])


def bits_to_label(bits) -> int:
    """Little-endian bit string to label; only ``2**secret_bits`` labels carry data."""
    return sum(int(b) << i for i, b in enumerate(bits))


def label_to_bits(label: int, k: int) -> list[int]:
    return [(label >> i) & 1 for i in range(k)]


def index_volume_gap(code: CosetCode) -> float:
    """Relative mismatch of ``index * vol(fine)`` against ``vol(coarse)``."""
    vf, vc = volume(code.fine), volume(code.coarse)
    return abs(code.index * vf - vc) / vc
