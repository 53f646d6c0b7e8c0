"""Lattice description files (TOML).

Exactly one of the following describes the lattice::

    generator = [[1, 0], [0.5, 0.8660254037844386]]   # basis vectors as ROWS

    catalog = "Zn"        # or "Dn", "E8"
    dim = 2

    [field]               # canonical embedding of an integral basis
    catalog = "Qsqrt"     # or "cyclotomic_real" with p = 7
    d = 5

    [field]
    min_poly = [-2, 0, 1]              # ascending coefficients, monic
    basis = [[1, 0], [0, 1]]           # rational coords in the root; "1/2" allowed

Optional top-level keys: ``name``, ``scale`` (multiplies the generator) and,
for fields, ``L`` (build the ``L n``-dimensional conjugate-row lattice).
Generator rows are transposed so that the package-wide convention
``x = M u`` (columns are basis vectors) holds.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ConfigError, LatticeError
from .lattice import Lattice, catalog_lattice
from .numfield import (NumberField, canonical_embedding_lattice, catalog_field,
                       conjugate_row_lattice, make_field)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

KNOWN_KEYS = {"name", "generator", "catalog", "dim", "field", "scale", "L"}


@dataclass(frozen=True)
class LatticeSpec:
    lattice: Lattice
    path: str
    field: NumberField | None = None
    L: int = 1

    @property
    def n_rows(self) -> int:
        return self.lattice.dim // self.L


def _line_of(text, key):
    pat = re.compile(rf"^\s*(\[\s*{re.escape(key)}\s*\]|{re.escape(key)}\s*=)")
    for i, line in enumerate(text.splitlines(), 1):
        if pat.match(line):
            return i
    return None


def _fraction(v, path, key, line):
    try:
        return Fraction(v) if not isinstance(v, float) else Fraction(v).limit_denominator(10**12)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ConfigError(path, key, f"not a rational number: {v!r}", line) from None


def _parse_field(tbl, path, text):
    line = _line_of(text, "field")
    if not isinstance(tbl, dict):
        raise ConfigError(path, "field", "must be a table", line)
    try:
        if "catalog" in tbl:
            params = {k: v for k, v in tbl.items() if k != "catalog"}
            return catalog_field(tbl["catalog"], **params)
        if "min_poly" not in tbl:
            raise ConfigError(path, "field", "needs 'catalog' or 'min_poly'", line)
        mp = tbl["min_poly"]
        if not all(isinstance(c, int) for c in mp):
            raise ConfigError(path, "field.min_poly", "coefficients must be integers",
                              _line_of(text, "min_poly") or line)
        basis = tbl.get("basis")
        if basis is not None:
            bl = _line_of(text, "basis") or line
            basis = [[_fraction(c, path, "field.basis", bl) for c in b] for b in basis]
        return make_field(mp, basis, tbl.get("name", ""))
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(path, f"field.{exc.args[0]}", "missing parameter", line) from None
    except (LatticeError, ValueError, TypeError) as exc:
        raise ConfigError(path, "field", str(exc), line) from None


def parse_lattice_text(text: str, path: str = "<string>") -> LatticeSpec:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(path, "<syntax>", str(exc), int(m.group(1)) if m else None) from None
    unknown = set(doc) - KNOWN_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(path, key, "unknown key", _line_of(text, key))
    given = [k for k in ("generator", "catalog", "field") if k in doc]
    if len(given) != 1:
        raise ConfigError(path, "generator|catalog|field",
                          "exactly one lattice description is required")
    key = given[0]
    line = _line_of(text, key)
    name = doc.get("name", Path(path).stem)
    nf = None
    L = int(doc.get("L", 1))
    if L < 1:
        raise ConfigError(path, "L", "must be a positive integer", _line_of(text, "L"))
    if key == "generator":
        rows = doc["generator"]
        try:
            arr = np.array(rows, dtype=float)
        except (ValueError, TypeError):
            raise ConfigError(path, key, "rows must be numeric lists of equal length", line) from None
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ConfigError(path, key, f"matrix must be square, got shape {arr.shape}", line)
        try:
            lat = Lattice.from_rows(arr, name)
        except LatticeError as exc:
            raise ConfigError(path, key, str(exc), line) from None
    elif key == "catalog":
        try:
            lat = catalog_lattice(doc["catalog"], doc.get("dim"))
        except ValueError as exc:
            raise ConfigError(path, key, str(exc), line) from None
    else:
        nf = _parse_field(doc["field"], path, text)
        lat = conjugate_row_lattice(nf, L) if L > 1 else canonical_embedding_lattice(nf)
    if key != "field" and L > 1 and lat.dim % L:
        raise ConfigError(path, "L", f"dimension {lat.dim} is not a multiple of L",
                          _line_of(text, "L"))
    if "scale" in doc:
        s = doc["scale"]
        if not isinstance(s, (int, float)) or s <= 0:
            raise ConfigError(path, "scale", "must be a positive number", _line_of(text, "scale"))
        lat = lat.scaled(float(s))
    return LatticeSpec(Lattice(lat.generator, name), str(path), nf, L)


def load_lattice_file(path) -> LatticeSpec:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(path, "<file>", exc.strerror or str(exc)) from None
    return parse_lattice_text(text, str(p))
