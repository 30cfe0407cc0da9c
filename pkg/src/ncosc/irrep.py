"""Truncated unitary irreps of sl(2,R).

States ``|lambda, m>`` diagonalize ``s0`` (eigenvalue ``m``) and the
Casimir ``s0^2 - s1^2 - s2^2`` (eigenvalue ``lambda``); the ladder
operators act as ``s_pm |m> = sqrt(m(m +- 1) - lambda) |m +- 1>`` with
real, non-negative amplitudes.  Only a finite window of ``m`` values is
kept, so operator identities hold only away from the truncated edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .operators import HermitianOperator

DISCRETE_PLUS = "discrete_plus"
DISCRETE_MINUS = "discrete_minus"
CONTINUOUS = "continuous"
CLASSES = (DISCRETE_PLUS, DISCRETE_MINUS, CONTINUOUS)

#: amplitudes with radicand in (-CLAMP, 0) are treated as exact zeros
CLAMP = 1e-12


class IrrepError(ValueError):
    pass


def _is_half_integer(x: float) -> bool:
    return abs(2 * x - round(2 * x)) < 1e-12


def _on_grid(m: float, offset: float) -> bool:
    return abs((m - offset) - round(m - offset)) < 1e-12


@dataclass(frozen=True)
class IrrepSpec:
    """A unitary irrep class plus the retained window ``[m_min, m_max]``.

    ``grid_offset`` is 0 for integer ``m`` and 1/2 for half-integer ``m``.
    """

    cls: str
    lam: float
    m_min: float
    m_max: float
    grid_offset: float
    k: Optional[float] = None

    @property
    def ms(self) -> np.ndarray:
        n = int(round(self.m_max - self.m_min)) + 1
        return self.m_min + np.arange(n, dtype=float)

    @property
    def dim(self) -> int:
        return int(round(self.m_max - self.m_min)) + 1

    @property
    def lower_edge_physical(self) -> bool:
        """True when ``m_min`` is the lowest weight (``s_-`` annihilates it)."""
        return self.cls == DISCRETE_PLUS and abs(self.m_min - self.k) < 1e-12

    @property
    def upper_edge_physical(self) -> bool:
        return self.cls == DISCRETE_MINUS and abs(self.m_max + self.k) < 1e-12

    def index(self, m: float) -> int:
        i = int(round(m - self.m_min))
        if i < 0 or i >= self.dim or abs(self.m_min + i - m) > 1e-12:
            raise KeyError(m)
        return i

    def contains(self, m: float) -> bool:
        return (self.m_min - 1e-12 <= m <= self.m_max + 1e-12
                and _on_grid(m, self.grid_offset))

    def interior_mask(self, margin: int = 1) -> np.ndarray:
        """States whose ``margin``-fold ladder images stay inside the window."""
        ms = self.ms
        up = ms + margin <= self.m_max + 1e-12
        down = ms - margin >= self.m_min - 1e-12
        if self.lower_edge_physical:
            down = np.ones_like(down)
        if self.upper_edge_physical:
            up = np.ones_like(up)
        return up & down

    def with_window(self, m_min: float, m_max: float) -> "IrrepSpec":
        if self.cls == CONTINUOUS:
            return make_irrep(CONTINUOUS, lam=self.lam, grid=self.grid, window=(m_min, m_max))
        return make_irrep(self.cls, k=self.k, window=(m_min, m_max))

    def widened(self, extra: int) -> "IrrepSpec":
        """Same irrep with the truncated edges moved out by ``extra`` steps."""
        lo = self.m_min if self.lower_edge_physical else self.m_min - extra
        hi = self.m_max if self.upper_edge_physical else self.m_max + extra
        return self.with_window(lo, hi)

    @property
    def grid(self) -> str:
        return "integer" if self.grid_offset == 0 else "half-integer"

    def to_dict(self) -> dict:
        d = {"class": self.cls, "window": [self.m_min, self.m_max]}
        if self.cls == CONTINUOUS:
            d["lambda"] = self.lam
            d["grid"] = self.grid
        else:
            d["k"] = self.k
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "IrrepSpec":
        if d["class"] == CONTINUOUS:
            return make_irrep(CONTINUOUS, lam=d["lambda"], grid=d.get("grid", "integer"),
                              window=tuple(d["window"]))
        return make_irrep(d["class"], k=d["k"], window=tuple(d["window"]))


def make_irrep(cls: str, *, k: float | None = None, lam: float | None = None,
               grid: str = "integer", window=(None, None)) -> IrrepSpec:
    """Validate irrep data and clip ``window`` to the admissible ``m`` range.

    Discrete classes take ``k`` (a positive half-integer, ``lambda = k(k-1)``);
    the continuous class takes ``lam < -1/4`` and a ``grid`` of integer or
    half-integer ``m``.  A window that does not meet the irrep support is an
    error; one that overlaps it partially is clipped.
    """
    if cls not in CLASSES:
        raise IrrepError(f"unknown irrep class {cls!r}")
    m_min, m_max = window
    if cls == CONTINUOUS:
        if lam is None or not lam < -0.25:
            raise IrrepError("lambda out of range")
        if grid not in ("integer", "half-integer"):
            raise IrrepError(f"unknown grid {grid!r}")
        offset = 0.0 if grid == "integer" else 0.5
        if m_min is None or m_max is None:
            raise IrrepError("continuous irreps need an explicit window")
        k_val = None
        lam_val = float(lam)
    else:
        if k is None or k <= 0 or not _is_half_integer(k):
            raise IrrepError("k must be a positive half-integer")
        k_val = float(k)
        lam_val = k_val * (k_val - 1.0)
        offset = k_val % 1.0
        if cls == DISCRETE_PLUS:
            m_min = k_val if m_min is None else max(float(m_min), k_val)
            if m_max is None or m_max < k_val:
                raise IrrepError("window outside irrep support")
        else:
            m_max = -k_val if m_max is None else min(float(m_max), -k_val)
            if m_min is None or m_min > -k_val:
                raise IrrepError("window outside irrep support")
    m_min, m_max = float(m_min), float(m_max)
    if m_max < m_min:
        raise IrrepError("empty window")
    if not (_on_grid(m_min, offset) and _on_grid(m_max, offset)):
        raise IrrepError("window bounds are not on the irrep's m grid")
    spec = IrrepSpec(cls, lam_val, m_min, m_max, offset, k_val)
    ms = spec.ms
    # interior transitions m -> m+1 must have real amplitudes
    rad = ms[:-1] * (ms[:-1] + 1) - lam_val
    if np.any(rad < -CLAMP):
        raise IrrepError("invalid irrep window")
    return spec


def ladder_amplitude(m: float, lam: float, step: int) -> float:
    """``sqrt(m(m + step) - lam)`` for ``step = +-1``, clamped at zero."""
    rad = m * (m + step) - lam
    if rad < 0:
        if rad < -CLAMP:
            raise IrrepError("invalid irrep window")
        return 0.0
    return math.sqrt(rad)


def s0_matrix(spec: IrrepSpec) -> HermitianOperator:
    return HermitianOperator(sp.diags(spec.ms.astype(complex)).tocsr(), tuple(spec.ms))


def _ladder(spec: IrrepSpec, step: int) -> HermitianOperator:
    ms = spec.ms
    n = spec.dim
    rows, cols, vals = [], [], []
    for i, m in enumerate(ms):
        j = i + step
        if 0 <= j < n:
            amp = ladder_amplitude(m, spec.lam, step)
            if amp != 0.0:
                rows.append(j)
                cols.append(i)
                vals.append(amp)
    mat = sp.coo_matrix((np.asarray(vals, dtype=complex), (rows, cols)), shape=(n, n))
    return HermitianOperator(mat.tocsr(), tuple(ms))


def s_plus_matrix(spec: IrrepSpec) -> HermitianOperator:
    return _ladder(spec, +1)


def s_minus_matrix(spec: IrrepSpec) -> HermitianOperator:
    return _ladder(spec, -1)


def s1_s2_matrices(spec: IrrepSpec) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Hermitian ``s1 = (s+ + s-)/2`` and ``s2 = (s+ - s-)/(2i)``."""
    sp_ = s_plus_matrix(spec).matrix
    sm = s_minus_matrix(spec).matrix
    return ((sp_ + sm) * 0.5).tocsr(), ((sp_ - sm) * (-0.5j)).tocsr()


def casimir_matrix(spec: IrrepSpec) -> HermitianOperator:
    s0 = s0_matrix(spec).matrix
    sp_ = s_plus_matrix(spec).matrix
    sm = s_minus_matrix(spec).matrix
    cas = s0 @ s0 - 0.5 * (sp_ @ sm + sm @ sp_)
    return HermitianOperator(cas.tocsr(), tuple(spec.ms))


def casimir_report(spec: IrrepSpec) -> dict:
    """Casimir diagonal on interior states, compared with ``lambda``."""
    diag = casimir_matrix(spec).matrix.diagonal().real
    mask = spec.interior_mask(1)
    vals = diag[mask]
    return {
        "lambda": spec.lam,
        "interior_m": spec.ms[mask].tolist(),
        "interior_values": vals.tolist(),
        "max_deviation": float(np.max(np.abs(vals - spec.lam))) if vals.size else 0.0,
        "empty_interior": not bool(mask.any()),
    }
