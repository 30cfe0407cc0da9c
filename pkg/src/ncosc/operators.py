"""Sparse Hermitian operators over an enumerated basis."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class HermitianOperator:
    """Complex sparse matrix together with the basis labels it acts on.

    The matrix is stored in CSR form.  Hermiticity is not forced at
    construction time (intermediate objects such as ladder operators are
    carried in the same container); use :meth:`hermiticity_residual` or
    :meth:`check_hermitian` where it matters.
    """

    matrix: sp.csr_matrix
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        m = self.matrix
        if not sp.issparse(m):
            m = sp.csr_matrix(np.asarray(m, dtype=complex))
        m = sp.csr_matrix(m, dtype=complex)
        m.sum_duplicates()
        m.eliminate_zeros()
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got {m.shape}")
        if self.labels and len(self.labels) != m.shape[0]:
            raise ValueError("label count does not match operator dimension")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_triples(cls, dim: int, triples: Iterable[tuple[int, int, complex]],
                     labels: Sequence = ()) -> "HermitianOperator":
        triples = list(triples)
        if triples:
            rows, cols, vals = zip(*triples)
        else:
            rows, cols, vals = (), (), ()
        m = sp.coo_matrix((np.asarray(vals, dtype=complex), (rows, cols)), shape=(dim, dim))
        return cls(m.tocsr(), tuple(labels))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def triples(self) -> list[tuple[int, int, complex]]:
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[i]), int(coo.col[i]), complex(coo.data[i])) for i in order]

    def dagger(self) -> "HermitianOperator":
        return HermitianOperator(self.matrix.conj().T.tocsr(), self.labels)

    def hermiticity_residual(self) -> float:
        diff = self.matrix - self.matrix.conj().T
        return float(abs(diff).max()) if diff.nnz else 0.0

    def check_hermitian(self, tol: float = 0.0) -> None:
        res = self.hermiticity_residual()
        scale = max(1.0, float(abs(self.matrix).max()) if self.matrix.nnz else 0.0)
        if res > tol * scale:
            raise ValueError(f"non-Hermitian input (residual {res:.3e})")

    def __matmul__(self, other):
        if isinstance(other, HermitianOperator):
            return HermitianOperator(self.matrix @ other.matrix, self.labels)
        return self.matrix @ other

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.matrix + other.matrix, self.labels)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.matrix - other.matrix, self.labels)

    def __mul__(self, scalar) -> "HermitianOperator":
        return HermitianOperator(self.matrix * scalar, self.labels)

    __rmul__ = __mul__

    # coordinate-triple text format: one "row col re im" line per stored entry
    def export_text(self) -> str:
        lines = [f"# dim {self.dim}"]
        for r, c, v in self.triples():
            lines.append(f"{r} {c} {v.real!r} {v.imag!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def import_text(cls, text: str) -> "HermitianOperator":
        dim = None
        triples = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "dim":
                    dim = int(parts[1])
                continue
            r, c, re, im = line.split()
            triples.append((int(r), int(c), complex(float(re), float(im))))
        if dim is None:
            dim = 1 + max((max(r, c) for r, c, _ in triples), default=-1)
        return cls.from_triples(dim, triples)


def commutator(a, b):
    """``[a, b]`` for sparse matrices or :class:`HermitianOperator`s."""
    if isinstance(a, HermitianOperator):
        return HermitianOperator(a.matrix @ b.matrix - b.matrix @ a.matrix, a.labels)
    return a @ b - b @ a


def max_abs(m) -> float:
    if isinstance(m, HermitianOperator):
        m = m.matrix
    if sp.issparse(m):
        return float(abs(m).max()) if m.nnz else 0.0
    return float(np.max(np.abs(m))) if np.size(m) else 0.0
