"""Finite-dimensional Lie algebras given by structure constants.

Brackets are stored as a dense tensor ``c[i, j, k]`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k``.  Entries are complex: the physical
generators are Hermitian, so commutators carry explicit factors of ``i``.

The deformed Heisenberg algebra uses the basis
``(1, x0, x1, x2, p0, p1, p2, s0, s1, s2)``, the Levi-Civita symbol with
``eps[0, 1, 2] = +1`` and the metric ``eta = diag(1, -1, -1)`` for raising
indices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

ETA = np.diag([1.0, -1.0, -1.0])

#: relative singular-value cutoff used for every rank / null-space decision
SVD_RTOL = 1e-9


def levi_civita3() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for perm in itertools.permutations(range(3)):
        # parity from the number of inversions
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        eps[perm] = -1.0 if inv % 2 else 1.0
    return eps


EPS = levi_civita3()


class SolvableAlgebraError(ValueError):
    pass


class LeviError(RuntimeError):
    pass


class NotSubalgebraError(ValueError):
    pass


@dataclass(frozen=True)
class LieAlgebra:
    labels: tuple[str, ...]
    c: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.c, dtype=complex)
        d = len(self.labels)
        if d == 0:
            raise ValueError("algebra must have positive dimension")
        if c.shape != (d, d, d):
            raise ValueError(f"structure constants must have shape {(d, d, d)}, got {c.shape}")
        if not np.array_equal(c, -c.transpose(1, 0, 2)):
            raise ValueError("structure constants are not antisymmetric")
        if self.labels[0] == "1" and np.any(c[0] != 0):
            raise ValueError("central label '1' has nonzero brackets")
        c.setflags(write=False)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def unit(self, label: str) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(label)] = 1.0
        return v

    def to_json(self) -> str:
        entries = []
        for i, j, k in zip(*np.nonzero(self.c)):
            v = self.c[i, j, k]
            entries.append([int(i), int(j), int(k), float(v.real), float(v.imag)])
        return json.dumps({"dim": self.dim, "labels": list(self.labels), "c": entries})

    @classmethod
    def from_json(cls, text: str) -> "LieAlgebra":
        doc = json.loads(text)
        d = int(doc["dim"])
        labels = tuple(doc["labels"])
        if len(labels) != d:
            raise ValueError("label count does not match dim")
        c = np.zeros((d, d, d), dtype=complex)
        for i, j, k, re, im in doc["c"]:
            c[i, j, k] = complex(re, im)
        return cls(labels, c)


def from_brackets(labels: Sequence[str], brackets: dict) -> LieAlgebra:
    """Build an algebra from ``{(a, b): {label: coeff}}`` for ``a`` before ``b``.

    The reversed bracket is filled in by antisymmetry; repeating a pair in
    both orders is an error.
    """
    labels = tuple(labels)
    d = len(labels)
    pos = {l: n for n, l in enumerate(labels)}
    c = np.zeros((d, d, d), dtype=complex)
    seen = set()
    for (a, b), rhs in brackets.items():
        i, j = pos[a], pos[b]
        if i == j or frozenset((i, j)) in seen:
            raise ValueError(f"bracket [{a}, {b}] given twice or on the diagonal")
        seen.add(frozenset((i, j)))
        for lab, coeff in rhs.items():
            c[i, j, pos[lab]] += coeff
            c[j, i, pos[lab]] -= coeff
    return LieAlgebra(labels, c)


def deformed_heisenberg(theta: float, kappa: float) -> LieAlgebra:
    """The 10-dimensional Heisenberg algebra deformed by sl(2,R) generators.

    ``theta`` and ``kappa`` are the coordinate and momentum scales::

        [x_mu, x_nu] = -i theta^2     eps_{mu nu rho} s^rho
        [p_mu, p_nu] = -i kappa^2     eps_{mu nu rho} s^rho
        [x_mu, p_nu] =  i eta_{mu nu} 1 - i kappa theta eps_{mu nu rho} s^rho
        [x_mu, s_nu] = -i theta       eps_{mu nu rho} s^rho
        [p_mu, s_nu] = -i kappa       eps_{mu nu rho} s^rho
        [s_mu, s_nu] = -i             eps_{mu nu rho} s^rho
    """
    if theta < 0 or kappa < 0:
        raise ValueError("theta and kappa must be non-negative")
    labels = ("1", "x0", "x1", "x2", "p0", "p1", "p2", "s0", "s1", "s2")
    X, P, S = 1, 4, 7
    c = np.zeros((10, 10, 10), dtype=complex)

    def put(i, j, vec):
        c[i, j] += vec
        c[j, i] -= vec

    def eps_s(mu, nu, scale):
        # -i * scale * eps_{mu nu rho} s^rho, with s^rho = eta^{rho rho} s_rho
        v = np.zeros(10, dtype=complex)
        for rho in range(3):
            v[S + rho] += -1j * scale * EPS[mu, nu, rho] * ETA[rho, rho]
        return v

    for mu in range(3):
        for nu in range(3):
            xp = eps_s(mu, nu, kappa * theta)
            xp[0] += 1j * ETA[mu, nu]
            # [x_mu, p_nu] fixes [p_nu, x_mu]; every ordered pair is distinct here
            c[X + mu, P + nu] += xp
            c[P + nu, X + mu] -= xp
            # [x_mu, s_nu] and [p_mu, s_nu] likewise
            xs = eps_s(mu, nu, theta)
            c[X + mu, S + nu] += xs
            c[S + nu, X + mu] -= xs
            ps = eps_s(mu, nu, kappa)
            c[P + mu, S + nu] += ps
            c[S + nu, P + mu] -= ps
        for nu in range(mu + 1, 3):
            put(X + mu, X + nu, eps_s(mu, nu, theta**2))
            put(P + mu, P + nu, eps_s(mu, nu, kappa**2))
            put(S + mu, S + nu, eps_s(mu, nu, 1.0))
    return LieAlgebra(labels, c)


def sl2r() -> LieAlgebra:
    """sl(2,R) in the Hermitian-generator convention ``[s_mu, s_nu] = -i eps s^rho``."""
    c = np.zeros((3, 3, 3), dtype=complex)
    for mu, nu, rho in itertools.product(range(3), repeat=3):
        c[mu, nu, rho] = -1j * EPS[mu, nu, rho] * ETA[rho, rho]
    return LieAlgebra(("s0", "s1", "s2"), c)


def abelian(dim: int, labels: Sequence[str] | None = None) -> LieAlgebra:
    labels = tuple(labels) if labels else tuple(f"a{i}" for i in range(dim))
    return LieAlgebra(labels, np.zeros((dim, dim, dim), dtype=complex))


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    d = a.dim + b.dim
    c = np.zeros((d, d, d), dtype=complex)
    c[: a.dim, : a.dim, : a.dim] = a.c
    c[a.dim:, a.dim:, a.dim:] = b.c
    return LieAlgebra(a.labels + b.labels, c)


# --------------------------------------------------------------------------
# linear algebra on coefficient vectors


def _as_vector(alg: LieAlgebra, x) -> np.ndarray:
    if isinstance(x, str):
        return alg.unit(x).astype(complex)
    x = np.asarray(x, dtype=complex)
    if x.shape != (alg.dim,):
        raise ValueError(f"dimension mismatch: expected vector of length {alg.dim}, got {x.shape}")
    return x


def bracket(alg: LieAlgebra, x, y) -> np.ndarray:
    x, y = _as_vector(alg, x), _as_vector(alg, y)
    return np.einsum("i,j,ijk->k", x, y, alg.c)


def adjoint_matrix(alg: LieAlgebra, x) -> np.ndarray:
    """Matrix ``A`` with ``A @ y == bracket(alg, x, y)``."""
    x = _as_vector(alg, x)
    return np.einsum("i,ijk->kj", x, alg.c)


def killing_pairing(alg: LieAlgebra, x, y) -> complex:
    return complex(np.trace(adjoint_matrix(alg, x) @ adjoint_matrix(alg, y)))


def killing_matrix(alg: LieAlgebra, basis=None) -> np.ndarray:
    """Gram matrix of the Killing form on ``basis`` rows (default: the standard basis)."""
    basis = np.eye(alg.dim, dtype=complex) if basis is None else np.atleast_2d(basis)
    ads = [adjoint_matrix(alg, b) for b in basis]
    n = len(ads)
    K = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            K[i, j] = K[j, i] = np.trace(ads[i] @ ads[j])
    return K


def jacobi_residual(alg: LieAlgebra) -> float:
    """Max over basis triples of ``|[[e_i,e_j],e_k] + cyclic|``."""
    c = alg.c
    # t[i,j,k,m] = sum_l c[i,j,l] c[l,k,m]
    t = np.einsum("ijl,lkm->ijkm", c, c)
    jac = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(jac))) if jac.size else 0.0


def _rank_tol(s: np.ndarray) -> float:
    return SVD_RTOL * s[0] if s.size and s[0] > 0 else 0.0


def null_space(a: np.ndarray) -> np.ndarray:
    """Rows spanning ``{v : a @ v = 0}``, orthonormal."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    n = a.shape[1]
    if a.size == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(a)
    rank = int(np.sum(s > _rank_tol(s)))
    return vh[rank:].conj()


# --------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """Subspace of an algebra, carried as orthonormal rows ``basis``."""

    parent_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex).reshape(-1, self.parent_dim)
        if b.shape[0] and np.linalg.matrix_rank(b, tol=1e-12) != b.shape[0]:
            raise ValueError("basis vectors are linearly dependent")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def project(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        return self.basis.T @ (self.basis.conj() @ v)

    def residual(self, v) -> float:
        """Distance from ``v`` to the subspace."""
        v = np.asarray(v, dtype=complex)
        return float(np.linalg.norm(v - self.project(v)))

    def contains(self, v, tol: float = 1e-10) -> bool:
        return self.residual(v) <= tol * max(1.0, float(np.linalg.norm(v)))

    def orthogonal_projector(self) -> np.ndarray:
        return np.eye(self.parent_dim) - self.basis.T @ self.basis.conj()


def span(vectors, parent_dim: int, real_basis: bool = True) -> Subspace:
    """Orthonormal basis of the span of ``vectors``.

    With ``real_basis`` the result is spanned by real vectors whenever the
    span admits one (same dimension after splitting into real and
    imaginary parts).  A real basis keeps Killing-form signatures
    meaningful.
    """
    vecs = np.asarray(vectors, dtype=complex).reshape(-1, parent_dim)
    if vecs.shape[0] == 0:
        return Subspace(parent_dim, np.zeros((0, parent_dim)))
    basis = _row_space(vecs)
    if real_basis and basis.shape[0]:
        split = np.vstack([basis.real, basis.imag])
        rb = _row_space(split)
        if rb.shape[0] == basis.shape[0]:
            basis = rb
    return Subspace(parent_dim, basis)


def _row_space(vecs: np.ndarray) -> np.ndarray:
    _, s, vh = np.linalg.svd(vecs, full_matrices=False)
    rank = int(np.sum(s > _rank_tol(s)))
    out = vh[:rank]
    if np.isrealobj(vecs):
        return out.astype(complex)
    return out


def whole(alg: LieAlgebra) -> Subspace:
    return Subspace(alg.dim, np.eye(alg.dim))


def intersection(a: Subspace, b: Subspace) -> Subspace:
    if a.dim == 0 or b.dim == 0:
        return Subspace(a.parent_dim, np.zeros((0, a.parent_dim)))
    # coefficients c with (I - P_b) a^T c = 0
    m = b.orthogonal_projector() @ a.basis.T
    coeffs = null_space(m)
    return span(coeffs @ a.basis, a.parent_dim)


def relative_complement(inner: Subspace, outer: Subspace) -> Subspace:
    """Orthogonal complement of ``inner`` inside ``outer``."""
    proj = outer.basis @ inner.orthogonal_projector().T
    return span(proj, outer.parent_dim)


def brackets_of(alg: LieAlgebra, a: Subspace, b: Subspace) -> np.ndarray:
    out = [bracket(alg, u, v) for u in a.basis for v in b.basis]
    return np.asarray(out).reshape(-1, alg.dim)


def inclusion_residual(alg: LieAlgebra, a: Subspace, b: Subspace, target: Subspace) -> float:
    """Max distance of ``[a, b]`` from ``target``."""
    vecs = brackets_of(alg, a, b)
    return max((target.residual(v) for v in vecs), default=0.0)


# --------------------------------------------------------------------------
# structure theory


def derived_subalgebra(alg: LieAlgebra, sub: Subspace | None = None) -> Subspace:
    """Span of all brackets ``[u, v]`` with ``u, v`` in ``sub`` (default: whole algebra)."""
    if sub is None:
        vecs = alg.c.reshape(-1, alg.dim)
    else:
        vecs = brackets_of(alg, sub, sub)
    return span(vecs, alg.dim)


def is_subalgebra(alg: LieAlgebra, sub: Subspace, tol: float = 1e-10) -> bool:
    return inclusion_residual(alg, sub, sub, sub) <= tol


def is_ideal(alg: LieAlgebra, sub: Subspace, tol: float = 1e-10) -> bool:
    return inclusion_residual(alg, whole(alg), sub, sub) <= tol


def is_solvable(alg: LieAlgebra, sub: Subspace | None = None, tol: float = 1e-10) -> bool:
    """True iff the derived series of ``sub`` reaches zero."""
    cur = whole(alg) if sub is None else sub
    if not is_subalgebra(alg, cur, tol):
        raise NotSubalgebraError("not a subalgebra")
    for _ in range(alg.dim + 1):
        if cur.dim == 0:
            return True
        nxt = derived_subalgebra(alg, cur)
        if nxt.dim == cur.dim:
            return False
        cur = nxt
    return cur.dim == 0


def solvable_radical(alg: LieAlgebra) -> Subspace:
    """Vectors Killing-orthogonal to the derived subalgebra.

    Solves ``sum_i alpha_i K(e_i, d_j) = 0`` for every basis vector ``d_j``
    of ``[g, g]``.  Only valid for non-solvable algebras.
    """
    if is_solvable(alg):
        raise SolvableAlgebraError("algebra is solvable")
    derived = derived_subalgebra(alg)
    ads = [adjoint_matrix(alg, e) for e in np.eye(alg.dim)]
    ads_d = [adjoint_matrix(alg, d) for d in derived.basis]
    # A[i, j] = K(e_i, d_j); radical = {alpha : A^T alpha = 0}
    A = np.array([[np.trace(a @ b) for b in ads_d] for a in ads])
    alphas = null_space(A.T)
    return span(alphas, alg.dim)


def killing_signature(alg: LieAlgebra, sub: Subspace, tol: float = 1e-9) -> tuple[int, int, int]:
    """``(n_plus, n_minus, n_zero)`` of the subalgebra's own Killing form.

    The subspace needs a real basis (see :func:`span`) for the count to be
    basis independent.
    """
    sub_alg = restrict(alg, sub)
    K = killing_matrix(sub_alg)
    if np.max(np.abs(K.imag), initial=0.0) > tol * max(1.0, np.max(np.abs(K), initial=0.0)):
        raise ValueError("Killing form is not real on this basis")
    ev = np.linalg.eigvalsh(K.real)
    scale = max(1.0, float(np.max(np.abs(ev), initial=0.0)))
    pos = int(np.sum(ev > tol * scale))
    neg = int(np.sum(ev < -tol * scale))
    return pos, neg, len(ev) - pos - neg


def restrict(alg: LieAlgebra, sub: Subspace) -> LieAlgebra:
    """Structure constants of a subalgebra in the basis ``sub.basis``."""
    if not is_subalgebra(alg, sub):
        raise NotSubalgebraError("not a subalgebra")
    B = sub.basis
    k = B.shape[0]
    c = np.zeros((k, k, k), dtype=complex)
    # coordinates in a (possibly non-unitary) basis via least squares
    pinv = np.linalg.pinv(B.T)
    for i in range(k):
        for j in range(i + 1, k):
            coords = pinv @ bracket(alg, B[i], B[j])
            c[i, j] = coords
            c[j, i] = -coords
    return LieAlgebra(tuple(f"b{i}" for i in range(k)), c)


SL2R_SIGNATURES = {(1, 2, 0), (2, 1, 0)}


@dataclass
class LeviReport:
    radical: Subspace
    complement: Subspace
    method: str
    residuals: dict
    killing_signature: tuple
    sl2r_fingerprint: bool

    def summary(self) -> dict:
        return {
            "radical_dim": self.radical.dim,
            "complement_dim": self.complement.dim,
            "method": self.method,
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "complement_killing_signature": list(self.killing_signature),
            "sl2r_fingerprint": self.sl2r_fingerprint,
        }


def _check_complement(alg, radical, cand, tol):
    if cand.dim + radical.dim != alg.dim:
        return None
    if np.linalg.matrix_rank(np.vstack([radical.basis, cand.basis]), tol=1e-9) != alg.dim:
        return None
    res = {
        "[S,S]=S": max(inclusion_residual(alg, cand, cand, cand),
                       0.0 if derived_subalgebra(alg, cand).dim == cand.dim else 1.0),
        "[S,R]<=R": inclusion_residual(alg, cand, radical, radical),
        "[R,R]<=R": inclusion_residual(alg, radical, radical, radical),
    }
    if max(res.values()) > tol:
        return None
    return res


def levi_decompose(alg: LieAlgebra, candidate_labels=("s0", "s1", "s2"),
                   tol: float = 1e-10) -> LeviReport:
    """Split ``alg`` into its solvable radical and a semisimple complement.

    The complement is first sought in the span of ``candidate_labels``;
    if that is unavailable or fails the bracket checks, the orthogonal
    complement of ``[g,g] & radical`` inside ``[g,g]`` is tried.
    """
    radical = solvable_radical(alg)
    tried = []
    if candidate_labels and all(l in alg.labels for l in candidate_labels):
        tried.append(("candidate", span([alg.unit(l) for l in candidate_labels], alg.dim)))
    derived = derived_subalgebra(alg)
    tried.append(("projection", relative_complement(intersection(derived, radical), derived)))
    for method, cand in tried:
        res = _check_complement(alg, radical, cand, tol)
        if res is None:
            continue
        sig = killing_signature(alg, cand)
        return LeviReport(radical, cand, method, res, sig,
                          cand.dim == 3 and sig in SL2R_SIGNATURES)
    raise LeviError("no complement found within search space")


def sigma_matrices() -> list[np.ndarray]:
    """``(B^sigma)_{mu nu} = eps_{mu nu rho} eta^{rho sigma}`` for sigma = 0, 1, 2."""
    return [np.einsum("mnr,r->mn", EPS, ETA[:, s]) for s in range(3)]


def canonical_check(omega, omega_tilde, tol: float = 1e-10) -> bool:
    """Canonical-transformation test for a pair of 3x3 matrices.

    ``omega`` must preserve the metric, ``omega @ eta @ omega.T == eta``,
    and ``omega_tilde`` must intertwine every ``B^sigma``:
    ``omega_tilde.T @ B == B @ omega_tilde``.
    """
    omega = np.asarray(omega, dtype=float)
    omega_tilde = np.asarray(omega_tilde, dtype=float)
    if np.linalg.norm(omega @ ETA @ omega.T - ETA) > tol:
        return False
    return all(np.linalg.norm(omega_tilde.T @ B - B @ omega_tilde) <= tol
               for B in sigma_matrices())


def shifted_radical_vectors(alg: LieAlgebra, theta: float, kappa: float) -> list[np.ndarray]:
    """The six vectors ``x_mu - theta s_mu`` and ``p_mu - kappa s_mu``."""
    out = []
    for mu in range(3):
        out.append(alg.unit(f"x{mu}") - theta * alg.unit(f"s{mu}"))
    for mu in range(3):
        out.append(alg.unit(f"p{mu}") - kappa * alg.unit(f"s{mu}"))
    return out
