"""Linear models of a local action: matrices, ages, fixed subspaces.

Real-symplectic mode works on R^{2n} with the standard form
``J0 = [[0, -I], [I, 0]]`` and ``omega(v, w) = v^T J0 w``.  A real matrix that
commutes with J0 has block form ``[[A, -B], [B, A]]`` and is the complex-linear
map ``A + iB`` on C^n (coordinates ``z = q + i p``).  Other symplectic forms
must be conjugated to J0 before they are fed in.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import (NegativeMultiplicity, NotAHomomorphism, NotComplexLinear,
                     NotFiniteOrder, OddElementHasNoAge, RoundingResidualExceeded)
from .groups import FiniteGroup, _sealed

DEFAULT_TOLERANCE = 1e-8
DEFAULT_RESIDUAL = 1e-6
STANDALONE_ORDER_CAP = 10_000

COMPLEX = "complex"
REAL_SYMPLECTIC = "real_symplectic"


def standard_form(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def realify(M: np.ndarray) -> np.ndarray:
    """Complex n x n matrix -> real 2n x 2n matrix commuting with J0."""
    A, B = M.real, M.imag
    return np.block([[A, -B], [B, A]])


def _max_abs(M) -> float:
    return float(np.max(np.abs(M))) if np.size(M) else 0.0


@dataclass(frozen=True, eq=False)
class LinearRep:
    """One matrix per group element: complex n x n, or real 2n x 2n."""

    group: FiniteGroup
    mode: str
    dim: int
    matrices: np.ndarray
    tolerance: float = DEFAULT_TOLERANCE
    residual: float = DEFAULT_RESIDUAL
    epsilon: np.ndarray | None = None

    @property
    def size(self) -> int:
        return self.dim if self.mode == COMPLEX else 2 * self.dim

    def matrix(self, g: int) -> np.ndarray:
        return self.matrices[g]

    @property
    def form(self) -> np.ndarray:
        return standard_form(self.dim)


def rep_from_generators(group: FiniteGroup, mode: str, dim: int,
                        generator_matrices: Sequence, tolerance: float = DEFAULT_TOLERANCE,
                        residual: float = DEFAULT_RESIDUAL, epsilon=None) -> LinearRep:
    """Extend matrices on the generators to every element and check the result."""
    if mode not in (COMPLEX, REAL_SYMPLECTIC):
        raise ValueError(f"unknown mode {mode!r}")
    size = dim if mode == COMPLEX else 2 * dim
    dtype = complex if mode == COMPLEX else float
    gens = [np.asarray(M, dtype=dtype) for M in generator_matrices]
    if len(gens) != len(group.generator_indices):
        raise NotAHomomorphism(
            f"expected {len(group.generator_indices)} generator matrices, got {len(gens)}")
    for M in gens:
        if M.shape != (size, size):
            raise NotAHomomorphism(f"matrix of shape {M.shape}, expected {(size, size)}")
    mats = np.zeros((group.order, size, size), dtype=dtype)
    done = np.zeros(group.order, dtype=bool)
    mats[0] = np.eye(size)
    done[0] = True
    queue = [0]
    for x in queue:
        for s, M in zip(group.generator_indices, gens):
            y = int(group.mul[x, s])
            if not done[y]:
                mats[y] = mats[x] @ M
                done[y] = True
                queue.append(y)
    return rep_from_matrices(group, mode, dim, mats, tolerance, residual, epsilon)


def rep_from_matrices(group: FiniteGroup, mode: str, dim: int, matrices,
                      tolerance: float = DEFAULT_TOLERANCE, residual: float = DEFAULT_RESIDUAL,
                      epsilon=None) -> LinearRep:
    mats = np.asarray(matrices)
    mats = mats.astype(complex if mode == COMPLEX else float)
    for s in group.generator_indices:
        # M(x s) = M(x) M(s) for all x and generators s forces the homomorphism law
        err = _max_abs(mats[group.mul[:, s]] - mats @ mats[s])
        if err > tolerance:
            raise NotAHomomorphism(f"matrices fail M(gh) = M(g)M(h) by {err:.3g}",
                                   witness={"generator": int(s), "error": err})
    eps = None if epsilon is None else _sealed(np.asarray(epsilon, dtype=np.int8))
    return LinearRep(group, mode, dim, _sealed(mats), tolerance, residual, eps)


def element_order(M: np.ndarray, cap: int = STANDALONE_ORDER_CAP,
                  tolerance: float = DEFAULT_TOLERANCE) -> int:
    """Least m >= 1 with ||M^m - I|| <= tolerance (entrywise max norm)."""
    M = np.asarray(M)
    eye = np.eye(M.shape[0])
    P = M.copy()
    for m in range(1, cap + 1):
        if _max_abs(P - eye) <= tolerance:
            return m
        P = P @ M
    raise NotFiniteOrder(f"no order <= {cap}", witness={"cap": cap})


def eigenphase_multiplicities(M: np.ndarray, m: int, residual: float = DEFAULT_RESIDUAL) -> dict[int, int]:
    """Multiplicity of each eigenvalue exp(2 pi i k / m) of a matrix with M^m = I.

    Uses the character sum (1/m) sum_j tr(M^j) exp(-2 pi i j k / m)
    instead of an eigensolver, then rounds to integers.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    traces = np.empty(m, dtype=complex)
    P = np.eye(n, dtype=complex)
    for j in range(m):
        traces[j] = np.trace(P)
        P = P @ M
    jk = np.outer(np.arange(m), np.arange(m))
    raw = (np.exp(-2j * np.pi * jk / m) * traces[:, None]).sum(axis=0) / m
    rounded = np.rint(raw.real)
    worst = float(np.max(np.abs(raw - rounded)))
    if worst > residual:
        raise RoundingResidualExceeded(
            f"multiplicities are {worst:.3g} away from integers; is m the order of M?",
            witness={"residual": worst, "order": m})
    if (rounded < 0).any():
        raise NegativeMultiplicity("negative multiplicity", witness={"k": int(np.argmin(rounded))})
    mult = {int(k): int(c) for k, c in enumerate(rounded) if c}
    if sum(mult.values()) != n:
        raise RoundingResidualExceeded("multiplicities do not sum to the dimension",
                                       witness={"sum": sum(mult.values()), "dim": n})
    return mult


@dataclass(frozen=True)
class AgeRecord:
    element: int
    order: int
    multiplicities: Mapping[int, int]
    age: Fraction

    @property
    def fixed_dim(self) -> int:
        """Complex dimension of the fixed subspace."""
        return self.multiplicities.get(0, 0)


def symplectic_sign(rep: LinearRep, g: int) -> int | None:
    """+1 if M^T J0 M = J0, -1 if it equals -J0, ``None`` otherwise."""
    return symplectic_sign_of(rep.matrix(g), rep.tolerance)


def symplectic_sign_of(M: np.ndarray, tolerance: float = DEFAULT_TOLERANCE) -> int | None:
    M = np.asarray(M, dtype=float)
    J = standard_form(M.shape[0] // 2)
    pulled = M.T @ J @ M
    if _max_abs(pulled - J) <= tolerance:
        return 1
    if _max_abs(pulled + J) <= tolerance:
        return -1
    return None


def complex_matrix(M: np.ndarray, tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """The complex n x n matrix of a real 2n x 2n map commuting with J0."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0] // 2
    J = standard_form(n)
    err = _max_abs(M @ J - J @ M)
    if err > tolerance:
        raise NotComplexLinear(f"matrix does not commute with J0 (error {err:.3g})",
                               witness={"error": err})
    return M[:n, :n] + 1j * M[n:, :n]


def age(rep: LinearRep, g: int) -> AgeRecord:
    """Exact age of g: (m_1 + ... + m_n) / m for eigenvalues exp(2 pi i m_j / m)."""
    M = rep.matrix(g)
    if rep.mode == REAL_SYMPLECTIC:
        if (rep.epsilon is not None and rep.epsilon[g] < 0) or symplectic_sign(rep, g) == -1:
            raise OddElementHasNoAge(f"element {rep.group.label(g)} is odd", witness={"element": g})
        M = complex_matrix(M, rep.tolerance)
    m = element_order(M, cap=rep.group.order, tolerance=rep.tolerance)
    mult = eigenphase_multiplicities(M, m, rep.residual)
    total = sum(k * c for k, c in mult.items())
    return AgeRecord(element=g, order=m, multiplicities=mult, age=Fraction(total, m))


@dataclass(frozen=True, eq=False)
class Subspace:
    """Span of orthonormal columns of ``basis`` inside an ambient space."""

    ambient_dim: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def same_as(self, other: "Subspace", tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return (self.ambient_dim == other.ambient_dim and self.dim == other.dim
                and _max_abs(self.projector() - other.projector()) <= max(tolerance, 1e-7))

    def contains(self, v, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        v = np.asarray(v)
        return _max_abs(v - self.projector() @ v) <= max(tolerance, 1e-7) * max(1.0, _max_abs(v))


def span(vectors: np.ndarray, tolerance: float = DEFAULT_TOLERANCE) -> Subspace:
    """Orthonormalized column span (columns processed left to right)."""
    vectors = np.asarray(vectors)
    return Subspace(vectors.shape[0], _gram_schmidt(vectors, tolerance))


def _rref(A: np.ndarray, tolerance: float) -> tuple[np.ndarray, list[int]]:
    R = np.array(A, dtype=complex if np.iscomplexobj(A) else float)
    rows, cols = R.shape
    scale = max(1.0, _max_abs(R))
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[p, c]) <= tolerance * scale:
            R[r:, c] = 0
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        others = np.arange(rows) != r
        R[others] -= np.outer(R[others, c], R[r])
        pivots.append(c)
        r += 1
    return R, pivots


def _gram_schmidt(V: np.ndarray, tolerance: float) -> np.ndarray:
    cols = []
    for k in range(V.shape[1]):
        v = V[:, k].astype(V.dtype, copy=True)
        for q in cols:
            v = v - q * (q.conj() @ v)
        norm = np.linalg.norm(v)
        if norm > max(tolerance, 1e-12):
            cols.append(v / norm)
    if not cols:
        return np.zeros((V.shape[0], 0), dtype=V.dtype)
    return np.stack(cols, axis=1)


def kernel(A: np.ndarray, tolerance: float = DEFAULT_TOLERANCE) -> Subspace:
    """Orthonormal basis of ker A via row reduction with partial pivoting.

    One basis vector per free column, in column order, then Gram-Schmidt; the
    result depends only on A.
    """
    A = np.asarray(A)
    R, pivots = _rref(A, tolerance)
    n = A.shape[1]
    free = [c for c in range(n) if c not in pivots]
    V = np.zeros((n, len(free)), dtype=R.dtype)
    for j, f in enumerate(free):
        V[f, j] = 1
        for i, p in enumerate(pivots):
            V[p, j] = -R[i, f]
    return Subspace(n, _gram_schmidt(V, tolerance))


def fixed_subspace(M: np.ndarray, tolerance: float = DEFAULT_TOLERANCE) -> Subspace:
    M = np.asarray(M)
    return kernel(M - np.eye(M.shape[0]), tolerance)


def common_fixed_subspace(matrices: Sequence[np.ndarray], tolerance: float = DEFAULT_TOLERANCE) -> Subspace:
    eye = np.eye(np.asarray(matrices[0]).shape[0])
    return kernel(np.vstack([np.asarray(M) - eye for M in matrices]), tolerance)


def form_residual(space: Subspace, form: np.ndarray | None = None) -> float:
    """max |omega(v, w)| over pairs of basis vectors of ``space``."""
    if space.dim == 0:
        return 0.0
    J = standard_form(space.ambient_dim // 2) if form is None else form
    return _max_abs(space.basis.T @ J @ space.basis)


def is_lagrangian(space: Subspace, tolerance: float = DEFAULT_TOLERANCE) -> bool:
    return 2 * space.dim == space.ambient_dim and form_residual(space) <= tolerance
