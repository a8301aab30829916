"""Dense Hermitian numerics: SPD solves, eigendecompositions, psd
certification, matrix square roots, generalized eigenproblems, and
Gram-metric orthonormalization.

Everything here is a pure function on small dense matrices (target scale
n <= ~2000); real inputs stay on the real code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure, NotPositiveDefinite, NotPsd

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class SymMatrix:
    """Hermitian matrix plus the symmetrization defect recorded on entry."""

    a: np.ndarray
    defect: float

    @property
    def n(self):
        return self.a.shape[0]

    @classmethod
    def from_array(cls, arr, tol=HERMITIAN_TOL):
        arr = np.asarray(arr, dtype=complex if np.iscomplexobj(arr) else float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        scale = max(1.0, np.abs(arr).max()) if arr.size else 1.0
        defect = float(np.abs(arr - arr.conj().T).max() / scale)
        if defect > tol:
            raise ValueError(f"matrix is not Hermitian (relative defect {defect:.3e})")
        herm = (arr + arr.conj().T) / 2
        if np.iscomplexobj(herm) and not np.any(herm.imag):
            herm = herm.real
        herm.setflags(write=False)
        return cls(herm, defect)


@dataclass(frozen=True)
class PsdVerdict:
    is_psd: bool
    min_eigenvalue: float
    witness: np.ndarray
    tol: float


def _mat(A):
    return A.a if isinstance(A, SymMatrix) else SymMatrix.from_array(A).a


def _fix_sign(v):
    # first nonzero component made positive, for reproducible witnesses
    nz = np.flatnonzero(np.abs(v) > 0)
    if nz.size:
        v = v * (np.conj(v[nz[0]]) / abs(v[nz[0]]))
        if not np.iscomplexobj(v) or not np.any(v.imag):
            v = v.real
    return v


def spd_solve(A, b):
    """Solve Ax = b for symmetric positive definite A via Cholesky.

    One step of iterative refinement if the residual exceeds 1e-10 * ||b||.
    """
    a = _mat(A)
    b = np.asarray(b)
    try:
        factor = scipy.linalg.cho_factor(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None

    def solve(rhs):
        if np.iscomplexobj(rhs) and not np.iscomplexobj(a):
            return scipy.linalg.cho_solve(factor, rhs.real) + 1j * scipy.linalg.cho_solve(
                factor, rhs.imag
            )
        return scipy.linalg.cho_solve(factor, rhs)

    x = solve(b)
    resid = b - a @ x
    if np.linalg.norm(resid) > 1e-10 * max(np.linalg.norm(b), 1e-300):
        x = x + solve(resid)
    return x


def sym_eig(A):
    """Eigendecomposition A = Q diag(w) Q*, eigenvalues ascending."""
    try:
        w, q = np.linalg.eigh(_mat(A))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from None
    return w, q


def default_psd_tol(A):
    a = _mat(A)
    norm_inf = np.abs(a).sum(axis=1).max() if a.size else 0.0
    return 1e-9 * max(1.0, norm_inf)


def psd_check(A, tol=None):
    """Certify positive semidefiniteness: psd iff lambda_min >= -tol.

    The witness is the eigenvector of the smallest eigenvalue, unit length,
    sign fixed by its first nonzero component.
    """
    if tol is None:
        tol = default_psd_tol(A)
    w, q = sym_eig(A)
    witness = _fix_sign(q[:, 0])
    return PsdVerdict(bool(w[0] >= -tol), float(w[0]), witness, float(tol))


def sqrtm_psd(A):
    """Unique psd square root via eigendecomposition.

    Negative eigenvalues within the psd tolerance are clamped to zero.
    """
    verdict = psd_check(A)
    if not verdict.is_psd:
        raise NotPsd(f"lambda_min = {verdict.min_eigenvalue:.3e} < -{verdict.tol:.3e}")
    w, q = sym_eig(A)
    root = (q * np.sqrt(np.clip(w, 0.0, None))) @ q.conj().T
    return SymMatrix.from_array(root, tol=1e-10)


def gen_eig_max(A, B):
    """Largest eigenpair of the pencil A xi = lambda B xi (B positive definite)."""
    a, b = _mat(A), _mat(B)
    try:
        scipy.linalg.cholesky(b)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"B is not positive definite: {exc}") from None
    w, q = scipy.linalg.eigh(a, b)
    lam = float(w[-1])
    xi = q[:, -1]
    xi = _fix_sign(xi / np.linalg.norm(xi))
    resid = np.linalg.norm(a @ xi - lam * (b @ xi))
    scale = np.linalg.norm(a, 2) + abs(lam) * np.linalg.norm(b, 2)
    if resid > 1e-8 * max(scale, 1e-300):
        raise ConvergenceFailure(f"pencil residual {resid:.3e} exceeds tolerance")
    return lam, xi


def gram_schmidt_V(V):
    """Upper-triangular C with C* V C = I, i.e. Gram-Schmidt in the V metric.

    Columns of C give orthonormal-basis coefficients in the original
    enumeration order.
    """
    v = _mat(V)
    try:
        lower = scipy.linalg.cholesky(v, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    linv = scipy.linalg.solve_triangular(lower, np.eye(v.shape[0]), lower=True)
    return linv.conj().T
