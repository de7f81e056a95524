"""Dense Hermitian linear algebra for small matrices.

Hermitian operators are plain complex ``numpy`` arrays; :func:`as_hermitian`
validates and normalizes them.  Spectral decompositions delegate to LAPACK
(``numpy.linalg.eigh``) and are returned with a deterministic ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ContractError, DomainError, ShapeError, SolverError

HERMITIAN_ATOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def as_hermitian(a, name: str = "matrix", atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return ``a`` as a complex square array after checking it is Hermitian.

    Raises:
        ShapeError: ``a`` is not a non-empty square matrix.
        ContractError: ``a`` has non-finite entries or is not Hermitian
            within ``atol``.
    """
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ShapeError(f"{name}: expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{name}: non-finite entries")
    asym = np.max(np.abs(arr - arr.conj().T))
    if asym > atol:
        raise ContractError(f"{name}: not Hermitian (max |A - A^H| = {asym:.3e})")
    return arr


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(a))


def hermitize(a: np.ndarray) -> np.ndarray:
    """Project onto the Hermitian part, ``(A + A^H) / 2``."""
    return 0.5 * (a + dagger(a))


def max_norm(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def _same_shape(a: np.ndarray, b: np.ndarray, op: str) -> None:
    if np.shape(a) != np.shape(b):
        raise ShapeError(f"{op}: shape mismatch {np.shape(a)} vs {np.shape(b)}")


def trace(a: np.ndarray) -> complex:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"trace: expected a square matrix, got shape {a.shape}")
    return complex(np.trace(a))


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if np.shape(a)[1] != np.shape(b)[0]:
        raise ShapeError(f"mul: shape mismatch {np.shape(a)} @ {np.shape(b)}")
    return np.asarray(a) @ np.asarray(b)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_shape(a, b, "add")
    return np.asarray(a) + np.asarray(b)


def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_shape(a, b, "sub")
    return np.asarray(a) - np.asarray(b)


def scale(c: complex, a: np.ndarray) -> np.ndarray:
    return c * np.asarray(a)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_shape(a, b, "commutator")
    return a @ b - b @ a


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def vector(self, k: int) -> np.ndarray:
        return self.eigenvectors[:, k]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def to_eigenbasis(self, a: np.ndarray) -> np.ndarray:
        """Matrix elements ``<i|A|j>`` in this eigenbasis."""
        v = self.eigenvectors
        return v.conj().T @ a @ v


def eig(a, name: str = "matrix") -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    Eigenvalues come out ascending; tied eigenvalues keep the column order
    LAPACK returned them in.

    Raises:
        SolverError: LAPACK did not converge.
    """
    arr = as_hermitian(a, name)
    try:
        w, v = np.linalg.eigh(arr)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigen-solver failed on {name}: {exc}") from exc
    # eigh is already ascending; a stable sort keeps LAPACK's order on ties.
    order = np.argsort(w, kind="stable")
    w = np.ascontiguousarray(w[order])
    v = np.ascontiguousarray(v[:, order])
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(w, v)


def apply_spectral(spec: SpectralDecomposition, f: Callable, name: str = "matrix") -> np.ndarray:
    """``sum_k f(lambda_k) |v_k><v_k|`` for an existing decomposition."""
    with np.errstate(all="ignore"):
        fw = np.asarray(f(spec.eigenvalues), dtype=float)
    bad = ~np.isfinite(fw)
    if np.any(bad):
        lam = spec.eigenvalues[np.argmax(bad)]
        raise DomainError(f"spectral function not finite at eigenvalue {lam!r} of {name}")
    v = spec.eigenvectors
    return hermitize((v * fw) @ v.conj().T)


def spectral_fn(a, f: Callable, name: str = "matrix") -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix through its spectrum.

    ``f`` must accept a numpy array of eigenvalues (numpy ufuncs do).

    Raises:
        DomainError: ``f`` returns NaN or Inf on some eigenvalue.
    """
    return apply_spectral(eig(a, name), f, name)


def expm_h(a, name: str = "matrix") -> np.ndarray:
    return spectral_fn(a, np.exp, name)


def sqrtm_psd(a, name: str = "matrix", clip: float = 1e-12) -> np.ndarray:
    """Square root of a PSD matrix; eigenvalues in ``[-clip, 0)`` count as zero."""
    spec = eig(a, name)
    w = spec.eigenvalues
    if np.any(w < -clip):
        raise DomainError(f"{name} is not positive semidefinite (eigenvalue {w.min()!r})")
    return apply_spectral(spec, lambda x: np.sqrt(np.clip(x, 0.0, None)), name)
