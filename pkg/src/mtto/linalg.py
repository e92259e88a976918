"""Dense complex matrix helpers and conjugations on E.

A conjugation ``Γ`` on ``E = C^d`` is stored through the unitary ``U`` with
``Γx = U @ conj(x)``. Unitarity plus ``U @ conj(U) = I`` force ``U`` to be
symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9


def as_matrix(value, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce ``value`` to a finite complex128 2-D array, checking its shape."""
    m = np.asarray(value, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if rows is not None and m.shape[0] != rows:
        raise ValueError(f"expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise ValueError(f"expected {cols} cols, got {m.shape[1]}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def fro(m) -> float:
    return float(np.linalg.norm(np.asarray(m).ravel()))


def relative(residual: float, scale: float) -> float:
    """Residual divided by ``max(1, scale)``; the package-wide tolerance convention."""
    return residual / max(1.0, scale)


@dataclass(frozen=True, eq=False)
class Conjugation:
    """Antilinear involutive isometry ``x -> U conj(x)`` on ``C^d``."""

    U: np.ndarray
    tol: float = 1e-10

    def __post_init__(self):
        U = as_matrix(self.U)
        d = U.shape[0]
        if U.shape != (d, d):
            raise ValueError(f"U must be square, got {U.shape}")
        eye = np.eye(d)
        if fro(U @ adjoint(U) - eye) > self.tol * max(1.0, d):
            raise ValueError("U is not unitary")
        if fro(U @ np.conj(U) - eye) > self.tol * max(1.0, d):
            raise ValueError("U @ conj(U) != I, so x -> U conj(x) is not involutive")
        object.__setattr__(self, "U", frozen(U))

    @property
    def d(self) -> int:
        return self.U.shape[0]

    @classmethod
    def identity(cls, d: int) -> Conjugation:
        return cls(np.eye(d))


def random_conjugation(rng: np.random.Generator, d: int) -> Conjugation:
    """Draw ``U = W W^T`` with ``W`` Haar-unitary; every symmetric unitary arises so."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    w = q * (np.diag(r) / np.abs(np.diag(r)))
    u = w @ w.T
    return Conjugation((u + u.T) / 2)


def _check_dim(g: Conjugation, n: int, what: str) -> None:
    if n != g.d:
        raise ValueError(f"{what} has dimension {n}, conjugation acts on dimension {g.d}")


def gamma_apply(g: Conjugation, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 1:
        raise ValueError("expected a vector")
    _check_dim(g, x.shape[0], "vector")
    return g.U @ np.conj(x)


def gamma_sandwich(g: Conjugation, m) -> np.ndarray:
    """The linear map ``x -> Γ(M(Γx))``, i.e. ``U conj(M) conj(U)``."""
    m = as_matrix(m)
    _check_dim(g, m.shape[0], "matrix")
    _check_dim(g, m.shape[1], "matrix")
    return g.U @ np.conj(m) @ np.conj(g.U)


def gamma_symmetrize(g: Conjugation, a) -> np.ndarray:
    """Project ``a`` onto matrices with ``Γ M Γ = M*``."""
    a = as_matrix(a)
    return (a + gamma_sandwich(g, adjoint(a))) / 2


def is_gamma_compatible_matrix(g: Conjugation, m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    return relative(fro(gamma_sandwich(g, m) - adjoint(m)), fro(m)) <= tol


def commutes(a, b, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"commutes needs two square matrices of equal size, got {a.shape} and {b.shape}")
    return fro(a @ b - b @ a) <= tol * max(1.0, fro(a) * fro(b))
