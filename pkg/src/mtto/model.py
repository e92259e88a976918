"""The model space K_Θ for Θ(z) = z^N I_E and operators on it.

K_Θ is the space of E-valued polynomials ``a_0 + a_1 z + ... + a_{N-1} z^{N-1}``.
Vectors are stored as ``(N, d)`` arrays of coefficients, operators as dense
``(N d, N d)`` matrices whose block ``(i, j)`` maps ``a_j`` to output
coefficient ``i``. With this convention ``A_Φ`` has block ``(i, j) = Φ_{i-j}``
and ``A_z`` is the compressed shift.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import Conjugation, adjoint, as_matrix, frozen, gamma_apply, gamma_sandwich
from .symbols import LaurentSymbol


@dataclass(frozen=True)
class ModelSpaceSpec:
    N: int
    d: int

    def __post_init__(self):
        if int(self.N) < 2:
            raise ValueError(f"N must be at least 2 so that Θ(0) = 0 with Θ₁ non-trivial, got {self.N}")
        if int(self.d) < 1:
            raise ValueError(f"d must be positive, got {self.d}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "d", int(self.d))

    @property
    def dim(self) -> int:
        return self.N * self.d

    @classmethod
    def of(cls, s: LaurentSymbol) -> ModelSpaceSpec:
        return cls(s.N, s.d)


def _check_spec(a, b) -> None:
    if a.spec != b.spec:
        raise ValueError(f"model space mismatch: {a.spec} vs {b.spec}")


@dataclass(frozen=True, eq=False)
class ModelVector:
    spec: ModelSpaceSpec
    blocks: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=np.complex128)
        if b.shape != (self.spec.N, self.spec.d):
            raise ValueError(f"expected blocks of shape {(self.spec.N, self.spec.d)}, got {b.shape}")
        object.__setattr__(self, "blocks", frozen(b))

    @classmethod
    def from_flat(cls, spec: ModelSpaceSpec, x) -> ModelVector:
        return cls(spec, np.asarray(x, dtype=np.complex128).reshape(spec.N, spec.d))

    @property
    def flat(self) -> np.ndarray:
        return self.blocks.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.flat))


@dataclass(frozen=True, eq=False)
class BlockOperator:
    spec: ModelSpaceSpec
    matrix: np.ndarray

    def __post_init__(self):
        n = self.spec.dim
        m = as_matrix(self.matrix, n, n)
        object.__setattr__(self, "matrix", frozen(m))

    @classmethod
    def from_blocks(cls, spec: ModelSpaceSpec, grid) -> BlockOperator:
        g = np.asarray(grid, dtype=np.complex128)
        N, d = spec.N, spec.d
        if g.shape != (N, N, d, d):
            raise ValueError(f"expected a block grid of shape {(N, N, d, d)}, got {g.shape}")
        return cls(spec, g.transpose(0, 2, 1, 3).reshape(N * d, N * d))

    @classmethod
    def identity(cls, spec: ModelSpaceSpec) -> BlockOperator:
        return cls(spec, np.eye(spec.dim))

    @classmethod
    def zeros(cls, spec: ModelSpaceSpec) -> BlockOperator:
        return cls(spec, np.zeros((spec.dim, spec.dim)))

    @property
    def blocks(self) -> np.ndarray:
        """Block grid view of shape ``(N, N, d, d)``."""
        N, d = self.spec.N, self.spec.d
        return self.matrix.reshape(N, d, N, d).transpose(0, 2, 1, 3)

    def block(self, i: int, j: int) -> np.ndarray:
        d = self.spec.d
        return self.matrix[i * d:(i + 1) * d, j * d:(j + 1) * d]

    def adjoint(self) -> BlockOperator:
        return BlockOperator(self.spec, adjoint(self.matrix))

    def __matmul__(self, other):
        if isinstance(other, BlockOperator):
            _check_spec(self, other)
            return BlockOperator(self.spec, self.matrix @ other.matrix)
        if isinstance(other, ModelVector):
            _check_spec(self, other)
            return ModelVector.from_flat(self.spec, self.matrix @ other.flat)
        return NotImplemented

    def __add__(self, other: BlockOperator) -> BlockOperator:
        _check_spec(self, other)
        return BlockOperator(self.spec, self.matrix + other.matrix)

    def __sub__(self, other: BlockOperator) -> BlockOperator:
        _check_spec(self, other)
        return BlockOperator(self.spec, self.matrix - other.matrix)

    def __mul__(self, c: complex) -> BlockOperator:
        return BlockOperator(self.spec, c * self.matrix)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class TallMap:
    """A map ``E -> K_Θ``; block ``r`` is the coefficient of ``z^r`` of the image."""

    spec: ModelSpaceSpec
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, self.spec.dim, self.spec.d)
        object.__setattr__(self, "matrix", frozen(m))

    @classmethod
    def from_blocks(cls, spec: ModelSpaceSpec, blocks) -> TallMap:
        b = np.asarray(blocks, dtype=np.complex128)
        if b.shape != (spec.N, spec.d, spec.d):
            raise ValueError(f"expected blocks of shape {(spec.N, spec.d, spec.d)}, got {b.shape}")
        return cls(spec, b.reshape(spec.dim, spec.d))

    @property
    def blocks(self) -> np.ndarray:
        return self.matrix.reshape(self.spec.N, self.spec.d, self.spec.d)

    def __call__(self, x) -> ModelVector:
        return ModelVector.from_flat(self.spec, self.matrix @ np.asarray(x, dtype=np.complex128))


def outer(a: TallMap, b: TallMap) -> BlockOperator:
    """The operator ``a b*`` on K_Θ."""
    _check_spec(a, b)
    return BlockOperator(a.spec, a.matrix @ adjoint(b.matrix))


def build_mtto(s: LaurentSymbol, spec: ModelSpaceSpec | None = None) -> BlockOperator:
    """Compression of multiplication by ``s`` to K_Θ: block ``(i, j) = Φ_{i-j}``."""
    spec = ModelSpaceSpec.of(s) if spec is None else spec
    if (spec.N, spec.d) != (s.N, s.d):
        raise ValueError(f"symbol (N={s.N}, d={s.d}) does not match model space {spec}")
    N = spec.N
    idx = np.subtract.outer(np.arange(N), np.arange(N)) + (N - 1)
    return BlockOperator.from_blocks(spec, s.dense()[idx])


def shift(spec: ModelSpaceSpec) -> BlockOperator:
    """Compressed shift ``S_Θ f = P_Θ(z f)``."""
    return BlockOperator(spec, np.kron(np.eye(spec.N, k=-1), np.eye(spec.d)))


def _corner_projection(spec: ModelSpaceSpec, k: int) -> BlockOperator:
    grid = np.zeros((spec.N, spec.N, spec.d, spec.d))
    grid[k, k] = np.eye(spec.d)
    return BlockOperator.from_blocks(spec, grid)


def proj_const(spec: ModelSpaceSpec) -> BlockOperator:
    """Projection onto the constants, ``I - S S*``."""
    return _corner_projection(spec, 0)


def proj_dstar(spec: ModelSpaceSpec) -> BlockOperator:
    """Projection onto ``Θ₁ E = z^{N-1} E``, ``I - S* S``."""
    return _corner_projection(spec, spec.N - 1)


def delta(A: BlockOperator) -> BlockOperator:
    """Defect ``Δ(A) = A - S A S*``."""
    S = shift(A.spec).matrix
    return BlockOperator(A.spec, A.matrix - S @ A.matrix @ adjoint(S))


def build_J(coeffs: LaurentSymbol | Sequence, spec: ModelSpaceSpec | None = None) -> TallMap:
    """``J_F x = F(z) x`` for an analytic ``F`` of degree at most ``N - 1``.

    ``coeffs`` is either an analytic LaurentSymbol or the list ``F_0, F_1, ...``
    of Taylor coefficients (shorter lists are zero padded).
    """
    if isinstance(coeffs, LaurentSymbol):
        if any(n < 0 for n in coeffs.coeffs):
            raise ValueError("build_J needs an analytic symbol (no negative Fourier coefficients)")
        spec = ModelSpaceSpec.of(coeffs) if spec is None else spec
        blocks = [coeffs.coeff(r) for r in range(coeffs.N)]
    else:
        blocks = [as_matrix(np.atleast_2d(m)) for m in coeffs]
        if spec is None:
            raise ValueError("spec is required when passing a coefficient list")
        if len(blocks) > spec.N:
            raise ValueError(f"{len(blocks)} coefficients do not fit in degree {spec.N - 1}")
    out = np.zeros((spec.N, spec.d, spec.d), dtype=np.complex128)
    for r, m in enumerate(blocks):
        out[r] = as_matrix(m, spec.d, spec.d)
    return TallMap.from_blocks(spec, out)


def build_J_shifted(coeffs: Sequence, spec: ModelSpaceSpec) -> TallMap:
    """``J_{zF}`` for ``F`` given by its ``N - 1`` Taylor coefficients (e.g. ``Φ₊``)."""
    if len(coeffs) != spec.N - 1:
        raise ValueError(f"expected {spec.N - 1} coefficients, got {len(coeffs)}")
    return build_J([np.zeros((spec.d, spec.d))] + list(coeffs), spec)


def build_J0(spec: ModelSpaceSpec) -> TallMap:
    """Embedding of E as the constants."""
    return build_J([np.eye(spec.d)], spec)


def embed_V(spec: ModelSpaceSpec) -> TallMap:
    """Isometry ``x -> Θ₁ x = z^{N-1} x``."""
    out = np.zeros((spec.N, spec.d, spec.d))
    out[-1] = np.eye(spec.d)
    return TallMap.from_blocks(spec, out)


def conj_CGamma(g: Conjugation, f: ModelVector) -> ModelVector:
    """``C_Γ f = zΘ₁ Γ f`` on ``z K_{Θ₁}`` (vectors with zero constant term).

    On the circle ``sum_k a_k e^{ikt}`` goes to ``sum_k Γ(a_k) e^{-ikt}``;
    multiplying by ``z^N`` puts ``Γ(a_k)`` at ``z^{N-k}``.
    """
    N = f.spec.N
    if np.linalg.norm(f.blocks[0]) > 1e-12 * max(1.0, f.norm()):
        raise ValueError("C_Γ is only defined on z K_Θ₁: the constant block must vanish")
    out = np.zeros_like(f.blocks)
    for k in range(1, N):
        out[N - k] = gamma_apply(g, f.blocks[k])
    return ModelVector(f.spec, out)


def bold_CGamma(g: Conjugation, coeffs: Sequence, spec: ModelSpaceSpec | None = None) -> TallMap:
    """``J_{𝐂_Γ(zF)}`` from the ``N - 1`` coefficients of ``F`` (``Φ₋`` or ``Ψ₊``).

    Defined by ``x -> C_Γ(zFΓx)``: coefficient ``k`` lands at block ``N-1-k``
    as ``Γ F(k) Γ``.
    """
    coeffs = [as_matrix(np.atleast_2d(m)) for m in coeffs]
    if spec is None:
        if not coeffs:
            raise ValueError("cannot infer the model space from an empty list")
        spec = ModelSpaceSpec(len(coeffs) + 1, coeffs[0].shape[0])
    if len(coeffs) != spec.N - 1:
        raise ValueError(f"expected {spec.N - 1} coefficients, got {len(coeffs)}")
    out = np.zeros((spec.N, spec.d, spec.d), dtype=np.complex128)
    for k, m in enumerate(coeffs):
        out[spec.N - 1 - k] = gamma_sandwich(g, m)
    return TallMap.from_blocks(spec, out)
