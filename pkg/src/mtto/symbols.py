"""Banded Laurent symbols with matrix coefficients and generators for test families."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Conjugation,
    adjoint,
    as_matrix,
    commutes,
    frozen,
    gamma_sandwich,
    gamma_symmetrize,
    is_gamma_compatible_matrix,
)


@dataclass(frozen=True, eq=False)
class LaurentSymbol:
    """Trigonometric polynomial ``sum_n coeffs[n] e^{int}`` with ``|n| <= N - 1``.

    Absent indices are zero. Wider bands are rejected, not truncated, since
    dropping coefficients would change the compressed operator.
    """

    N: int
    d: int
    coeffs: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.N < 1 or self.d < 1:
            raise ValueError(f"need N >= 1 and d >= 1, got N={self.N}, d={self.d}")
        clean = {}
        for n, m in self.coeffs.items():
            n = int(n)
            if abs(n) > self.N - 1:
                raise ValueError(f"coefficient index {n} outside the band |n| <= {self.N - 1}")
            clean[n] = frozen(as_matrix(m, self.d, self.d))
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def scalar(cls, N: int, values: Mapping[int, complex]) -> LaurentSymbol:
        return cls(N, 1, {n: [[v]] for n, v in values.items()})

    @classmethod
    def monomial(cls, N: int, d: int, n: int) -> LaurentSymbol:
        """``z^n I`` (``n < 0`` gives powers of ``z̄``)."""
        return cls(N, d, {n: np.eye(d)})

    @classmethod
    def zero(cls, N: int, d: int) -> LaurentSymbol:
        return cls(N, d, {})

    def coeff(self, n: int) -> np.ndarray:
        m = self.coeffs.get(n)
        return np.zeros((self.d, self.d), dtype=np.complex128) if m is None else m

    def dense(self) -> np.ndarray:
        """All coefficients stacked as ``(2N - 1, d, d)``, index ``n + N - 1``."""
        out = np.zeros((2 * self.N - 1, self.d, self.d), dtype=np.complex128)
        for n, m in self.coeffs.items():
            out[n + self.N - 1] = m
        return out

    def adjoint(self) -> LaurentSymbol:
        """Pointwise adjoint: coefficient ``n`` becomes ``adjoint(coeff(-n))``."""
        return LaurentSymbol(self.N, self.d, {-n: adjoint(m) for n, m in self.coeffs.items()})

    def analytic_part(self) -> LaurentSymbol:
        return LaurentSymbol(self.N, self.d, {n: m for n, m in self.coeffs.items() if n >= 0})

    def coanalytic_part(self) -> LaurentSymbol:
        return LaurentSymbol(self.N, self.d, {n: m for n, m in self.coeffs.items() if n <= 0})

    def __add__(self, other: LaurentSymbol) -> LaurentSymbol:
        _same_shape(self, other)
        out = dict(self.coeffs)
        for n, m in other.coeffs.items():
            out[n] = out[n] + m if n in out else m
        return LaurentSymbol(self.N, self.d, out)

    def __repr__(self) -> str:
        return f"LaurentSymbol(N={self.N}, d={self.d}, support={list(self.coeffs)})"


def _same_shape(a: LaurentSymbol, b: LaurentSymbol) -> None:
    if (a.N, a.d) != (b.N, b.d):
        raise ValueError(f"symbol shapes differ: (N={a.N}, d={a.d}) vs (N={b.N}, d={b.d})")


@dataclass(frozen=True, eq=False)
class SymbolDecomposition:
    """``Φ = zΦ₊ + z̄Φ₋* + Φ₀`` with ``plus[k] = Φ₊(k)``, ``minus[k] = Φ₋(k)``."""

    phi0: np.ndarray
    plus: tuple[np.ndarray, ...]
    minus: tuple[np.ndarray, ...]

    def __post_init__(self):
        phi0 = as_matrix(self.phi0)
        d = phi0.shape[0]
        if len(self.plus) != len(self.minus):
            raise ValueError("plus and minus must have the same length")
        object.__setattr__(self, "phi0", frozen(as_matrix(phi0, d, d)))
        object.__setattr__(self, "plus", tuple(frozen(as_matrix(m, d, d)) for m in self.plus))
        object.__setattr__(self, "minus", tuple(frozen(as_matrix(m, d, d)) for m in self.minus))

    @property
    def N(self) -> int:
        return len(self.plus) + 1

    @property
    def d(self) -> int:
        return self.phi0.shape[0]


def decompose(s: LaurentSymbol) -> SymbolDecomposition:
    plus = tuple(s.coeff(k + 1) for k in range(s.N - 1))
    minus = tuple(adjoint(s.coeff(-(k + 1))) for k in range(s.N - 1))
    return SymbolDecomposition(s.coeff(0), plus, minus)


def recompose(dec: SymbolDecomposition) -> LaurentSymbol:
    coeffs = {0: dec.phi0}
    for k, (p, m) in enumerate(zip(dec.plus, dec.minus)):
        coeffs[k + 1] = p
        coeffs[-(k + 1)] = adjoint(m)
    return LaurentSymbol(dec.N, dec.d, {n: m for n, m in coeffs.items() if np.any(m)})


def symbols_commute(a: LaurentSymbol, b: LaurentSymbol, tol: float = DEFAULT_TOL) -> bool:
    """Coefficientwise ``a_m b_n = b_n a_m`` for all ``m, n``.

    For trigonometric polynomials this is the same as ``a(e^{it}) b(e^{is}) =
    b(e^{is}) a(e^{it})`` for all ``t, s``.
    """
    _same_shape(a, b)
    if not a.coeffs or not b.coeffs:
        return True
    A = np.stack(list(a.coeffs.values()))[:, None]
    B = np.stack(list(b.coeffs.values()))[None, :]
    comm = np.linalg.norm(A @ B - B @ A, axis=(-2, -1))
    scale = np.maximum(1.0, np.linalg.norm(A, axis=(-2, -1)) * np.linalg.norm(B, axis=(-2, -1)))
    return bool(np.all(comm <= tol * scale))


def is_gamma_compatible(s: LaurentSymbol, g: Conjugation, tol: float = DEFAULT_TOL) -> bool:
    """Coefficientwise ``Γ Φ_n Γ = Φ_n*``."""
    if g.d != s.d:
        raise ValueError(f"conjugation dimension {g.d} does not match symbol dimension {s.d}")
    return all(is_gamma_compatible_matrix(g, m, tol) for m in s.coeffs.values())


def doubly_commutes_with_theta(s: LaurentSymbol) -> bool:
    # Θ = z^N I_E is scalar, so every symbol doubly commutes with it.
    return True


@dataclass(frozen=True, eq=False)
class SymbolFamily:
    """Symbols whose coefficients are polynomials in one matrix ``M`` with ``ΓMΓ = M*``.

    ``poly[i][n]`` holds the polynomial coefficients (ascending powers) used
    for coefficient ``n`` of ``members[i]``.
    """

    M: np.ndarray
    gamma: Conjugation
    members: tuple[LaurentSymbol, ...]
    poly: tuple[dict[int, np.ndarray], ...] = ()


def matrix_poly(M: np.ndarray, c: Sequence[complex]) -> np.ndarray:
    """Horner evaluation of ``sum_k c[k] M^k``."""
    d = M.shape[0]
    out = np.zeros((d, d), dtype=np.complex128)
    for ck in reversed(list(c)):
        out = out @ M + ck * np.eye(d)
    return out


def _complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)


def random_compatible_matrix(rng: np.random.Generator, g: Conjugation) -> np.ndarray:
    """Γ-compatible matrix scaled to unit spectral norm (keeps powers bounded)."""
    M = gamma_symmetrize(g, _complex_normal(rng, (g.d, g.d)))
    nrm = np.linalg.norm(M, 2)
    return M / nrm if nrm > 0 else M


def gen_family(
    seed: int,
    N: int,
    d: int,
    degree: int = 2,
    count: int = 4,
    gamma: Conjugation | None = None,
) -> SymbolFamily:
    """Deterministic commuting Γ-compatible family.

    Randomness comes from numpy's PCG64 generator seeded with ``seed``; the
    same arguments always give the same family.
    """
    if N < 2 or d < 1 or degree < 0 or count < 1:
        raise ValueError(f"invalid family parameters N={N}, d={d}, degree={degree}, count={count}")
    g = Conjugation.identity(d) if gamma is None else gamma
    if g.d != d:
        raise ValueError(f"conjugation dimension {g.d} does not match d={d}")
    rng = np.random.default_rng(seed)
    M = random_compatible_matrix(rng, g)
    members, polys = [], []
    for _ in range(count):
        poly = {n: _complex_normal(rng, degree + 1) for n in range(-(N - 1), N)}
        members.append(LaurentSymbol(N, d, {n: matrix_poly(M, c) for n, c in poly.items()}))
        polys.append(poly)
    return SymbolFamily(frozen(M), g, tuple(members), tuple(polys))


def sedlock_symbol(
    minus: Sequence,
    C,
    g: Conjugation,
    phi0=None,
) -> LaurentSymbol:
    """Symbol with ``Φ₊(a) = C Γ Φ₋(N-2-a) Γ`` built from a given ``Φ₋`` list.

    For ``C = I`` and ``Φ₀ = 0`` this is a block circulant; general ``C``
    gives a ``C``-twisted circulant.
    """
    minus = [as_matrix(np.atleast_2d(m)) for m in minus]
    if not minus:
        raise ValueError("need at least one minus coefficient (N >= 2)")
    d = minus[0].shape[0]
    C = as_matrix(np.atleast_2d(C), d, d)
    n1 = len(minus)
    plus = [C @ gamma_sandwich(g, minus[n1 - 1 - a]) for a in range(n1)]
    phi0 = np.zeros((d, d)) if phi0 is None else np.atleast_2d(phi0)
    return recompose(SymbolDecomposition(phi0, tuple(plus), tuple(minus)))


def gen_sedlock_pair(
    seed: int,
    N: int,
    d: int,
    g: Conjugation,
    C,
    generator=None,
    degree: int = 2,
) -> tuple[LaurentSymbol, LaurentSymbol]:
    """Pair ``(Φ, Ψ)`` for which ``A_Φ A_Ψ`` is block Toeplitz.

    Coefficients of ``Φ₋*`` and ``Φ₀`` are random polynomials in ``generator``
    (a random Γ-compatible matrix when omitted), and ``Φ₊`` is tied to ``Φ₋``
    through ``C``. ``C`` must be Γ-compatible and commute with the generator.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    rng = np.random.default_rng(seed)
    C = as_matrix(np.atleast_2d(C), d, d)
    M = random_compatible_matrix(rng, g) if generator is None else as_matrix(generator, d, d)
    if not is_gamma_compatible_matrix(g, C):
        raise ValueError("C is not Γ-compatible (Γ C Γ != C*)")
    if not is_gamma_compatible_matrix(g, M):
        raise ValueError("generator is not Γ-compatible")
    if not commutes(C, M):
        raise ValueError("C does not commute with the family generator")

    def one() -> LaurentSymbol:
        minus = [adjoint(matrix_poly(M, _complex_normal(rng, degree + 1))) for _ in range(N - 1)]
        phi0 = matrix_poly(M, _complex_normal(rng, degree + 1))
        return sedlock_symbol(minus, C, g, phi0)

    phi = one()
    return phi, one()
