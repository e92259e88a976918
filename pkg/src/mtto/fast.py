"""O(N log N d²) application of block Toeplitz operators by circulant embedding."""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import frozen
from .model import ModelSpaceSpec, ModelVector, build_mtto
from .symbols import LaurentSymbol


@lru_cache(maxsize=32)
def _bit_reversal(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    rev.setflags(write=False)
    return rev


@lru_cache(maxsize=256)
def _twiddles(size: int, inverse: bool) -> np.ndarray:
    sign = 1.0 if inverse else -1.0
    w = np.exp(sign * 2j * np.pi * np.arange(size // 2) / size)
    w.setflags(write=False)
    return w


def fft(x: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Iterative radix-2 DFT along axis 0; length must be a power of two.

    Uses numpy's sign convention: forward ``sum_j x_j e^{-2πi jk/n}``, inverse
    scaled by ``1/n``.
    """
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[0]
    if n < 1 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    tail = x.shape[1:]
    extra = (1,) * len(tail)
    y = x[_bit_reversal(n)]
    size = 2
    while size <= n:
        half = size // 2
        y = y.reshape((n // size, size) + tail)
        w = _twiddles(size, inverse).reshape((1, half) + extra)
        even = y[:, :half]
        odd = y[:, half:] * w
        y = np.concatenate([even + odd, even - odd], axis=1)
        size *= 2
    y = y.reshape((n,) + tail)
    return y / n if inverse else y


def padded_length(N: int) -> int:
    """Smallest power of two that is at least ``2N``."""
    return 1 << (2 * N - 1).bit_length()


@dataclass(frozen=True, eq=False)
class FastToeplitzPlan:
    spec: ModelSpaceSpec
    L: int
    spectrum: np.ndarray  # (L, d, d) DFT of the circulant's first block column


def plan(s: LaurentSymbol) -> FastToeplitzPlan:
    """Embed the ``2N - 1`` block diagonals into a block circulant of length ``L``."""
    spec = ModelSpaceSpec.of(s)
    N, d = spec.N, spec.d
    L = padded_length(N)
    col = np.zeros((L, d, d), dtype=np.complex128)
    for n, m in s.coeffs.items():
        col[n % L] = m
    return FastToeplitzPlan(spec, L, frozen(fft(col)))


def apply(p: FastToeplitzPlan, v: ModelVector) -> ModelVector:
    if v.spec != p.spec:
        raise ValueError(f"vector lives in {v.spec}, plan expects {p.spec}")
    x = np.zeros((p.L, p.spec.d), dtype=np.complex128)
    x[: p.spec.N] = v.blocks
    y = fft(np.einsum("kij,kj->ki", p.spectrum, fft(x)), inverse=True)
    return ModelVector(p.spec, y[: p.spec.N])


def direct_matvec(s: LaurentSymbol, v: ModelVector) -> ModelVector:
    """``A_Φ v`` by summing block diagonals, ``y_i = sum_j Φ_{i-j} v_j``.

    Quadratic cost but no matrix storage; a reference for sizes where the
    dense operator does not fit in memory.
    """
    if (s.N, s.d) != (v.spec.N, v.spec.d):
        raise ValueError(f"symbol (N={s.N}, d={s.d}) does not match {v.spec}")
    N = s.N
    x = v.blocks
    y = np.zeros_like(x)
    for n, m in s.coeffs.items():
        if n >= 0:
            y[n:] += x[: N - n] @ m.T
        else:
            y[: N + n] += x[-n:] @ m.T
    return ModelVector(v.spec, y)


def _median_ns(fn, reps: int) -> int:
    times = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        times.append(time.perf_counter_ns() - t0)
    return int(np.median(times))


def benchmark(N: int, d: int, reps: int = 5, seed: int = 0) -> dict:
    """Time dense matvec against the FFT path on a random symbol and vector.

    Dense timing covers only ``matrix @ vector`` with the matrix prebuilt,
    and the fast timing only ``apply`` with the plan prebuilt.
    """
    if N < 2 or d < 1 or reps < 1:
        raise ValueError(f"need N >= 2, d >= 1, reps >= 1; got N={N}, d={d}, reps={reps}")
    rng = np.random.default_rng(seed)
    shape = (2 * N - 1, d, d)
    raw = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    s = LaurentSymbol(N, d, {n: raw[n + N - 1] for n in range(-(N - 1), N)})
    spec = ModelSpaceSpec(N, d)
    dense = build_mtto(s).matrix
    p = plan(s)
    worst = 0.0
    vectors = []
    for _ in range(reps):
        v = ModelVector(spec, rng.standard_normal((N, d)) + 1j * rng.standard_normal((N, d)))
        ref = dense @ v.flat
        got = apply(p, v).flat
        worst = max(worst, float(np.linalg.norm(got - ref) / np.linalg.norm(ref)))
        vectors.append(v)
    v0 = vectors[0]
    dense_ns = _median_ns(lambda: dense @ v0.flat, reps)
    fast_ns = _median_ns(lambda: apply(p, v0), reps)
    return {"N": N, "d": d, "reps": reps, "dense_ns": dense_ns, "fast_ns": fast_ns, "max_rel_err": worst}


CSV_HEADER = "N,d,reps,dense_ns,fast_ns,max_rel_err"


def csv_row(row: dict) -> str:
    return f"{row['N']},{row['d']},{row['reps']},{row['dense_ns']},{row['fast_ns']},{row['max_rel_err']:.3e}"
