"""Shared generators and independent reference computations for the tests."""

import numpy as np

from mtto.symbols import LaurentSymbol


def cmat(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_symbol(rng, N, d, density=1.0):
    coeffs = {n: cmat(rng, d, d) for n in range(-(N - 1), N) if rng.random() < density}
    return LaurentSymbol(N, d, coeffs)


def compression_oracle(s):
    """Matrix of f -> P_Θ(Φ f) built column by column from Laurent products.

    Column for basis vector ``e_k z^j`` is ``Φ(z) e_k z^j = sum_n Φ_n e_k z^{n+j}``
    with exponents outside ``0..N-1`` discarded.
    """
    N, d = s.N, s.d
    out = np.zeros((N * d, N * d), dtype=complex)
    for j in range(N):
        for k in range(d):
            poly = {}
            for n, m in s.coeffs.items():
                poly[n + j] = poly.get(n + j, 0) + m[:, k]
            col = out[:, j * d + k]
            for e, vec in poly.items():
                if 0 <= e < N:
                    col[e * d:(e + 1) * d] = vec
    return out


def boundary_conj_oracle(blocks, U, N, samples=64):
    """Coefficients of ``z^N Γ f`` computed on sampled boundary values.

    ``f(e^{it}) = sum_k a_k e^{ikt}``; apply ``Γ`` pointwise, multiply by
    ``e^{iNt}`` and read Fourier coefficients back with a DFT.
    """
    t = 2 * np.pi * np.arange(samples) / samples
    powers = np.exp(1j * np.outer(t, np.arange(N)))
    f = powers @ blocks  # (samples, d)
    g = np.conj(f) @ U.T * np.exp(1j * N * t)[:, None]
    coeff = np.fft.fft(g, axis=0) / samples
    return coeff[:N]
