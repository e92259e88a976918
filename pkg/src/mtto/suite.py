"""Seeded randomized battery cross-checking every criterion against its oracle."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

import numpy as np

from .analysis import (
    LEMMA_TOL,
    coefficient_criteria,
    difference_condition,
    extract_symbol,
    is_mtto_via_delta,
    lemma_residual_check,
    product_condition,
)
from .linalg import DEFAULT_TOL, Conjugation, random_conjugation
from .model import BlockOperator, ModelSpaceSpec, build_mtto
from .serialize import SCHEMA, conjugation_to_json, symbol_hash, symbol_to_json
from .symbols import (
    LaurentSymbol,
    SymbolFamily,
    decompose,
    gen_family,
    gen_sedlock_pair,
    matrix_poly,
    recompose,
)

KINDS = ("random", "positive", "negative")


@dataclass
class SuiteConfig:
    seed: int = 42
    trials: int = 100
    max_N: int = 6
    max_d: int = 3
    poly_degree: int = 2
    tol: float = DEFAULT_TOL
    include_positive_generators: bool = True
    include_negative_probes: bool = True

    def validate(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.max_N < 2:
            raise ValueError(f"max_N must be at least 2, got {self.max_N}")
        if self.max_d < 1:
            raise ValueError(f"max_d must be at least 1, got {self.max_d}")
        if self.poly_degree < 0:
            raise ValueError(f"poly_degree must be non-negative, got {self.poly_degree}")
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise ValueError(f"tol must be a positive number, got {self.tol}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


@dataclass
class Trial:
    index: int
    seed: int
    kind: str
    variant: str
    gamma: Conjugation
    family: SymbolFamily
    phi: LaurentSymbol
    psi: LaurentSymbol
    chi: LaurentSymbol
    zeta: LaurentSymbol

    @property
    def N(self) -> int:
        return self.phi.N

    @property
    def d(self) -> int:
        return self.phi.d


def trial_seeds(seed: int, trials: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(trials, dtype=np.uint64)]


def _family_element(rng: np.random.Generator, fam: SymbolFamily, degree: int) -> np.ndarray:
    c = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return matrix_poly(fam.M, c / np.sqrt(2))


def _const(N: int, m: np.ndarray) -> LaurentSymbol:
    return LaurentSymbol(N, m.shape[0], {0: m})


def _sedlock(rng, fam: SymbolFamily, degree: int) -> tuple[LaurentSymbol, LaurentSymbol]:
    N, d = fam.members[0].N, fam.M.shape[0]
    C = _family_element(rng, fam, degree)
    return gen_sedlock_pair(int(rng.integers(2**63)), N, d, fam.gamma, C, generator=fam.M, degree=degree)


def draw_trial(
    index: int,
    seed: int,
    kind: str,
    max_N: int,
    max_d: int,
    degree: int = 2,
    min_N: int = 2,
) -> Trial:
    """Build one hypothesis-satisfying quadruple ``(φ, ψ, χ, ζ)`` from a single family.

    ``positive`` trials make ``A_φ A_ψ`` (and the difference) block Toeplitz by
    construction, ``negative`` ones pair analytic with co-analytic parts so it
    is not, and ``random`` trials leave it to chance.
    """
    rng = np.random.default_rng(seed)
    N = int(rng.integers(min_N, max_N + 1))
    d = int(rng.integers(1, max_d + 1))
    g = Conjugation.identity(d) if rng.random() < 0.5 else random_conjugation(rng, d)
    fam = gen_family(int(rng.integers(2**63)), N, d, degree, count=4, gamma=g)
    m = fam.members
    if kind == "random":
        phi, psi = m[0], m[1]
        if rng.random() < 0.5:
            variant = "random/shifted-constant"
            chi, zeta = phi + _const(N, _family_element(rng, fam, degree)), psi
        else:
            variant = "random/independent"
            chi, zeta = m[2], m[3]
    elif kind == "positive":
        v = int(rng.integers(4))
        if v == 0:
            variant = "positive/sedlock"
            phi, psi = _sedlock(rng, fam, degree)
            chi, zeta = _sedlock(rng, fam, degree)
        elif v == 1:
            variant = "positive/analytic"
            phi, psi = m[0].analytic_part(), m[1].analytic_part()
            chi, zeta = m[2].coanalytic_part(), m[3].coanalytic_part()
        elif v == 2:
            variant = "positive/coanalytic"
            phi, psi = m[0].coanalytic_part(), m[1].coanalytic_part()
            chi, zeta = _sedlock(rng, fam, degree)
        else:
            variant = "positive/constant-factor"
            phi, psi = _const(N, _family_element(rng, fam, degree)), m[1]
            chi, zeta = phi, psi
    elif kind == "negative":
        v = int(rng.integers(3))
        if v == 0:
            variant = "negative/analytic-coanalytic"
            phi, psi = m[0].analytic_part(), m[1].coanalytic_part()
        elif v == 1:
            variant = "negative/coanalytic-analytic"
            phi, psi = m[0].coanalytic_part(), m[1].analytic_part()
        else:
            variant = "negative/shift-coshift"
            a, b = _family_element(rng, fam, degree), _family_element(rng, fam, degree)
            phi = LaurentSymbol(N, d, {1: a})
            psi = LaurentSymbol(N, d, {-1: b})
        chi, zeta = psi, phi
    else:
        raise ValueError(f"unknown trial kind {kind!r}")
    return Trial(index, seed, kind, variant, g, fam, phi, psi, chi, zeta)


def random_block_operator(rng: np.random.Generator, spec: ModelSpaceSpec) -> BlockOperator:
    n = spec.dim
    return BlockOperator(spec, rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def noncompatible_pair(
    rng: np.random.Generator, N: int, d: int, degree: int, circulant: bool = False,
) -> tuple[LaurentSymbol, LaurentSymbol]:
    """Commuting symbols whose coefficients are polynomials in an unsymmetrized matrix.

    With ``circulant=True`` the pair is block circulant (``Φ_n = Φ_{n-N}``),
    so ``A_Φ A_Ψ`` is block Toeplitz regardless of compatibility.
    """
    M = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    M /= np.linalg.norm(M, 2)

    def poly():
        return matrix_poly(M, rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))

    def one():
        coeffs = {n: poly() for n in range(-(N - 1), 1)}
        for n in range(1, N):
            coeffs[n] = coeffs[n - N] if circulant else poly()
        return LaurentSymbol(N, d, coeffs)

    return one(), one()


class _Extremes:
    """Track max residual among passing verdicts and min among failing ones."""

    def __init__(self):
        self.true_max: dict[str, float] = {}
        self.false_min: dict[str, float] = {}

    def add(self, name: str, residual: float, verdict: bool) -> None:
        if verdict:
            self.true_max[name] = max(self.true_max.get(name, 0.0), residual)
        else:
            self.false_min[name] = min(self.false_min.get(name, math.inf), residual)

    def to_dict(self) -> dict:
        return {
            "max_residual_when_true": dict(sorted(self.true_max.items())),
            "min_residual_when_false": dict(sorted(self.false_min.items())),
        }


def _replay(t: Trial) -> dict:
    return {
        "gamma": conjugation_to_json(t.gamma),
        "phi": symbol_to_json(t.phi),
        "psi": symbol_to_json(t.psi),
        "chi": symbol_to_json(t.chi),
        "zeta": symbol_to_json(t.zeta),
    }


def run_trial(t: Trial, tol: float, ext: _Extremes) -> tuple[list[str], int]:
    """Run every check on one trial; returns (failed check names, near-threshold count)."""
    failed = []
    near = 0
    rng = np.random.default_rng(t.seed ^ 0x5DEECE66D)

    lemma = lemma_residual_check(t.phi, t.psi, t.gamma, LEMMA_TOL)
    ext.true_max["lemma_residual"] = max(ext.true_max.get("lemma_residual", 0.0), lemma.residual)
    if not lemma.verdict:
        failed.append("lemma_residual_check")

    prod = product_condition(t.phi, t.psi, t.gamma, tol)
    ext.add("product_condition", prod.residual, prod.verdict)
    near += prod.near_threshold
    if not prod.agree:
        failed.append("product_condition_vs_oracle")

    coef = coefficient_criteria(t.phi, t.psi, t.gamma, tol)
    if coef.verdict != prod.verdict:
        failed.append("coefficient_criteria_vs_product_condition")

    diff = difference_condition(t.phi, t.psi, t.chi, t.zeta, t.gamma, tol)
    ext.add("difference_condition", diff.residual, diff.verdict)
    near += diff.near_threshold
    if not diff.agree:
        failed.append("difference_condition_vs_oracle")

    zero = LaurentSymbol.zero(t.N, t.d)
    degen = difference_condition(t.phi, t.psi, zero, zero, t.gamma, tol)
    if degen.verdict != prod.verdict or degen.residual != prod.residual:
        failed.append("difference_condition_degenerate")

    spec = ModelSpaceSpec(t.N, t.d)
    for label, A in (
        ("product", build_mtto(t.phi) @ build_mtto(t.psi)),
        ("mtto", build_mtto(t.phi)),
        ("random", random_block_operator(rng, spec)),
    ):
        rep = is_mtto_via_delta(A, tol)
        ext.add(f"is_mtto_via_delta[{label}]", rep.residual, rep.verdict)
        if not rep.agree:
            failed.append(f"is_mtto_via_delta_vs_oracle[{label}]")

    for s in (t.phi, t.psi):
        if not np.array_equal(recompose(decompose(s)).dense(), s.dense()):
            failed.append("decompose_recompose_roundtrip")
        if not np.array_equal(extract_symbol(build_mtto(s), tol).dense(), s.dense()):
            failed.append("extract_build_roundtrip")
    return failed, near


def run_suite(cfg: SuiteConfig, timestamp: bool = True) -> dict:
    cfg.validate()
    kinds = ["random"]
    if cfg.include_positive_generators:
        kinds.append("positive")
    kinds.append("negative")
    ext = _Extremes()
    details = []
    near_total = 0
    counts: dict[str, int] = {}
    for i, ts in enumerate(trial_seeds(cfg.seed, cfg.trials)):
        kind = kinds[i % len(kinds)]
        t = draw_trial(i, ts, kind, cfg.max_N, cfg.max_d, cfg.poly_degree)
        counts[t.variant] = counts.get(t.variant, 0) + 1
        failed, near = run_trial(t, cfg.tol, ext)
        near_total += near
        if failed:
            details.append({
                "trial": i, "seed": ts, "kind": kind, "variant": t.variant,
                "N": t.N, "d": t.d, "checks": failed,
                "symbol_hashes": [symbol_hash(s) for s in (t.phi, t.psi, t.chi, t.zeta)],
                "inputs": _replay(t),
            })

    report = {
        "schema": SCHEMA,
        "seed": cfg.seed,
        "config": asdict(cfg),
        "trials": cfg.trials,
        "failures": len(details),
        "seeds_of_failures": sorted({d["seed"] for d in details}),
        "failure_details": sorted(details, key=lambda d: d["trial"]),
        "worst_residuals": ext.to_dict(),
        "near_threshold_reports": near_total,
        "trial_variants": dict(sorted(counts.items())),
    }
    if cfg.include_negative_probes:
        report["noncompatible_probes"] = run_noncompatible_probes(cfg)
    if timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    return report


def run_noncompatible_probes(cfg: SuiteConfig, count: int | None = None) -> dict:
    """Evaluate the product criterion on commuting but non-Γ-compatible pairs.

    The criterion is not claimed in this setting, so outcomes are recorded
    and never counted as failures.
    """
    count = max(1, cfg.trials // 4) if count is None else count
    rng = np.random.default_rng([cfg.seed, 1])
    out = {}
    for label, circulant in (("generic", False), ("circulant", True)):
        agree = disagree = 0
        for _ in range(count):
            N = int(rng.integers(2, cfg.max_N + 1))
            d = int(rng.integers(1, cfg.max_d + 1))
            phi, psi = noncompatible_pair(rng, N, d, cfg.poly_degree, circulant)
            rep = product_condition(phi, psi, Conjugation.identity(d), cfg.tol, enforce_hypotheses=False)
            agree += bool(rep.agree)
            disagree += not rep.agree
        out[label] = {"probes": count, "agree": agree, "disagree": disagree}
    return out
