"""Acceptance battery: each test checks one criterion at its stated tolerance
and records a single PASS/FAIL line shown in the pytest terminal summary."""

import time

import numpy as np
import pytest

from mtto.analysis import (
    LEMMA_TOL,
    coefficient_criteria,
    difference_condition,
    extract_symbol,
    is_mtto_via_delta,
    lemma_residual_check,
    oracle_is_block_toeplitz,
    product_condition,
)
from mtto.fast import apply, benchmark, plan
from mtto.linalg import Conjugation, random_conjugation
from mtto.model import BlockOperator, ModelSpaceSpec, ModelVector, build_mtto, conj_CGamma
from mtto.suite import KINDS, draw_trial, trial_seeds
from mtto.symbols import LaurentSymbol, decompose, recompose, sedlock_symbol

from .helpers import cmat, random_symbol

TOL = 1e-9
TRIALS = 1000
SEED = 42


@pytest.fixture(scope="module")
def trials():
    return [
        draw_trial(i, s, KINDS[i % len(KINDS)], max_N=8, max_d=4)
        for i, s in enumerate(trial_seeds(SEED, TRIALS))
    ]


@pytest.fixture(scope="module")
def product_reports(trials):
    t0 = time.perf_counter()
    reps = [product_condition(t.phi, t.psi, t.gamma, TOL) for t in trials]
    return reps, time.perf_counter() - t0


def test_criterion_1_product_matches_oracle(trials, product_reports, record):
    reps, elapsed = product_reports
    agree = sum(r.agree for r in reps)
    n_true = sum(r.verdict for r in reps)
    Ns = {t.N for t in trials}
    ds = {t.d for t in trials}
    ok = (
        agree == len(trials) >= 1000
        and elapsed < 60
        and Ns == set(range(2, 9))
        and ds == set(range(1, 5))
        and 0 < n_true < len(trials)
    )
    assert record(
        "1 product criterion == oracle",
        ok,
        f"{agree}/{len(trials)} agree ({n_true} Toeplitz, {len(trials) - n_true} not), "
        f"N {min(Ns)}..{max(Ns)}, d {min(ds)}..{max(ds)}, {elapsed:.1f}s < 60s",
    )


def test_criterion_2_lemma_residual(trials, record):
    worst = 0.0
    ok = 0
    for t in trials:
        rep = lemma_residual_check(t.phi, t.psi, t.gamma, LEMMA_TOL)
        worst = max(worst, rep.residual)
        ok += rep.verdict
    assert record(
        "2 lemma residual",
        ok == len(trials) >= 500,
        f"{ok}/{len(trials)} pairs <= {LEMMA_TOL:g}, worst {worst:.2e}",
    )


def test_criterion_3_delta_characterization(record):
    rng = np.random.default_rng(3)
    agree_ops = agree_mtto = 0
    for _ in range(1000):
        N, d = int(rng.integers(2, 9)), int(rng.integers(1, 5))
        spec = ModelSpaceSpec(N, d)
        A = BlockOperator(spec, cmat(rng, N * d, N * d))
        rep = is_mtto_via_delta(A, TOL)
        agree_ops += rep.agree and rep.oracle_verdict is False
        rep = is_mtto_via_delta(build_mtto(random_symbol(rng, N, d)), TOL)
        agree_mtto += rep.agree and rep.oracle_verdict is True
    assert record(
        "3 delta characterization == oracle",
        agree_ops == agree_mtto == 1000,
        f"{agree_ops}/1000 random operators, {agree_mtto}/1000 MTTOs",
    )


def test_criterion_4_conjugation_axioms(record):
    rng = np.random.default_rng(4)
    worst_inv = worst_iso = 0.0
    for _ in range(1000):
        N, d = int(rng.integers(2, 9)), int(rng.integers(1, 5))
        g = random_conjugation(rng, d)
        blocks = cmat(rng, N, d)
        blocks[0] = 0
        f = ModelVector(ModelSpaceSpec(N, d), blocks)
        Cf = conj_CGamma(g, f)
        worst_inv = max(worst_inv, np.linalg.norm(conj_CGamma(g, Cf).flat - f.flat) / f.norm())
        worst_iso = max(worst_iso, abs(Cf.norm() - f.norm()) / f.norm())
    assert record(
        "4 C_Gamma involutive and isometric",
        worst_inv <= 1e-12 and worst_iso <= 1e-12,
        f"1000 vectors, involution err {worst_inv:.1e}, isometry err {worst_iso:.1e}",
    )


def test_criterion_5_concrete_cases(record):
    g1 = Conjugation.identity(1)
    phi = sedlock_symbol([1, 2], 1, g1)
    circ = build_mtto(phi)
    shape_ok = np.array_equal(circ.matrix, [[0, 1, 2], [2, 0, 1], [1, 2, 0]])
    pos = product_condition(phi, phi, g1, TOL)
    sq_oracle = oracle_is_block_toeplitz(circ @ circ, TOL)
    negatives = []
    for N in range(3, 7):
        z = LaurentSymbol.scalar(N, {1: 1})
        zb = LaurentSymbol.scalar(N, {-1: 1})
        for a, b in ((z, zb), (zb, z)):
            rep = product_condition(a, b, g1, TOL)
            negatives.append(rep.verdict is False and rep.oracle_verdict is False)
    ok = shape_ok and pos.verdict and sq_oracle.verdict and pos.residual <= 1e-12 and all(negatives)
    assert record(
        "5 circulant square / (z, zbar) / (zbar, z)",
        ok,
        f"circulant residual {pos.residual:.1e}, {sum(negatives)}/{len(negatives)} negatives false/false",
    )


def test_criterion_6_difference(trials, product_reports, record):
    reps, _ = product_reports
    agree = degen = n_true = 0
    for t, prod in zip(trials, reps):
        rep = difference_condition(t.phi, t.psi, t.chi, t.zeta, t.gamma, TOL)
        agree += rep.agree
        n_true += rep.verdict
        zero = LaurentSymbol.zero(t.N, t.d)
        d0 = difference_condition(t.phi, t.psi, zero, zero, t.gamma, TOL)
        degen += d0.verdict == prod.verdict and d0.residual == prod.residual
    ok = agree == degen == len(trials) >= 500 and 0 < n_true < len(trials)
    assert record(
        "6 difference criterion == oracle",
        ok,
        f"{agree}/{len(trials)} quadruples agree ({n_true} Toeplitz), "
        f"chi=zeta=0 reproduces criterion 1 in {degen}/{len(trials)}",
    )


def test_criterion_7_coefficient_criteria(trials, product_reports, record):
    reps, _ = product_reports
    same = total = 0
    for t, prod in zip(trials, reps):
        total += 2
        same += coefficient_criteria(t.phi, t.psi, t.gamma, TOL).verdict == prod.verdict
        other = product_condition(t.chi, t.zeta, t.gamma, TOL)
        same += coefficient_criteria(t.chi, t.zeta, t.gamma, TOL).verdict == other.verdict
    assert record(
        "7 coefficient criteria == product criterion",
        same == total,
        f"{same}/{total} pairs",
    )


def test_criterion_8_round_trips(record):
    rng = np.random.default_rng(8)
    dec_ok = ext_ok = 0
    for _ in range(200):
        s = random_symbol(rng, int(rng.integers(2, 9)), int(rng.integers(1, 5)))
        dec_ok += np.array_equal(recompose(decompose(s)).dense(), s.dense())
        ext_ok += np.array_equal(extract_symbol(build_mtto(s), TOL).dense(), s.dense())
    assert record(
        "8 exact round trips",
        dec_ok == ext_ok == 200,
        f"decompose/recompose {dec_ok}/200, extract/build {ext_ok}/200",
    )


@pytest.mark.slow
def test_criterion_9_fast_apply(record):
    rng = np.random.default_rng(9)
    errs = {}
    for N in (16, 256, 4096):
        for d in (1, 2):
            s = random_symbol(rng, N, d)
            v = ModelVector(ModelSpaceSpec(N, d), cmat(rng, N, d))
            A = build_mtto(s)
            ref = (A @ v).flat
            del A
            got = apply(plan(s), v).flat
            errs[(N, d)] = float(np.linalg.norm(got - ref) / np.linalg.norm(ref))
    row = benchmark(4096, 1, reps=7, seed=9)
    speedup = row["dense_ns"] / row["fast_ns"]
    worst = max(errs.values())
    ok = worst <= 1e-10 and row["max_rel_err"] <= 1e-10 and speedup >= 5
    assert record(
        "9 fast apply",
        ok,
        f"worst rel err {worst:.1e} over N in (16, 256, 4096), d in (1, 2); "
        f"N=4096 d=1 speedup {speedup:.1f}x (dense {row['dense_ns'] / 1e6:.2f} ms, "
        f"fast {row['fast_ns'] / 1e6:.2f} ms)",
    )
