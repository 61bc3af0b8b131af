"""
Acceptance suite.

Each test checks one criterion at its stated tolerance and records a single
PASS/FAIL line; the lines are printed together at the end of the session.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import time

import numpy as np
import pytest

from selfcomm import io as sio
from selfcomm.cli import main
from selfcomm.decompose import build_witness, decompose_traceless
from selfcomm.equiv import approx_equivalent, assemble_pair, embed_2x2, dimension, moments, support_below
from selfcomm.ii1 import approx_error, error_bounds, pipeline, quantize
from selfcomm.spectral import (
    amplify,
    haagerup_distance,
    join_projections,
    normalized_trace,
    support_projection,
    unitary_equiv_exact,
)

from _gen import (
    diagonal_tuple,
    random_element,
    random_hermitian,
    random_matrix,
    random_rational_element,
    random_traceless,
    random_unitary,
    refinement,
    with_spectrum,
)

RESULTS = []


def record(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def decompositions(seed):
    rng = np.random.default_rng([seed, 1])
    out = []
    for _ in range(500):
        n = int(rng.integers(2, 65))
        X = random_traceless(rng, n)
        t0 = time.perf_counter()
        dec = decompose_traceless(X)
        out.append((X, dec, time.perf_counter() - t0))
    return out


def test_decomposition_five_conditions(decompositions, seed):
    failures = sum(not dec.report.passed for _, dec, _ in decompositions)
    rng = np.random.default_rng([seed, 2])
    times = []
    for _ in range(10):
        X = random_traceless(rng, 64)
        t0 = time.perf_counter()
        decompose_traceless(X)
        times.append(time.perf_counter() - t0)
    worst = max(max(times), max(t for X, _, t in decompositions if X.shape[0] == 64))
    record("decomposition suite", failures == 0 and worst <= 1.0,
           f"{failures}/500 failures, slowest n=64 instance {worst * 1e3:.1f} ms (limit 1000 ms)")


def test_golden_decomposition():
    dec = decompose_traceless(np.diag([2.0, -1.0, -1.0]))
    ok = (np.array_equal(dec.A, np.diag([0.0, -2.0, -1.0]))
          and np.array_equal(dec.B, np.diag([-2.0, -1.0, 0.0])))
    record("golden decomposition", ok, f"A={np.diag(dec.A).tolist()} B={np.diag(dec.B).tolist()}")


def test_witness_suite(decompositions):
    worst_c = worst_r = 0.0
    bad = 0
    for X, dec, _ in decompositions:
        Y = build_witness(dec).Y
        L, R = Y @ Y.conj().T, Y.conj().T @ Y
        nx = np.linalg.norm(X, 2)
        rc = np.linalg.norm(L @ R - R @ L) / (1 + nx**2)
        rr = np.linalg.norm(L - R - X) / (1 + nx)
        worst_c, worst_r = max(worst_c, rc), max(worst_r, rr)
        bad += not (rc <= 1e-8 and rr <= 1e-9)
    record("witness suite", bad == 0,
           f"{bad}/500 failures, worst commutator {worst_c:.2e}·(1+||X||²), "
           f"worst reconstruction {worst_r:.2e}·(1+||X||)")


def test_quantization_bounds(seed):
    rng = np.random.default_rng([seed, 4])
    ns = [2**j for j in range(1, 13)]
    violations = 0
    for _ in range(100):
        elem = random_element(rng, int(rng.integers(1, 11)))
        for n in ns:
            dq, d = approx_error(elem, quantize(elem, n))
            bq, bd = error_bounds(elem, n)
            violations += (dq > bq) + (d > bd)

    worst_exact = 0.0
    for _ in range(100):
        L = int(rng.integers(2, 513))
        elem, _ = random_rational_element(rng, int(rng.integers(1, min(L, 10) + 1)), L)
        worst_exact = max(worst_exact, *approx_error(elem, quantize(elem, L)))

    worst_brute = 0.0
    for _ in range(100):
        L = int(rng.integers(2, 41))
        elem, k = random_rational_element(rng, int(rng.integers(1, min(L, 10) + 1)), L)
        for n in (2, 3, 5, 8, 13):
            ap = quantize(elem, n)
            Xbig, M = refinement(elem, k, L, ap)
            brute = np.mean((Xbig - np.repeat(ap.h_diag, M)) ** 2) ** (1 / 3)
            worst_brute = max(worst_brute, abs(brute - approx_error(elem, ap)[1]))
    ok = violations == 0 and worst_exact <= 1e-12 and worst_brute <= 1e-10
    record("quantization bounds", ok,
           f"{violations} bound violations over 1200 cases, rational worst {worst_exact:.1e}, "
           f"brute-force worst {worst_brute:.1e}")


def test_pipeline_suite(seed):
    rng = np.random.default_rng([seed, 5])
    schedule = [2**j for j in range(1, 11)]
    worst_res = 0.0
    bad = 0
    for _ in range(20):
        elem = random_element(rng, int(rng.integers(1, 11)), traceless=True)
        for step in pipeline(elem, schedule):
            dec, r = step.decomposition, step.report
            res = max(c.residual for c in dec.report.checks if c.name != "norm_bound")
            worst_res = max(worst_res, res)
            bad += not (res <= 1e-10 and r.d_output <= r.bound_d and r.max_norm <= r.norm_budget)
    record("pipeline suite", bad == 0,
           f"{bad}/200 steps failing, worst decomposition residual {worst_res:.1e}")


def test_metric_suite(seed):
    rng = np.random.default_rng([seed, 6])
    bad = 0
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        X, Y, Z = (random_matrix(rng, n) * rng.uniform(0.01, 10) for _ in range(3))
        bad += haagerup_distance(X, Y) > 2 ** (1 / 3) * np.linalg.norm(X - Y, 2) ** (2 / 3) + 1e-9
        bad += haagerup_distance(X, Z) > haagerup_distance(X, Y) + haagerup_distance(Y, Z) + 1e-9
    record("metric suite", bad == 0, f"{bad} violations over 1000 pairs and 1000 triples")


def test_projection_suite(seed):
    rng = np.random.default_rng([seed, 7])
    bad_spec = 0
    for _ in range(500):
        n = int(rng.integers(1, 13))
        X = random_matrix(rng, n)
        s1 = np.linalg.eigvalsh(X @ X.conj().T)
        s2 = np.linalg.eigvalsh(X.conj().T @ X)
        bad_spec += not np.allclose(s1, s2, rtol=0, atol=1e-9 * (1 + s1.max()))
    bad_amp = 0
    for _ in range(100):
        n = int(rng.integers(1, 7))
        k = int(rng.integers(0, n + 1))
        vals = np.concatenate([rng.normal(size=k) + np.sign(rng.normal(size=k)), np.zeros(n - k)])
        A = with_spectrum(rng, vals)
        W = random_unitary(rng, n)
        P = W[:, :1] @ W[:, :1].conj().T
        Q = W[:, 1:2] @ W[:, 1:2].conj().T if n > 1 else P
        for m in (2, 3, 4):
            s = np.linalg.norm(support_projection(amplify(A, m)) - amplify(support_projection(A), m))
            j = np.linalg.norm(join_projections([amplify(P, m), amplify(Q, m)])
                               - amplify(join_projections([P, Q]), m))
            bad_amp += not (s <= 1e-9 and j <= 1e-9)
    record("support and amplification suite", bad_spec == 0 and bad_amp == 0,
           f"{bad_spec}/500 spectrum mismatches, {bad_amp}/300 amplification mismatches")


def test_moment_criterion(seed):
    rng = np.random.default_rng([seed, 8])
    disagree = 0
    for same in (False, True):
        for _ in range(200):
            n = int(rng.integers(1, 33))
            A = random_hermitian(rng, n)
            if same:
                B = with_spectrum(rng, np.linalg.eigvalsh(A))
            else:
                B = random_hermitian(rng, n)
            exact = unitary_equiv_exact(A, B) is not None
            disagree += approx_equivalent(A, B, K=n) != exact
    record("moment criterion", disagree == 0, f"{disagree}/400 disagreements with the exact test")


def _moment_gap(V, W):
    mv, mw = moments(V), moments(W)
    scale = max(1.0, mv.norm, mw.norm)
    return float(np.max(np.abs(mv.values - mw.values) / scale ** np.arange(1, mv.K + 1)))


def test_assembly_suite(seed):
    rng = np.random.default_rng([seed, 9])
    worst_rec = worst_mom = worst_q = 0.0
    bad = 0
    for _ in range(100):
        t = diagonal_tuple(rng)
        pair = assemble_pair(t, X=t.X)
        scale = 1 + max(np.linalg.norm(M, 2) for M in t.matrices())
        rec = np.linalg.norm(pair.X1 + pair.X2 - t.X) / scale
        mom = max(_moment_gap(pair.V1, pair.W1), _moment_gap(pair.V2, pair.W2))
        qx = max(abs(normalized_trace(pair.X1)), abs(normalized_trace(pair.X2)))
        worst_rec, worst_mom, worst_q = max(worst_rec, rec), max(worst_mom, mom), max(worst_q, qx)
        bad += not (rec <= 1e-12 and mom <= 1e-9 and qx <= 1e-10)
    bad_embed = 0
    for _ in range(100):
        X = random_hermitian(rng, int(rng.integers(1, 9)))
        Xt, E = embed_2x2(X)
        bad_embed += not (dimension(E) == 0.5 and support_below(Xt, E) <= 1e-12)
    record("assembly suite", bad == 0 and bad_embed == 0,
           f"{bad}/100 tuples failing (reconstruction {worst_rec:.1e}·scale, moments {worst_mom:.1e}, "
           f"trace {worst_q:.1e}), {bad_embed}/100 embedding failures")


def test_cli_integration(seed, tmp_path, capsys):
    rng = np.random.default_rng([seed, 10])
    sio.write_matrix(tmp_path / "x.json", random_traceless(rng, 8), hermitian=True)
    out = tmp_path / "dec"
    codes = [main(["decompose", str(tmp_path / "x.json"), "--out", str(out)])]
    claim = ["--x", str(out / "X.json"), "--a", str(out / "A.json"), "--b", str(out / "B.json"),
             "--u", str(out / "U.json"), "--p", str(out / "P.json")]
    codes.append(main(["verify", *claim]))
    B = sio.read_matrix(out / "B.json")
    B[1, 2] += 1e-4
    B[2, 1] += 1e-4
    sio.write_matrix(out / "B.json", B)
    tampered = main(["verify", *claim])

    sio.write_element(tmp_path / "e.json", random_element(rng, 6, traceless=True))
    tables = []
    for k in range(2):
        d = tmp_path / f"p{k}"
        codes.append(main(["pipeline", str(tmp_path / "e.json"), "--schedule", "2,8,32,128,1024",
                           "--out", str(d)]))
        tables.append((d / "pipeline.csv").read_bytes())
    capsys.readouterr()
    ok = codes == [0, 0, 0, 0] and tampered == 2 and tables[0] == tables[1]
    record("CLI integration", ok,
           f"exit codes {codes}, tampered verify exit {tampered}, "
           f"pipeline CSV identical: {tables[0] == tables[1]}")
