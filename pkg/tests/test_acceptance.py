"""End-to-end acceptance checks, one test per criterion.

Each test records a single PASS/FAIL line; they are printed in the pytest
terminal summary, or directly when this file is run as a script.
"""

import math
import time

import numpy as np
import pytest

from conftest import random_spec
from tripauli.bitcore import commutes
from tripauli.circuit import Circuit, TrotterPlan, trotter_circuit
from tripauli.decomposer import (CommutingSet, PauliTerm, TridiagonalSpec, decompose, embed_hermitian,
                                 generate_sets, wave_hamiltonian)
from tripauli.diagonalizer import diagonalize_set
from tripauli.simulator import (brute_force_decompose, circuit_unitary, embedding_matrix, exact_propagator,
                                label_to_dense, reconstruct, spectral_error)
from tripauli.waveapp import ExperimentConfig, fit_gate_scaling, main, run_wave_sweep

RESULTS: list[str] = []


def record(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _rng(seed):
    return np.random.default_rng(seed)


def test_c1_reconstruction():
    start = time.perf_counter()
    worst = 0.0
    rng = _rng(1)
    for n in range(1, 7):
        for _ in range(100):
            spec = random_spec(rng, n)
            worst = max(worst, float(np.max(np.abs(reconstruct(decompose(spec)) - spec.to_dense()))))
    elapsed = time.perf_counter() - start
    record(1, worst <= 1e-10 and elapsed < 60,
           f"600 random complex matrices n=1..6, max error {worst:.2e} (<= 1e-10), {elapsed:.1f}s (< 60s)")


def test_c2_cardinality():
    rng = _rng(2)
    problems = []
    for n in range(1, 7):
        full = {"general": (n + 1) << n, "real": (n + 1) << n, "symmetric": (n + 2) << (n - 1)}
        for kind, bound in full.items():
            for _ in range(5):
                d = decompose(random_spec(rng, n, kind))
                if d.term_count > bound:
                    problems.append(f"{kind} n={n}: {d.term_count} > {bound}")
                if kind != "general" and embed_hermitian(d).term_count != d.term_count:
                    problems.append(f"embedding of {kind} n={n} changed the term count")
    record(2, not problems, "term counts within (n+1)2^n / (n+2)2^(n-1), embedding preserves count, n=1..6"
           + ("" if not problems else f"; {problems[:3]}"))


def test_c3_oracle():
    rng = _rng(3)
    worst, outside = 0.0, 0
    for n in range(1, 6):
        allowed = {"general": {(l.x, l.z) for s in generate_sets(n, "general") for l in s.labels},
                   "symmetric": {(l.x, l.z) for s in generate_sets(n, "symmetric") for l in s.labels}}
        for kind in ("general", "real", "symmetric"):
            for _ in range(3):
                spec = random_spec(rng, n, kind)
                ours = decompose(spec).weight_map()
                ref = brute_force_decompose(spec.to_dense())
                worst = max(worst, max(abs(ours.get(k, 0) - v) for k, v in ref.items()))
                support = {k for k, v in ref.items() if abs(v) > 1e-9}
                outside += len(support - allowed["symmetric" if kind == "symmetric" else "general"])
                outside += len(set(ours) - set(ref))
    record(3, worst <= 1e-12 and outside == 0,
           f"closed-form vs trace weights n=1..5, max deviation {worst:.2e} (<= 1e-12), {outside} labels outside the sets")


def _all_sets(n):
    sets = [s.labels for cls in ("general", "symmetric") for s in generate_sets(n, cls)]
    sets += [s.labels for s in generate_sets(n, "hermitian-embedding")]
    return sets


def test_c4_commutation():
    bad, worst = 0, 0.0
    for n in range(1, 7):
        for labels in _all_sets(n):
            bad += sum(not commutes(p, q) for i, p in enumerate(labels) for q in labels[i + 1:])
            if labels[0].n <= 4:
                dense = [label_to_dense(l) for l in labels]
                for i, a in enumerate(dense):
                    for b in dense[i + 1:]:
                        worst = max(worst, float(np.max(np.abs(a @ b - b @ a))))
    record(4, bad == 0 and worst <= 1e-12,
           f"all sets n=1..6 pairwise commuting ({bad} violations), dense commutators <= {worst:.1e} at <= 4 qubits")


def test_c5_diagonalisation():
    worst, k_max, checked = 0.0, 0.0, 0
    preserved = True
    rng = _rng(5)
    for n in range(1, 5):
        families = [generate_sets(n, cls) for cls in ("general", "symmetric")]
        if n <= 3:
            families.append(generate_sets(n, "hermitian-embedding"))
        for layouts in families:
            for layout in layouts:
                weights = rng.normal(size=len(layout.labels))
                cset = CommutingSet(layout.m, layout.parity, layout.x_selector,
                                    tuple(PauliTerm(l, float(w)) for l, w in zip(layout.labels, weights)))
                width = layout.labels[0].n
                d = diagonalize_set(cset)
                circ = Circuit(width)
                for g in d.clifford.gates:
                    circ.append(g[0], *g[1:])
                u = circuit_unitary(circ)
                for term, (lab, w) in zip(cset.terms, d.diagonal_terms):
                    conj = u @ label_to_dense(term.label) @ u.conj().T
                    worst = max(worst, float(np.max(np.abs(conj - np.diag(np.diag(conj))))))
                    preserved &= w == term.weight
                k_max = max(k_max, len(d.clifford) / width ** 2)
                checked += 1
    record(5, worst <= 1e-10 and preserved,
           f"{checked} sets at <= 4 qubits diagonalised, off-diagonal residue {worst:.1e}, weights preserved, "
           f"Clifford gates <= K n^2 with K = {k_max:.3f}")


def _wave(n):
    return wave_hamiltonian([1.0] * (1 << n), n, 1.0 / ((1 << n) - 1))


def order_slopes():
    out = {}
    for n in (2, 3, 4):
        spec, ham = _wave(n)
        exact = exact_propagator(embedding_matrix(spec.to_dense()), 1.0)
        norm = np.linalg.norm(spec.to_dense(), 2)
        r0 = 1 << math.ceil(math.log2(4 * norm))
        grid = [r0 * k for k in (1, 2, 4, 8)]
        for p in (1, 2):
            errs = [spectral_error(circuit_unitary(trotter_circuit(ham, None, TrotterPlan(p, r, 1.0))), exact)
                    for r in grid]
            out[(n + 1, p)] = (np.polyfit(np.log(grid), np.log(errs), 1)[0], errs)
    return out


def test_c6_trotter_order():
    slopes = order_slopes()
    ok = all(abs(s + p) <= 0.2 * p and all(b <= a for a, b in zip(e, e[1:])) for (_, p), (s, e) in slopes.items())
    spec = TridiagonalSpec(2, [1.0, -2.0, 0.5, 3.0], [0, 0, 0], [0, 0, 0], "real")
    single = embed_hermitian(decompose(spec))
    err = spectral_error(circuit_unitary(trotter_circuit(single, None, TrotterPlan(1, 1, 1.0))),
                         exact_propagator(embedding_matrix(spec.to_dense()), 1.0))
    shown = ", ".join(f"q={q} p={p}: {s:.3f}" for (q, p), (s, _) in sorted(slopes.items()))
    record(6, ok and err <= 1e-10, f"error-vs-r slopes ({shown}) within 20% of -p; single set error {err:.1e} at r=1")


def test_c7_accuracy():
    config = ExperimentConfig(2, 5, (1, 2, 4, 6), 1e-3, 1.0)
    records = run_wave_sweep(config)
    verified = [r for r in records if r.measured_error is not None]
    failures = [f"n={r.n} p={r.p} err={r.measured_error:.2e}" for r in verified if r.measured_error > config.eps]
    worst = max(r.measured_error for r in verified)
    record(7, bool(verified) and not failures,
           f"{len(verified)} verified rows, worst error {worst:.2e} <= eps 1e-3" + (f"; failures {failures}" if failures else ""))


def test_c8_gate_scaling():
    config = ExperimentConfig(2, 7, (1, 2, 4, 6), 1e-5, 1.0, verify_max_qubits=0)
    fits = fit_gate_scaling(run_wave_sweep(config))
    ok = all(abs(f.slope_model - f.target) <= 0.3 and f.monotone for f in fits)
    shown = "; ".join(f"p={f.p}: {f.slope_model:.2f} vs {f.target:.2f} (raw {f.slope_raw:.2f}, "
                      f"gamma {f.gamma_fit:.3g} vs {f.gamma_reference:.3g})" for f in fits)
    record(8, ok, f"N-exponent of g/n^(2+1/p) over n=2..7, monotone in n: {shown}")


def test_c9_determinism(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "m.txt").write_text("c: 1.5 -2 0.25 3\na: 1 2 3\nb: 0.5 0 -1\n")
    outputs = []
    for k in range(2):
        assert main(["decompose", "--input", "m.txt", "--out", f"d{k}.json"]) == 0
        assert main(["wave-sweep", "--n-min", "2", "--n-max", "4", "--orders", "1,2,4", "--eps", "1e-3",
                     "--jobs", str(k + 1), "--out", f"s{k}.csv"]) == 0
        outputs.append([(tmp_path / name).read_bytes() for name in (f"d{k}.json", f"s{k}.csv", f"s{k}.fit.csv")])
    record(9, outputs[0] == outputs[1], "repeated decompose/wave-sweep runs (serial and 2 workers) byte-identical")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
