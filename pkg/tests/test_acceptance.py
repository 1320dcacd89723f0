"""Acceptance suite: one PASS/FAIL line per criterion, collected in ``RESULTS``.

The lines are printed as they are produced (visible with ``-s``) and repeated
in the pytest terminal summary by ``conftest.py``.
"""

import time

import numpy as np
import pytest

from hon_forge.bz import combine, rule_xv
from hon_forge.cli import main
from hon_forge.gf import matmul, rank
from hon_forge.nets import (
    generate_points,
    min_mu_distance_exhaustive,
    strict_t,
    verify_net_definition,
)
from hon_forge.tables import ParamTable, bundled_param_table, sigma_xv
from hon_forge.walsh import (
    ExpMatrix,
    PointSet,
    dual_vector,
    general_strict_t,
    point_vector,
    verify_net_geometric,
    walsh_matrix,
)
from samples import minimal_t, random_net, toy_instances

RESULTS = {}


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[number] = line
    print(line)
    assert ok, line


def test_criterion_1_oracle_agreement():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    mismatches, walsh_checked, total = [], 0, 200
    for i in range(total):
        q = (2, 3)[i % 2]
        alpha = int(rng.integers(1, 4))
        net = random_net(rng, q, alpha, max_ns=14, max_dual=12)
        p, L = net.params, net.params.floor_beta_n
        P = generate_points(net)
        values = {
            "dual": strict_t(net),
            "rank": minimal_t(lambda t: verify_net_definition(net, t), L),
            "geometric": minimal_t(lambda t: verify_net_geometric(P, t, alpha, 1, net.n, net.m), L),
        }
        if q ** (net.s * L) <= 2**14:
            values["walsh"] = general_strict_t(P, alpha, 1, net.n, net.m)
            walsh_checked += 1
        if len(set(values.values())) != 1:
            mismatches.append((q, alpha, net.s, net.n, net.m, values))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 300
    report(1, ok, f"{total} nets, {walsh_checked} with the Walsh route, {len(mismatches)} mismatches, {elapsed:.1f}s")


def test_criterion_2_walsh_inverse():
    checked = []
    for b in (2, 3, 5):
        for s in (1, 2):
            for r in (1, 2):
                if b ** (s * r) > 2**12:
                    continue
                W = ExpMatrix.from_exponents(b, walsh_matrix(b, s, r))
                size = b ** (s * r)
                eye = ExpMatrix.from_ints(b, np.eye(size, dtype=np.int64) * size)
                checked.append(((b, s, r), (W @ W.conj()).equals(eye)))
    bad = [params for params, ok in checked if not ok]
    report(2, not bad, f"{len(checked)} parameter triples, failures {bad}")


def test_criterion_3_literal_duality():
    rng = np.random.default_rng(3)
    literal = {2: [0, 0], 3: [0, 0]}
    corrected_failures = 0
    for i in range(100):
        b = (2, 3)[i % 2]
        s, r = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        P = PointSet(b, rng.integers(0, b, (int(rng.integers(1, 65)), s, r)))
        W = ExpMatrix.from_exponents(b, walsh_matrix(b, s, r))
        Wc = W.conj()
        C = dual_vector(P, r).as_matrix()
        M = ExpMatrix.from_ints(b, point_vector(P, r).counts)
        scale = b ** (s * r)
        literal[b][0] += 1
        literal[b][1] += (W @ C).equals(M * scale) and C.equals(Wc @ M)
        corrected_failures += not ((Wc @ C).equals(M * scale) and C.equals(W @ M))
    ok = all(hold == tried for tried, hold in literal.values())
    detail = ", ".join(f"b={b}: literal form holds on {h}/{t}" for b, (t, h) in literal.items())
    report(3, ok, f"{detail}; with the conjugate on the other side: {100 - corrected_failures}/100")


def test_criterion_4_concatenation_distance():
    bad, count = [], 0
    for chain, nets, alpha, duals in toy_instances(4, 50):
        count += 1
        N = combine(chain, duals)
        size = len({tuple(v) for v in N.elements()})
        expected_size = int(np.prod([D.field.q ** D.dim for D in duals]))
        bounds = [min_mu_distance_exhaustive(D, alpha) * dp for D, dp in zip(duals, chain.deltas) if D.dim]
        delta = min_mu_distance_exhaustive(N, alpha)
        if size != expected_size or (bounds and delta < min(bounds)):
            bad.append((chain.dims, [net.m for net in nets], size, expected_size, delta, bounds))
    report(4, not bad, f"{count} instances, {len(bad)} violations")


def test_criterion_5_rule_xv():
    bad, count, declared_gap = [], 0, 0
    for chain, nets, alpha, duals in toy_instances(5, 40, full_chains=True):
        count += 1
        out = rule_xv(chain, nets, alpha=alpha)
        N = combine(chain, duals)
        G = out.stacked()
        contains = not N.dim or not matmul(out.field, G, N.basis.T).any()
        dim_ok = rank(out.field, G) == sum(e * net.m for e, net in zip(chain.e, nets))
        t = out.params.t
        bound_ok = strict_t(out) <= t and verify_net_definition(out, t)
        bound_ok = bound_ok and verify_net_geometric(generate_points(out), t, alpha, 1, out.n, out.m)
        declared_gap += t - strict_t(out)
        if not (contains and dim_ok and bound_ok):
            bad.append((chain.dims, contains, dim_ok, bound_ok))
    report(5, not bad, f"{count} instances, {len(bad)} violations, mean slack {declared_gap / count:.2f}")


DIR_TABLE_1 = [24, 26, 28, 30, 32, 34, 36, 38, 40, 42, 44, 46, 48, 50, 52, 54]
XV_COLUMNS = {
    5: [19, 21, 25, 27, 29, 33, 35, 37],
    15: [13, 17, 19, 21, 25, 27, 29, 33],
    25: [5, 9, 11, 13, 17, 19, 21, 25],
}


def test_criterion_6_tables(capsys):
    start = time.perf_counter()
    code = main(["table", "--q", "5", "--s", "5", "--m-range", "15:30", "--rules", "dir,xv", "--params", "bundled"])
    out = capsys.readouterr().out
    rows = [line.split("\t") for line in out.splitlines()[1:]]
    dir_ok = code == 0 and [int(r[1]) for r in rows] == DIR_TABLE_1
    fallback = ParamTable({})
    cells = [(16, 5, 19), (16, 15, 13), (30, 25, 25)]
    fallback_ok = all(sigma_xv(5, m, s, fallback).sigma == v for m, s, v in cells)
    bundled = bundled_param_table()
    xv_ok = all(
        [sigma_xv(5, m, s, bundled).sigma for m in range(16, 31, 2)] == col for s, col in XV_COLUMNS.items()
    )
    elapsed = time.perf_counter() - start
    ok = dir_ok and fallback_ok and xv_ok and elapsed < 60
    with capsys.disabled():
        report(6, ok, f"dir column {dir_ok}, fallback cells {fallback_ok}, xv columns {xv_ok}, {elapsed:.1f}s")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
