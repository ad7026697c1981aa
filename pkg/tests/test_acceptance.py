"""The nine acceptance criteria, each at exact equality and within its time budget.

Every test prints one line "criterion k: PASS|FAIL ..." and the lines are repeated
in the terminal summary under "acceptance criteria".
"""

import hashlib
import json
import time
from fractions import Fraction
from pathlib import Path

import pytest

from genus2glue.ec import EllipticCurve, frobenius_isogeny
from genus2glue.ff import field_create
from genus2glue.g2 import CoverSpec, cover_degree, g2_count_and_lpoly, ramification_report, split_check
from genus2glue.glue import glue_construct
from genus2glue.homalg import (
    HomMatrix,
    beta_form,
    congruence_and_minimality,
    phi_kernel_check,
    phi_matrix,
    polarization_check,
)
from genus2glue.report import VerificationReport, run_example1
from genus2glue.towers import group_lemma_suite, kummer_descriptor, tower_descriptor

FROZEN = json.loads((Path(__file__).parent / "oracles" / "frozen.json").read_text())


@pytest.fixture
def record(request):
    def _record(k: int, ok: bool, detail: str, elapsed: float):
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f} s) {detail}"
        print(line)
        request.config.acceptance_lines.append(line)
        assert ok, line

    return _record


def grid_curves(key):
    grid = FROZEN[key]
    F = field_create(grid["p"], grid["e"])
    for row in grid["curves"]:
        E = EllipticCurve(F, F.elem(F.from_digits(row["lambda"])))
        tau = frobenius_isogeny(E)
        yield row, E, tau, glue_construct(E, tau.target, tau)


def test_criterion_1_split_jacobian(record):
    t0 = time.perf_counter()
    ok, notes, slowest = True, [], 0.0
    for key in ("split_grid_p3", "split_grid_p5"):
        n = 0
        for row, E, tau, C in grid_curves(key):
            s = time.perf_counter()
            v = split_check(C, E, tau.target)
            slowest = max(slowest, time.perf_counter() - s)
            ok &= v["lpoly_c"] == v["lpoly_product"]
            ok &= v["jacobian_order"] == v["counts_e"][0] * v["counts_e_prime"][0]
            # counts from the independent brute-force oracle
            ok &= v["counts_c"] == row["c_counts"] and v["counts_e"] == row["ec_counts"]
            ok &= v["counts_e_prime"] == row["ec_prime_counts"]
            n += 1
        ok &= n >= 5
        notes.append(f"{key}: {n} curves")
    ok &= slowest < 60
    record(1, ok, f"{', '.join(notes)}; slowest curve {slowest:.2f} s", time.perf_counter() - t0)


def test_criterion_2_phi_kernel(record):
    t0 = time.perf_counter()
    ok, n = True, 0
    for key in ("split_grid_p3", "split_grid_p5"):
        for _, E, tau, _C in grid_curves(key):
            v = phi_kernel_check(E, tau.target, tau)
            ok &= v["pass"] and v["kernel_size"] == 4 and v["pairs_checked"] == 16
            n += 1
    elapsed = time.perf_counter() - t0
    record(2, ok and elapsed / n < 1, f"{n} glued curves, kernel size 4 of 16 pairs each", elapsed)


def test_criterion_3_degree_formula(record):
    t0 = time.perf_counter()
    F = field_create(3, 4)
    E = EllipticCurve(F, F.elem(5))
    tau = frobenius_isogeny(E)
    C = glue_construct(E, tau.target, tau)
    N = tau.degree
    ok = N == 3
    degs = {}
    for a, b in ((1, 0), (0, 1), (1, 1), (1, 2)):
        d = cover_degree(CoverSpec(C, a, b, tau if b else None))
        degs[(a, b)] = d
        ok &= d == 2 * a * a + 2 * N * b * b
    r = range(-10, 11)
    mismatches = sum(
        beta_form(a, b, c, d, N) != 2 * a * c + 2 * N * b * d
        for a in r for b in r for c in r for d in r
    )
    ok &= mismatches == 0
    elapsed = time.perf_counter() - t0
    record(3, ok and elapsed < 120, f"degrees {degs}; beta-form mismatches {mismatches} of {21**4}", elapsed)


def test_criterion_4_ramification(record):
    t0 = time.perf_counter()
    ok, notes = True, []
    # the whole p = 3 grid and one p = 5 curve (each p = 5 curve costs about 20 s)
    for key, limit in (("split_grid_p3", None), ("split_grid_p5", 1)):
        for _, E, tau, C in list(grid_curves(key))[:limit]:
            F = C.field
            base = ramification_report(CoverSpec(C, 1, 0))
            d = base.data
            ok &= len(base.V) == 2 and all(v.m is not None and v.m == 0 for v in base.V)
            ok &= d["pi_prime_of_V_is_origin"] and d["delta_distinct"] and d["V_disjoint_from_V_prime"]
            ok &= len(base.Delta) == 2
            p = F.p
            twisted = ramification_report(CoverSpec(C, 1, p, tau))
            ok &= min(twisted.multiplicities) >= 2 and len(twisted.multiplicities) == 2
            ok &= sum(e - 1 for e in twisted.multiplicities) == 2 and twisted.data["V_equals_V_10"]
            notes.append(f"q={F.q} lambda={E.lam!r}: mult {twisted.multiplicities}")
    elapsed = time.perf_counter() - t0
    record(4, ok and elapsed < 300, "; ".join(notes), elapsed)


def test_criterion_5_congruence_and_minimality(record):
    t0 = time.perf_counter()
    ok = True
    for p in (3, 5):
        N = p
        for b in range(-30, 31):
            res = congruence_and_minimality(b, p, N)
            ok &= res["congruent_mod_p"] == (b % p == 0)
            if b % 2 == 0:
                ok &= res["minimality_certified"] and (1 - b * N) % 2 == 1
    elapsed = time.perf_counter() - t0
    record(5, ok and elapsed < 1, "p in {3, 5}, |b| <= 30", elapsed)


def test_criterion_6_example(record):
    t0 = time.perf_counter()
    verdicts = {}
    for e in (2, 4, 6):
        F = field_create(3, e)
        rep = VerificationReport({"q": F.q})
        run_example1(rep, F, budget=10**7)
        by_id = {c.check_id: c for c in rep.checks}
        if by_id["example1.parameter"].status == "skipped":
            continue
        good = all(c.status == "pass" for c in rep.checks)
        verdicts[F.q] = by_id["example1.pgl2"].data.get("verdict") if good else "fail"
    ok = bool(verdicts) and all(v in ("isomorphic", "twist") for v in verdicts.values())
    elapsed = time.perf_counter() - t0
    record(6, ok and elapsed < 600, f"verdicts by q: {verdicts}", elapsed)


def test_criterion_7_group_lemmas(record):
    t0 = time.perf_counter()
    res = group_lemma_suite(6)
    crit = {c["n"]: (c["subgroups_examined"], len(c["counterexamples"])) for c in res["criterion"]}
    ok = res["pass"] and all(c == 0 for _, c in crit.values())
    ok &= crit[6][0] == FROZEN["subgroups_of_Sn"][5]
    ok &= all(i["ok"] for i in res["instances"])
    ok &= any("A5" in i["id"] for i in res["instances"])
    ok &= {i["outcome"] for i in res["instances"]} == {"pass", "precondition_failed"}
    elapsed = time.perf_counter() - t0
    record(7, ok and elapsed < 600, f"(subgroups, counterexamples) by n: {crit}; {len(res['instances'])} instances",
           elapsed)


def test_criterion_8_tower(record):
    t0 = time.perf_counter()
    ref = FROZEN["tower_3_3_5_4"]
    ok = True
    for t in range(1, 6):
        doc = tower_descriptor(3, 3, t, 4).to_json()
        ok &= doc["degrees"] == ref["degrees"][:t]
        ok &= [hashlib.sha256(s.encode()).hexdigest() for s in doc["orders"]] == ref["sha256"][:t]
    ok &= doc["degrees"][:2] == [218, 866]
    k = kummer_descriptor(3)
    ok &= len(k.generators) == 4 and k.degree == 16
    # parity matrix: the constant is a nonsquare, t - i has odd valuation at t = i and at infinity
    expected = [[1, 0, 0, 0, 0]] + [[0] + [int(j == i) for j in range(3)] + [1] for i in range(3)]
    ok &= k.matrix == expected
    elapsed = time.perf_counter() - t0
    record(8, ok and elapsed < 5, f"degrees {doc['degrees']}; Kummer rank {k.rank}, degree {k.degree}", elapsed)


def test_criterion_9_polarization(record):
    t0 = time.perf_counter()
    ok = True
    for n, N in ((2, 3), (2, 5), (2, 9), (4, 3), (4, 7)):
        lam = polarization_check(n, N)["lambda_tilde"]
        ok &= lam.coeffs() == [[Fraction(1 + N, n), -1], [-1, n]] and lam.integral()
        Phi = phi_matrix(n, N)
        ok &= Phi.dual() @ lam @ Phi == HomMatrix.identity(N).scale(n)
    elapsed = time.perf_counter() - t0
    record(9, ok and elapsed < 1, "(n, N) in {(2,3), (2,5), (2,9), (4,3), (4,7)}", elapsed)
