"""Acceptance gate: one test per criterion, run at full scale.

Each test drives the corresponding registered check with the default
(criterion-scale) parameters and asserts the stated residual bounds, so
`pytest -v tests/test_acceptance.py` prints one pass/fail line per criterion.
"""

import json
import time
from pathlib import Path

from sphiso import checks, circle_calculus, cli

SEED = 20260815
PARAMS = json.loads(json.dumps(checks.DEFAULT_PARAMS))
SMOKE = Path(__file__).resolve().parent.parent / "scenarios" / "smoke.json"


def run(check_id):
    t0 = time.perf_counter()
    rec = checks.run_check(check_id, PARAMS, SEED)
    return rec, time.perf_counter() - t0


def test_criterion_01_algebra_closure():
    rec, elapsed = run("algebra_closure")
    r = rec.residuals
    assert rec.verdict
    assert r["trials"] == 100
    assert r["multiplicative_worst"] <= 1e-12
    assert r["star_worst"] <= 1e-12
    assert r["semicommutator_box_ok"]
    # the semicommutator's symbol part cancels exactly on the same pairs
    for t in range(100):
        rng = checks._rng(SEED, 1, t)
        x = checks.random_element(rng, PARAMS["max_degree"], PARAMS["max_correction"])
        y = checks.random_element(rng, PARAMS["max_degree"], PARAMS["max_correction"])
        s = circle_calculus.semicommutator(x.symbol, y.symbol)
        assert s.symbol.is_zero()
    assert elapsed < 5.0
    print(f"PASS criterion 1: algebra closure, worst {r['multiplicative_worst']:.3e}")


def test_criterion_02_averaging_identities():
    rec, _ = run("thm2_1_identities")
    r = rec.residuals
    assert rec.verdict
    assert r["trials"] == 100
    assert r["pairwise_worst"] <= 1e-12
    assert r["idempotent_worst"] <= 1e-12
    assert r["unital_worst"] == 0.0
    assert r["choi_effros_worst"] == 0.0
    print(f"PASS criterion 2: averaging identities, pairwise {r['pairwise_worst']:.3e}")


def test_criterion_03_brown_halmos():
    rec, _ = run("brown_halmos")
    r = rec.residuals
    assert rec.verdict
    assert r["elements"] == 200
    assert r["planted_pure"] == 50 and r["planted_corrected"] == 50
    assert r["false_verdicts"] == 0
    assert r["fixed_point_worst"] == 0.0
    print("PASS criterion 3: Brown-Halmos, zero false verdicts on 200 elements")


def test_criterion_04_commutant_lifting():
    rec, _ = run("commutant_lifting")
    r = rec.residuals
    assert rec.verdict
    assert r["symbols"] == 50
    assert r["accepted"] == 50 and r["rejected"] == 50
    assert r["bracket_contained"]
    assert r["truncation"] == 1024
    assert r["gap_worst"] <= 1e-3
    print(f"PASS criterion 4: commutant lifting, gap {r['gap_worst']:.3e}")


def test_criterion_05_cross_section():
    rec, _ = run("cross_section")
    r = rec.residuals
    assert rec.verdict
    assert r["closed_form_worst"] <= 1e-10
    assert 1024 in r["truncations"]
    assert r["final_gap"] <= 1e-3
    assert r["scalar_verdict"] == "PASS"
    assert abs(r["block_lower"] - 1.0) <= 1e-8
    assert abs(r["block_sup"] - 1.0) <= 1e-8
    print(f"PASS criterion 5: cross-section, closed form {r['closed_form_worst']:.3e}")


def test_criterion_06_spectral_inclusions():
    hw, t_hw = run("hartman_wintner")
    cb, t_cb = run("convex_bound")
    assert hw.verdict and cb.verdict
    assert hw.residuals["symbols"] == 20
    assert hw.residuals["counterexamples"] == 0
    assert cb.residuals["lambda_points"] == 200 * 200
    assert cb.residuals["counterexamples"] == 0
    assert t_hw + t_cb < 30.0
    print(f"PASS criterion 6: spectral inclusions in {t_hw + t_cb:.1f}s")


def test_criterion_07_szego_model():
    rec, _ = run("szego_model")
    r = rec.residuals
    assert rec.verdict
    assert r["dims"] == [2, 3] and r["degree"] == 10
    assert r["isometry_interior_worst"] <= 1e-12
    assert r["top_shell_deviation"] <= 1e-12
    assert r["moment_z_worst"] <= 3.0
    assert r["fixed_point_worst"] <= 1e-10
    assert r["planted_interior_min"] >= 0.4
    assert r["extension_defect_worst"] <= 1e-12
    print(f"PASS criterion 7: Szego model, MC worst z {r['moment_z_worst']:.2f}")


def test_criterion_08_polydisc_gamma_equation():
    ge, _ = run("gamma_equation")
    si, _ = run("scaled_isometry")
    rg, rs = ge.residuals, si.residuals
    assert ge.verdict and si.verdict
    assert rg["trials"] == 20 and rg["exact_failures"] == 0
    lo, up = rg["probe_bracket"]
    assert lo <= 1.0 <= up + 1e-12
    assert rg["probe_verdict"] == "NOT_TOEPLITZ"
    assert rs["scaled_residual"] == 0.0 and rs["scaled_exact"]
    assert abs(rs["unscaled_bracket"][0] - 1.0) <= 1e-12
    print("PASS criterion 8: gamma^2 equation, 20 pure sums cancel exactly")


def test_criterion_09_weighted_hardy():
    rec, _ = run("weighted_hardy")
    r = rec.residuals
    assert rec.verdict
    assert r["degrees"] == [32, 64, 128]
    assert r["isometry_worst"] <= 1e-10
    assert r["nonincreasing"]
    assert r["lebesgue_reproduction_diff"] == 0.0
    assert r["gram_residual"] <= 1e-10
    print(f"PASS criterion 9: weighted Hardy, isometry {r['isometry_worst']:.3e}")


def test_criterion_10_deterministic_reports(tmp_path):
    for sub in ("a", "b"):
        code = cli.main(["run", str(SMOKE), "--out", str(tmp_path / sub)])
        assert code == 0
    (run_a,) = (tmp_path / "a").iterdir()
    (run_b,) = (tmp_path / "b").iterdir()
    bytes_a = (run_a / "report.json").read_bytes()
    bytes_b = (run_b / "report.json").read_bytes()
    assert bytes_a == bytes_b
    print("PASS criterion 10: rerun report.json byte-identical")
