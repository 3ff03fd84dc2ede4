import json
import math

import numpy as np
import pytest

from sphiso import checks
from sphiso import circle_calculus as cc
from sphiso import spectra as sp
from sphiso.errors import PreconditionError
from sphiso.symbols import LaurentPoly, curve_tolerance, eval_grid

Z = LaurentPoly.variable(0, 1)
ZBAR = Z.conjugate()


def suite(count, max_degree=5):
    return checks.spectra_suite_symbols(404, count, max_degree)


# ---------------------------------------------------------------------------
# membership


def test_membership_winding_region():
    assert sp.spectrum_membership(Z, 0.0) == sp.WINDING_NONZERO
    assert sp.spectrum_membership(Z**2, 0.3 + 0.2j) == sp.WINDING_NONZERO


def test_membership_outside():
    assert sp.spectrum_membership(Z, 2.0) == sp.OUTSIDE
    assert sp.spectrum_membership(Z + ZBAR, 1j) == sp.OUTSIDE


def test_membership_on_curve():
    c = LaurentPoly.constant(0.7 - 0.2j)
    assert sp.spectrum_membership(c, 0.7 - 0.2j) == sp.ON_CURVE
    assert sp.spectrum_membership(Z, 1.0) == sp.ON_CURVE


def test_membership_batch_matches_scalar():
    phi = Z**2 + 0.5 * ZBAR
    lams = [0.0, 3.0, 0.2 + 0.1j]
    batch = sp.membership_batch(phi, lams)
    assert list(batch) == [sp.spectrum_membership(phi, v) for v in lams]


def test_membership_outside_l1_ball():
    for i, phi in enumerate(suite(6)):
        r = phi.l1_norm() + 0.5
        for t in (0.0, 1.3, 4.1):
            lam = r * complex(math.cos(t), math.sin(t))
            assert sp.spectrum_membership(phi, lam) == sp.OUTSIDE


def test_membership_stable_under_grid_doubling():
    for phi in suite(5):
        lams = sp.lambda_grid(phi, 5, 512)
        s1 = sp.membership_batch(phi, lams, 2048)
        s2 = sp.membership_batch(phi, lams, 4096)
        for a, b in zip(s1, s2):
            assert a == sp.ON_CURVE or b == sp.ON_CURVE or a == b


# ---------------------------------------------------------------------------
# essential-range inclusion


def test_hartman_wintner_shift():
    rep = sp.hartman_wintner_check(Z, grid_size=512, probes=100)
    assert rep.verdict and rep.range_pass and rep.probe_pass
    assert rep.probes_certified == 100
    assert rep.counterexamples == []


def test_hartman_wintner_winged_cubic():
    rep = sp.hartman_wintner_check(Z**3 + 0.5 * ZBAR, grid_size=512)
    assert rep.verdict
    assert rep.probes_certified > 0


def test_hartman_wintner_real_symbol_vacuous():
    rep = sp.hartman_wintner_check(Z + ZBAR, grid_size=512)
    assert rep.verdict and rep.range_pass
    assert rep.probes_certified == 0


def test_hartman_wintner_random_suite():
    for phi in suite(4):
        assert sp.hartman_wintner_check(phi, grid_size=512).verdict


# ---------------------------------------------------------------------------
# convex bound


def test_convex_bound_shift():
    rep = sp.convex_bound_check(Z, sp.lambda_grid(Z, 40))
    assert rep.verdict
    assert rep.counterexamples == []
    assert set(rep.statuses) <= {sp.ON_CURVE, sp.WINDING_NONZERO, sp.OUTSIDE}


def test_convex_bound_selfadjoint_and_shifted():
    for phi in (Z + ZBAR, LaurentPoly.constant(2.0) + Z**2):
        rep = sp.convex_bound_check(phi, sp.lambda_grid(phi, 40))
        assert rep.verdict


def test_convex_bound_random_suite():
    for phi in suite(3):
        rep = sp.convex_bound_check(phi, sp.lambda_grid(phi, 30))
        assert rep.verdict


def test_convex_bound_grid_coverage_guard():
    with pytest.raises(PreconditionError):
        sp.convex_bound_check(Z, [0.0, 0.5 + 0.5j])


# ---------------------------------------------------------------------------
# numerical range


def test_numerical_range_identity():
    one = LaurentPoly.constant(1.0)
    thetas = [0.0, 0.7, math.pi / 2, 2.9]
    rep = sp.numerical_range_support(cc.make_toeplitz(one), thetas, 8)
    assert rep.verdict
    for t, h in zip(rep.thetas, rep.support_values):
        assert abs(h - math.cos(t)) <= 1e-12
    assert abs(rep.support_values[0] - 1.0) <= 1e-12


def test_numerical_range_cosine_sup():
    rep = sp.numerical_range_support(cc.make_toeplitz(Z + ZBAR), [0.0], 256)
    h = rep.support_values[0]
    assert 2.0 - 1e-3 <= h <= 2.0 + 1e-8
    assert rep.verdict


def test_numerical_range_shift_bounded():
    thetas = [2.0 * math.pi * k / 16 for k in range(16)]
    rep = sp.numerical_range_support(cc.make_toeplitz(Z), thetas, 64)
    assert rep.verdict
    assert max(rep.support_values) <= 1.0 + 1e-8


def test_numerical_range_trunc_guard():
    x = cc.make_toeplitz(Z**2 + ZBAR**2)
    with pytest.raises(PreconditionError):
        sp.numerical_range_support(x, [0.0], 4)


def test_deep_spectrum_points_inside_numerical_range():
    # winding-certified lambdas well inside the range hull must lie in the
    # truncated numerical range: support gaps stay above -1e-6 at trunc 512
    thetas = np.linspace(0.0, 2.0 * math.pi, 24, endpoint=False)
    for i in range(2):
        phi = checks.random_symbol(checks._rng(404, 9, i), 3, min_terms=2)
        rep = sp.numerical_range_support(cc.make_toeplitz(phi), thetas, 512)
        samples = eval_grid(phi, 8192).samples
        sup_dir = np.array(
            [float(np.max((np.exp(1j * t) * samples).real)) for t in thetas]
        )
        lams = sp.lambda_grid(phi, 40, 512)
        statuses = sp.membership_batch(phi, lams, 512)
        inside = lams[statuses == sp.WINDING_NONZERO]
        checked = 0
        for lam in inside:
            proj = np.array([(np.exp(1j * t) * lam).real for t in thetas])
            if np.min(sup_dir - proj) < 2e-3:
                continue
            checked += 1
            overshoot = float(np.max(proj - np.array(rep.support_values)))
            assert overshoot <= 1e-6
        assert checked > 0


# ---------------------------------------------------------------------------
# reports


def test_spectrum_report_shift():
    rep = sp.spectrum_report(Z, grid_size=512)
    assert rep.hartman_wintner and rep.convex_bound
    assert rep.counterexamples == []
    assert rep.lams.size == 200 * 200


def test_spectrum_report_consistency_guard():
    arr = np.array([], dtype=complex)
    with pytest.raises(PreconditionError):
        sp.SpectrumReport(
            symbol_text="z",
            grid_size=512,
            range_samples=arr,
            lams=arr,
            statuses=np.array([], dtype=object),
            hull_vertices=arr,
            hartman_wintner=True,
            convex_bound=True,
            counterexamples=[1j],
        )


def test_report_serialization():
    rep = sp.spectrum_report(Z + ZBAR, lams=sp.lambda_grid(Z + ZBAR, 20), grid_size=512)
    wire = json.loads(json.dumps(sp.report_to_json(rep)))
    assert wire["verdicts"]["hartman_wintner"] is True
    assert wire["verdicts"]["convex_bound"] is True
    assert len(wire["lams"]) == 400
    rows = sp.report_csv_rows(rep)
    assert rows[0] == ("lambda_re", "lambda_im", "status")
    assert len(rows) == 401
    assert all(r[2] in (sp.ON_CURVE, sp.WINDING_NONZERO, sp.OUTSIDE) for r in rows[1:])


def test_curve_tolerance_scales_with_grid():
    phi = Z**2 + 0.5 * ZBAR
    assert curve_tolerance(phi, 2048) == 2.0 * curve_tolerance(phi, 4096)
