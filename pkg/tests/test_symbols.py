import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from sphiso.errors import OnCurveError, PreconditionError
from sphiso.symbols import (
    Hull,
    LaurentPoly,
    SphericalMultifunction,
    circle_coordinates,
    conv_hull,
    curve_tolerance,
    eval_grid,
    parse_terms,
    sphere_coordinates,
    sup_norm,
    torus_coordinates,
    winding,
)

Z = LaurentPoly.variable(0, 1)
ZBAR = Z.conjugate()


def sym_close(a, b, tol=0.0):
    ca, cb = a.coeffs, b.coeffs
    return all(abs(ca.get(e, 0j) - cb.get(e, 0j)) <= tol for e in set(ca) | set(cb))


# ---------------------------------------------------------------------------
# algebra


def test_zero_and_constant():
    assert LaurentPoly.zero(1).is_zero()
    assert LaurentPoly.constant(0.0).is_zero()
    assert LaurentPoly.constant(2.0).coeff(0) == 2.0
    assert (Z - Z).is_zero()


def test_degrees_and_band():
    p = LaurentPoly.from_text("z^3 + 2*zbar^2 + 1")
    assert p.deg_pos() == 3
    assert p.deg_neg() == 2
    assert p.band() == 3
    assert not p.is_analytic()
    assert (Z ** 4).is_analytic()


def test_norm_bounds():
    p = LaurentPoly.from_text("2*z - 3*zbar^2")
    assert p.l1_norm() == 5.0
    assert p.derivative_l1_bound() == 8.0
    assert p.second_derivative_l1_bound() == 14.0


def test_mul_commutative_exactly():
    rng = np.random.default_rng(41)
    for _ in range(20):
        a = random_poly(rng)
        b = random_poly(rng)
        assert a * b == b * a  # complex products commute entrywise in IEEE


def test_mul_associative():
    rng = np.random.default_rng(43)
    for _ in range(20):
        a, b, c = (random_poly(rng) for _ in range(3))
        assert sym_close((a * b) * c, a * (b * c), tol=1e-12)


def test_mul_oracle():
    got = LaurentPoly.from_text("1 + z") * LaurentPoly.from_text("1 + zbar")
    assert got == LaurentPoly.from_text("2 + z + zbar")


def test_conjugate_eval():
    rng = np.random.default_rng(47)
    ring = np.exp(2j * np.pi * rng.uniform(0, 1, 64))
    for _ in range(10):
        p = random_poly(rng)
        d = np.abs(p.conjugate().eval_at(ring) - np.conj(p.eval_at(ring)))
        assert np.max(d) <= 1e-12 * (1.0 + p.l1_norm())


def test_pow():
    assert Z ** 0 == LaurentPoly.constant(1.0)
    assert Z ** 3 == LaurentPoly.monomial(3)
    with pytest.raises(PreconditionError):
        Z ** -1


def random_poly(rng, max_degree=4):
    n = int(rng.integers(1, 5))
    coeffs = {}
    for _ in range(n):
        e = int(rng.integers(-max_degree, max_degree + 1))
        coeffs[(e,)] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return LaurentPoly(1, coeffs)


# ---------------------------------------------------------------------------
# grids and winding


def test_eval_grid_fourth_roots():
    # smallest legal grid for z is 8; the fourth roots sit at alternate samples
    s = eval_grid(Z, 8).samples
    assert np.allclose(s[::2], [1.0, 1j, -1.0, -1j], atol=1e-15)


def test_eval_grid_constant():
    s = eval_grid(LaurentPoly.constant(2.5 - 1j), 8).samples
    assert np.all(s == 2.5 - 1j)


def test_eval_grid_cosine_extremes():
    s = eval_grid(Z + ZBAR, 360).samples
    assert np.max(np.abs(s.imag)) <= 1e-12
    assert abs(np.max(s.real) - 2.0) <= 1e-3
    assert abs(np.min(s.real) + 2.0) <= 1e-3


def test_eval_grid_too_coarse():
    with pytest.raises(PreconditionError):
        eval_grid(Z ** 3, 8)  # needs 4*(1+3)


def test_winding_oracles():
    assert winding(Z, 0.0) == 1
    assert winding(Z, 2.0) == 0
    assert winding(Z ** 2, 0.0) == 2
    assert winding(ZBAR, 0.0) == -1
    assert winding(Z + ZBAR, 1j) == 0


def test_winding_on_curve():
    with pytest.raises(OnCurveError) as exc:
        winding(Z, 1.0)
    assert exc.value.distance <= exc.value.tolerance


def test_winding_additive_under_products():
    cases = [
        (Z + 0.2, Z ** 2 + 3.0),
        (ZBAR + 0.1, Z + 0.2),
        (Z ** 2 + 0.5j, ZBAR ** 3 + 4.0),
    ]
    for a, b in cases:
        assert winding(a * b, 0.0) == winding(a, 0.0) + winding(b, 0.0)


def test_curve_tolerance_scales_with_grid():
    assert curve_tolerance(Z, 1024) == curve_tolerance(Z, 512) / 2.0


# ---------------------------------------------------------------------------
# sup norms


def test_sup_norm_shift():
    lo, up = sup_norm(Z)
    assert abs(lo - 1.0) <= 1e-12
    assert up == 1.0


def test_sup_norm_cosine():
    lo, up = sup_norm(Z + ZBAR, grid_size=720)
    assert abs(lo - 2.0) <= 1e-4
    assert up == 2.0


def test_sup_norm_analytic_cubic():
    lo, up = sup_norm(LaurentPoly.from_text("1 + z + z^2"), grid_size=720)
    assert abs(lo - 3.0) <= 1e-3
    assert up == 3.0


# ---------------------------------------------------------------------------
# convex hulls


def test_hull_square():
    h = conv_hull([1.0, 1j, -1.0, -1j])
    assert h.kind == "polygon"
    assert sorted(h.vertices.tolist(), key=lambda v: (v.real, v.imag)) == [
        (-1 + 0j),
        -1j,
        1j,
        (1 + 0j),
    ]
    assert h.membership(0.0, 1e-12)
    assert h.membership(0.49 + 0.49j, 1e-12)
    assert not h.membership(1.0 + 1.0j, 1e-6)


def test_hull_point_and_segment():
    p = conv_hull([2.0 + 1j])
    assert p.kind == "point" and p.membership(2.0 + 1j, 0.0)
    s = conv_hull([0.0, 1.0, 0.5])  # collinear
    assert s.kind == "segment"
    assert s.membership(0.25, 1e-12)
    assert abs(s.outside_distance(0.5 + 1j)[0] - 1.0) <= 1e-14
    with pytest.raises(PreconditionError):
        conv_hull([])


def lp_in_hull(points, lam):
    """Exact membership: feasibility of a convex combination."""
    a_eq = np.vstack([points.real, points.imag, np.ones(points.size)])
    res = linprog(
        np.zeros(points.size),
        A_eq=a_eq,
        b_eq=[lam.real, lam.imag, 1.0],
        bounds=[(0, None)] * points.size,
        method="highs",
    )
    return res.status == 0


def test_hull_membership_against_lp():
    rng = np.random.default_rng(53)
    pts = rng.uniform(-1, 1, 100) + 1j * rng.uniform(-1, 1, 100)
    h = conv_hull(pts)
    queries = rng.uniform(-1.5, 1.5, 50) + 1j * rng.uniform(-1.5, 1.5, 50)
    for q in queries:
        want = lp_in_hull(pts, q)
        got = h.membership(q, 1e-9)
        if got != want:
            # only a genuinely borderline point may disagree
            assert h.outside_distance(q)[0] <= 1e-7
        else:
            assert got == want


def test_hull_membership_one_sided_safety():
    # points on the boundary itself are never rejected
    h = conv_hull([1.0, 1j, -1.0, -1j])
    for t in np.linspace(0.0, 1.0, 11):
        edge_point = (1 - t) * 1.0 + t * 1j
        assert h.membership(edge_point, 1e-9)


def test_hull_large_set_qhull_path():
    rng = np.random.default_rng(59)
    pts = np.exp(2j * np.pi * rng.uniform(0, 1, 60001))
    h = conv_hull(pts)
    assert h.kind == "polygon"
    assert np.max(np.abs(np.abs(h.vertices) - 1.0)) <= 1e-12
    assert h.membership(0.0, 1e-9)


# ---------------------------------------------------------------------------
# text format


def test_parse_examples():
    p = LaurentPoly.from_text("2.5*z1^3*zbar2")
    assert p.nvars == 2
    assert p.coeff((3, -1)) == 2.5
    q = LaurentPoly.from_text("(1.5-2j)*z^2")
    assert q.coeff(2) == 1.5 - 2j
    r = LaurentPoly.from_text("z - z")
    assert r.is_zero()


def test_parse_terms_keeps_sides_apart():
    (t,) = parse_terms("z1*zbar1")
    assert t.zpow == (1,) and t.zbarpow == (1,)


def test_parse_errors():
    for bad in ("", "z0", "2*", "z^", "z^x", "(1+2j", "@", "+"):
        with pytest.raises(PreconditionError):
            LaurentPoly.from_text(bad)


def test_from_text_arity_checks():
    with pytest.raises(PreconditionError):
        LaurentPoly.from_text("z1*z2", nvars=1)
    assert LaurentPoly.from_text("3.0", nvars=2).nvars == 2


finite_complex = st.complex_numbers(
    allow_nan=False, allow_infinity=False, allow_subnormal=False, max_magnitude=1e6
)


@settings(max_examples=200, deadline=None)
@given(st.dictionaries(st.integers(-8, 8), finite_complex, max_size=6))
def test_text_round_trip(coeffs):
    p = LaurentPoly(1, coeffs)
    assert LaurentPoly.from_text(p.to_text(), nvars=1) == p


@settings(max_examples=100, deadline=None)
@given(
    st.dictionaries(
        st.tuples(st.integers(-5, 5), st.integers(-5, 5)), finite_complex, max_size=5
    )
)
def test_text_round_trip_two_vars(coeffs):
    p = LaurentPoly(2, coeffs)
    assert LaurentPoly.from_text(p.to_text(), nvars=2) == p


# ---------------------------------------------------------------------------
# coordinate multifunctions


def test_circle_coordinates_partition():
    f = circle_coordinates()
    assert f.partition_defect() <= 1e-12


def test_sphere_coordinates_partition():
    f = sphere_coordinates(3)
    assert f.domain == "sphere"
    assert f.partition_defect() <= 1e-12


def test_torus_coordinates_scaled():
    f = torus_coordinates(2)
    assert abs(f.gamma - math.sqrt(2)) <= 1e-15
    assert f.partition_defect() <= 1e-12


def test_multifunction_rejects_bad_partition():
    with pytest.raises(PreconditionError):
        SphericalMultifunction([Z * 2.0], "circle")
    with pytest.raises(PreconditionError):
        SphericalMultifunction([Z], "elsewhere")
    with pytest.raises(PreconditionError):
        SphericalMultifunction([], "circle")
