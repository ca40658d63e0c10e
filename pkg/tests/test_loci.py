import numpy as np
import pytest

from grassgeo import loci, manifold as mf
from grassgeo.errors import ChartEscapeError, ConsistencyError


def _cut_plane(rng, n, m):
    rows = mf.hat_basis(mf.haar_random_chart(n, m, rng))
    w = np.zeros(n + m, dtype=complex)
    w[n:] = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    rows[n - 1] = w / np.linalg.norm(w)
    return mf.Plane(rows)


# ------------------------------------------------------------ symbols, flags

def test_symbol_validation():
    loci.SchubertSymbol(w=(0, 1, 1), m=2)
    with pytest.raises(ValueError):
        loci.SchubertSymbol(w=(1, 0), m=2)
    with pytest.raises(ValueError):
        loci.SchubertSymbol(w=(0, 3), m=2)
    with pytest.raises(ValueError):
        loci.SchubertSymbol(w=(), m=2)


def test_symbol_codimension():
    assert loci.SchubertSymbol(w=(2, 2), m=2).codimension() == 0
    assert loci.SchubertSymbol(w=(0, 1), m=2).codimension() == 3


def test_jumps_examples():
    assert loci.jumps(loci.SchubertSymbol(w=(0, 1, 1), m=2)) == (1, 3)
    assert loci.jumps(loci.SchubertSymbol(w=(2, 2), m=2)) == (2,)
    assert loci.jumps(loci.SchubertSymbol(w=(0, 1, 2), m=2)) == (1, 2, 3)


def test_v_pl_symbols():
    assert loci.v_pl_symbol(2, 1, 2, 2).w == (1, 2)
    assert loci.v_pl_symbol(3, 2, 2, 2).w == (1, 1)
    assert loci.v_pl_symbol(2, 1, 2, 2).w == loci.cut_locus_symbol(2, 2).w
    with pytest.raises(ValueError):
        loci.v_pl_symbol(5, 1, 2, 2)


def test_flag_orders():
    sym = loci.SchubertSymbol(w=(1, 2), m=2)
    assert loci.flag_order(sym, "standard") == (0, 1, 2, 3)
    assert loci.flag_order(sym, "perp") == (2, 3, 0, 1)
    assert loci.flag_order(sym, "chart") == (2, 0, 3, 1)
    with pytest.raises(ValueError):
        loci.flag_order(sym, "random")


# ------------------------------------------------------------- membership

def test_origin_plane_is_in_every_standard_variety():
    origin = mf.base_plane(2, 2)
    for w in [(0, 0), (0, 1), (1, 2), (2, 2)]:
        sym = loci.SchubertSymbol(w=w, m=2)
        assert loci.schubert_membership(origin, sym, flag="standard")


def test_perp_flag_detects_planes_meeting_the_complement():
    # span(e3, e4) is the whole complement of the origin plane in C^4
    far = mf.Plane(np.array([[0, 0, 1, 0], [0, 0, 0, 1]], dtype=complex))
    sym = loci.cut_locus_symbol(2, 2)
    assert loci.schubert_membership(far, sym, flag="perp")
    assert not loci.schubert_membership(mf.base_plane(2, 2), sym, flag="perp")


def test_generic_plane_misses_proper_varieties():
    rng = np.random.default_rng(41)
    plane = mf.haar_random_plane(2, 2, rng)
    for w in [(0, 0), (0, 2), (1, 2)]:
        sym = loci.SchubertSymbol(w=w, m=2)
        assert not loci.schubert_membership(plane, sym, flag="standard")
    whole = loci.SchubertSymbol(w=(2, 2), m=2)
    assert loci.schubert_membership(plane, whole, flag="standard")


@pytest.mark.parametrize("w", [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2)])
def test_staircase_samples_belong_to_their_variety(w):
    rng = np.random.default_rng(sum(w) + 101)
    sym = loci.SchubertSymbol(w=w, m=2)
    for _ in range(5):
        sample = loci.schubert_generic_sample(sym, rng, flag="chart")
        assert loci.schubert_membership(sample, sym, flag="chart")


def test_staircase_sample_rectangular():
    sym = loci.SchubertSymbol(w=(1, 3), m=4)
    sample = loci.schubert_generic_sample(sym, seed=7, flag="chart")
    assert sample.basis.shape == (2, 6)
    assert loci.schubert_membership(sample, sym, flag="chart")


# --------------------------------------------------------------- cut locus

def test_cut_locus_test_on_constructed_and_random_planes():
    rng = np.random.default_rng(42)
    for _ in range(10):
        verdict = loci.cut_locus_test(_cut_plane(rng, 2, 2))
        assert verdict.in_locus
        assert verdict.pairing_abs < 1e-10
        assert verdict.max_angle == pytest.approx(np.pi / 2, abs=1e-7)
    for _ in range(10):
        verdict = loci.cut_locus_test(mf.haar_random_plane(2, 2, rng))
        assert not verdict.in_locus


def test_cut_routes_agree_with_schubert_and_cayley():
    rng = np.random.default_rng(43)
    sym = loci.cut_locus_symbol(2, 3)
    for k in range(20):
        plane = _cut_plane(rng, 2, 3) if k % 2 == 0 else mf.haar_random_plane(2, 3, rng)
        expect = loci.cut_locus_test(plane).in_locus
        assert loci.cayley_cut_check(plane) == expect
        assert loci.schubert_membership(plane, sym, flag="perp") == expect


def test_cut_time_equal_entries():
    d = loci.CartanDirection(np.array([1.0, 1.0]) / np.sqrt(2.0))
    assert loci.cut_time(d) == pytest.approx(2.221441469079183, rel=1e-12)


def test_cut_time_reaches_the_locus():
    d = loci.CartanDirection(np.array([0.8, 0.6]))
    tc = loci.cartan_to_tangent(d, 2, 2)
    plane = mf.geodesic_group(tc, loci.cut_time(d))
    assert loci.cut_locus_test(plane).in_locus


# --------------------------------------------------------- conjugate radii

def test_worked_direction_radius_table():
    d = loci.CartanDirection(np.array([0.8, 0.6]))
    params = loci.tangent_conjugate_params(d, 2, 2, lambda_max=2)
    got = [(c.family, c.lam, round(c.t, 4)) for c in params]
    assert got == [
        ("t2", 1, 1.9635),
        ("t1plus", 1, 2.244),
        ("t2", 1, 2.618),
        ("t2", 2, 3.927),
        ("t1plus", 2, 4.488),
        ("t2", 2, 5.236),
        ("t1minus", 1, 15.708),
        ("t1minus", 2, 31.4159),
    ]
    assert all(c.multiplicity == 2 for c in params if c.family.startswith("t1"))
    assert all(c.multiplicity == 1 for c in params if c.family == "t2")


def test_rectangular_direction_has_t3_family():
    d = loci.CartanDirection(np.array([0.5]))
    params = loci.tangent_conjugate_params(d, 1, 2, lambda_max=1)
    fams = {c.family: c for c in params}
    assert set(fams) == {"t2", "t3"}
    assert fams["t3"].t == pytest.approx(2 * np.pi, rel=1e-12)
    assert fams["t3"].multiplicity == 2
    square = loci.tangent_conjugate_params(d, 1, 1, lambda_max=1)
    assert all(c.family != "t3" for c in square)


def test_equal_entries_drop_the_difference_family():
    d = loci.CartanDirection(np.array([0.7, 0.7]))
    params = loci.tangent_conjugate_params(d, 2, 2, lambda_max=2)
    assert all(c.family != "t1minus" for c in params)


def test_coverage_limit_worked_direction():
    d = loci.CartanDirection(np.array([0.8, 0.6]))
    assert loci.coverage_limit(d, 2, 2, lambda_max=2) == pytest.approx(
        3 * np.pi / 1.6, rel=1e-12)


def test_direction_validation():
    with pytest.raises(ValueError):
        loci.CartanDirection(np.array([0.3, 0.8]))
    with pytest.raises(ValueError):
        loci.CartanDirection(np.array([0.8, -0.1]))
    with pytest.raises(ValueError):
        loci.cartan_to_tangent(loci.CartanDirection(np.array([1.0, 0.5, 0.2])), 2, 2)


def test_cartan_to_tangent_embeds_diagonal():
    d = loci.CartanDirection(np.array([0.8, 0.6]))
    tc = loci.cartan_to_tangent(d, 2, 3)
    want = np.array([[0.8, 0, 0], [0, 0.6, 0]], dtype=complex)
    assert np.array_equal(tc.b, want)


# ------------------------------------------------------------ the Jacobian

def test_jacobian_collapses_at_radius_and_not_between():
    d = loci.CartanDirection(np.array([0.8, 0.6]))
    tc = loci.cartan_to_tangent(d, 2, 2)
    at_radius = loci.conjugate_test_jacobian(tc, np.pi / 1.4)
    assert at_radius.is_conjugate
    assert at_radius.ratio < 1e-6
    mid = 0.5 * (1.9635 + 2.244)
    between = loci.conjugate_test_jacobian(tc, mid)
    assert not between.is_conjugate
    assert between.ratio > 1e-2


def test_jacobian_scalar_case():
    tc = mf.TangentCoord(np.array([[1.0 + 0j]]))
    for t in (0.3, 0.8, 1.2, 2.0, 2.8):
        assert not loci.conjugate_test_jacobian(tc, t).is_conjugate
    # a full half-turn of the singular value collapses the phase direction
    assert loci.conjugate_test_jacobian(tc, np.pi).is_conjugate


def test_jacobian_refuses_pole_adjacent_times():
    tc = mf.TangentCoord(np.array([[1.0 + 0j]]))
    with pytest.raises(ChartEscapeError):
        loci.conjugate_test_jacobian(tc, np.pi / 2)


def test_noncompact_jacobian_never_collapses():
    rng = np.random.default_rng(44)
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b *= 0.5 / np.linalg.norm(b)
    tc = mf.TangentCoord(b, signature="noncompact")
    for t in (0.5, 1.5, 2.5, 3.0):
        assert loci.conjugate_test_jacobian(tc, t).ratio > 1e-1


# -------------------------------------------------------------- classifier

def test_classify_interior_at_pair_radius():
    d = loci.CartanDirection(np.array([0.8, 0.6]))
    tc = loci.cartan_to_tangent(d, 2, 2)
    verdict = loci.classify_conjugate(tc, np.pi / 1.4)
    assert verdict.label == "interior"
    top = verdict.angles.angles[:2]
    assert top[0] == pytest.approx(top[1], abs=1e-9)
    assert top[0] == pytest.approx(np.pi * 0.6 / 1.4, abs=1e-9)
    assert verdict.jacobian_ratio < 1e-6


def test_classify_wong_at_half_period():
    d = loci.CartanDirection(np.array([0.8, 0.6]))
    tc = loci.cartan_to_tangent(d, 2, 2)
    verdict = loci.classify_conjugate(tc, np.pi / 1.6)
    assert verdict.label == "wong"
    assert verdict.angles.max_angle == pytest.approx(np.pi / 2, abs=1e-9)
    # the chart form has a pole here, so no Jacobian reading is possible
    assert np.isnan(verdict.jacobian_ratio)


def test_classify_wong_when_an_angle_returns_to_zero():
    d = loci.CartanDirection(np.array([0.8, 0.6]))
    tc = loci.cartan_to_tangent(d, 2, 2)
    verdict = loci.classify_conjugate(tc, np.pi / 0.8)
    assert verdict.label == "wong"
    assert verdict.angles.angles[-1] == pytest.approx(0.0, abs=1e-9)


def test_classify_generic_time_is_none():
    d = loci.CartanDirection(np.array([0.8, 0.6]))
    tc = loci.cartan_to_tangent(d, 2, 2)
    assert loci.classify_conjugate(tc, 0.9).label == "none"


def test_consistency_error_when_routes_disagree():
    # force the disagreement path with an absurd angle tolerance
    rng = np.random.default_rng(45)
    plane = mf.haar_random_plane(2, 2, rng)
    with pytest.raises(ConsistencyError):
        loci.cut_locus_test(plane, angle_tol=np.pi / 2)
