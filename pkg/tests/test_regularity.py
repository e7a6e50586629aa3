import math
from fractions import Fraction

import pytest

from holed_entropy import (CustomFamily, Hole, InvalidParameterError,
                           LeftHoleFamily, Scalar, SlidingHoleFamily, SweepSpec,
                           build_d_adic, emit_csv, emit_svg_plot, hole_dist,
                           holder_estimate, run_sweep, verify_holder_bound)
from holed_entropy.regularity import entropy_at

LOG2 = math.log(2)
LOG_GOLDEN = math.log((1 + math.sqrt(5)) / 2)


def F(n, d=1):
    return Fraction(n, d)


# -- families -----------------------------------------------------------------

def test_left_family_lipschitz_in_hole_distance():
    fam = LeftHoleFamily()
    for s, t in [(F(5, 8), F(3, 4)), (F(11, 16), F(7, 8))]:
        d = hole_dist(fam.hole(s), fam.hole(t)).value
        assert d == abs(s - t)


def test_sliding_family_distance():
    fam = SlidingHoleFamily(F(1, 12))
    # symmetric difference doubles small shifts and saturates at 2w
    for s, t in [(F(1, 4), F(1, 4) + F(1, 100)), (F(1, 8), F(1, 8) + F(1, 50))]:
        d = hole_dist(fam.hole(s), fam.hole(t)).value
        assert d == 2 * min(abs(s - t), F(1, 12))
    far = hole_dist(fam.hole(F(1, 8)), fam.hole(F(1, 2))).value
    assert far == 2 * F(1, 12)


def test_family_admissibility():
    assert LeftHoleFamily().admissible(F(3, 4))
    assert not LeftHoleFamily().admissible(F(1, 2))
    fam = SlidingHoleFamily(F(1, 12))
    assert fam.admissible(F(3, 4))
    assert not fam.admissible(F(12, 13))


# -- grids / sweeps --------------------------------------------------------------

def test_grid_generation_exact():
    spec = SweepSpec(LeftHoleFamily(), F(11, 20), F(19, 20), 5)
    assert spec.grid() == [F(11, 20), F(13, 20), F(3, 4), F(17, 20), F(19, 20)]


def test_grid_extra_points_merged():
    spec = SweepSpec(LeftHoleFamily(), F(7, 10), F(4, 5), 3,
                     extra_points=(F(3, 4), F(29, 40)))
    g = spec.grid()
    assert F(3, 4) in g and F(29, 40) in g
    assert g == sorted(set(g))


def test_grid_degenerate_two_points():
    spec = SweepSpec(LeftHoleFamily(), F(3, 5), F(4, 5), 2)
    res = run_sweep(spec)
    assert len(res.rows) == 2


def test_sweep_left_hole_monotone_kneading():
    spec = SweepSpec(LeftHoleFamily(), F(9, 16), F(15, 16), 33, engine="kneading")
    res = run_sweep(spec)
    hs = res.entropies()
    assert len(hs) == 33
    for h1, h2 in zip(hs, hs[1:]):
        assert h1 <= h2 + 1e-10
    assert all(0 <= h <= LOG2 + 1e-12 for h in hs)


def test_sweep_rows_sorted_and_ok():
    spec = SweepSpec(LeftHoleFamily(), F(5, 8), F(7, 8), 9, engine="markov")
    res = run_sweep(spec)
    ss = [r.s for r in res.rows]
    assert ss == sorted(ss)
    assert all(r.status == "ok" for r in res.rows)
    assert all(r.p is not None for r in res.rows)


def test_sweep_engine_cross_agreement():
    spec_k = SweepSpec(LeftHoleFamily(), F(9, 16), F(7, 8), 17, engine="kneading")
    spec_m = SweepSpec(LeftHoleFamily(), F(9, 16), F(7, 8), 17, engine="markov")
    hk = run_sweep(spec_k).entropies()
    hm = run_sweep(spec_m).entropies()
    assert max(abs(a - b) for a, b in zip(hk, hm)) < 1e-9
    spec_o = SweepSpec(LeftHoleFamily(), F(9, 16), F(7, 8), 9, engine="oracle",
                       engine_params={"n": 20})
    ho = run_sweep(spec_o).entropies()
    hk9 = run_sweep(SweepSpec(LeftHoleFamily(), F(9, 16), F(7, 8), 9)).entropies()
    assert max(abs(a - b) for a, b in zip(ho, hk9)) < 0.05


def test_sweep_flagged_rows_continue():
    # a custom family whose middle point is inadmissible for the markov engine
    m = build_d_adic(2)

    def mk_hole(s):
        if s == F(1, 2):
            # irrational-looking float hole: markov refuses float mode
            return Hole([(Scalar.approx(0.5), Scalar.approx(0.9))])
        return Hole([(Scalar.exact(s), Scalar.exact(1))])

    fam = CustomFamily(m, mk_hole, name="mixed")
    spec = SweepSpec(fam, F(1, 2), F(3, 4), 3, engine="markov")
    res = run_sweep(spec)
    statuses = [r.status for r in res.rows]
    assert statuses[0].startswith("error:")
    assert statuses[1] == "ok" and statuses[2] == "ok"


def test_sweep_threads_deterministic():
    spec = SweepSpec(LeftHoleFamily(), F(5, 8), F(7, 8), 9, engine="kneading")
    r1 = run_sweep(spec, threads=1)
    r4 = run_sweep(spec, threads=4)
    assert [(r.s, r.entropy) for r in r1.rows] == [(r.s, r.entropy) for r in r4.rows]


def test_sliding_sweep_dip_at_three_quarters():
    fam = SlidingHoleFamily(F(1, 12))
    spec = SweepSpec(fam, F(7, 10), F(4, 5), 17, engine="markov",
                     extra_points=(F(3, 4),))
    res = run_sweep(spec)
    by_s = {r.s: r.entropy for r in res.rows}
    grid = sorted(by_s)
    i = grid.index(F(3, 4))
    assert by_s[F(3, 4)] < by_s[grid[i - 1]]
    assert by_s[F(3, 4)] < by_s[grid[i + 1]]


# -- regularity estimation ---------------------------------------------------------

SCALES = [Fraction(1, 2 ** k) for k in range(6, 17)]


def test_holder_estimate_left_hole():
    est = holder_estimate(LeftHoleFamily(), F(3, 4), 1, LOG2, SCALES)
    assert abs(est.alpha_target - LOG_GOLDEN / LOG2) < 1e-12
    assert est.fitted_exponent is not None
    assert abs(est.fitted_exponent - est.alpha_target) < 0.1
    assert not est.locally_constant
    assert est.constant > 0
    assert len(est.constant_per_mesh) == len(SCALES)


def test_holder_estimate_deterministic():
    e1 = holder_estimate(LeftHoleFamily(), F(3, 4), 1, LOG2, SCALES)
    e2 = holder_estimate(LeftHoleFamily(), F(3, 4), 1, LOG2, SCALES)
    assert e1 == e2


def test_holder_estimate_double_pole_target():
    fam = SlidingHoleFamily(F(1, 12))
    est = holder_estimate(fam, F(3, 4), 2, LOG2, SCALES[:4], engine="markov")
    assert abs(est.alpha_target - LOG_GOLDEN / (2 * LOG2)) < 1e-12
    assert round(est.alpha_target, 4) == 0.3471


def test_holder_zero_entropy_gate():
    # at h(t) = 0 the machinery is skipped: alpha 0, no constants.
    # hole [s, 1] with s < 1/2 leaves a single survivor component per level.
    fam = CustomFamily(build_d_adic(2),
                       lambda s: Hole([(Scalar.exact(s), Scalar.exact(1))]))
    est = holder_estimate(fam, F(1, 4), 1, LOG2,
                          [F(1, 64), F(1, 128)], engine="oracle",
                          engine_params={"n": 12})
    assert est.alpha_target == 0.0
    assert est.fitted_exponent is None


def test_verify_holder_bound_passes_at_target():
    rep = verify_holder_bound(LeftHoleFamily(), F(3, 4), 1, LOG2, SCALES)
    assert rep.passed
    assert rep.stability_ratio is not None and rep.stability_ratio <= 4


def test_verify_holder_bound_fails_when_inflated():
    rep = verify_holder_bound(LeftHoleFamily(), F(3, 4), 1, LOG2, SCALES,
                              exponent_offset=0.3)
    assert not rep.passed
    assert rep.stability_ratio > 4


def test_verify_requires_positive_entropy():
    fam = CustomFamily(build_d_adic(2),
                       lambda s: Hole([(Scalar.exact(s), Scalar.exact(1))]))
    with pytest.raises(InvalidParameterError):
        verify_holder_bound(fam, F(1, 4), 1, LOG2, [F(1, 64), F(1, 128)],
                            engine="oracle", engine_params={"n": 10})


def test_scales_must_decrease():
    with pytest.raises(InvalidParameterError):
        holder_estimate(LeftHoleFamily(), F(3, 4), 1, LOG2, [F(1, 64), F(1, 32)])


def test_entropy_at_engine_mismatch():
    with pytest.raises(InvalidParameterError):
        entropy_at(SlidingHoleFamily(F(1, 12)), F(3, 4), "kneading")


# -- emitters ------------------------------------------------------------------------

def test_emit_csv(tmp_path):
    spec = SweepSpec(LeftHoleFamily(), F(5, 8), F(7, 8), 5, engine="kneading")
    res = run_sweep(spec)
    path = tmp_path / "sweep.csv"
    emit_csv(res, str(path))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "s,s_exact,entropy,p,engine,error_bound,status"
    assert len(lines) == 6
    assert ",5/8," in lines[1] and lines[1].endswith("ok")


def test_emit_csv_flagged_rows(tmp_path):
    m = build_d_adic(2)
    fam = CustomFamily(
        m, lambda s: Hole([(Scalar.approx(float(s)), Scalar.approx(1.0))]))
    res = run_sweep(SweepSpec(fam, F(5, 8), F(3, 4), 2, engine="markov"))
    path = tmp_path / "flagged.csv"
    emit_csv(res, str(path))
    body = path.read_text().strip().splitlines()[1:]
    assert all("error:NotFinitelyMarkovError" in line for line in body)


def test_emit_csv_refuses_empty(tmp_path):
    from holed_entropy.regularity import SweepResult
    with pytest.raises(InvalidParameterError):
        emit_csv(SweepResult([], {}), str(tmp_path / "x.csv"))


def test_emit_svg(tmp_path):
    spec = SweepSpec(LeftHoleFamily(), F(5, 8), F(7, 8), 9, engine="kneading")
    res = run_sweep(spec)
    path = tmp_path / "plot.svg"
    emit_svg_plot(res, str(path), style={"title": "left-hole entropy"})
    text = path.read_text()
    assert text.startswith("<svg")
    assert 'viewBox="0 0 800 600"' in text
    assert "<polyline" in text
    assert "left-hole entropy" in text


def test_emit_svg_refuses_empty(tmp_path):
    from holed_entropy.regularity import SweepResult
    with pytest.raises(InvalidParameterError):
        emit_svg_plot(SweepResult([], {}), str(tmp_path / "x.svg"))
