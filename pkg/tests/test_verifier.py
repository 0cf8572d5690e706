import math

import pytest

from nanoband.spectrum import MagneticConfig
from nanoband.verifier import (check_comb_comparison, check_height_mass_gap,
                               check_merged_band_bound, check_monotonicity)


def test_height_mass_gap_passes_open_even_gap(zero_q, structure_factory,
                                              mass_factory):
    cfg = MagneticConfig(a=math.pi / 3)
    bs = structure_factory(zero_q, cfg, 8)
    mt = mass_factory(zero_q, cfg, 8)
    rep = check_height_mass_gap(bs, mt)
    assert rep.passed_all
    gap2 = [r for r in rep.records if r.n == 2 and not r.skipped]
    assert len(gap2) >= 18
    assert all(r.slack > 0 for r in gap2
               if "degenerate" not in r.name)


def test_height_mass_gap_degenerate_rows_trivial(zero_q, structure_factory):
    bs = structure_factory(zero_q, MagneticConfig(a=0.0), 6)
    rep = check_height_mass_gap(bs)
    deg = [r for r in rep.records if "degenerate" in r.name]
    assert {r.n for r in deg} == {2, 4, 6}
    assert all(r.passed for r in deg)


def test_height_mass_gap_sweeps(two_step, three_step, structure_factory,
                                mass_factory):
    for q in (two_step, three_step):
        for a in (math.pi / 5, 0.9):
            cfg = MagneticConfig(a=a)
            bs = structure_factory(q, cfg, 12)
            rep = check_height_mass_gap(bs, mass_factory(q, cfg, 12))
            assert rep.passed_all, [r for r in rep.failures]
            assert rep.worst_slack > -1e-9


def test_first_open_gap_mass_bound(two_step, structure_factory,
                                   mass_factory):
    cfg = MagneticConfig(a=0.9)
    bs = structure_factory(two_step, cfg, 6)
    rep = check_height_mass_gap(bs, mass_factory(two_step, cfg, 6))
    rec = [r for r in rep.records if r.name.startswith("-mu(first")]
    assert len(rec) == 1
    assert rec[0].n == 1 and rec[0].passed


def test_scaled_variables_attached(two_step, structure_factory):
    bs = structure_factory(two_step, MagneticConfig(a=0.9), 4)
    rep = check_height_mass_gap(bs)
    rec = next(r for r in rep.records if r.n == 1 and r.extras)
    keys = dict(rec.extras)
    # the scaled variables reproduce their defining identities
    shift = rep.shift
    zp, zm = keys["z_plus"], keys["z_minus"]
    assert abs(zp ** 2 - (bs.plus[0] - shift)) < 1e-10
    assert abs((zp + zm) * keys["gap_scaled"] - keys["gap"]) < 1e-12


def test_merged_band_bounds_no_field(zero_q, structure_factory,
                                     mass_factory):
    bs = structure_factory(zero_q, MagneticConfig(a=0.0), 9)
    rep = check_merged_band_bound(bs, mass_factory(zero_q, MagneticConfig(a=0.0), 9))
    assert rep.passed_all
    counts = [r for r in rep.records if r.name.startswith("merged components")]
    assert counts and all(r.lhs <= 2 for r in counts)


def test_merged_band_bounds_simple_bands(two_step, structure_factory,
                                         mass_factory):
    cfg = MagneticConfig(a=0.9)
    bs = structure_factory(two_step, cfg, 8)
    rep = check_merged_band_bound(bs, mass_factory(two_step, cfg, 8))
    assert rep.passed_all
    counts = [r for r in rep.records if r.name.startswith("merged components")]
    assert all(r.lhs == 1 for r in counts)


def test_monotonicity_zero_potential_equalities(zero_q):
    grid = [math.pi / 3 + i * 0.05 for i in range(4)]
    rep = check_monotonicity(zero_q, grid, n_max=10)
    assert rep.passed_all
    # the potential-comparison rows are exact equalities at q = 0
    for r in rep.records:
        if r.name.startswith("h0(a)"):
            assert abs(r.slack) < 1e-9


def test_monotonicity_heights_strictly_increase(zero_q):
    grid = [math.pi / 3, math.pi / 3 + 0.1, math.pi / 2 - 0.05]
    rep = check_monotonicity(zero_q, grid, n_max=8)
    assert rep.passed_all
    rows = [r for r in rep.records
            if r.name == "h(a) <= h(a1)" and not r.skipped]
    open_rows = [r for r in rows if r.lhs > 0 or r.rhs > 0]
    assert open_rows and all(r.slack > 0 for r in open_rows)


def test_monotonicity_two_step_sweep(two_step):
    grid = [math.pi / 3 + i * (math.pi / 2 - 0.05 - math.pi / 3) / 2
            for i in range(3)]
    rep = check_monotonicity(two_step, grid, n_max=10)
    assert rep.passed_all, rep.failures[:5]


def test_monotonicity_rejects_out_of_range_phase(zero_q):
    with pytest.raises(ValueError):
        check_monotonicity(zero_q, [0.2], n_max=4)


def test_comb_comparison_identical_structures(two_step, structure_factory):
    bs = structure_factory(two_step, MagneticConfig(a=0.9), 8)
    rep = check_comb_comparison(bs, bs)
    assert rep.passed_all
    assert not rep.skipped


def test_comb_comparison_ordered_phases(zero_q, structure_factory):
    b1 = structure_factory(zero_q, MagneticConfig(a=math.pi / 3), 10)
    b2 = structure_factory(zero_q, MagneticConfig(a=0.45 * math.pi), 10)
    rep = check_comb_comparison(b1, b2)
    assert rep.passed_all
    assert not rep.skipped


def test_comb_comparison_potential_pair(zero_q, two_step, structure_factory):
    cfg = MagneticConfig(a=math.pi / 3)
    b1 = structure_factory(zero_q, cfg, 10)
    b2 = structure_factory(two_step, cfg, 10)
    rep = check_comb_comparison(b1, b2)
    assert rep.passed_all
    assert not rep.skipped


def test_comb_comparison_hypothesis_violation_skips(zero_q,
                                                    structure_factory):
    # reversed pair: heights of the first dominate, hypothesis fails
    b1 = structure_factory(zero_q, MagneticConfig(a=0.45 * math.pi), 10)
    b2 = structure_factory(zero_q, MagneticConfig(a=math.pi / 3), 10)
    rep = check_comb_comparison(b1, b2)
    assert rep.skipped
    assert "hypothesis" in rep.skipped[0].note
    assert not any(r.name.startswith("|band2|") for r in rep.records)
