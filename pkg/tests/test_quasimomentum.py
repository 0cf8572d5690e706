import cmath
import math

import pytest

from nanoband.quasimomentum import (comb_map, k_eval, verify_deep_asymptotics,
                                    verify_kprime_squared)
from nanoband.spectrum import MagneticConfig, bare_cosh_heights, xi


def test_k_value_in_first_band(zero_q):
    cfg = MagneticConfig(a=0.0)
    k = k_eval(zero_q, cfg, (math.pi / 3) ** 2)
    assert abs(k.imag) < 1e-14
    assert abs(k.real - math.acos(-0.6875)) < 1e-12


def test_k_at_edges_and_critical(two_step, structure_factory):
    cfg = MagneticConfig(a=0.9)
    bs = structure_factory(two_step, cfg, 6)
    assert abs(k_eval(two_step, cfg, bs.minus[0], bs=bs) - math.pi) < 1e-6
    k_crit = k_eval(two_step, cfg, bs.critical[0], bs=bs)
    assert abs(k_crit.real - math.pi) < 1e-12
    assert abs(k_crit.imag - bs.heights[0]) < 1e-12
    k2 = k_eval(two_step, cfg, bs.critical[1], bs=bs)
    assert abs(k2 - (2 * math.pi + 1j * bs.heights[1])) < 1e-12


def test_cos_of_k_reproduces_discriminant(two_step, structure_factory):
    cfg = MagneticConfig(a=math.pi / 5)
    bs = structure_factory(two_step, cfg, 14)
    lam = bs.lambda0 - 3.0
    while lam < bs.minus[13]:
        k = k_eval(two_step, cfg, lam, bs=bs)
        v, _ = xi(two_step, cfg, lam)
        assert abs(cmath.cos(k) - v) < 1e-10 * max(1.0, abs(v))
        lam += 0.37


def test_k_monotone_on_bands_and_gap_profile(two_step, structure_factory):
    cfg = MagneticConfig(a=0.9)
    bs = structure_factory(two_step, cfg, 4)
    lo, hi = bs.band(2)
    samples = [k_eval(two_step, cfg, lo + (hi - lo) * i / 40, bs=bs).real
               for i in range(1, 40)]
    assert all(a < b for a, b in zip(samples, samples[1:]))
    # on a gap, Im k rises to the critical point then falls
    glo, ghi = bs.gap(2)
    ims = [k_eval(two_step, cfg, glo + (ghi - glo) * i / 20, bs=bs).imag
           for i in range(1, 20)]
    top = max(range(len(ims)), key=lambda i: ims[i])
    assert all(a < b for a, b in zip(ims[:top], ims[1:top + 1]))
    assert all(a > b for a, b in zip(ims[top:], ims[top + 1:]))
    assert max(ims) <= bs.heights[1] + 1e-12


def test_free_height_alternation(zero_q, structure_factory):
    cfg = MagneticConfig(a=math.pi / 5)
    bs = structure_factory(zero_q, cfg, 12)
    ch_even, ch_odd = bare_cosh_heights(cfg.c_abs)
    for n in range(1, 13):
        ref = ch_even if n % 2 == 0 else ch_odd
        assert abs(math.cosh(bs.heights[n - 1]) - ref) < 1e-10


def test_heights_stay_order_one(two_step, structure_factory):
    # the nanotube comb is only bounded (heights approach the bare
    # alternating values instead of decaying like the Hill comb)
    cfg = MagneticConfig(a=math.pi / 5)
    bs = structure_factory(two_step, cfg, 40)
    ch_even, ch_odd = bare_cosh_heights(cfg.c_abs)
    bare_max = math.acosh(max(ch_even, ch_odd))
    tail = bs.heights[19:]
    assert max(tail) < 1.5 * bare_max
    assert min(tail) > 0.25 * math.acosh(min(ch_even, ch_odd))
    far = [abs(math.cosh(bs.heights[n - 1])
               - (ch_even if n % 2 == 0 else ch_odd)) for n in (10, 40)]
    assert far[1] < far[0]


def test_real_part_vanishes_below_spectrum(two_step):
    # the comb convention forces k into the imaginary axis on the ray
    # below the spectrum; any real additive constant is excluded
    cfg = MagneticConfig(a=0.9)
    for y in (3.0, 10.0, 50.0):
        k = k_eval(two_step, cfg, -y * y)
        assert k.real == 0.0
        assert k.imag > 2.0 * y


def test_deep_asymptotics_constant_free_case(zero_q):
    rep = verify_deep_asymptotics(zero_q, MagneticConfig(a=0.0),
                                  [25.0, 50.0, 100.0, 200.0])
    assert rep.resolved == "log(9/(8c))"
    assert abs(rep.const_fit - math.log(9.0 / 8.0)) < 1e-10
    assert abs(rep.shift) < 1e-12


@pytest.mark.parametrize("a", [math.pi / 3, math.pi / 5])
def test_deep_asymptotics_c_dependence_probe(two_step, a):
    # the candidate readings differ in their c-dependence; the fit picks
    # log(9/(8c)) at every phase, rejecting the doubled and c^2 variants
    cfg = MagneticConfig(a=a)
    rep = verify_deep_asymptotics(two_step, cfg, [50.0, 100.0, 200.0])
    assert rep.resolved == "log(9/(8c))"
    target = math.log(9.0 / (8.0 * cfg.c_abs))
    assert abs(rep.const_fit - target) < 1e-4
    others = [v for name, v in rep.candidates if name != rep.resolved]
    assert all(abs(rep.const_fit - v) > 100 * abs(rep.const_fit - target)
               for v in others)


def test_deep_asymptotics_residual_decay(two_step):
    cfg = MagneticConfig(a=math.pi / 5)
    rep = verify_deep_asymptotics(two_step, cfg, [10.0, 20.0, 40.0, 80.0])
    assert rep.residuals[0] > rep.residuals[-1]
    assert rep.decay_exponent < -1.5


def test_kprime_squared_free_case(zero_q):
    rep = verify_kprime_squared(zero_q, MagneticConfig(a=0.0),
                                [-1e4, -1e3])
    assert abs(rep.recovered_q0) < 1e-3
    assert rep.target_q0 == 0.0


def test_kprime_squared_recovers_mean(two_step_mean_one):
    rep = verify_kprime_squared(two_step_mean_one, MagneticConfig(a=math.pi / 5),
                                [-1e4, -1e3])
    assert rep.target_q0 == 1.0
    assert rep.relative_error < 0.05


def test_kprime_squared_shift_covariance(two_step):
    # shifting the potential by a constant moves the recovered limit by
    # exactly that constant (the combination tracks the raw mean)
    cfg = MagneticConfig(a=0.9)
    base = verify_kprime_squared(two_step, cfg, [-1e4])
    shifted = verify_kprime_squared(two_step.shifted(2.0), cfg, [-1e4])
    assert abs((shifted.recovered_q0 - base.recovered_q0) - 2.0) < 1e-3


def test_kprime_squared_rejects_nonnegative_points(zero_q):
    with pytest.raises(ValueError):
        verify_kprime_squared(zero_q, MagneticConfig(a=0.0), [-5.0, 1.0])


def test_comb_map_wrapper(two_step):
    cm = comb_map(two_step, MagneticConfig(a=0.9), 5)
    assert len(cm.heights) == 5
    k = cm(cm.bs.critical[0])
    assert abs(k.imag - cm.heights[0]) < 1e-12
