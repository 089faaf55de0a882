import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirror_born.acceptance import BOOSTED_DEV_ORACLE, random_momentum_state
from mirror_born.grid import GridMismatchError, WaveFunction, make_grid, norm, normalize, to_momentum
from mirror_born.mirror import (
    CSV_HEADER,
    EdgeBinWarning,
    apparatus_image_segmentwise,
    born_compare,
    conjugate,
    joint_amplitude,
    mirror_csv,
    reflect,
    segment_exchange,
)
from mirror_born.oracles import gaussian_momentum, mirror_deviation_closed_form
from mirror_born.rng import SplitMix64
from mirror_born.states import PacketSpec, gaussian_packet, superpose

from conftest import single_bin


def _bin_at(g, p):
    return int(np.argmin(np.abs(g.p - p)))


def test_reflect_involution(stationary_p):
    psi = random_momentum_state(SplitMix64(1), 256)
    assert reflect(reflect(psi)) == psi
    assert norm(reflect(psi)) == pytest.approx(norm(psi), abs=1e-15)


def test_reflect_equals_conjugate_at_rest(stationary_p):
    assert np.max(np.abs(reflect(stationary_p).amp - conjugate(stationary_p).amp)) <= 1e-10


def test_reflect_single_bin(grid1024):
    j = _bin_at(grid1024, 2.0)
    out = reflect(single_bin(grid1024, "momentum", j))
    assert np.flatnonzero(out.amp).tolist() == [_bin_at(grid1024, -2.0)]
    assert grid1024.p[np.flatnonzero(out.amp)[0]] == -grid1024.p[j]


def test_reflect_requires_momentum(stationary):
    with pytest.raises(ValueError):
        reflect(stationary)


def test_edge_bin_warning(grid1024):
    psi = single_bin(grid1024, "momentum", 0)
    with pytest.warns(EdgeBinWarning):
        out = reflect(psi)
    assert out == psi
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        reflect(single_bin(grid1024, "momentum", 5))


def test_conjugate_basics(stationary):
    psi = random_momentum_state(SplitMix64(2), 256)
    assert conjugate(conjugate(psi)) == psi
    assert norm(conjugate(psi)) == norm(psi)
    real = psi.with_amp(psi.amp.real)
    assert conjugate(real) == real


def test_reflect_conjugate_commute():
    psi = random_momentum_state(SplitMix64(3), 512)
    assert reflect(conjugate(psi)) == conjugate(reflect(psi))


@pytest.mark.parametrize("n", [256, 1024, 4096])
def test_segmentwise_matches_exactly(n):
    gen = SplitMix64(n)
    for _ in range(5):
        psi = random_momentum_state(gen, n)
        assert np.array_equal(apparatus_image_segmentwise(psi).amp, reflect(conjugate(psi)).amp)


def test_segmentwise_stationary_is_itself(stationary_p):
    assert np.max(np.abs(apparatus_image_segmentwise(stationary_p).amp - stationary_p.amp)) <= 1e-10


def test_segmentwise_single_segment(grid1024):
    j = _bin_at(grid1024, 2.0)
    psi = single_bin(grid1024, "momentum", j, np.exp(1j * np.pi / 3))
    out = apparatus_image_segmentwise(psi)
    k = _bin_at(grid1024, -2.0)
    assert np.flatnonzero(out.amp).tolist() == [k]
    assert np.angle(out.amp[k]) == pytest.approx(-np.pi / 3)


def test_segment_exchange_examples():
    r = segment_exchange(0.3, 0.0, 1.0, 0.0)
    assert (r.dp_part, r.dp_ap) == (-0.3, 0.3)
    assert (r.dphi_part, r.dphi_ap) == (0.3, -0.3)
    r = segment_exchange(0.0, 0.0, 4.0, 2.0)
    assert all(v == 0 for v in (r.dp_part, r.dp_ap, r.dE_part, r.dE_ap, r.dphi_part, r.dphi_ap))
    r = segment_exchange(0.5, 0.125, 2.0, 1.0)
    assert r.dphi_part == 0.875 and r.dphi_ap == -0.875
    with pytest.raises(ValueError):
        segment_exchange(1, 1, 1, -1)


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(-1e3, 1e3), st.floats(0, 1e3))
def test_segment_exchange_conserves_exactly(dp, de, x, tau):
    r = segment_exchange(dp, de, x, tau)
    assert r.dp_part + r.dp_ap == 0
    assert r.dE_part + r.dE_ap == 0
    assert r.dphi_part + r.dphi_ap == 0


def test_joint_amplitude_cases(grid1024):
    psi = random_momentum_state(SplitMix64(4), 1024)
    field = joint_amplitude(psi, conjugate(psi))
    assert np.max(np.abs(field.imag)) <= 1e-15 and np.all(field.real >= 0)
    np.testing.assert_allclose(field.real, psi.density(), rtol=1e-14)

    quarter = psi.with_amp(1j * np.abs(psi.amp))
    same = joint_amplitude(quarter, quarter)
    np.testing.assert_allclose(same.real, -quarter.density(), rtol=1e-14)
    assert np.max(np.abs(same.imag)) <= 1e-15

    a, b = single_bin(grid1024, "momentum", 10), single_bin(grid1024, "momentum", 20)
    assert not np.any(joint_amplitude(a, b))
    with pytest.raises(GridMismatchError):
        joint_amplitude(a, single_bin(make_grid(512, -20, 20), "momentum", 3))


def test_born_compare_stationary(stationary_p):
    r = born_compare(stationary_p)
    assert r.holds and r.verdict == "holds"
    assert r.dev_reflect_conj <= 1e-10
    assert r.max_imag <= 1e-10 and r.dev_product <= 1e-10
    assert r.mirror_norm == pytest.approx(1.0, abs=1e-10)


def test_born_compare_boosted_against_oracle(grid1024):
    spec = PacketSpec(x0=0.0, p0=1.5, sigma_x=1.0)  # p0 = 3 sigma_p
    oracle = mirror_deviation_closed_form(grid1024.p, 0.0, 1.5, 1.0)
    assert oracle == pytest.approx(BOOSTED_DEV_ORACLE, abs=1e-15)
    r = born_compare(to_momentum(gaussian_packet(spec, grid1024)))
    assert r.verdict == "fails"
    assert r.dev_reflect_conj == pytest.approx(oracle, abs=1e-10)
    assert r.evenness_defect > 0.1 and r.dev_reflect_conj > 0.1


def test_born_compare_cosine_packet(grid1024):
    plus = gaussian_packet(PacketSpec(p0=2.0), grid1024)
    minus = gaussian_packet(PacketSpec(p0=-2.0), grid1024)
    mom = to_momentum(superpose([(1, plus), (1, minus)]))
    r = born_compare(mom)
    assert r.evenness_defect <= 1e-10
    # closed form: (g(p - 2) + g(p + 2)) / normalization is real and even, so reflection = conjugate
    ref = gaussian_momentum(grid1024.p, 0, 2, 1) + gaussian_momentum(grid1024.p, 0, -2, 1)
    ref = ref / np.sqrt(np.sum(np.abs(ref) ** 2) * grid1024.dp)
    oracle = np.max(np.abs(ref[::-1][np.r_[-1, :1023]] - np.conj(ref)))
    assert r.dev_reflect_conj == pytest.approx(oracle, abs=1e-10)
    assert r.dev_reflect_conj <= 1e-10


def test_born_compare_odd_phase_shift(grid1024):
    # off-centre packet at rest: even modulus, odd (linear) phase
    mom = to_momentum(gaussian_packet(PacketSpec(x0=3.3, p0=0.0, sigma_x=0.9), grid1024))
    r = born_compare(mom)
    assert r.holds and r.mirror_norm == pytest.approx(1.0, abs=1e-10)


def test_born_compare_tolerance_controls_verdict(grid1024):
    mom = to_momentum(gaussian_packet(PacketSpec(p0=0.01), grid1024))
    loose, tight = born_compare(mom, 1.0), born_compare(mom, 1e-12)
    assert loose.holds and not tight.holds
    assert loose.dev_reflect_conj == tight.dev_reflect_conj


@settings(max_examples=40, deadline=None)
@given(
    st.floats(1e-9, 1e-3),
    st.integers(0, 2**64 - 1),
    st.floats(-5, 5),
    st.floats(0.5, 2.0),
)
def test_defects_bound_product_error(eps, seed, shift, width):
    """Even modulus and odd phase, each broken by at most eps, keep P within 10 eps of |psi|^2."""
    g = make_grid(512, -20.0, 20.0)
    p = g.p
    gen = SplitMix64(seed)
    modulus = np.exp(-(p**2) / (4 * width**2)) * (1 + eps * gen.uniform(-1, 1, g.n))
    phase = shift * p + np.sin(p) + eps * gen.uniform(-1, 1, g.n)
    amp = modulus * np.exp(1j * phase)
    amp[0] = 0.0
    psi = normalize(WaveFunction(g, "momentum", amp))
    r = born_compare(psi)
    idx = (g.n - np.arange(g.n)) % g.n
    odd_defect = np.max(np.abs(np.angle(np.exp(1j * (np.angle(psi.amp[idx]) + np.angle(psi.amp))))[1:]))
    defect = max(r.evenness_defect, odd_defect)
    assert r.max_imag <= 10 * defect
    assert r.dev_product <= 10 * defect


def test_csv_format(stationary_p):
    text = mirror_csv(stationary_p)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1025
    p, born, re, im = (float(v) for v in lines[513].split(","))
    assert p == stationary_p.nodes[512]
    assert born == stationary_p.density()[512]
    assert mirror_csv(stationary_p) == text
