import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirror_born.grid import (
    GridMismatchError,
    WaveFunction,
    inner,
    make_grid,
    norm,
    normalize,
    to_momentum,
    to_position,
)
from mirror_born.oracles import direct_dft, gaussian_momentum
from mirror_born.states import PacketSpec, gaussian_packet

from conftest import single_bin


def test_make_grid_small():
    g = make_grid(8, -4, 4)
    assert g.dx == 1.0
    assert g.dp == pytest.approx(2 * np.pi / 8, abs=1e-15)
    np.testing.assert_allclose(g.p, np.arange(-4, 4) * np.pi / 4, atol=1e-15)
    np.testing.assert_array_equal(g.x, np.arange(-4, 4, dtype=float))


@pytest.mark.parametrize("args", [(7, -4, 4), (6, -4, 4), (8, 4, 4), (8, 5, -5)])
def test_make_grid_rejects(args):
    with pytest.raises(ValueError):
        make_grid(*args)


@pytest.mark.parametrize("n,lo,hi", [(8, -4, 4), (1024, -20, 20), (4096, -3.7, 11.2), (10, 0, 1e-3)])
def test_reciprocity(n, lo, hi):
    g = make_grid(n, lo, hi)
    assert abs(g.dx * g.dp * g.n / (2 * np.pi) - 1) <= 1e-14
    assert np.all(np.diff(g.x) > 0)


def test_wavefunction_validates(grid1024):
    with pytest.raises(ValueError):
        WaveFunction(grid1024, "position", np.zeros(10))
    with pytest.raises(ValueError):
        WaveFunction(grid1024, "spin", np.zeros(1024))
    amp = np.zeros(1024, dtype=complex)
    amp[3] = np.nan
    with pytest.raises(ValueError):
        WaveFunction(grid1024, "position", amp)


def test_amplitudes_are_frozen(stationary):
    with pytest.raises(ValueError):
        stationary.amp[0] = 1.0


def test_transform_matches_direct_sum(grid1024):
    psi = gaussian_packet(PacketSpec(1.3, -0.7, 0.8), grid1024)
    fast = to_momentum(psi).amp
    slow = direct_dft(psi.amp, grid1024.x, grid1024.p, grid1024.dx)
    assert np.max(np.abs(fast - slow)) <= 1e-12


def test_transform_on_small_random_field():
    g = make_grid(16, -3.0, 5.0)
    rng = np.random.default_rng(3)
    psi = WaveFunction(g, "position", rng.normal(size=16) + 1j * rng.normal(size=16))
    np.testing.assert_allclose(to_momentum(psi).amp, direct_dft(psi.amp, g.x, g.p, g.dx), atol=1e-13)


def test_gaussian_fourier_pair(stationary, grid1024):
    mom = to_momentum(stationary)
    np.testing.assert_allclose(mom.amp, gaussian_momentum(grid1024.p, 0, 0, 1), atol=1e-12)
    assert grid1024.p[np.argmax(np.abs(mom.amp))] == 0.0
    sigma_p = np.sqrt(np.sum(grid1024.p**2 * mom.density()) * grid1024.dp)
    assert sigma_p == pytest.approx(0.5, rel=1e-10)


def test_momentum_gaussian_back_to_position(grid1024):
    mom = WaveFunction(grid1024, "momentum", gaussian_momentum(grid1024.p, 0, 0, 1))
    pos = to_position(normalize(mom))
    sigma_x = np.sqrt(np.sum(grid1024.x**2 * pos.density()) * grid1024.dx)
    assert sigma_x == pytest.approx(1.0, rel=1e-10)


def test_windowed_plane_wave_lands_on_its_bin(grid1024):
    k = 512 + 13
    p0 = grid1024.p[k]
    amp = np.exp(1j * p0 * grid1024.x)
    mom = to_momentum(WaveFunction(grid1024, "position", amp))
    assert np.argmax(np.abs(mom.amp)) == k
    others = np.delete(np.abs(mom.amp), k)
    assert np.max(others) <= 1e-10 * abs(mom.amp[k])


def test_single_momentum_bin_has_flat_position_modulus(grid1024):
    pos = to_position(single_bin(grid1024, "momentum", 600))
    mod = np.abs(pos.amp)
    assert np.max(mod) - np.min(mod) <= 1e-14


def test_representation_checks(stationary):
    with pytest.raises(ValueError):
        to_position(stationary)
    with pytest.raises(ValueError):
        to_momentum(to_momentum(stationary))


def test_norm_inner_normalize(stationary, grid1024):
    assert normalize(stationary.with_amp(2 * stationary.amp)).amp == pytest.approx(stationary.amp)
    assert inner(stationary, stationary) == pytest.approx(norm(stationary) ** 2, abs=1e-15)
    a = single_bin(grid1024, "position", 10)
    b = single_bin(grid1024, "position", 11)
    assert inner(a, b) == 0
    with pytest.raises(ValueError):
        normalize(a.with_amp(np.zeros(1024)))
    with pytest.raises(GridMismatchError):
        inner(a, to_momentum(b))
    with pytest.raises(GridMismatchError):
        inner(a, single_bin(make_grid(1024, -10, 10), "position", 3))


packets = st.builds(
    PacketSpec,
    x0=st.floats(-6, 6),
    p0=st.floats(-4, 4),
    sigma_x=st.floats(0.3, 1.5),
)


@settings(max_examples=40, deadline=None)
@given(packets, packets, st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3))
def test_transform_properties(spec_a, spec_b, a, b):
    g = make_grid(1024, -20.0, 20.0)
    psi, chi = gaussian_packet(spec_a, g), gaussian_packet(spec_b, g)
    mom = to_momentum(psi)
    assert abs(norm(psi) - norm(mom)) <= 1e-12
    assert np.max(np.abs(to_position(mom).amp - psi.amp)) <= 1e-12
    combo = to_momentum(psi.with_amp(a * psi.amp + b * chi.amp)).amp
    assert np.max(np.abs(combo - (a * mom.amp + b * to_momentum(chi).amp))) <= 1e-12
    assert abs(inner(psi, chi) - np.conj(inner(chi, psi))) <= 1e-14
