import numpy as np
import pytest

from mirror_born.grid import make_grid, to_momentum
from mirror_born.states import PacketSpec, gaussian_packet


@pytest.fixture
def grid1024():
    return make_grid(1024, -20.0, 20.0)


@pytest.fixture
def stationary(grid1024):
    return gaussian_packet(PacketSpec(0.0, 0.0, 1.0), grid1024)


@pytest.fixture
def stationary_p(stationary):
    return to_momentum(stationary)


def single_bin(g, rep, index, value=1.0):
    from mirror_born.grid import WaveFunction, normalize

    amp = np.zeros(g.n, dtype=complex)
    amp[index] = value
    return normalize(WaveFunction(g, rep, amp))
