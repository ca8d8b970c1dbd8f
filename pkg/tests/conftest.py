import numpy as np
import pytest

from cghzsim import CsState, normalize, state_norm


def random_complex(rng, n, max_mag):
    """n complex numbers uniform in the disk of radius max_mag."""
    r = max_mag * np.sqrt(rng.uniform(0, 1, n))
    phi = rng.uniform(0, 2 * np.pi, n)
    return r * np.exp(1j * phi)


def random_state(rng, max_terms=64, modes=None, max_amp=4.0,
                 normalized=False):
    """Random coherent superposition; coefficients bounded by 1."""
    t = rng.integers(1, max_terms + 1)
    m = modes if modes is not None else int(rng.integers(1, 5))
    coeffs = random_complex(rng, t, 1.0)
    amps = random_complex(rng, t * m, max_amp).reshape(t, m)
    s = CsState(coeffs, amps)
    if normalized:
        if state_norm(s) < 1e-6:
            s = CsState(np.ones(1), amps[:1])
        s = normalize(s)
    return s


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
