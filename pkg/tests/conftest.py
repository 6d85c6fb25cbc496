import pytest

from darkres import MediumParams, SystemParams

# Mercury-like decay ratios used throughout: gamma41 is the reference rate.
MERCURY = dict(gamma41=1.0, gamma42=0.79, gamma23=0.14)


@pytest.fixture
def undriven_coupling():
    """Pure Autler-Townes configuration: no perturbing field, weak 1->3
    decay added so the steady state is unique."""
    return SystemParams(g41=0.0, g42=4.0, g_p=1e-4, gamma13=0.01, **MERCURY)


@pytest.fixture
def spike_config():
    """Weak perturbing field switched on, 1->3 decay off: narrow absorption
    feature on top of the Autler-Townes profile."""
    return SystemParams(g41=0.04, g42=4.0, g_p=1e-4, gamma13=0.0, **MERCURY)


@pytest.fixture
def pumped_config(spike_config):
    """Spike configuration plus a weak incoherent pump: gain feature."""
    from dataclasses import replace

    return replace(spike_config, lambda_pump=4e-5)


@pytest.fixture
def mercury_medium():
    return MediumParams(
        number_density=1e18, probe_wavelength=253.7e-9, gamma23_over_gamma=0.14
    )
