"""Exit criteria. Each runs at its stated tolerance and prints one PASS/FAIL line.

The PASS/FAIL table is printed in the terminal summary of every pytest run.
"""
import math

import pytest

from decoplate import selftest

RESULTS = []  # read by the terminal-summary hook in conftest.py

# raw CODATA 2018 values, typed in independently of decoplate.quantities
H = 6.62607015e-34
K_B = 1.380649e-23
E = 1.602176634e-19
M_E = 9.1093837015e-31


def test_frozen_hand_values_are_reproducible():
    z, rho, T, dx, L, v = 1e-4, 1e-6, 300.0, 1e-4, 1e-2, 1e3
    tau_r = 16 * math.pi * z**3 * M_E / (E**2 * rho)
    lam = H / math.sqrt(2 * M_E * K_B * T)
    tau_d = tau_r * (lam / dx) ** 2
    z_star = z * ((L / v) / tau_d) ** (1 / 3)
    assert tau_r == pytest.approx(selftest.HAND_TAU_R_ELECTRON, rel=1e-14)
    assert tau_d == pytest.approx(selftest.HAND_TAU_D, rel=1e-14)
    assert z_star == pytest.approx(selftest.HAND_Z_STAR, rel=1e-14)


def test_order_of_magnitude_estimates_are_frozen():
    # rounded estimates for the electron, the ion, tau_d and the crossover height
    assert selftest.ESTIMATE_TAU_R_ELECTRON == 2e3
    assert selftest.ESTIMATE_TAU_R_ION == 3e6
    assert selftest.ESTIMATE_TAU_D == 1e-5
    assert selftest.ESTIMATE_Z_STAR == 0.1e-3


@pytest.mark.parametrize("number", [n for n, _, _ in selftest.CHECKS],
                         ids=[f"criterion-{n}-{name.replace(' ', '-')}" for n, name, _ in selftest.CHECKS])
def test_criterion(number):
    result = selftest.run_check(number)
    RESULTS.append(result)
    print("\n" + selftest.format_result(result))
    assert result.passed, result.detail
