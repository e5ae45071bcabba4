import math

import numpy as np
import pytest

from wavemix.errors import OracleError, ValidationError
from wavemix.evaluator import eval_chi
from wavemix.process import rayleigh
from wavemix.spectra import kh_pair
from wavemix.system import two_level
from wavemix.tdoracle import (
    ClassicalField,
    OracleParams,
    extract_component,
    fourier_component,
    oracle_chi,
    polarization,
    propagate,
)


def tone_times(omega, periods, per_period=64):
    period = 2 * math.pi / omega
    return np.linspace(0, periods * period, periods * per_period + 1)


@pytest.mark.parametrize("window", ["hann", "rect"])
def test_pure_tone(window):
    t = tone_times(0.7, 40)
    c = fourier_component(t, np.cos(0.7 * t), 0.7, 0.0, t[-1], window)
    assert abs(c - 1.0) < 1e-6


@pytest.mark.parametrize("window", ["hann", "rect"])
def test_phase_recovery(window):
    t = tone_times(1.3, 30)
    c = fourier_component(t, ((2 - 1j) * np.exp(-1.3j * t)).real, 1.3, 0.0, t[-1], window)
    assert abs(c - (2 - 1j)) < 1e-6


@pytest.mark.parametrize("window", ["hann", "rect"])
def test_orthogonal_tone_incommensurate_window(window):
    omega = 0.9
    t = np.linspace(0, 2345.6, 300001)
    c = fourier_component(t, np.cos(omega * t), 3 * omega, 0.0, t[-1], window)
    assert abs(c) <= 1e-3


def test_window_too_short():
    t = tone_times(1.0, 10)
    with pytest.raises(ValidationError):
        fourier_component(t, np.cos(t), 1.0, 0.0, t[-1])


def quick_params(omega, dt_per_period=160, transient=25, window=25):
    period = 2 * math.pi / omega
    return OracleParams(period / dt_per_period, transient * period, window * period)


def test_zero_field_stays_in_ground_state():
    sys = two_level(linewidth=0.1)
    traj = propagate(sys, ClassicalField((0.0,), (0.5,)), quick_params(0.5, transient=2, window=2))
    assert np.all(traj.psi[:, 1] == 0)
    assert np.all(polarization(traj, sys) == 0)


def test_off_resonant_bound():
    sys = two_level(linewidth=0.1)
    amp, omega = 0.005, 0.2
    traj = propagate(sys, ClassicalField((amp,), (omega,)), OracleParams(0.05, 40.0, 60.0))
    detuning = 1.0 - omega
    steady = traj.psi[traj.params.n_transient:, 1]
    # co- and counter-rotating parts each contribute at most A/2 / |detuning|
    assert np.max(np.abs(steady)) <= amp / detuning * 1.05


def test_step_limit_enforced():
    sys = two_level(linewidth=0.1)
    with pytest.raises(OracleError, match="stability"):
        propagate(sys, ClassicalField((1e-3,), (0.5,)), OracleParams(0.5, 10, 100))


def test_undamped_excited_state_rejected():
    with pytest.raises(ValidationError):
        propagate(two_level(), ClassicalField((1e-3,), (0.5,)), quick_params(0.5))


def test_linear_trajectory_converges_on_step_halving():
    sys = two_level(linewidth=0.1)
    fields = ClassicalField((1e-3,), (0.5,))
    p = quick_params(0.5, dt_per_period=80)
    a = extract_component(propagate(sys, fields, p), sys, 0.5)
    b = extract_component(propagate(sys, fields, p.halved_step()), sys, 0.5)
    assert abs(a - b) <= 1e-4 * abs(b)
    # steady coherence: nonzero and of the linear-response size
    assert abs(a) == pytest.approx(1e-3 * abs(kh_pair(two_level(), 0.5, 0.1)[1]), rel=0.02)


def test_oracle_linear_against_kh():
    sys = two_level(linewidth=0.1)
    res = oracle_chi(sys, rayleigh(0.5), [0.002], quick_params(0.5))
    chi = kh_pair(two_level(), 0.5, 0.1)[1]
    assert abs(res.estimate - chi) <= 0.01 * abs(chi)
    assert res.amplitude_change <= 0.01
    assert res.amplitude_slope == pytest.approx(1.0, abs=0.01)
    assert res.estimate == pytest.approx(eval_chi(sys, rayleigh(0.5)).total, rel=0.01)


def test_oracle_rejects_large_amplitude():
    sys = two_level(linewidth=0.1)
    with pytest.raises(ValidationError, match="perturbative"):
        oracle_chi(sys, rayleigh(0.5), [0.05], quick_params(0.5))
