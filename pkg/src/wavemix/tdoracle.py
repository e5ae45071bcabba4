"""Time-domain check of chi^(n) by direct wavefunction propagation.

The level system is driven by weak classical fields,

    i d psi/dt = [H0 - i Gamma - V * sum_j A_j cos(w_j t)] psi,

with no rotating-wave approximation, and the polarization <psi|V|psi> is
projected onto exp(-i w_s t) over a late time window. To lowest order
each cos field contributes -A_j/2 per interaction (both e^{-iwt} and
e^{+iwt} halves), so for pairwise distinct incoming frequencies the
projected amplitude c obeys

    c / 2 = (-1)^n prod_j (A_j / 2) * chi^(n)

with every time ordering already summed inside chi^(n).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OracleError, ValidationError
from .process import ProcessSpec, check_on_shell, signed_frequencies
from .system import LevelSystem

NORM_GROWTH_TOL = 1e-6
STEPS_PER_PERIOD = 40
MIN_WINDOW_PERIODS = 20
PERTURBATIVE_RTOL = 0.01


@dataclass(frozen=True)
class ClassicalField:
    amplitudes: tuple
    frequencies: tuple

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", tuple(float(a) for a in self.amplitudes))
        object.__setattr__(self, "frequencies", tuple(float(w) for w in self.frequencies))
        if len(self.amplitudes) != len(self.frequencies):
            raise ValidationError("one amplitude per field frequency is required")

    def halved(self) -> "ClassicalField":
        return ClassicalField(tuple(a / 2 for a in self.amplitudes), self.frequencies)

    def __call__(self, t):
        return sum(a * math.cos(w * t) for a, w in zip(self.amplitudes, self.frequencies))


@dataclass(frozen=True)
class OracleParams:
    dt: float
    t_transient: float
    t_window: float
    order: int = 4

    def halved_step(self) -> "OracleParams":
        return OracleParams(self.dt / 2, self.t_transient, self.t_window, self.order)

    @property
    def n_transient(self) -> int:
        return int(round(self.t_transient / self.dt))

    @property
    def n_window(self) -> int:
        return int(round(self.t_window / self.dt))


@dataclass
class Trajectory:
    times: np.ndarray
    psi: np.ndarray
    params: OracleParams


def smallest_gap(sys: LevelSystem) -> float:
    e = np.sort(sys.energies)
    return float(np.min(np.diff(e)))


def check_fields(sys: LevelSystem, fields: ClassicalField):
    limit = 1e-2 * smallest_gap(sys)
    for a in fields.amplitudes:
        if not 0 < a <= limit:
            raise ValidationError(
                f"field amplitude {a} outside the perturbative range (0, {limit:.3g}]"
            )
    for w in fields.frequencies:
        if not w > 0:
            raise ValidationError(f"field frequency must be positive, got {w}")


def max_frequency_scale(sys: LevelSystem, fields: ClassicalField, initial_state=0) -> float:
    spread = float(np.max(np.abs(sys.energies - sys.energies[initial_state])))
    drive = math.fsum(fields.frequencies)
    return max(spread, drive, max(fields.frequencies, default=0.0))


def propagate(sys: LevelSystem, fields: ClassicalField, params: OracleParams, initial_state=0) -> Trajectory:
    """Fixed-step RK4 integration from the initial level.

    Energies are measured from the initial level, which only changes the
    global phase. Samples every step over [0, t_transient + t_window].
    """
    if params.order != 4:
        raise ValidationError(f"only the 4th-order integrator is available, got order {params.order}")
    damped = np.delete(sys.linewidths, initial_state)
    if np.any(damped <= 0):
        raise ValidationError("every level except the initial one needs a positive linewidth")
    scale = max_frequency_scale(sys, fields, initial_state)
    dt_max = 2 * math.pi / scale / STEPS_PER_PERIOD
    if params.dt > dt_max * (1 + 1e-12):
        raise OracleError(f"time step {params.dt} exceeds the stability limit {dt_max:.6g}")

    h0 = (sys.energies - sys.energies[initial_state]) - 1j * sys.linewidths
    v = np.array(sys.dipole)
    amps = np.array(fields.amplitudes)
    freqs = np.array(fields.frequencies)

    def rhs(t, psi):
        drive = float(np.dot(amps, np.cos(freqs * t)))
        return -1j * (h0 * psi - drive * (v @ psi))

    dt = params.dt
    steps = params.n_transient + params.n_window
    times = dt * np.arange(steps + 1)
    out = np.empty((steps + 1, sys.size), dtype=complex)
    psi = np.zeros(sys.size, dtype=complex)
    psi[initial_state] = 1.0
    out[0] = psi
    for k in range(steps):
        t = times[k]
        k1 = rhs(t, psi)
        k2 = rhs(t + dt / 2, psi + dt / 2 * k1)
        k3 = rhs(t + dt / 2, psi + dt / 2 * k2)
        k4 = rhs(t + dt, psi + dt * k3)
        psi = psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = psi
    norms = np.einsum("ij,ij->i", out.conj(), out).real
    if np.max(norms) > 1 + NORM_GROWTH_TOL:
        raise OracleError(f"norm grew to {np.max(norms):.9g}; integration unstable")
    return Trajectory(times, out, params)


def polarization(traj: Trajectory, sys: LevelSystem) -> np.ndarray:
    """<psi(t)|V|psi(t)> at every sample (real up to round-off)."""
    vpsi = traj.psi @ sys.dipole.T
    return np.einsum("ij,ij->i", traj.psi.conj(), vpsi).real


def fourier_component(times, signal, omega, t_start, t_window, window="hann") -> complex:
    """Complex amplitude c of a component Re[c exp(-i omega t)] in ``signal``.

    Computes 2 * int w(t) signal(t) exp(+i omega t) dt / int w(t) dt over
    [t_start, t_start + t_window] by the trapezoid rule. ``window`` is
    "hann" (sin^2 taper) or "rect" (plain 2/T average).

    The taper matters for the oracle: ground-state depletion through the
    damped levels puts a slow envelope on the strong linear tones, and a
    rectangular window leaks that envelope into the signal bin at the
    same order in the field as the signal itself.
    """
    times = np.asarray(times, dtype=float)
    signal = np.asarray(signal)
    if t_window < MIN_WINDOW_PERIODS * 2 * math.pi / omega * (1 - 1e-12):
        raise ValidationError(
            f"window {t_window} shorter than {MIN_WINDOW_PERIODS} periods of {omega}"
        )
    dt = times[1] - times[0]
    sel = (times >= t_start - dt / 2) & (times <= t_start + t_window + dt / 2)
    t = times[sel]
    if t.size < 2:
        raise ValidationError("window contains no samples")
    span = t[-1] - t[0]
    if window == "hann":
        weights = np.sin(np.pi * (t - t[0]) / span) ** 2
    elif window == "rect":
        weights = np.ones_like(t)
    else:
        raise ValueError(f"unknown window {window!r}")
    integrand = weights * signal[sel] * np.exp(1j * omega * t)
    return complex(2.0 * np.trapezoid(integrand, t) / np.trapezoid(weights, t))


def extract_component(traj: Trajectory, sys: LevelSystem, omega_sig: float, window="hann") -> complex:
    """Amplitude of the exp(-i omega_sig t) part of <psi|V|psi> in the late window."""
    p = polarization(traj, sys)
    t_start = traj.times[traj.params.n_transient]
    return fourier_component(traj.times, p, omega_sig, t_start, traj.params.n_window * traj.params.dt,
                             window)


@dataclass
class OracleResult:
    estimate: complex
    halved_estimate: complex | None = None
    raw: complex = 0j
    halved_raw: complex | None = None

    @property
    def amplitude_slope(self) -> float | None:
        """log2 of the raw-signal ratio between full and halved amplitudes."""
        if self.halved_raw is None:
            return None
        return math.log2(abs(self.raw) / abs(self.halved_raw))

    @property
    def amplitude_change(self) -> float | None:
        if self.halved_estimate is None:
            return None
        return abs(self.halved_estimate - self.estimate) / abs(self.estimate)


def _fields_for(proc: ProcessSpec, amplitudes) -> ClassicalField:
    incoming = [m.frequency for m in proc.modes[:-1]]
    if len(amplitudes) != len(incoming):
        raise ValidationError(f"need {len(incoming)} field amplitudes, got {len(amplitudes)}")
    if len(set(incoming)) != len(incoming):
        raise ValidationError("incoming frequencies must be pairwise distinct for the oracle")
    return ClassicalField(tuple(amplitudes), tuple(incoming))


def _estimate(sys, proc, fields, params):
    omega_sig = math.fsum(signed_frequencies(proc)[:-1])
    if omega_sig <= 0:
        raise ValidationError("the incoming fields must combine to a positive signal frequency")
    traj = propagate(sys, fields, params, proc.initial_state)
    raw = extract_component(traj, sys, omega_sig)
    n = proc.order
    weight = (-1) ** n * math.prod(a / 2 for a in fields.amplitudes)
    return raw / (2 * weight), raw


def oracle_chi(sys: LevelSystem, proc: ProcessSpec, amplitudes, params: OracleParams,
               certify: bool = True) -> OracleResult:
    """Estimate chi^(n) from the driven dynamics (eps = 0, damping from linewidths).

    With ``certify`` the run is repeated at half the field amplitudes and
    OracleError is raised if the estimate moves by more than 1%.
    """
    check_on_shell(proc)
    if any(m.sign != +1 for m in proc.modes[:-1]):
        raise ValidationError("the oracle drives absorbed incoming modes only")
    fields = _fields_for(proc, amplitudes)
    check_fields(sys, fields)
    estimate, raw = _estimate(sys, proc, fields, params)
    result = OracleResult(estimate, raw=raw)
    if certify:
        result.halved_estimate, result.halved_raw = _estimate(sys, proc, fields.halved(), params)
        change = result.amplitude_change
        if change > PERTURBATIVE_RTOL:
            raise OracleError(
                f"nonperturbative: estimate changed by {change:.3%} when amplitudes were halved"
            )
    return result
