"""Frequency sweeps, the two-level Kramers-Heisenberg pair, and pole tables."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import SingularityError, ValidationError
from .evaluator import EvalParams, eval_chi, eval_s
from .process import ProcessSpec, signed_frequencies
from .system import LevelSystem
from .termgen import RETARDED, expand

UPPER = "upper"
LOWER = "lower"
REAL_AXIS = "real"


@dataclass
class ScanRecord:
    grid: float
    chi: complex
    s: complex
    diff: complex
    eps: float
    flag: str = ""


def _resolve_frequencies(proc: ProcessSpec, varied: int, value: float, solve_for: int):
    """Substitute ``value`` into mode ``varied`` and restore the shell via ``solve_for``."""
    freqs = [m.frequency for m in proc.modes]
    freqs[varied] = value
    others = math.fsum(
        m.sign * w for j, (m, w) in enumerate(zip(proc.modes, freqs)) if j != solve_for
    )
    # sign_s * w_s + others = 0
    freqs[solve_for] = -others * proc.modes[solve_for].sign
    return freqs


def scan(sys: LevelSystem, proc: ProcessSpec, varied: int, grid, params: EvalParams = EvalParams(),
         solve_for: int | None = None) -> list[ScanRecord]:
    """Evaluate chi and S over ``grid`` values of mode ``varied``.

    By default the signal (last) mode is re-solved at each point so the
    process stays on shell; pass ``solve_for`` to re-solve another mode.
    Grid points that hit an undamped pole or leave the shell are flagged.
    """
    if solve_for is None:
        solve_for = proc.order
    count = len(proc.modes)
    if not 0 <= varied < count or not 0 <= solve_for < count:
        raise ValidationError(f"mode index out of range for a {count}-mode process")
    if varied == solve_for:
        raise ValidationError("the varied mode cannot also be the re-solved mode")
    nan = complex(math.nan, math.nan)
    records = []
    for value in grid:
        value = float(value)
        freqs = _resolve_frequencies(proc, varied, value, solve_for)
        if not all(w > 0 for w in freqs):
            records.append(ScanRecord(value, nan, nan, nan, params.epsilon, "unphysical"))
            continue
        point = proc.with_frequencies(freqs)
        try:
            chi = eval_chi(sys, point, params).total
            s = eval_s(sys, point, params).total
        except SingularityError:
            records.append(ScanRecord(value, nan, nan, nan, params.epsilon, "pole"))
            continue
        records.append(ScanRecord(value, chi, s, chi - s, params.epsilon))
    return records


def kh_pair(sys: LevelSystem, omega: float, eps: float) -> tuple[complex, complex]:
    """Constant-sign S^(2) and opposite-sign chi^(1) for a two-level system.

    Written out directly from the closed two-level formulas, independent
    of the term generator. Ground state 0, excited state 1; the excited
    linewidth adds to ``eps``.
    """
    if sys.size != 2:
        raise ValidationError(f"kh_pair needs a two-level system, got N={sys.size}")
    if eps < 0:
        raise ValidationError(f"epsilon must be >= 0, got {eps}")
    e_a, e_b = (float(e) for e in sys.energies)
    weight = abs(sys.dipole[0, 1]) ** 2
    gamma = eps + float(sys.linewidths[1])
    resonant = 1.0 / complex(e_a + omega - e_b, gamma)
    s_value = weight * (resonant + 1.0 / complex(e_a - omega - e_b, gamma))
    chi_value = weight * (resonant + 1.0 / complex(e_a - omega - e_b, -gamma))
    return s_value, chi_value


@dataclass
class Pole:
    """One pole family: factor ``slot`` meeting level ``level``.

    ``half_plane`` locates the pole in the factor's own energy argument
    (retarded below, advanced above). ``omega`` is the same pole expressed
    in the varied frequency, with its own half-plane ``omega_half_plane``;
    both are None when the factor does not depend on that frequency.
    """

    slot: int
    level: int
    kind: str
    energy: complex
    half_plane: str
    omega: complex | None = None
    omega_half_plane: str | None = None


@dataclass
class PoleReport:
    kind: str
    order: int
    varied: int
    terms: list = field(default_factory=list)

    def upper_counts(self) -> list[int]:
        """Number of factors per term whose energy-plane poles lie above the axis."""
        out = []
        for poles in self.terms:
            slots = {p.slot for p in poles if p.half_plane == UPPER}
            out.append(len(slots))
        return out


def _half_plane(z: complex) -> str:
    if z.imag > 0:
        return UPPER
    if z.imag < 0:
        return LOWER
    return REAL_AXIS


def pole_table(kind: str, n: int, sys: LevelSystem, proc: ProcessSpec,
               params: EvalParams = EvalParams(), varied: int = 0) -> PoleReport:
    """Tabulate the poles of every factor of every term.

    The signal frequency is held on shell while incoming mode ``varied``
    is swept, so a factor's argument depends on omega_varied with slope
    sign_v * ([v included] - [signal included]).
    """
    if proc.order != n:
        raise ValidationError(f"process of order {proc.order} does not match n={n}")
    if not 0 <= varied < n:
        raise ValidationError(f"varied mode must be an incoming mode 0..{n - 1}")
    terms = expand(kind, n)
    signed = signed_frequencies(proc)
    a = proc.initial_state
    e_a = float(sys.energies[a])
    sign_v = proc.modes[varied].sign
    signal = n
    report = PoleReport(terms.kind, n, varied)
    for term in terms:
        poles = []
        for slot, factor in enumerate(term.factors, start=1):
            damping = params.epsilon + sys.linewidths
            slope = sign_v * (int(varied in factor.modes) - int(signal in factor.modes))
            rest = e_a + math.fsum(signed[j] for j in factor.modes) - slope * proc.modes[varied].frequency
            for b in range(sys.size):
                gamma = float(damping[b])
                shift = -1j * gamma if factor.kind == RETARDED else 1j * gamma
                energy = complex(sys.energies[b]) + shift
                omega = None
                omega_plane = None
                if slope != 0:
                    omega = (energy - rest) / slope
                    omega_plane = _half_plane(omega)
                poles.append(Pole(slot, b, factor.kind, energy, _half_plane(energy), omega, omega_plane))
        report.terms.append(poles)
    return report


def pole_report_to_dict(report: PoleReport) -> dict:
    def cplx(z):
        return None if z is None else [z.real, z.imag]

    return {
        "kind": report.kind,
        "order": report.order,
        "varied": report.varied,
        "terms": [
            [
                {
                    "slot": p.slot,
                    "level": p.level,
                    "factor": p.kind,
                    "energy_pole": cplx(p.energy),
                    "half_plane": p.half_plane,
                    "omega_pole": cplx(p.omega),
                    "omega_half_plane": p.omega_half_plane,
                }
                for p in poles
            ]
            for poles in report.terms
        ],
    }
