"""Wave-mixing process definitions: signed modes, on-shell check, prefactor."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

from .errors import OffShellError, SpecFormatError, ValidationError

ABSORBED = +1
EMITTED = -1

# relative to the largest |omega_j|
DEFAULT_SHELL_RTOL = 1e-9


@dataclass(frozen=True)
class ModeSpec:
    """One field mode: frequency, +1 absorbed / -1 emitted, photon occupation."""

    frequency: float
    sign: int = ABSORBED
    occupation: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise ValidationError(f"mode frequency must be positive, got {self.frequency}")
        if self.sign not in (ABSORBED, EMITTED):
            raise ValidationError(f"mode sign must be +1 or -1, got {self.sign}")
        if isinstance(self.occupation, bool) or int(self.occupation) != self.occupation or self.occupation < 0:
            raise ValidationError(f"occupation must be a nonnegative integer, got {self.occupation}")

    @property
    def signed(self) -> float:
        return self.sign * self.frequency


@dataclass(frozen=True)
class ProcessSpec:
    """An (n+1)-mode process; the last mode is the signal.

    ``initial_state`` indexes the LevelSystem; ``quantization_volume`` is the
    field quantization volume entering the prefactor only.
    """

    modes: tuple
    initial_state: int = 0
    quantization_volume: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if len(self.modes) < 2:
            raise ValidationError(f"a process needs at least 2 modes, got {len(self.modes)}")
        if not all(isinstance(m, ModeSpec) for m in self.modes):
            raise ValidationError("modes must be ModeSpec instances")
        if isinstance(self.initial_state, bool) or int(self.initial_state) != self.initial_state \
                or self.initial_state < 0:
            raise ValidationError(f"initial_state must be a nonnegative integer, got {self.initial_state}")
        if not (self.quantization_volume > 0 and math.isfinite(self.quantization_volume)):
            raise ValidationError(f"quantization volume must be positive, got {self.quantization_volume}")

    @property
    def order(self) -> int:
        """Perturbative order n (number of incoming modes)."""
        return len(self.modes) - 1

    def with_frequencies(self, freqs) -> "ProcessSpec":
        modes = tuple(replace(m, frequency=float(w)) for m, w in zip(self.modes, freqs, strict=True))
        return replace(self, modes=modes)


def signed_frequencies(proc: ProcessSpec) -> list[float]:
    return [m.signed for m in proc.modes]


def default_shell_tol(proc: ProcessSpec) -> float:
    return DEFAULT_SHELL_RTOL * max(m.frequency for m in proc.modes)


def check_on_shell(proc: ProcessSpec, tol: float | None = None) -> float:
    """Return the signed-frequency residual, raising OffShellError if |residual| > tol."""
    if tol is None:
        tol = default_shell_tol(proc)
    if tol < 0:
        raise ValidationError(f"on-shell tolerance must be nonnegative, got {tol}")
    residual = math.fsum(signed_frequencies(proc))
    if abs(residual) > tol:
        raise OffShellError(residual, tol)
    return residual


def amplitude_prefactor(proc: ProcessSpec) -> float:
    """Field-strength factor A_fi of the (n+1)-photon amplitude.

    (2 pi / Omega)^{(n+1)/2} * prod sqrt(n_j or n_j + 1) * sqrt(prod omega_j)
    with n_j for absorbed modes and n_j + 1 for emitted ones.
    """
    occ = 1.0
    for j, m in enumerate(proc.modes):
        if m.sign == ABSORBED:
            if m.occupation == 0:
                raise ValidationError(f"no photons to absorb in mode {j + 1}")
            occ *= m.occupation
        else:
            occ *= m.occupation + 1
    freq = math.prod(m.frequency for m in proc.modes)
    count = len(proc.modes)
    return (2 * math.pi / proc.quantization_volume) ** (count / 2) * math.sqrt(occ) * math.sqrt(freq)


def sum_frequency(incoming, initial_state=0, occupations=None, volume=1.0) -> ProcessSpec:
    """Absorb every frequency in ``incoming`` and emit their sum as the signal."""
    incoming = [float(w) for w in incoming]
    occupations = occupations or [1] * len(incoming) + [0]
    modes = [ModeSpec(w, ABSORBED, n) for w, n in zip(incoming, occupations)]
    modes.append(ModeSpec(math.fsum(incoming), EMITTED, occupations[-1]))
    return ProcessSpec(tuple(modes), initial_state, volume)


def rayleigh(omega, initial_state=0) -> ProcessSpec:
    """Elastic scattering: absorb and emit one photon of the same frequency."""
    return ProcessSpec((ModeSpec(omega, ABSORBED, 1), ModeSpec(omega, EMITTED, 0)), initial_state)


def process_from_dict(doc: dict) -> ProcessSpec:
    if not isinstance(doc, dict):
        raise SpecFormatError("process spec must be a JSON object")
    unknown = set(doc) - {"modes", "initial_state", "omega_quant_volume"}
    if unknown:
        raise SpecFormatError(f"unknown field(s) in process spec: {sorted(unknown)}")
    if "modes" not in doc or not isinstance(doc["modes"], list):
        raise SpecFormatError("missing required array field 'modes'")
    modes = []
    for i, entry in enumerate(doc["modes"]):
        where = f"field 'modes'[{i}]"
        if not isinstance(entry, dict):
            raise SpecFormatError(f"{where}: expected an object")
        extra = set(entry) - {"omega", "sign", "n"}
        if extra:
            raise SpecFormatError(f"{where}: unknown key(s) {sorted(extra)}")
        omega = entry.get("omega")
        if isinstance(omega, bool) or not isinstance(omega, (int, float)):
            raise SpecFormatError(f"{where}.omega: expected a number, got {omega!r}")
        sign = entry.get("sign")
        if sign not in ("+", "-"):
            raise SpecFormatError(f"{where}.sign: expected \"+\" or \"-\", got {sign!r}")
        n = entry.get("n", 1 if sign == "+" else 0)
        if isinstance(n, bool) or not isinstance(n, int):
            raise SpecFormatError(f"{where}.n: expected an integer, got {n!r}")
        modes.append(ModeSpec(float(omega), ABSORBED if sign == "+" else EMITTED, n))
    initial = doc.get("initial_state", 0)
    if isinstance(initial, bool) or not isinstance(initial, int):
        raise SpecFormatError(f"field 'initial_state': expected an integer, got {initial!r}")
    volume = doc.get("omega_quant_volume", 1.0)
    if isinstance(volume, bool) or not isinstance(volume, (int, float)):
        raise SpecFormatError(f"field 'omega_quant_volume': expected a number, got {volume!r}")
    return ProcessSpec(tuple(modes), initial, float(volume))


def load_process(text: str) -> ProcessSpec:
    """Parse a JSON process spec (modes with omega/sign/n, initial_state, volume)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return process_from_dict(doc)


def process_to_dict(proc: ProcessSpec) -> dict:
    return {
        "modes": [
            {"omega": m.frequency, "sign": "+" if m.sign == ABSORBED else "-", "n": m.occupation}
            for m in proc.modes
        ],
        "initial_state": proc.initial_state,
        "omega_quant_volume": proc.quantization_volume,
    }
