"""Finite-level material systems: energies, linewidths and the dipole matrix.

Units are hbar = 1, so energies and field frequencies share one unit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import SpecFormatError, ValidationError


@dataclass(frozen=True, eq=False)
class LevelSystem:
    """A few-level atom or molecule.

    Parameters
    ----------
    energies : array_like, shape (N,)
        Bare level energies.
    dipole : array_like, shape (N, N)
        Complex dipole matrix, must be Hermitian.
    linewidths : array_like, shape (N,), optional
        Phenomenological damping per level, enters resolvents as E_b - i*gamma_b.
    labels : sequence of str, optional
        State names; defaults to "a", "b", "c", ...

    The arrays are copied and made read-only, so instances can be shared
    between concurrent evaluations.
    """

    energies: np.ndarray
    dipole: np.ndarray
    linewidths: np.ndarray = None
    labels: tuple = field(default=None)

    def __post_init__(self):
        energies = np.array(self.energies, dtype=float).reshape(-1)
        dipole = np.array(self.dipole, dtype=complex)
        n = energies.size
        if self.linewidths is None:
            gammas = np.zeros(n)
        else:
            gammas = np.array(self.linewidths, dtype=float).reshape(-1)
        if self.labels is None:
            labels = tuple(_default_label(i) for i in range(n))
        else:
            labels = tuple(str(s) for s in self.labels)
        for arr in (energies, dipole, gammas):
            arr.setflags(write=False)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "dipole", dipole)
        object.__setattr__(self, "linewidths", gammas)
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return self.energies.size

    def __eq__(self, other):
        if not isinstance(other, LevelSystem):
            return NotImplemented
        return (
            self.labels == other.labels
            and np.array_equal(self.energies, other.energies)
            and np.array_equal(self.linewidths, other.linewidths)
            and np.array_equal(self.dipole, other.dipole)
        )

    __hash__ = None

    def scaled(self, factor: float) -> "LevelSystem":
        """Copy with the dipole matrix multiplied by ``factor``."""
        return LevelSystem(self.energies, factor * self.dipole, self.linewidths, self.labels)

    def with_linewidths(self, linewidths) -> "LevelSystem":
        return LevelSystem(self.energies, self.dipole, linewidths, self.labels)


def _default_label(i):
    if i < 26:
        return chr(ord("a") + i)
    return f"s{i}"


def validate_system(sys: LevelSystem) -> LevelSystem:
    """Return ``sys`` unchanged if it satisfies all invariants, else raise."""
    n = sys.energies.size
    if n < 2:
        raise ValidationError(f"N<2: a level system needs at least two states, got {n}")
    if sys.dipole.shape != (n, n):
        raise ValidationError(f"dipole has shape {sys.dipole.shape}, expected ({n}, {n})")
    if sys.linewidths.shape != (n,):
        raise ValidationError(f"linewidths has {sys.linewidths.size} entries, expected {n}")
    if len(sys.labels) != n:
        raise ValidationError(f"labels has {len(sys.labels)} entries, expected {n}")
    if not (np.all(np.isfinite(sys.energies)) and np.all(np.isfinite(sys.dipole))
            and np.all(np.isfinite(sys.linewidths))):
        raise ValidationError("non-finite value in system definition")
    # exact comparison: spec files carry exact values
    bad = np.argwhere(sys.dipole != sys.dipole.conj().T)
    if bad.size:
        i, j = bad[0]
        raise ValidationError(
            f"dipole not Hermitian: V[{i}][{j}]={sys.dipole[i, j]} "
            f"but conj(V[{j}][{i}])={np.conj(sys.dipole[j, i])}"
        )
    neg = np.flatnonzero(sys.linewidths < 0)
    if neg.size:
        k = neg[0]
        raise ValidationError(f"negative linewidth {sys.linewidths[k]} for state {sys.labels[k]!r}")
    return sys


def _parse_complex(entry, where):
    if isinstance(entry, bool):
        raise SpecFormatError(f"{where}: expected number or [re, im], got {entry!r}")
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, (list, tuple)) and len(entry) == 2 and all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry
    ):
        return complex(entry[0], entry[1])
    raise SpecFormatError(f"{where}: expected number or [re, im], got {entry!r}")


def _parse_reals(values, key):
    if not isinstance(values, list):
        raise SpecFormatError(f"field {key!r}: expected an array of numbers")
    out = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SpecFormatError(f"field {key!r}[{i}]: expected a number, got {v!r}")
        out.append(float(v))
    return out


def system_from_dict(doc: dict) -> LevelSystem:
    """Build and validate a LevelSystem from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise SpecFormatError("system spec must be a JSON object")
    unknown = set(doc) - {"labels", "energies", "linewidths", "dipole"}
    if unknown:
        raise SpecFormatError(f"unknown field(s) in system spec: {sorted(unknown)}")
    for key in ("energies", "dipole"):
        if key not in doc:
            raise SpecFormatError(f"missing required field {key!r}")
    energies = _parse_reals(doc["energies"], "energies")
    linewidths = _parse_reals(doc["linewidths"], "linewidths") if "linewidths" in doc else None
    labels = doc.get("labels")
    if labels is not None and not (
        isinstance(labels, list) and all(isinstance(s, str) for s in labels)
    ):
        raise SpecFormatError("field 'labels': expected an array of strings")

    rows = doc["dipole"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SpecFormatError("field 'dipole': expected an N x N array")
    n = len(energies)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise SpecFormatError(f"field 'dipole': expected {n} x {n} entries to match 'energies'")
    dipole = [[_parse_complex(x, f"field 'dipole'[{i}][{j}]") for j, x in enumerate(r)]
              for i, r in enumerate(rows)]
    if labels is not None and len(labels) != n:
        raise SpecFormatError(f"field 'labels': expected {n} names")
    if linewidths is not None and len(linewidths) != n:
        raise SpecFormatError(f"field 'linewidths': expected {n} values")
    return validate_system(LevelSystem(energies, dipole, linewidths, labels))


def load_system(text: str) -> LevelSystem:
    """Parse a JSON system spec.

    Dipole entries are either plain numbers or ``[re, im]`` pairs.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return system_from_dict(doc)


def system_to_dict(sys: LevelSystem) -> dict:
    dipole = [[[float(z.real), float(z.imag)] for z in row] for row in sys.dipole]
    return {
        "labels": list(sys.labels),
        "energies": [float(e) for e in sys.energies],
        "linewidths": [float(g) for g in sys.linewidths],
        "dipole": dipole,
    }


def dump_system(sys: LevelSystem) -> str:
    return json.dumps(system_to_dict(sys), indent=2)


def two_level(gap=1.0, coupling=1.0, linewidth=0.0) -> LevelSystem:
    """Ground state at 0, excited state at ``gap``, real off-diagonal dipole."""
    v = np.array([[0.0, coupling], [np.conj(coupling), 0.0]], dtype=complex)
    return validate_system(LevelSystem([0.0, gap], v, [0.0, linewidth]))


def ladder(energies, couplings, linewidths=None) -> LevelSystem:
    """Nearest-neighbour ladder: V[k][k+1] = couplings[k]."""
    n = len(energies)
    if len(couplings) != n - 1:
        raise ValidationError(f"ladder with {n} levels needs {n - 1} couplings")
    v = np.zeros((n, n), dtype=complex)
    for k, c in enumerate(couplings):
        v[k, k + 1] = c
        v[k + 1, k] = np.conj(c)
    return validate_system(LevelSystem(energies, v, linewidths))
