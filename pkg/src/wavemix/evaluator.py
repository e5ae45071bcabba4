"""Numerical evaluation of sum-over-states terms for a level system.

The system Hamiltonian is diagonal, so each resolvent is applied as an
elementwise division:

    retarded  G(E)  : 1 / (E - E_b + i (eps + gamma_b))
    advanced  G+(E) : 1 / (E - E_b - i (eps + gamma_b))
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularityError, ValidationError
from .process import ProcessSpec, amplitude_prefactor, check_on_shell, signed_frequencies
from .system import LevelSystem
from .termgen import ADVANCED, RETARDED, Term, TermList, expand_scattering, expand_susceptibility

SINGULAR_RTOL = 1e-14


@dataclass(frozen=True)
class EvalParams:
    epsilon: float = 0.0
    on_shell_tol: float | None = None

    def __post_init__(self):
        if not (self.epsilon >= 0 and math.isfinite(self.epsilon)):
            raise ValidationError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.on_shell_tol is not None and not self.on_shell_tol >= 0:
            raise ValidationError(f"on-shell tolerance must be >= 0, got {self.on_shell_tol}")


@dataclass
class EvalResult:
    """Total of chi^(n) or S^(n+1) with its term-by-term breakdown.

    ``prefactor`` is A_fi, reported separately and not multiplied in.
    """

    kind: str
    total: complex
    per_term: list = field(default_factory=list)
    prefactor: float | None = None

    def scaled_total(self) -> complex:
        return self.prefactor * self.total


def _singular_floor(sys: LevelSystem) -> float:
    scale = float(np.max(np.abs(sys.energies)))
    return SINGULAR_RTOL * (scale if scale > 0 else 1.0)


def denominators(sys: LevelSystem, energy: float, kind: str, eps: float) -> np.ndarray:
    """Per-level resolvent denominators at real ``energy``."""
    damping = eps + sys.linewidths
    if kind == RETARDED:
        return energy - sys.energies + 1j * damping
    if kind == ADVANCED:
        return energy - sys.energies - 1j * damping
    raise ValueError(f"unknown Green-function kind {kind!r}")


def resolvent_apply(sys: LevelSystem, energy: float, kind: str, eps: float, vec) -> np.ndarray:
    """Apply G(energy) or G+(energy) to ``vec``.

    Only components that are actually populated are checked for a
    vanishing denominator.
    """
    if eps < 0:
        raise ValidationError(f"epsilon must be >= 0, got {eps}")
    vec = np.asarray(vec, dtype=complex)
    if vec.shape != sys.energies.shape:
        raise ValidationError(f"vector has {vec.size} components, system has {sys.size} levels")
    den = denominators(sys, energy, kind, eps)
    hit = (np.abs(den) < _singular_floor(sys)) & (vec != 0)
    if np.any(hit):
        b = int(np.flatnonzero(hit)[0])
        raise SingularityError(
            f"resolvent singular: argument {energy:.17g} coincides with level "
            f"{sys.labels[b]!r} (E={sys.energies[b]:.17g}) with zero damping"
        )
    out = np.zeros_like(vec)
    nz = vec != 0
    out[nz] = vec[nz] / den[nz]
    return out


def factor_energy(e_a: float, factor, signed) -> float:
    return e_a + math.fsum(signed[j] for j in factor.modes)


def eval_term(sys: LevelSystem, proc: ProcessSpec, term: Term, params: EvalParams = EvalParams()) -> complex:
    """<a| V G_n V ... G_1 V |a>, applied right to left."""
    signed = signed_frequencies(proc)
    if len(term.factors) + 1 != len(signed):
        raise ValidationError(
            f"term of order {len(term.factors)} does not match a process with {len(signed)} modes"
        )
    a = proc.initial_state
    if a >= sys.size:
        raise ValidationError(f"initial state {a} outside a {sys.size}-level system")
    e_a = float(sys.energies[a])
    vec = np.zeros(sys.size, dtype=complex)
    vec[a] = 1.0
    for slot, factor in enumerate(term.factors, start=1):
        vec = sys.dipole @ vec
        try:
            vec = resolvent_apply(sys, factor_energy(e_a, factor, signed), factor.kind, params.epsilon, vec)
        except SingularityError as exc:
            raise SingularityError(f"slot {slot}: {exc}", slot=slot) from None
    vec = sys.dipole @ vec
    return complex(vec[a])


def _eval_list(sys, proc, terms: TermList, params: EvalParams) -> EvalResult:
    check_on_shell(proc, params.on_shell_tol)
    if terms.order != proc.order:
        raise ValidationError(f"term list of order {terms.order} for a process of order {proc.order}")
    prefactor = amplitude_prefactor(proc)
    per_term = []
    failed = []
    for i, term in enumerate(terms.terms):
        try:
            per_term.append((i, eval_term(sys, proc, term, params)))
        except SingularityError as exc:
            failed.append((i, exc.slot))
    if failed:
        listing = ", ".join(f"term {i} slot {s}" for i, s in failed)
        raise SingularityError(f"resonant terms with zero damping: {listing}", terms=failed)
    total = 0j
    for _, value in per_term:
        total += value
    return EvalResult(terms.kind, total, per_term, prefactor)


def eval_chi(sys: LevelSystem, proc: ProcessSpec, params: EvalParams = EvalParams()) -> EvalResult:
    """Causal susceptibility chi^(n), n = number of incoming modes."""
    return _eval_list(sys, proc, expand_susceptibility(proc.order), params)


def eval_s(sys: LevelSystem, proc: ProcessSpec, params: EvalParams = EvalParams()) -> EvalResult:
    """Noncausal scattering quantity S^(n+1)."""
    return _eval_list(sys, proc, expand_scattering(proc.order), params)


def term_denominators(sys, proc, term, params=EvalParams()):
    """Denominators of every factor of ``term`` as an (n, N) complex array."""
    signed = signed_frequencies(proc)
    e_a = float(sys.energies[proc.initial_state])
    return np.array([
        denominators(sys, factor_energy(e_a, f, signed), f.kind, params.epsilon)
        for f in term.factors
    ])
