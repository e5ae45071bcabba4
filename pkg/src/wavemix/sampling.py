"""Seeded random systems and off-resonant processes for property checks."""
from __future__ import annotations

import numpy as np

from .process import sum_frequency
from .system import LevelSystem, validate_system
from .termgen import expand_scattering


def random_system(rng: np.random.Generator, n_levels: int, e_max=3.0, complex_dipole=True) -> LevelSystem:
    """Ground level at 0, the rest uniform in (0.3, e_max), random Hermitian V."""
    energies = np.concatenate([[0.0], np.sort(rng.uniform(0.3, e_max, n_levels - 1))])
    v = rng.normal(size=(n_levels, n_levels))
    if complex_dipole:
        v = v + 1j * rng.normal(size=(n_levels, n_levels))
    v = np.triu(v)
    v = v + np.triu(v, 1).conj().T
    np.fill_diagonal(v, v.diagonal().real)
    return validate_system(LevelSystem(energies, v))


def cumulative_margin(sys: LevelSystem, proc) -> float:
    """Smallest |E_a + partial signed sum - E_b| over every ordering and level.

    S^(n+1) sums over all orderings, so its factor arguments cover every
    subset that chi^(n) can produce as well.
    """
    signed = [m.signed for m in proc.modes]
    e_a = sys.energies[proc.initial_state]
    margin = np.inf
    for term in expand_scattering(proc.order):
        for f in term.factors:
            arg = e_a + sum(signed[j] for j in f.modes)
            margin = min(margin, float(np.min(np.abs(arg - sys.energies))))
    return margin


def random_offresonant_process(rng: np.random.Generator, sys: LevelSystem, n: int,
                               margin=0.1, w_range=(0.1, 2.0), max_tries=10_000):
    """Sum-frequency process with every resolvent argument ``margin`` away from all levels."""
    for _ in range(max_tries):
        proc = sum_frequency(rng.uniform(*w_range, n))
        if cumulative_margin(sys, proc) >= margin:
            return proc
    raise RuntimeError(f"no off-resonant frequency set found in {max_tries} tries")
