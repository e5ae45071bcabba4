"""Symbolic expansion of chi^(n) and S^(n+1) into sum-over-states terms.

Modes are numbered 0..n; mode n is the signal. A term is a chain

    <a| V G_n V ... V G_1 V |a>

where each Green factor G_k is retarded or advanced and is evaluated at
E_a plus the signed frequencies of the modes the system has interacted
with after k steps. Factors are stored innermost first (G_1 first).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

RETARDED = "retarded"
ADVANCED = "advanced"

CAUSAL = "causal"
NONCAUSAL = "noncausal"


@dataclass(frozen=True)
class GreenFactor:
    """G or G-dagger at E_a + sum of signed frequencies of ``modes``."""

    kind: str
    modes: frozenset

    def includes(self, mode: int) -> bool:
        return mode in self.modes


@dataclass(frozen=True)
class Term:
    factors: tuple
    permutation: tuple
    basic_index: int | None = None

    @property
    def n_advanced(self) -> int:
        return sum(f.kind == ADVANCED for f in self.factors)


@dataclass(frozen=True)
class TermList:
    kind: str
    order: int
    terms: tuple

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, i):
        return self.terms[i]


def _cumulative(sequence, n_retarded):
    factors = []
    seen = set()
    for slot, mode in enumerate(sequence[:-1], start=1):
        seen.add(mode)
        kind = RETARDED if slot <= n_retarded else ADVANCED
        factors.append(GreenFactor(kind, frozenset(seen)))
    return tuple(factors)


def _check_order(n):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"order must be a positive integer, got {n!r}")
    return int(n)


@lru_cache(maxsize=None)
def expand_scattering(n: int) -> TermList:
    """All (n+1)! time orderings of the n+1 modes, every factor retarded."""
    n = _check_order(n)
    terms = []
    for perm in permutations(range(n + 1)):
        terms.append(Term(_cumulative(perm, n), perm))
    return TermList(NONCAUSAL, n, tuple(terms))


@lru_cache(maxsize=None)
def expand_susceptibility(n: int) -> TermList:
    """(n+1) basic shapes times n! orderings of the incoming modes.

    Basic shape m has n-m ket interactions (retarded), then the signal
    emission, then m bra interactions; every factor after the emission is
    advanced and therefore carries the signal frequency.
    """
    n = _check_order(n)
    signal = n
    terms = []
    for m in range(n + 1):
        for perm in permutations(range(n)):
            sequence = perm[: n - m] + (signal,) + perm[n - m:]
            terms.append(Term(_cumulative(sequence, n - m), sequence, m))
    return TermList(CAUSAL, n, tuple(terms))


def expand(kind: str, n: int) -> TermList:
    if kind in (CAUSAL, "chi"):
        return expand_susceptibility(n)
    if kind in (NONCAUSAL, "s"):
        return expand_scattering(n)
    raise ValueError(f"unknown term-list kind {kind!r}")


def default_mode_names(count: int) -> list[str]:
    return [f"w{j + 1}" for j in range(count)]


def factor_to_text(factor: GreenFactor, mode_names, signs) -> str:
    arg = "Ea"
    for j in sorted(factor.modes):
        arg += ("+" if signs[j] > 0 else "-") + mode_names[j]
    g = "G" if factor.kind == RETARDED else "G†"
    return f"{g}({arg})"


def term_to_text(term: Term, mode_names=None, signs=None) -> str:
    """Render as e.g. ``V G†(Ea+w1+w2-w4) V G(Ea+w1+w2) V G(Ea+w1) V``.

    ``signs`` defaults to the canonical process: incoming modes absorbed,
    last mode emitted.
    """
    count = len(term.factors) + 1
    if mode_names is None:
        mode_names = default_mode_names(count)
    if signs is None:
        signs = [+1] * (count - 1) + [-1]
    parts = ["V"]
    for factor in reversed(term.factors):
        parts.append(factor_to_text(factor, mode_names, signs))
        parts.append("V")
    return " ".join(parts)


def term_to_dict(term: Term) -> dict:
    out = {
        "permutation": list(term.permutation),
        "factors": [{"kind": f.kind, "modes": sorted(f.modes)} for f in term.factors],
    }
    if term.basic_index is not None:
        out["basic_index"] = term.basic_index
    return out


def termlist_to_dict(tl: TermList) -> dict:
    return {
        "kind": tl.kind,
        "order": tl.order,
        "count": len(tl.terms),
        "terms": [dict(id=i, **term_to_dict(t)) for i, t in enumerate(tl.terms)],
    }
