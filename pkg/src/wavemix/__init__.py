"""Causal susceptibilities and noncausal scattering amplitudes for nonlinear wave mixing."""

from .errors import (
    OffShellError,
    OracleError,
    SingularityError,
    SpecFormatError,
    ValidationError,
    WavemixError,
)
from .evaluator import EvalParams, EvalResult, eval_chi, eval_s, eval_term, resolvent_apply
from .process import (
    ModeSpec,
    ProcessSpec,
    amplitude_prefactor,
    check_on_shell,
    load_process,
    signed_frequencies,
)
from .spectra import PoleReport, ScanRecord, kh_pair, pole_table, scan
from .system import LevelSystem, load_system, validate_system
from .termgen import Term, TermList, expand_scattering, expand_susceptibility, term_to_text

__all__ = [
    "EvalParams", "EvalResult", "LevelSystem", "ModeSpec", "OffShellError", "OracleError",
    "PoleReport", "ProcessSpec", "ScanRecord", "SingularityError", "SpecFormatError", "Term",
    "TermList", "ValidationError", "WavemixError", "amplitude_prefactor", "check_on_shell",
    "eval_chi", "eval_s", "eval_term", "expand_scattering", "expand_susceptibility", "kh_pair",
    "load_process", "load_system", "pole_table", "resolvent_apply", "scan", "signed_frequencies",
    "term_to_text", "validate_system",
]
