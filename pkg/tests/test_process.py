import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wavemix.errors import OffShellError, SpecFormatError, ValidationError
from wavemix.process import (
    ABSORBED,
    EMITTED,
    ModeSpec,
    ProcessSpec,
    amplitude_prefactor,
    check_on_shell,
    load_process,
    process_to_dict,
    signed_frequencies,
)


def proc_of(*pairs, occupations=None):
    occupations = occupations or [1 if s > 0 else 0 for _, s in pairs]
    return ProcessSpec(tuple(ModeSpec(w, s, n) for (w, s), n in zip(pairs, occupations)))


@pytest.mark.parametrize("pairs, expected", [
    (((1, +1), (2, +1), (3, +1), (6, -1)), [1, 2, 3, -6]),
    (((0.5, +1), (0.5, -1)), [0.5, -0.5]),
    (((2, -1), (1, +1), (1, +1)), [-2, 1, 1]),
])
def test_signed_frequencies(pairs, expected):
    assert signed_frequencies(proc_of(*pairs)) == expected


def test_on_shell_sum_frequency():
    assert check_on_shell(proc_of((1, 1), (1, 1), (1, 1), (3, -1)), 1e-9) == 0.0


def test_off_shell_reports_residual():
    with pytest.raises(OffShellError) as exc:
        check_on_shell(proc_of((1, 1), (1, 1), (1, 1), (3.1, -1)), 1e-9)
    assert exc.value.residual == pytest.approx(-0.1, abs=1e-12)
    assert "off-shell residual" in str(exc.value)


def test_on_shell_difference_frequency():
    assert check_on_shell(proc_of((1, 1), (2, -1), (1, 1)), 1e-9) == 0.0


def test_default_tolerance_is_relative():
    w = 1e6
    proc = proc_of((w, 1), (w + 1e-4, -1))
    check_on_shell(proc)  # 1e-4 <= 1e-9 * 1e6
    with pytest.raises(OffShellError):
        check_on_shell(proc_of((1.0, 1), (1.0 + 1e-4, -1)))


def test_prefactor_sum_frequency_unit_occupation():
    expected = (2 * math.pi) ** 2 * math.sqrt(1 * 1 * 1 * 1) * math.sqrt(1 * 1 * 1 * 3)
    value = amplitude_prefactor(proc_of((1, 1), (1, 1), (1, 1), (3, -1)))
    assert value == pytest.approx(expected, rel=1e-15)
    assert value == pytest.approx(68.37863, abs=5e-6)


def test_prefactor_empty_absorbed_mode():
    proc = proc_of((1, 1), (1, 1), (1, 1), (3, -1), occupations=[0, 1, 1, 0])
    with pytest.raises(ValidationError, match="no photons to absorb"):
        amplitude_prefactor(proc)


def test_prefactor_sqrt_n_scaling():
    base = amplitude_prefactor(proc_of((1, 1), (1, 1), (1, 1), (3, -1)))
    four = amplitude_prefactor(proc_of((1, 1), (1, 1), (1, 1), (3, -1), occupations=[4, 1, 1, 0]))
    assert four == pytest.approx(2 * base, rel=1e-15)


def test_prefactor_volume_exponent():
    proc = proc_of((1, 1), (1, 1), (1, 1), (3, -1))
    big = ProcessSpec(proc.modes, 0, 4.0)
    # (2 pi / Omega)^2 for four modes
    assert amplitude_prefactor(big) == pytest.approx(amplitude_prefactor(proc) / 16, rel=1e-15)


occ = st.integers(1, 50)
freq = st.floats(0.01, 10)


@given(st.lists(st.tuples(freq, occ), min_size=2, max_size=5), st.integers(0, 20), st.randoms())
def test_prefactor_permutation_invariant(absorbed, n_signal, rnd):
    total = math.fsum(w for w, _ in absorbed)
    modes = [ModeSpec(w, ABSORBED, n) for w, n in absorbed]
    shuffled = modes[:]
    rnd.shuffle(shuffled)
    sig = ModeSpec(total, EMITTED, n_signal)
    a = amplitude_prefactor(ProcessSpec(tuple(modes + [sig])))
    b = amplitude_prefactor(ProcessSpec(tuple(shuffled + [sig])))
    assert a == pytest.approx(b, rel=1e-12)


@given(st.lists(st.tuples(freq, occ), min_size=1, max_size=4), st.integers(0, 20), st.integers(1, 30))
def test_prefactor_occupation_ratios(absorbed, n_signal, bump):
    total = math.fsum(w for w, _ in absorbed)
    modes = [ModeSpec(w, ABSORBED, n) for w, n in absorbed]
    base = amplitude_prefactor(ProcessSpec(tuple(modes + [ModeSpec(total, EMITTED, n_signal)])))
    w0, n0 = absorbed[0]
    up = [ModeSpec(w0, ABSORBED, n0 + bump)] + modes[1:]
    ratio = amplitude_prefactor(ProcessSpec(tuple(up + [ModeSpec(total, EMITTED, n_signal)]))) / base
    assert ratio == pytest.approx(math.sqrt((n0 + bump) / n0), rel=1e-12)
    emitted_up = amplitude_prefactor(ProcessSpec(tuple(modes + [ModeSpec(total, EMITTED, n_signal + bump)])))
    assert emitted_up / base == pytest.approx(math.sqrt((n_signal + bump + 1) / (n_signal + 1)), rel=1e-12)


@pytest.mark.parametrize("kwargs", [
    dict(frequency=0.0), dict(frequency=-1.0), dict(frequency=1.0, sign=0),
    dict(frequency=1.0, occupation=-1), dict(frequency=1.0, occupation=1.5),
])
def test_mode_invariants(kwargs):
    with pytest.raises(ValidationError):
        ModeSpec(**kwargs)


def test_process_needs_two_modes():
    with pytest.raises(ValidationError):
        ProcessSpec((ModeSpec(1.0),))


def test_load_process_round_trip():
    text = ('{"modes": [{"omega": 1, "sign": "+", "n": 2}, {"omega": 2, "sign": "+", "n": 1},'
            ' {"omega": 3, "sign": "-", "n": 0}], "initial_state": 0, "omega_quant_volume": 2.5}')
    proc = load_process(text)
    assert signed_frequencies(proc) == [1, 2, -3]
    assert proc.modes[0].occupation == 2
    assert proc.quantization_volume == 2.5
    assert process_to_dict(proc) == process_to_dict(load_process(__import__("json").dumps(process_to_dict(proc))))


@pytest.mark.parametrize("text", [
    '{"modes": [{"omega": 1, "sign": "x"}, {"omega": 1, "sign": "-"}]}',
    '{"modes": [{"omega": "1", "sign": "+"}, {"omega": 1, "sign": "-"}]}',
    '{"modes": 3}',
    '{"modes": [{"omega": 1, "sign": "+"}, {"omega": 1, "sign": "-"}], "initial_state": 0.5}',
    '{"modes": [',
])
def test_load_process_format_errors(text):
    with pytest.raises(SpecFormatError):
        load_process(text)
