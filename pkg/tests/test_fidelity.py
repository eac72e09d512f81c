import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qflow.fidelity import (
    UNBOUNDED,
    end_to_end_fidelity,
    fidelity_to_werner,
    length_bound,
    swap_compose,
    werner_to_fidelity,
)


def test_pure_state_maps_to_unit_werner():
    assert fidelity_to_werner(1.0) == 1.0


def test_werner_of_0_9925():
    assert fidelity_to_werner(0.9925) == pytest.approx(0.99, abs=1e-12)


def test_werner_of_0_7():
    assert fidelity_to_werner(0.7) == pytest.approx(0.6, abs=1e-12)


@pytest.mark.parametrize("f", [0.5, 0.4, 1.0001, 0.0])
def test_fidelity_range_enforced(f):
    with pytest.raises(ValueError):
        fidelity_to_werner(f)


def test_swap_compose_values():
    assert swap_compose(1.0, 1.0) == 1.0
    assert swap_compose(0.7, 1.0) == 0.7
    w = swap_compose(0.99, 0.99)
    assert w == pytest.approx(0.9801, abs=1e-12)
    assert werner_to_fidelity(w) == pytest.approx(0.985075, abs=1e-12)


def test_end_to_end_fidelity_values():
    assert end_to_end_fidelity(0.99, 1) == pytest.approx(0.9925, abs=1e-12)
    assert end_to_end_fidelity(0.99, 4) == pytest.approx(0.970447, abs=1e-6)
    assert end_to_end_fidelity(1.0, 17) == 1.0


def test_end_to_end_fidelity_rejects_zero_length():
    with pytest.raises(ValueError):
        end_to_end_fidelity(0.99, 0)


def test_roundtrip_single_link():
    for f in (0.51, 0.7, 0.9925, 1.0):
        assert end_to_end_fidelity(fidelity_to_werner(f), 1) == pytest.approx(f, abs=1e-15)


def test_length_bound_equal_fidelities():
    assert length_bound(0.9925, 0.9925) == 1


def test_length_bound_paper_style_case():
    assert length_bound(0.95, 0.9925) == 6


def test_length_bound_unbounded_sentinel():
    assert length_bound(0.93, 1.0) is UNBOUNDED


def test_length_bound_infeasible_target():
    with pytest.raises(ValueError, match="exceeds elementary"):
        length_bound(0.995, 0.9925)


def test_length_bound_exact_tie_snaps():
    # target chosen so the ratio is exactly 3 up to representation error
    f_elem = 0.9925
    w = fidelity_to_werner(f_elem)
    f_target = (1 + 3 * w**3) / 4
    assert length_bound(f_target, f_elem) == 3


@given(
    st.floats(min_value=0.51, max_value=0.999),
    st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=300)
def test_length_bound_tightness(f_elem, frac):
    f_target = f_elem - frac * (f_elem - 0.501)
    l = length_bound(f_target, f_elem)
    w = fidelity_to_werner(f_elem)
    assert l >= 1
    assert end_to_end_fidelity(w, l) >= f_target - 1e-12
    assert end_to_end_fidelity(w, l + 1) < f_target + 1e-12


@given(st.integers(min_value=1, max_value=30), st.floats(min_value=0.34, max_value=0.999))
def test_monotone_decay(n, w):
    assert end_to_end_fidelity(w, n + 1) < end_to_end_fidelity(w, n)


@given(
    st.floats(min_value=0.4, max_value=1.0),
    st.floats(min_value=0.4, max_value=1.0),
    st.floats(min_value=0.4, max_value=1.0),
)
def test_swap_compose_associative_commutative(a, b, c):
    assert swap_compose(a, b) == pytest.approx(swap_compose(b, a), rel=1e-12)
    assert swap_compose(swap_compose(a, b), c) == pytest.approx(
        swap_compose(a, swap_compose(b, c)), rel=1e-12
    )


@given(st.floats(min_value=0.4, max_value=1.0), st.integers(min_value=1, max_value=12))
def test_repeated_composition_is_power(w, n):
    acc = w
    for _ in range(n - 1):
        acc = swap_compose(acc, w)
    assert acc == pytest.approx(w**n, rel=1e-9)
