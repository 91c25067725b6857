import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from elmlab.hamiltonians import (
    IbaParams,
    ModelParams,
    alpha_from_theta,
    assemble_compact,
    compact_coefficients,
    elm_collective,
    elm_qubit,
    elm_to_iba,
    iba_to_elm,
    lipkin_collective,
    lipkin_qubit,
    qubit_spin_ops,
)
from elmlab.spin import collective_ops, eigh


def ground(H, N):
    return eigh(H)[0][0] / N


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(0, 0.5, 0.0)
    with pytest.raises(ValueError):
        ModelParams(4, 1.5, 0.0)
    with pytest.raises(ValueError):
        ModelParams(4, 0.5, -0.1)


def test_lipkin_lambda0_counts():
    H = lipkin_collective(ModelParams(6, 0.0, 0.0))
    assert np.allclose(H, np.diag(np.arange(7.0)))


def test_lipkin_n2_lambda1():
    w, _ = eigh(lipkin_collective(ModelParams(2, 1.0, 0.0)))
    assert np.allclose(w, [-2, -2, 0])


@pytest.mark.parametrize(
    "lam, alpha, expected",
    [(0.5, 0.0, -0.2881459), (0.2, 1 / np.sqrt(2), -0.0565697), (1.0, 1.0, -2.6180339), (0.7, 0.0, -0.5596571)],
)
def test_table_values(lam, alpha, expected):
    assert ground(elm_collective(ModelParams(6, lam, alpha)), 6) == pytest.approx(expected, abs=1e-6)


def test_elm_reduces_to_lipkin_at_alpha0():
    p = ModelParams(5, 0.37, 0.0)
    assert np.allclose(elm_collective(p), lipkin_collective(p))


def test_coefficients_alpha0():
    c = compact_coefficients(ModelParams(6, 0.4, 0.0))
    assert c.gx == c.gzz == c.gxz == 0
    assert c.gz == pytest.approx(0.6)
    assert c.gxx == pytest.approx(-4 * 0.4 / 6)


def test_coefficients_lambda0():
    c = compact_coefficients(ModelParams(6, 0.0, 0.8))
    assert (c.gx, c.gzz, c.gxz, c.gxx) == (0, 0, 0, 0)
    assert c.gz == 1 and c.g0 == 3


def test_coefficients_example():
    c = compact_coefficients(ModelParams(6, 0.2, 1 / np.sqrt(2)))
    assert c.gz == pytest.approx(0.7)
    assert c.gx == pytest.approx(0.282843, abs=1e-6)
    assert c.gxz == pytest.approx(0.047140, abs=1e-6)
    assert c.gzz == pytest.approx(-0.063807, abs=1e-6)
    assert c.gxx == pytest.approx(-0.180474, abs=1e-6)


@given(st.integers(1, 9), st.floats(0, 1), st.floats(0, 2))
@settings(max_examples=60, deadline=None)
def test_compact_assembly_identity(N, lam, alpha):
    p = ModelParams(N, lam, alpha)
    Sz, Sx = collective_ops(N)
    assert np.max(np.abs(assemble_compact(compact_coefficients(p), Sz, Sx) - elm_collective(p))) <= 1e-12


def test_qubit_n1_lambda0():
    assert np.allclose(lipkin_qubit(ModelParams(1, 0.0, 0.0)), np.diag([0.0, 1.0]))


def test_qubit_table_value():
    assert ground(elm_qubit(ModelParams(6, 0.5, 0.0)), 6) == pytest.approx(-0.2881459, abs=1e-6)


def test_qubit_n2_lambda1():
    assert eigh(lipkin_qubit(ModelParams(2, 1.0, 0.0)))[0][0] == pytest.approx(-2)


@given(st.integers(1, 5), st.floats(0, 1), st.floats(0, 1.5))
@settings(max_examples=30, deadline=None)
def test_qubit_matches_collective_assembly(N, lam, alpha):
    p = ModelParams(N, lam, alpha)
    Sz, Sx = qubit_spin_ops(N)
    assert np.allclose(elm_qubit(p), assemble_compact(compact_coefficients(p), Sz, Sx), atol=1e-12)


def test_qubit_cap():
    with pytest.raises(ValueError):
        elm_qubit(ModelParams(13, 0.5, 0.5))


def test_iba_map():
    assert iba_to_elm(IbaParams(0.3, 0.0)) == (0.3, 0.0)
    assert elm_to_iba(0.1, 1 / np.sqrt(2)).chi == pytest.approx(-np.sqrt(7 / 4))
    lam, alpha = iba_to_elm(IbaParams(0.42, -0.9))
    back = elm_to_iba(lam, alpha)
    assert back.rho == pytest.approx(0.42, abs=1e-15) and back.chi == pytest.approx(-0.9, abs=1e-15)


def test_alpha_from_theta_is_finite():
    assert np.isfinite(alpha_from_theta(0.3))
