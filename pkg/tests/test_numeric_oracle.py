import numpy as np
import pytest

from polyhom.cma_model import assemble_model
from polyhom.fuchsian import solve_polyhom
from polyhom.numeric_oracle import (GridSolution, OracleError, fit_coefficients,
                                    manufactured, manufactured_error, solve_bvp)


@pytest.mark.parametrize("power", [4, 6])
def test_second_order_convergence(power):
    errs = [manufactured_error(2, power, 0.1, 1.0, m) for m in (32, 64, 128)]
    for coarse, fine in zip(errs, errs[1:]):
        assert 3.5 <= coarse / fine <= 4.5


def test_t4_forcing():
    _, f = manufactured(2, 4)
    assert f(np.array([0.5]))[0] == pytest.approx(-12 * 0.25)


def test_resonant_manufactured_solution_has_zero_forcing():
    _, f = manufactured(2, 6)
    assert np.all(f(np.linspace(0.1, 1, 5)) == 0)


def test_zero_problem():
    sol = solve_bvp(2, lambda t: 0 * t, 0.1, 1.0, 32, (0.0, 0.0))
    assert np.all(sol.values == 0)


def test_input_validation():
    f = lambda t: 0 * t
    with pytest.raises(ValueError):
        solve_bvp(2, f, 0.1, 1.0, 8, (0, 0))
    with pytest.raises(ValueError):
        solve_bvp(2, f, 1e-4, 1.0, 32, (0, 0))


def _samples(fn, t0=0.1, T=1.0, m=64):
    t = np.linspace(t0, T, m + 1)
    return GridSolution(t, fn(t), 2, lambda s: s)


def test_fit_noiseless():
    fit = fit_coefficients(_samples(lambda t: 2 * t**4 - t**6), [(4, 0), (6, 0)])
    assert fit.coeffs == pytest.approx([2, -1], abs=1e-6)
    fit = fit_coefficients(_samples(lambda t: t**6 * np.log(t)), [(6, 0), (6, 1)])
    assert fit.coeffs == pytest.approx([0, 1], abs=1e-6)


def test_fit_from_solver():
    exact, f = manufactured(2, 4)
    sol = solve_bvp(2, f, 0.1, 1.0, 128, (exact(0.1), exact(1.0)))
    fit = fit_coefficients(sol, [(4, 0)])
    assert fit.coeffs[0] == pytest.approx(1.0, abs=10 * sol.h**2)


def test_ill_conditioned_basis_refused():
    with pytest.raises(OracleError):
        fit_coefficients(_samples(lambda t: t**4, t0=0.9), [(4, 0), (5, 0), (6, 0), (7, 0), (8, 0), (9, 0)])
    with pytest.raises(OracleError):
        fit_coefficients(_samples(lambda t: t**4), [(4, 0), (6, 0)], max_condition=1.0)


def test_expansion_agrees_with_oracle():
    n, K, t0, T = 2, 10, 0.05, 0.5
    E = solve_polyhom(assemble_model(n, "t", forcing={2: 1, 6: 1}), K).expansion
    exact = np.vectorize(E.evaluate)
    f = lambda t: 1.0 + np.asarray(t) ** 4
    C = 0.05
    for m in (32, 64, 128):
        sol = solve_bvp(n, f, t0, T, m, (exact(t0), exact(T)))
        err = np.max(np.abs(sol.values - exact(sol.t)))
        assert err <= C * (sol.h**2 + T ** (K + 1))
