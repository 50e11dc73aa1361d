import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import solve_banded

from imagtime import (
    ContractError,
    CrankNicolson,
    DiffusionState,
    NumericDomainError,
    PotentialSpec,
    RadialOperator,
    StepSizeError,
    TridiagonalSystem,
    ZeroPivotError,
    assemble_step,
    build_grid,
    dense_eigensolve,
    effective_potential,
    propagate_step,
    thomas_solve,
)
from imagtime.observables import energy_expectation, normalize_state
from imagtime.propagator import cn_coefficients, stencil_measure


def random_dominant(rng, n):
    sub = rng.uniform(-1, 1, n)
    sup = rng.uniform(-1, 1, n)
    sub[0] = sup[-1] = 0.0
    diag = (np.abs(sub) + np.abs(sup) + rng.uniform(0.01, 2.0, n)) * rng.choice([-1.0, 1.0], n)
    return TridiagonalSystem(sub, diag, sup, rng.normal(size=n))


def test_coefficient_example():
    a, b, g = cn_coefficients(np.array([1.0]), 0.01, 1e-3, np.array([0.0]))
    assert a[0] == pytest.approx(-0.615625, rel=1e-13)
    assert b[0] == pytest.approx(2.25, rel=1e-13)
    assert g[0] == pytest.approx(-0.634375, rel=1e-13)


def test_zero_time_step_limit():
    grid = build_grid(50, 4.0, offset=0.05)
    v = effective_potential(PotentialSpec.harmonic(), grid)
    psi = normalize_state(DiffusionState(np.exp(-grid.r)), grid)
    sys_ = assemble_step(psi, v, grid, 1e-15)
    assert np.max(np.abs(sys_.sub)) < 1e-8 and np.max(np.abs(sys_.sup)) < 1e-8
    np.testing.assert_allclose(sys_.diag, 1.0, atol=1e-8)
    np.testing.assert_allclose(sys_.rhs, psi.values, atol=1e-8 * np.max(psi.values))


def test_rhs_matches_closed_form():
    grid = build_grid(40, 3.0)
    v = effective_potential(PotentialSpec.morse(), grid)
    psi = np.sin(np.arange(40.0))
    cn = CrankNicolson(RadialOperator(grid, v), 0.01)
    a, b, g = cn_coefficients(grid.x, grid.spacing, 0.01, v)
    padded = np.concatenate(([0.0], psi, [0.0]))
    xi = -a * padded[:-2] + (2 - b) * psi - g * padded[2:]
    np.testing.assert_allclose(cn.rhs(psi), xi, rtol=1e-12, atol=1e-12 * np.max(np.abs(xi)))


def test_identity_system():
    rhs = np.array([3.0, -1.0, 2.5, 7.0])
    z = np.zeros(4)
    np.testing.assert_array_equal(thomas_solve(TridiagonalSystem(z, np.ones(4), z, rhs)), rhs)


def test_three_by_three_matches_dense():
    s = TridiagonalSystem(np.array([0.0, -1, -1]), np.array([2.0, 2, 2]), np.array([-1.0, -1, 0]), np.ones(3))
    dense = np.array([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], dtype=float)
    np.testing.assert_allclose(thomas_solve(s), np.linalg.solve(dense, np.ones(3)), rtol=1e-14)
    np.testing.assert_allclose(thomas_solve(s), [1.5, 2.0, 1.5], rtol=1e-14)


def test_random_system_residual(rng):
    s = random_dominant(rng, 100)
    assert s.diagonally_dominant
    y = thomas_solve(s)
    assert np.max(np.abs(s.matvec(y) - s.rhs)) / np.max(np.abs(s.rhs)) <= 1e-12


@given(n=st.integers(1, 300), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_thomas_agrees_with_banded_lu(n, seed):
    s = random_dominant(np.random.default_rng(seed), n)
    ab = np.zeros((3, n))
    ab[0, 1:] = s.sup[:-1]
    ab[1] = s.diag
    ab[2, :-1] = s.sub[1:]
    np.testing.assert_allclose(thomas_solve(s), solve_banded((1, 1), ab, s.rhs), rtol=1e-10, atol=1e-12)


def test_zero_pivot_detected():
    s = TridiagonalSystem(np.array([0.0, 1.0]), np.array([1.0, 1.0]), np.array([1.0, 0.0]), np.ones(2))
    assert not s.diagonally_dominant
    with pytest.raises(ZeroPivotError):
        thomas_solve(s)


@pytest.mark.parametrize("dt", [1e-3, 0.5])
def test_every_eigenvector_is_a_fixed_direction(small_ho, dt):
    grid, v = small_ho
    spec = dense_eigensolve(v, grid, grid.n_points)
    cn = CrankNicolson(RadialOperator(grid, v), dt)
    for e, vec in zip(spec.eigenvalues, spec.eigenvectors.T):
        factor = (1 - dt * e / 2) / (1 + dt * e / 2)
        out = thomas_solve(TridiagonalSystem(cn._sub, cn.beta, cn._sup, cn.rhs(vec)))
        assert np.max(np.abs(out - factor * vec)) <= 1e-12 * np.max(np.abs(vec))


def test_mix_one_preserves_ground_direction(small_ho):
    grid, v = small_ho
    vec = dense_eigensolve(v, grid, 1).eigenvectors[:, 0]
    state = normalize_state(DiffusionState(vec), grid)
    out = normalize_state(propagate_step(state, v, grid, 1e-2, mix=1.0), grid)
    assert np.max(np.abs(out.values - state.values)) <= 1e-10
    assert out.time_step == 1


def test_mix_zero_is_flagged_no_op(small_ho):
    grid, v = small_ho
    state = normalize_state(DiffusionState(np.exp(-grid.r)), grid)
    with pytest.warns(RuntimeWarning, match="no-op"):
        out = propagate_step(state, v, grid, 1e-2, mix=0.0)
    np.testing.assert_array_equal(out.values, state.values)
    assert not out.normalized


def test_step_is_not_norm_preserving(small_ho):
    grid, v = small_ho
    state = normalize_state(DiffusionState(np.exp(-0.3 * grid.r)), grid)
    out = propagate_step(state, v, grid, 0.05)
    assert not out.normalized
    norm = RadialOperator(grid, v).norm(out.values)
    assert abs(norm - RadialOperator(grid, v).norm(state.values)) > 1e-6


def test_requires_normalized_input(small_ho):
    grid, v = small_ho
    with pytest.raises(ContractError):
        propagate_step(DiffusionState(np.ones(grid.n_points)), v, grid, 0.1)
    with pytest.raises(ContractError):
        assemble_step(DiffusionState(np.ones(grid.n_points)), v, grid, 0.1)


def test_harmonic_gaussian_relaxes_to_ground():
    grid = build_grid(2001, 10.0)
    v = effective_potential(PotentialSpec.harmonic(), grid)
    op = RadialOperator(grid, v)
    cn = CrankNicolson(op, 1e-3)
    psi = np.exp(-0.2 * grid.r**2)
    for _ in range(10_000):
        psi = cn.step(psi)
        psi /= op.norm(psi)
    assert energy_expectation(normalize_state(DiffusionState(psi), grid), v, grid) == pytest.approx(1.5, abs=1e-4)


def test_step_size_guard_for_attractive_potential():
    grid = build_grid(2001, 20.0)
    v = effective_potential(PotentialSpec.morse(), grid)  # lowest level near -18.43
    CrankNicolson(RadialOperator(grid, v), 0.1)
    with pytest.raises(StepSizeError, match="smaller dt"):
        CrankNicolson(RadialOperator(grid, v), 0.2)


def test_energy_descent_pure_crank_nicolson(small_ho):
    grid, v = small_ho
    top = dense_eigensolve(v, grid, grid.n_points).eigenvalues[-1]
    dt = 1.0 / top  # keeps every amplification factor positive
    op = RadialOperator(grid, v)
    cn = CrankNicolson(op, dt)
    psi = np.random.default_rng(3).uniform(0.0, 1.0, grid.n_points)
    psi /= op.norm(psi)
    last = op.rayleigh_quotient(psi)
    for _ in range(2000):
        psi = cn.step(psi, mix=1.0)
        psi /= op.norm(psi)
        e = op.rayleigh_quotient(psi)
        assert e <= last + 1e-13
        last = e


def test_apply_matches_dense_matrix(small_ho, rng):
    grid, v = small_ho
    op = RadialOperator(grid, v)
    psi = rng.normal(size=grid.n_points)
    np.testing.assert_allclose(op.apply(psi), op.dense() @ psi, rtol=1e-10, atol=1e-9 * np.max(np.abs(op.dense() @ psi)))


def test_measure_symmetrizes_operator(small_ho):
    grid, v = small_ho
    op = RadialOperator(grid, v)
    w = stencil_measure(grid)
    np.testing.assert_allclose(w[:-1] * op.upper[:-1], w[1:] * op.lower[1:], rtol=1e-12)
    # far from the origin the weights approach the r^2 dr element 2 x^5 h
    assert w[-50] == pytest.approx(2 * grid.x[-50] ** 5 * grid.spacing, rel=1e-3)


def test_quadratic_form_matches_matrix(small_ho, rng):
    grid, v = small_ho
    op = RadialOperator(grid, v)
    psi = rng.normal(size=grid.n_points)
    direct = op.inner(psi, op.apply(psi))
    assert op.kinetic_form(psi) + op.potential_form(psi) == pytest.approx(direct, rel=1e-9)


def test_consistency_order_on_smooth_function():
    # continuum H (ell=0, V=0) applied to r e^{-r}: -(r - 4 + 2/r) e^{-r} / 2
    errs, hs = [], []
    for n in (200, 400, 800, 1600):
        grid = build_grid(n, 10.0)
        r = grid.r
        op = RadialOperator(grid, np.zeros(n))
        got = op.apply(r * np.exp(-r))
        exact = -0.5 * (r - 4 + 2 / r) * np.exp(-r)
        band = (r > 0.5) & (r < 5.0)
        errs.append(np.max(np.abs(got - exact)[band]))
        hs.append(grid.spacing)
    order = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert order >= 1.9


def test_state_rejects_non_finite():
    with pytest.raises(NumericDomainError):
        DiffusionState(np.array([1.0, np.inf]))


def test_non_positive_dt(small_ho):
    grid, v = small_ho
    with pytest.raises(ValueError):
        CrankNicolson(RadialOperator(grid, v), 0.0)
