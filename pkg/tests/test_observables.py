import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from imagtime import (
    ContractError,
    DiffusionState,
    NumericDomainError,
    PotentialSpec,
    RadialOperator,
    build_grid,
    count_nodes,
    dense_eigensolve,
    effective_potential,
    expectation_set,
    moment,
    radial_distribution,
)
from imagtime.grid import QuadratureRule
from imagtime.observables import energy_expectation, normalize_state, refined_energy, virial_ratio

HO = PotentialSpec.harmonic()


@pytest.fixture(scope="module")
def fine():
    return build_grid(10001, 10.0)


def exact_ho_ground(grid):
    return normalize_state(DiffusionState(np.exp(-0.5 * grid.r**2)), grid)


def test_oracle_eigenvector_energy(small_ho):
    grid, v = small_ho
    sp = dense_eigensolve(v, grid, 4)
    for e, vec in zip(sp.eigenvalues, sp.eigenvectors.T):
        state = normalize_state(DiffusionState(vec), grid)
        assert energy_expectation(state, v, grid) == pytest.approx(e, abs=1e-10)


def test_analytic_ho_ground_moments(fine):
    s = exact_ho_ground(fine)
    assert moment(s, fine, -2) == pytest.approx(2.0, abs=1e-4)
    assert moment(s, fine, 1) == pytest.approx(2 / np.sqrt(np.pi), abs=1e-4)
    assert moment(s, fine, 0) == pytest.approx(1.0, abs=1e-6)
    assert moment(s, fine, 2) == pytest.approx(1.5, abs=1e-6)
    assert refined_energy(s, effective_potential(HO, fine), fine) == pytest.approx(1.5, abs=1e-8)
    assert virial_ratio(s, HO, fine) == pytest.approx(1.0, abs=1e-4)


def test_moment_order_range(fine):
    with pytest.raises(ValueError):
        moment(exact_ho_ground(fine), fine, 3)


def test_virial_ratio_scale_invariant(fine):
    psi = np.exp(-0.6 * fine.r**2) * (1 + 0.1 * fine.r)
    a = virial_ratio(normalize_state(DiffusionState(psi), fine), HO, fine)
    b = virial_ratio(normalize_state(DiffusionState(2 * psi), fine), HO, fine)
    assert a == pytest.approx(b, rel=1e-13)


def test_unnormalized_and_zero_states_rejected(fine):
    with pytest.raises(ContractError):
        energy_expectation(DiffusionState(np.ones(fine.n_points)), effective_potential(HO, fine), fine)
    with pytest.raises(ContractError):
        normalize_state(DiffusionState(np.zeros(fine.n_points)), fine)
    with pytest.raises(ContractError):
        radial_distribution(DiffusionState(np.zeros(fine.n_points), normalized=True), fine)


def test_rdf_integrates_to_one(fine):
    s = exact_ho_ground(fine)
    rdf = radial_distribution(s, fine)
    assert rdf.shape == (fine.n_points, 2)
    np.testing.assert_array_equal(rdf[:, 0], fine.r)
    total = QuadratureRule.for_grid(fine).integrate(rdf[:, 1] * fine.jacobian)
    assert total == pytest.approx(1.0, abs=1e-6)
    assert count_nodes(s.values) == 0


def test_node_counting_ignores_dust():
    v = np.array([0.0, 1e-12, -1e-12, 0.5, 1.0, -0.3, -1.0, 1e-10, 0.2, -1e-13])
    assert count_nodes(v) == 2


def test_ho_spectrum_observables(ho_spectrum):
    r_mean = [s.expectations.moments[1] for s in ho_spectrum]
    assert np.all(np.diff(r_mean) > 0)
    assert ho_spectrum[3].nodes == 3
    for s in ho_spectrum:
        assert abs(s.expectations.virial_ratio - 1.0) <= 1e-4
        assert s.expectations.moments[0] == pytest.approx(1.0, abs=1e-12)


def test_hypervirial_additivity(ho_spectrum):
    for s in ho_spectrum:
        ex = s.expectations
        assert abs(ex.energy - ex.kinetic - ex.potential_exp) <= 1e-10


@given(
    c=st.lists(st.floats(-1, 1), min_size=3, max_size=3),
    ell=st.integers(0, 2),
    lam=st.floats(-0.5, 20),
)
@settings(max_examples=30, deadline=None)
def test_additivity_for_arbitrary_states(c, ell, lam):
    grid = build_grid(400, 10.0)
    spec = PotentialSpec.spiked(lam, 1.0, ell=ell)
    psi = (c[0] + c[1] * grid.r + c[2] * grid.r**2 + 1.5) * np.exp(-0.5 * grid.r**2) * grid.r ** (ell + 0.5)
    state = normalize_state(DiffusionState(psi), grid)
    try:
        ex = expectation_set(state, spec, grid)
    except NumericDomainError:
        return
    assert abs(ex.energy - ex.kinetic - ex.potential_exp) <= 1e-10 * max(1.0, abs(ex.energy))
    op = RadialOperator(grid, effective_potential(spec, grid))
    v_eff_exp = op.potential_form(state.values) / op.norm(state.values) ** 2
    assert abs(ex.energy - (ex.kinetic - ex.centrifugal) - v_eff_exp) <= 1e-10 * max(1.0, abs(ex.energy))
    parts = ex.diagnostics["potential_harmonic_part"] + ex.diagnostics["potential_spike_part"]
    assert parts == pytest.approx(ex.potential_exp, rel=1e-12, abs=1e-12)


def test_centrifugal_bookkeeping():
    grid = build_grid(2001, 10.0)
    spec = PotentialSpec.harmonic(ell=1)
    op = RadialOperator(grid, effective_potential(spec, grid))
    state = normalize_state(DiffusionState(grid.r * np.exp(-0.5 * grid.r**2)), grid)
    ex = expectation_set(state, spec, grid, operator=op)
    # exact p-wave ground state: E = 2.5, <V> = 1.25
    assert ex.energy_refined == pytest.approx(2.5, abs=1e-6)
    assert ex.potential_exp == pytest.approx(1.25, abs=1e-5)
    assert ex.centrifugal == pytest.approx(moment(state, grid, -2), rel=1e-4)
    assert ex.virial_ratio == pytest.approx(ex.potential_exp / ex.kinetic)


def test_as_dict_round_trip(ho_spectrum):
    d = ho_spectrum[0].expectations.as_dict()
    assert d["energy"] == pytest.approx(ho_spectrum[0].energy, rel=1e-14)
    assert set(d["moments"]) == {"-2", "-1", "0", "1", "2"}
