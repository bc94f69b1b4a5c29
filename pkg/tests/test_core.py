import numpy as np
import pytest
from coupled_relaxation import (
	ContractViolation,
	DomainError,
	FluxModel,
	PSystemModel,
	RelaxMatrix,
	RelaxState,
	Side,
	characteristic_vars,
	check_subcharacteristic,
	eigenstructure,
	from_characteristic_vars,
	lax_membership_residual,
	lax_parametrize,
	linear_advection,
	relax_rate_a
)

from .utils import random_relax_matrix, random_traces


def test_RelaxState():
	q = RelaxState([1, 2], [3, 4])

	assert q.dim == 2
	assert np.array_equal(q.vector, [1.0, 2.0, 3.0, 4.0])
	assert RelaxState.from_vector([1, 2, 3, 4]) == q
	assert RelaxState.coerce(q) is q
	assert RelaxState.coerce([1, 2, 3, 4]) == q

	with pytest.raises(ContractViolation, match='equal length'):
		RelaxState([1, 2], [3])

	with pytest.raises(ContractViolation, match='even length'):
		RelaxState.from_vector([1, 2, 3])


def test_RelaxState_lift():
	q = RelaxState.lift([2.0], linear_advection(3.0))

	assert np.array_equal(q.u, [2.0])
	assert np.array_equal(q.v, [6.0])


def test_RelaxMatrix():
	a = RelaxMatrix.scalar(4, 2, Side.RIGHT)

	assert a.dim == 2
	assert a.side is Side.RIGHT
	assert np.array_equal(a.sqrt, [2.0, 2.0])
	assert np.array_equal(a.sqrt_inv, [0.5, 0.5])
	assert np.array_equal(a.matrix, 4 * np.eye(2))
	assert a.max_speed == 2.0
	assert RelaxMatrix([1.0], 'left').side is Side.LEFT

	with pytest.raises(DomainError):
		RelaxMatrix([0.0, 1.0])


def test_FluxModel_box():
	with pytest.raises(ContractViolation, match='upper bounds below'):
		FluxModel(1, abs, abs, [1.0], [0.0])

	with pytest.raises(ContractViolation, match='model dimension'):
		FluxModel(2, abs, abs, [0.0], [1.0])


def test_FluxModel_sample():
	model = PSystemModel().flux_model()
	samples = model.sample(50, np.random.default_rng(1))

	assert samples.shape == (50, 2)
	assert np.all(samples >= model.lower)
	assert np.all(samples <= model.upper)


def test_FluxModel_jacobian_error():
	model = PSystemModel().flux_model()
	samples = model.sample(20, np.random.default_rng(2))

	assert model.jacobian_error(samples) <= 1e-6


def test_eigenstructure_identity():
	es = eigenstructure(RelaxMatrix([1.0]))

	assert np.array_equal(es.lambdas, [-1.0, 1.0])
	assert np.array_equal(es.r_minus, [[-1.0], [1.0]])
	assert np.array_equal(es.r_plus, [[1.0], [1.0]])


def test_eigenstructure_left_vectors():
	es = eigenstructure(RelaxMatrix([4.0]))

	assert np.array_equal(es.lambdas, [-2.0, 2.0])
	assert np.array_equal(es.l_minus, [[-1.0, 0.5]])
	assert np.array_equal(es.l_plus, [[1.0, 0.5]])


def test_eigenstructure_ordering():
	es = eigenstructure(RelaxMatrix([1.0, 4.0]))

	assert np.array_equal(es.lambdas, [-1.0, -2.0, 1.0, 2.0])


def test_eigenstructure_diagonalizes():
	rng = np.random.default_rng(3)

	for _ in range(100):
		a = random_relax_matrix(rng, 3)
		es = eigenstructure(a)
		system = np.block([
			[np.zeros((3, 3)), np.eye(3)],
			[a.matrix, np.zeros((3, 3))]
		])

		assert np.allclose(es.left @ es.right, np.eye(6), atol=1e-13)
		assert np.allclose(es.system_matrix, system, atol=1e-12)


def test_eigenstructure_domain_error():
	with pytest.raises(DomainError):
		eigenstructure([1.0, -1.0])


def test_characteristic_vars():
	w_minus, w_plus = characteristic_vars(RelaxState([0.0], [0.0]), RelaxMatrix([1.0]))
	assert np.array_equal(w_minus, [0.0])
	assert np.array_equal(w_plus, [0.0])

	w_minus, w_plus = characteristic_vars(RelaxState([1.0], [0.0]), RelaxMatrix([1.0]))
	assert np.array_equal(w_minus, [-0.5])
	assert np.array_equal(w_plus, [0.5])

	w_minus, w_plus = characteristic_vars(RelaxState([1.0], [2.0]), RelaxMatrix([4.0]))
	assert np.array_equal(w_minus, [0.0])
	assert np.array_equal(w_plus, [2.0])

	with pytest.raises(ContractViolation):
		characteristic_vars(RelaxState([1.0], [2.0]), RelaxMatrix([4.0, 1.0]))


def test_characteristic_vars_bijection():
	rng = np.random.default_rng(4)

	for q, _ in random_traces(200, 3, seed=5):
		a = random_relax_matrix(rng, 3)
		restored = from_characteristic_vars(*characteristic_vars(q, a), a)

		assert np.allclose(restored.vector, q.vector, rtol=1e-13, atol=1e-13)


def test_check_subcharacteristic_scalar():
	samples = linear_advection().sample(10, np.random.default_rng(6))

	report = check_subcharacteristic(RelaxMatrix([1.0]), linear_advection(), samples)
	assert report.ok
	assert report.worst_eigenvalue == pytest.approx(0.0, abs=1e-12)

	report = check_subcharacteristic(RelaxMatrix([0.25]), linear_advection(), samples)
	assert not report.ok
	assert report.worst_eigenvalue == pytest.approx(-0.75)


def test_check_subcharacteristic_psystem_at_rest():
	model = PSystemModel()
	a = RelaxMatrix.scalar(relax_rate_a(model), 2)
	samples = np.column_stack([np.linspace(0.2, 2.0, 10), np.zeros(10)])

	report = check_subcharacteristic(a, model.flux_model(), samples, tol=1e-6)

	assert report.ok


def test_lax_parametrize():
	a = RelaxMatrix([1.0])
	q_r, q_l = lax_parametrize([0.0], [0.0], RelaxState([1.0], [2.0]), RelaxState([3.0], [4.0]), a, a)
	assert q_r == RelaxState([1.0], [2.0])
	assert q_l == RelaxState([3.0], [4.0])

	q_r, _ = lax_parametrize([2.0], [0.0], [0.0, 0.0], [0.0, 0.0], a, a)
	assert q_r == RelaxState([-2.0], [2.0])

	a = RelaxMatrix([4.0])
	_, q_l = lax_parametrize([0.0], [2.0], [0.0, 0.0], [1.0, 1.0], a, a)
	assert q_l == RelaxState([2.0], [3.0])

	with pytest.raises(ContractViolation):
		lax_parametrize([0.0, 0.0], [0.0], [0.0, 0.0], [1.0, 1.0], a, a)


def test_lax_parametrize_membership():
	rng = np.random.default_rng(7)

	for q0_minus, q0_plus in random_traces(1000, 2, seed=8):
		a_left = random_relax_matrix(rng, 2)
		a_right = random_relax_matrix(rng, 2)
		sigma_minus, sigma_plus = rng.uniform(-1.0, 1.0, (2, 2))

		q_r, q_l = lax_parametrize(sigma_minus, sigma_plus, q0_minus, q0_plus, a_left, a_right)

		assert lax_membership_residual(q_r, q_l, q0_minus, q0_plus, a_left, a_right) <= 1e-12
