import numpy as np
from coupled_relaxation import burgers, linear_advection


def test_linear_advection():
	model = linear_advection(2.0)

	assert model.dim == 1
	assert model.name == 'linear advection'
	assert np.array_equal(model(np.array([[1.0], [-0.5]])), [[2.0], [-1.0]])
	assert np.array_equal(model.jacobian([3.0]), [[2.0]])
	assert np.array_equal(model.lower, [-10.0])
	assert np.array_equal(model.upper, [10.0])


def test_burgers():
	model = burgers(lower=-1.0, upper=1.0)

	assert np.array_equal(model(np.array([[2.0], [-1.0]])), [[2.0], [0.5]])
	assert np.array_equal(model.jacobian([0.5]), [[0.5]])
	assert model.jacobian_error(model.sample(10, np.random.default_rng(0))) <= 1e-8
