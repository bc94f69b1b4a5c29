import math
from types import SimpleNamespace

import numpy as np
import pytest
from coupled_relaxation import ContractViolation
from coupled_relaxation.utils import (
	as_matrix,
	as_vector,
	coerce_arguments,
	condition_number,
	dense_inverse,
	dense_solve,
	fd_jacobian,
	humanize_array,
	humanize_float,
	inf_norm
)


def test_as_vector():
	vector = as_vector([1, 2])

	assert vector.dtype == float
	assert np.array_equal(vector, [1.0, 2.0])
	assert np.array_equal(as_vector(3), [3.0])

	with pytest.raises(ContractViolation, match='expected 3'):
		as_vector([1, 2], dim=3)

	with pytest.raises(ContractViolation, match='one-dimensional'):
		as_vector([[1.0, 2.0], [3.0, 4.0]])

	with pytest.raises(ContractViolation, match='non-finite'):
		as_vector([1.0, np.nan])


def test_as_matrix():
	assert as_matrix([[1, 2], [3, 4]]).shape == (2, 2)

	with pytest.raises(ContractViolation, match=r'expected \(3, 3\)'):
		as_matrix(np.eye(2), shape=(3, 3))


def test_coerce_arguments():
	@coerce_arguments(x=float, y=int)
	def add(x, y=0, z=None):
		return x, y, z

	assert add('1.5') == (1.5, 0, None)
	assert add('1.5', y='2') == (1.5, 2, None)
	assert add(1, '3', z='z') == (1.0, 3, 'z')


def test_coerce_arguments_signature_once(monkeypatch):
	@coerce_arguments(x=float)
	def scale(x, factor=2.0):
		return x * factor

	def fail(*args, **kwargs):
		raise AssertionError('signature inspected at call time')

	monkeypatch.setattr('coupled_relaxation.utils.inspect', SimpleNamespace(signature=fail))

	assert scale('1.5') == 3.0
	assert scale('2', factor=0.5) == 1.0


def test_inf_norm():
	assert inf_norm([1.0, -3.0, 2.0]) == 3.0
	assert inf_norm([]) == 0.0


def test_fd_jacobian():
	def func(x):
		return np.array([x[0] ** 2, x[0] * x[1]])

	jacobian = fd_jacobian(func, [1.0, 2.0])

	assert np.allclose(jacobian, [[2.0, 0.0], [2.0, 1.0]], atol=1e-8)


def test_condition_number():
	assert condition_number(np.eye(3)) == 1.0
	assert condition_number(np.zeros((2, 2))) == math.inf


def test_dense_solve():
	matrix = np.array([[2.0, 1.0], [1.0, 1.0]])

	assert np.allclose(dense_solve(matrix, [3.0, 2.0]), [1.0, 1.0])
	assert np.allclose(dense_inverse(matrix), [[1.0, -1.0], [-1.0, 2.0]])


def test_humanize_float():
	assert humanize_float(None) == ''
	assert humanize_float(math.inf) == 'inf'
	assert humanize_float(-math.inf) == '-inf'
	assert humanize_float(7.838e-4) == '7.838e-04'
	assert humanize_float(1.0, digits=2) == '1.0e+00'


def test_humanize_array():
	assert humanize_array(np.array([0.5])) == '[0.5]'
	assert humanize_array(np.zeros((4, 2))) == '(4, 2) array, min 0.000e+00, max 0.000e+00'
	assert humanize_array(np.array(['a'] * 8)) == '(8,) array'
