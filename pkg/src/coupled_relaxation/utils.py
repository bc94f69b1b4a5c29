__all__ = [
	'as_matrix',
	'as_vector',
	'coerce_arguments',
	'condition_number',
	'dense_inverse',
	'dense_solve',
	'fd_jacobian',
	'humanize_array',
	'humanize_float',
	'inf_norm'
]

import inspect

import numpy as np
import scipy.linalg as la
import wrapt

from .exceptions import ContractViolation

CONDITION_LIMIT = 1e12


def as_vector(value, *, dim=None, name='vector'):
	vector = np.atleast_1d(np.asarray(value, dtype=float))

	if vector.ndim != 1:
		raise ContractViolation(f"The {name} must be one-dimensional.")

	if dim is not None and vector.shape[0] != dim:
		raise ContractViolation(
			f"The {name} has length {vector.shape[0]}, expected {dim}."
		)

	if not np.all(np.isfinite(vector)):
		raise ContractViolation(f"The {name} has non-finite components.")

	return vector


def as_matrix(value, *, shape=None, name='matrix'):
	matrix = np.atleast_2d(np.asarray(value, dtype=float))

	if matrix.ndim != 2:
		raise ContractViolation(f"The {name} must be two-dimensional.")

	if shape is not None and matrix.shape != tuple(shape):
		raise ContractViolation(
			f"The {name} has shape {matrix.shape}, expected {tuple(shape)}."
		)

	return matrix


def coerce_arguments(**converters):
	"""Coerce named arguments of the decorated callable before calling it.

	Parameters:
		converters: A mapping of parameter names to converters.
	"""

	def decorator(func):
		signature = inspect.signature(func)

		@wrapt.decorator
		def wrapper(wrapped, instance, args, kwargs):
			bound = signature.bind(*args, **kwargs)

			for name, converter in converters.items():
				if name in bound.arguments:
					bound.arguments[name] = converter(bound.arguments[name])

			return wrapped(*bound.args, **bound.kwargs)

		return wrapper(func)

	return decorator


def inf_norm(value):
	value = np.asarray(value, dtype=float)

	if value.size == 0:
		return 0.0

	return float(np.max(np.abs(value)))


def fd_jacobian(func, x, step=1e-6):
	"""Central finite-difference Jacobian of ``func`` at ``x``.

	The increment of component ``k`` is ``step * max(1, |x_k|)``.
	"""

	x = np.asarray(x, dtype=float)
	columns = []

	for k in range(x.shape[0]):
		h = step * max(1.0, abs(x[k]))
		forward = x.copy()
		backward = x.copy()
		forward[k] += h
		backward[k] -= h

		columns.append(
			(np.asarray(func(forward), dtype=float) - np.asarray(func(backward), dtype=float)) / (2 * h)
		)

	return np.column_stack(columns)


def condition_number(matrix):
	matrix = np.asarray(matrix, dtype=float)

	try:
		with np.errstate(all='ignore'):
			cond = np.linalg.cond(matrix, p=np.inf)
	except np.linalg.LinAlgError:
		return np.inf

	return float(cond) if np.isfinite(cond) else np.inf


def dense_solve(matrix, rhs):
	lu, piv = la.lu_factor(np.asarray(matrix, dtype=float))

	return la.lu_solve((lu, piv), np.asarray(rhs, dtype=float))


def dense_inverse(matrix):
	matrix = np.asarray(matrix, dtype=float)

	return dense_solve(matrix, np.eye(matrix.shape[0]))


def humanize_float(value, *, digits=4):
	if value is None:
		return ''

	if np.isinf(value):
		return 'inf' if value > 0 else '-inf'

	return f'{value:.{digits - 1}e}'


def humanize_array(array, *, max_items=6):
	array = np.asarray(array)

	if array.size <= max_items:
		return np.array2string(array, precision=6, separator=', ')

	if array.size and np.issubdtype(array.dtype, np.number):
		return (
			f'{array.shape} array, '
			f'min {humanize_float(float(np.min(array)))}, '
			f'max {humanize_float(float(np.max(array)))}'
		)

	return f'{array.shape} array'
