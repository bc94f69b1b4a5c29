__all__ = [
	'ErrorSeries',
	'coupling_errors',
	'eoc',
	'interface_deviation',
	'interface_jump',
	'l1_time_norm'
]

import math

import numpy as np
from attr import attrib, attrs
from more_itertools import pairwise

from .exceptions import ContractViolation
from .structures import DictMixin


def _as_series(value):
	return np.asarray(value, dtype=float).reshape(-1)


def coupling_errors(u_left, u_right, e_value):
	"""Violation of the original coupling by the interface cells.

	Parameters:
		u_left (array-like): Cell ``-1`` as ``(rho, rho v)``.
		u_right (array-like): Cell ``0`` as ``(rho, rho v)``.
		e_value (float): The outtake at the same time.

	Returns:
		tuple: ``(e1, e2)`` for the momentum and density conditions.
	"""

	difference = np.asarray(u_left, dtype=float) - np.asarray(u_right, dtype=float)

	if difference.shape[-1] != 2:
		raise ContractViolation("Coupling errors are defined for two-component states.")

	return np.abs(difference[..., 1] - e_value), np.abs(difference[..., 0])


@attrs(repr=False, eq=False)
class ErrorSeries(DictMixin):
	"""Coupling errors over time.

	Attributes:
		times (numpy.ndarray): Increasing sample times.
		e1 (numpy.ndarray): Momentum condition errors.
		e2 (numpy.ndarray): Density condition errors.
		dt (numpy.ndarray): Quadrature weight of each sample, the length of
			the step starting at it.
	"""

	times = attrib(converter=_as_series)
	e1 = attrib(converter=_as_series)
	e2 = attrib(converter=_as_series)
	dt = attrib(converter=_as_series)

	@dt.validator
	def _check_series(self, attribute, value):
		if not (self.times.shape == self.e1.shape == self.e2.shape == value.shape):
			raise ContractViolation("Error series components must have equal lengths.")

		if np.any(self.e1 < 0) or np.any(self.e2 < 0) or np.any(value < 0):
			raise ContractViolation("Error series values must be nonnegative.")

		if np.any(np.diff(self.times) <= 0):
			raise ContractViolation("Error series times must increase.")

	@classmethod
	def from_traces(cls, traces, e_of_t):
		"""Evaluate the coupling errors of recorded interface traces.

		Parameters:
			traces (InterfaceTraces): Samples recorded at the start of each step.
			e_of_t (callable): The outtake as a function of time.
		"""

		times = traces.times
		e_values = np.array([e_of_t(t) for t in times])

		if not len(traces):
			return cls(times, [], [], [])

		e1, e2 = coupling_errors(traces.u_left, traces.u_right, e_values)

		return cls(times, e1, e2, traces.dts)


def l1_time_norm(series, *, horizon=None):
	"""L1-in-time norms of both error components.

	Each sample is weighted by the length of its step; weights are clipped
	to ``horizon`` when one is given.

	Raises:
		ContractViolation: If the series ends before ``horizon``.
	"""

	weights = series.dt

	if horizon is not None:
		end = float(np.max(series.times + series.dt)) if series.times.size else 0.0

		if end < horizon - 1e-12 * max(1.0, horizon):
			raise ContractViolation(
				f"Error series covers [0, {end:.6g}], shorter than the horizon {horizon:.6g}."
			)

		weights = np.clip(np.minimum(series.times + series.dt, horizon) - series.times, 0.0, None)

	return float(np.sum(weights * series.e1)), float(np.sum(weights * series.e2))


def eoc(errors):
	"""Experimental orders of convergence under mesh doubling.

	Parameters:
		errors (list): ``(cells, value)`` rows with doubling cell counts.

	Returns:
		list: ``log2(value_k / value_k+1)`` for consecutive rows; ``inf``
		where the finer error vanishes.
	"""

	orders = []
	for (cells, value), (next_cells, next_value) in pairwise(errors):
		if next_cells != 2 * cells:
			raise ContractViolation(f"Cell counts {cells} and {next_cells} are not a doubling.")

		if value < 0 or next_value < 0:
			raise ContractViolation("Errors must be nonnegative.")

		if next_value == 0:
			orders.append(math.inf)
		elif value == 0:
			orders.append(-math.inf)
		else:
			orders.append(math.log2(value / next_value))

	return orders


def _side_deviation(window, band, positions, band_positions):
	slope, intercept = np.polyfit(band_positions, band, 1)

	return np.max(np.abs(window - (slope * positions + intercept)))


def interface_deviation(values, grid, *, width=3, gap=None):
	"""Largest deviation of the ``2 * width`` interface cells from the local trend.

	On each side a line is fitted through ``2 * width`` cells that start
	``gap`` cells beyond the interface window and is extrapolated into the
	window. Smooth waves pass the interface without deviation; peaks and
	layers confined to a few cells do not.

	Parameters:
		values (array-like): One field value per cell.
		grid (Grid): The mesh.
		width (int): Interface cells per side.
		gap (int): Cells between window and fit band; ``width`` if omitted.

	Returns:
		float: The larger of the two one-sided deviations.

	Raises:
		ContractViolation: If a side has too few cells.
	"""

	values = np.asarray(values, dtype=float)
	gap = width if gap is None else gap
	reach = width + gap + 2 * width
	k = grid.n_left

	if width < 1 or gap < 0:
		raise ContractViolation("Window width must be positive and gap nonnegative.")

	if min(grid.n_left, grid.n_right) < reach:
		raise ContractViolation(f"Each side needs at least {reach} cells for the interface window.")

	# Positions count cells away from the interface.
	positions = np.arange(1, width + 1)
	band_positions = np.arange(width + gap + 1, reach + 1)

	left = _side_deviation(
		values[k - positions],
		values[k - band_positions],
		positions,
		band_positions
	)
	right = _side_deviation(
		values[k + positions - 1],
		values[k + band_positions - 1],
		positions,
		band_positions
	)

	return float(max(left, right))


def interface_jump(state, grid, component):
	"""``|U_-1 - U_0|`` of one component."""

	k = grid.n_left

	return float(abs(state.u[k - 1, component] - state.u[k, component]))
