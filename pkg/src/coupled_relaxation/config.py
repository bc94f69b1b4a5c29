__all__ = [
	'FIELD_MAP',
	'RunConfig',
	'dumps',
	'load',
	'loads',
	'with_overrides'
]

from pathlib import Path

import attr
from attr import attrib, attrs
from bidict import frozenbidict
from more_itertools import pairwise

from .exceptions import ConfigurationError
from .models.psystem import (
	CONVERGENCE_CELLS,
	DEFAULT_CELLS,
	DEFAULT_CFL,
	DEFAULT_DOMAIN,
	DEFAULT_OUTPUT_TIMES,
	EXPERIMENT_ALPHA,
	INITIAL_STATE
)
from .structures import DictMixin
from .tables import Scenario, SolverMethod

# Configuration file key <-> RunConfig attribute.
FIELD_MAP = frozenbidict({
	'scenario': 'scenario',
	'approach': 'approach',
	'cells': 'cells',
	'cfl': 'cfl',
	'epsilon': 'epsilon',
	'x-min': 'x_min',
	'x-max': 'x_max',
	'output-times': 'output_times',
	'end-time': 'end_time',
	'output-dir': 'output_dir',
	'alpha': 'alpha',
	'gamma': 'gamma',
	'rho-max': 'rho_max',
	'left-state': 'left_state',
	'right-state': 'right_state',
	'convergence-cells': 'convergence_cells',
	'solver': 'solver'
})


def _converter(parse, label):
	def convert(value):
		try:
			return parse(value)
		except (TypeError, ValueError):
			raise ConfigurationError(f"Invalid {label}: {value!r}.") from None

	return convert


def _items(value):
	if isinstance(value, str):
		return [item.strip() for item in value.split(',') if item.strip()]

	return list(value)


def _optional_float(value):
	if value is None or (isinstance(value, str) and value.strip().lower() in ('', 'none')):
		return None

	return float(value)


_to_int = _converter(int, 'integer')
_to_float = _converter(float, 'number')
_to_optional_float = _converter(_optional_float, 'number')
_to_floats = _converter(lambda value: tuple(float(item) for item in _items(value)), 'list of numbers')
_to_ints = _converter(lambda value: tuple(int(item) for item in _items(value)), 'list of integers')
_to_scenario = _converter(Scenario, 'scenario')
_to_solver = _converter(SolverMethod, 'solver')


def _check_cells(value):
	if value < 4 or value % 2:
		raise ConfigurationError(f"Cell count must be even and at least 4, got {value}.")


def _validate(instance, attribute, value):
	if instance.approach not in (1, 2, 3, 4):
		raise ConfigurationError(f"Approach must be 1, 2, 3 or 4, got {instance.approach}.")

	_check_cells(instance.cells)

	if not 0 < instance.cfl < 1:
		raise ConfigurationError("CFL number must lie in (0, 1).")

	if instance.epsilon < 0:
		raise ConfigurationError("Relaxation parameter must be nonnegative.")

	if not instance.x_min < 0 < instance.x_max:
		raise ConfigurationError("The domain must contain the interface at x = 0.")

	times = instance.output_times
	if list(times) != sorted(times) or (times and times[0] < 0):
		raise ConfigurationError("Output times must be sorted and nonnegative.")

	if instance.end_time is not None and times and instance.end_time < times[-1]:
		raise ConfigurationError("End time must not precede the last output time.")

	for state in (instance.left_state, instance.right_state):
		if len(state) != 2 or state[0] <= 0:
			raise ConfigurationError("States must be (density, momentum) with positive density.")

	for cells in value:
		_check_cells(cells)

	for cells, next_cells in pairwise(value):
		if next_cells != 2 * cells:
			raise ConfigurationError("Convergence cell counts must double from row to row.")


@attrs(repr=False)
class RunConfig(DictMixin):
	"""Settings of one experiment run or sweep.

	Attributes:
		scenario (Scenario): The problem setup.
		approach (int): Coupling approach 1 to 4.
		cells (int): Even number of cells.
		cfl (float): Courant number in (0, 1).
		epsilon (float): Relaxation parameter; 0 selects the central scheme.
		x_min (float): Left end of the domain.
		x_max (float): Right end of the domain.
		output_times (tuple): Sorted snapshot times.
		end_time (float): Final time; the last output time if ``None``.
		output_dir (pathlib.Path): Directory for written files.
		alpha (float): Pressure coefficient.
		gamma (float): Adiabatic exponent.
		rho_max (float): Largest density covered by the relaxation rate.
		left_state (tuple): Initial ``(rho, rho v)`` left of the interface.
		right_state (tuple): Initial ``(rho, rho v)`` right of the interface.
		convergence_cells (tuple): Doubling cell counts of convergence sweeps.
		solver (SolverMethod): Closed-form or generic Riemann solvers.
	"""

	scenario = attrib(default=Scenario.PSYSTEM_JUMP, converter=_to_scenario)
	approach = attrib(default=3, converter=_to_int)
	cells = attrib(default=DEFAULT_CELLS, converter=_to_int)
	cfl = attrib(default=DEFAULT_CFL, converter=_to_float)
	epsilon = attrib(default=0.0, converter=_to_float)
	x_min = attrib(default=DEFAULT_DOMAIN[0], converter=_to_float)
	x_max = attrib(default=DEFAULT_DOMAIN[1], converter=_to_float)
	output_times = attrib(default=DEFAULT_OUTPUT_TIMES, converter=_to_floats)
	end_time = attrib(default=None, converter=_to_optional_float)
	output_dir = attrib(default='output', converter=Path)
	alpha = attrib(default=EXPERIMENT_ALPHA, converter=_to_float)
	gamma = attrib(default=1.0, converter=_to_float)
	rho_max = attrib(default=2.0, converter=_to_float)
	left_state = attrib(default=INITIAL_STATE, converter=_to_floats)
	right_state = attrib(default=INITIAL_STATE, converter=_to_floats)
	convergence_cells = attrib(default=CONVERGENCE_CELLS, converter=_to_ints, validator=_validate)
	solver = attrib(default=SolverMethod.CLOSED_FORM, converter=_to_solver)

	@property
	def domain(self):
		return (self.x_min, self.x_max)

	@property
	def final_time(self):
		if self.end_time is not None:
			return self.end_time

		return self.output_times[-1] if self.output_times else 0.0


def with_overrides(config, **overrides):
	"""Return a copy of ``config`` with every override that is not ``None`` applied."""

	changes = {name: value for name, value in overrides.items() if value is not None}

	return attr.evolve(config, **changes) if changes else config


def loads(text):
	"""Parse a configuration from ``key = value`` lines.

	``#`` starts a comment; lists are comma-separated.

	Parameters:
		text (str): The configuration text.

	Returns:
		RunConfig: The configuration, with defaults for missing keys.

	Raises:
		ConfigurationError: On unknown keys, malformed lines or invalid values.
	"""

	values = {}
	for number, line in enumerate(text.splitlines(), start=1):
		line = line.split('#', 1)[0].strip()

		if not line:
			continue

		key, sep, value = line.partition('=')
		if not sep:
			raise ConfigurationError(f"Line {number} is not a 'key = value' pair.")

		key = key.strip()
		try:
			values[FIELD_MAP[key]] = value.strip()
		except KeyError:
			raise ConfigurationError(f"Unknown configuration key {key!r} on line {number}.") from None

	return RunConfig(**values)


def load(path):
	"""Load a configuration file.

	Raises:
		ConfigurationError: If the file cannot be read or is invalid.
	"""

	try:
		text = Path(path).read_text()
	except OSError as exc:
		raise ConfigurationError(f"Configuration file {str(path)!r} could not be read.") from exc

	return loads(text)


def _format(value):
	if value is None:
		return 'none'

	if isinstance(value, (Scenario, SolverMethod)):
		return value.value

	if isinstance(value, tuple):
		return ', '.join(_format(item) for item in value)

	if isinstance(value, float):
		return repr(value)

	return str(value)


def dumps(config):
	"""Serialize a configuration to ``key = value`` lines."""

	return ''.join(
		f'{key} = {_format(config[name])}\n'
		for key, name in FIELD_MAP.items()
	)
