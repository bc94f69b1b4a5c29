__all__ = [
	'Grid',
	'GridState',
	'InterfaceTraces',
	'SchemeConfig',
	'SimulationResult',
	'Snapshots',
	'TraceSample',
	'central_step',
	'cfl_dt',
	'relaxation_step',
	'run_simulation'
]

import logging

import numpy as np
from attr import attrib, attrs

from .core import RelaxState
from .exceptions import (
	BlowUp,
	ConfigurationError,
	ContractViolation,
	DomainError,
	InterfaceCouplingError,
	RiemannSolverError,
	SchemeError
)
from .structures import DictMixin, ListMixin

logger = logging.getLogger(__name__)

GHOST_CELLS = 2


@attrs(repr=False, eq=False)
class Grid(DictMixin):
	"""Uniform two-sided mesh with the interface at ``x = 0`` on a cell boundary.

	Cell ``j`` of the two-sided indexing lives at array index ``j + n_left``;
	cell ``-1`` abuts the interface from the left and cell ``0`` from the right.

	Attributes:
		n_cells (int): The even number of cells N.
		x_min (float): Left end of the domain, negative.
		x_max (float): Right end of the domain, positive.
	"""

	n_cells = attrib(converter=int)
	x_min = attrib(converter=float)
	x_max = attrib(converter=float)

	@n_cells.validator
	def _check_cells(self, attribute, value):
		if value < 2 or value % 2:
			raise ContractViolation("The number of cells must be even and at least 2.")

	@x_max.validator
	def _check_domain(self, attribute, value):
		if not self.x_min < 0 < value:
			raise ContractViolation("The domain must contain the interface at x = 0 in its interior.")

		n_left = self.n_cells * -self.x_min / (value - self.x_min)
		if abs(n_left - round(n_left)) > 1e-9 or not 0 < round(n_left) < self.n_cells:
			raise ContractViolation("The interface x = 0 must fall on a cell boundary.")

	@property
	def dx(self):
		return (self.x_max - self.x_min) / self.n_cells

	@property
	def n_left(self):
		return int(round(self.n_cells * -self.x_min / (self.x_max - self.x_min)))

	@property
	def n_right(self):
		return self.n_cells - self.n_left

	@property
	def centers(self):
		return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

	def index(self, j):
		"""Array index of two-sided cell index ``j``."""

		return j + self.n_left


@attrs(repr=False, eq=False)
class GridState(DictMixin):
	"""Cell averages at one time level.

	Attributes:
		time (float): The time level.
		u (numpy.ndarray): Conserved variables, one row per cell.
		v (numpy.ndarray): Auxiliary variables for relaxation runs, else ``None``.
	"""

	time = attrib(converter=float)
	u = attrib(converter=lambda value: np.atleast_2d(np.asarray(value, dtype=float)))
	v = attrib(default=None)

	@v.validator
	def _check_shapes(self, attribute, value):
		if value is not None and np.shape(value) != self.u.shape:
			raise ContractViolation("Auxiliary variables must match the conserved variables.")

	def total(self, dx):
		return self.u.sum(axis=0) * dx

	def copy(self):
		return GridState(self.time, self.u.copy(), None if self.v is None else self.v.copy())


def _check_cfl(instance, attribute, value):
	if not 0 < value < 1:
		raise ConfigurationError("CFL number must lie in (0, 1).")


def _check_epsilon(instance, attribute, value):
	if value < 0:
		raise ConfigurationError("Relaxation parameter must be nonnegative.")


def _check_output_times(instance, attribute, value):
	if list(value) != sorted(value):
		raise ConfigurationError("Output times must be sorted.")

	if value and (value[0] < 0 or (instance.end_time is not None and value[-1] > instance.end_time)):
		raise ConfigurationError("Output times must lie within [0, end_time].")


@attrs(repr=False, eq=False)
class SchemeConfig(DictMixin):
	"""Time integration settings.

	Attributes:
		cfl (float): Courant number in (0, 1).
		epsilon (float): Relaxation parameter; 0 selects the central scheme.
		end_time (float): Final time; defaults to the last output time.
		output_times (tuple): Sorted snapshot times.
	"""

	cfl = attrib(converter=float, validator=_check_cfl)
	epsilon = attrib(default=0.0, converter=float, validator=_check_epsilon)
	end_time = attrib(default=None)
	output_times = attrib(
		default=(),
		converter=lambda value: tuple(float(t) for t in value),
		validator=_check_output_times
	)

	def __attrs_post_init__(self):
		if self.end_time is None:
			self.end_time = self.output_times[-1] if self.output_times else 0.0

		self.end_time = float(self.end_time)

		if self.end_time < 0:
			raise ConfigurationError("End time must be nonnegative.")


@attrs(repr=False, eq=False)
class TraceSample(DictMixin):
	"""Interface cell averages at the start of one step.

	Attributes:
		time (float): Start time of the step.
		dt (float): Length of the step.
		u_left (numpy.ndarray): Cell ``-1``.
		u_right (numpy.ndarray): Cell ``0``.
	"""

	time = attrib()
	dt = attrib()
	u_left = attrib()
	u_right = attrib()


class InterfaceTraces(ListMixin):
	item_label = 'samples'

	@property
	def times(self):
		return np.array([sample.time for sample in self.data])

	@property
	def dts(self):
		return np.array([sample.dt for sample in self.data])

	@property
	def u_left(self):
		return np.array([sample.u_left for sample in self.data])

	@property
	def u_right(self):
		return np.array([sample.u_right for sample in self.data])


class Snapshots(ListMixin):
	item_label = 'snapshots'

	def at(self, time, *, tol=1e-12):
		for snapshot in self.data:
			if abs(snapshot.time - time) <= tol * max(1.0, abs(time)):
				return snapshot

		raise KeyError(time)


@attrs(repr=False, eq=False)
class SimulationResult(DictMixin):
	grid = attrib()
	dt = attrib()
	steps = attrib()
	snapshots = attrib()
	traces = attrib()

	@property
	def initial(self):
		return self.snapshots[0]

	@property
	def final(self):
		return self.snapshots[-1]


def cfl_dt(cfl, dx, a_left, a_right):
	"""Time step ``cfl * dx / max sqrt(a)`` over both relaxation matrices."""

	return cfl * dx / max(a_left.max_speed, a_right.max_speed)


def _face_fluxes(u, f, sqrt_a):
	return 0.5 * (f[:-1] + f[1:]) - 0.5 * sqrt_a * (u[1:] - u[:-1])


def _solve_interface(rs, q0_minus, q0_plus, time):
	try:
		return rs(q0_minus, q0_plus, time)
	except (RiemannSolverError, DomainError) as exc:
		raise InterfaceCouplingError(
			f"Riemann solver failed at the interface cells -1 and 0 at t={time:.6g}: {exc}",
			time=time
		) from exc


def _check_finite(time, *arrays):
	bad = np.zeros(arrays[0].shape[0], dtype=bool)
	for array in arrays:
		bad |= ~np.all(np.isfinite(array), axis=1)

	if bad.any():
		cells = np.flatnonzero(bad).tolist()

		raise BlowUp(
			f"Non-finite cell averages in {len(cells)} cells at t={time:.6g}.",
			time=time,
			cells=cells
		)


def _pad(u, k):
	return (
		np.pad(u[:k], ((GHOST_CELLS, 0), (0, 0)), mode='edge'),
		np.pad(u[k:], ((0, GHOST_CELLS), (0, 0)), mode='edge')
	)


def _update(u, k, faces_left, faces_right, ratio):
	return np.concatenate([
		u[:k] - ratio * (faces_left[1:] - faces_left[:-1]),
		u[k:] - ratio * (faces_right[1:] - faces_right[:-1])
	])


def central_step(state, grid, flux_left, flux_right, a_left, a_right, rs, dt):
	"""One step of the coupled central scheme.

	Interior faces use ``(F(U_a) + F(U_b)) / 2 - sqrt(A) (U_b - U_a) / 2``.
	The interface fluxes come from the coupling data of ``rs`` applied to the
	equilibrium traces of cells -1 and 0.

	Parameters:
		state (GridState): State without auxiliary variables.
		grid (Grid): The mesh.
		flux_left (FluxModel): Flux of the left half-axis.
		flux_right (FluxModel): Flux of the right half-axis.
		a_left (RelaxMatrix): Relaxation matrix of the left half-axis.
		a_right (RelaxMatrix): Relaxation matrix of the right half-axis.
		rs (callable): Riemann solver handle ``rs(q0_minus, q0_plus, time)``.
		dt (float): Step length.

	Returns:
		GridState: The state at ``state.time + dt``.

	Raises:
		InterfaceCouplingError: If the Riemann solver fails.
		BlowUp: If the updated state is not finite.
	"""

	if state.v is not None:
		raise ContractViolation("The central scheme takes states without auxiliary variables.")

	k = grid.n_left
	u = state.u
	u_left, u_right = _pad(u, k)
	f_left = flux_left(u_left)
	f_right = flux_right(u_right)

	u_m, u_p = u[k - 1], u[k]
	f_m, f_p = f_left[-1], f_right[0]
	solution = _solve_interface(rs, RelaxState(u_m, f_m), RelaxState(u_p, f_p), state.time)

	h_minus = 0.5 * (f_m + solution.q_r.v) - 0.5 * a_left.sqrt * (solution.q_r.u - u_m)
	h_plus = 0.5 * (solution.q_l.v + f_p) - 0.5 * a_right.sqrt * (u_p - solution.q_l.u)

	faces_left = np.vstack([_face_fluxes(u_left, f_left, a_left.sqrt)[1:], h_minus])
	faces_right = np.vstack([h_plus, _face_fluxes(u_right, f_right, a_right.sqrt)[:-1]])

	time = state.time + dt
	u_new = _update(u, k, faces_left, faces_right, dt / grid.dx)
	_check_finite(time, u_new)

	return GridState(time, u_new)


def relaxation_step(state, grid, flux_left, flux_right, a_left, a_right, rs, dt, epsilon):
	"""One step of the implicit-explicit scheme for the coupled relaxation system.

	Transport is explicit; the stiff source is resolved by
	``V = (V* + dt / epsilon F(U)) / (1 + dt / epsilon)`` with the updated ``U``.
	"""

	if epsilon <= 0:
		raise ContractViolation("The relaxation scheme needs a positive relaxation parameter.")

	if state.v is None:
		raise ContractViolation("The relaxation scheme needs auxiliary variables.")

	k = grid.n_left
	u, v = state.u, state.v
	u_left, u_right = _pad(u, k)
	v_left, v_right = _pad(v, k)

	solution = _solve_interface(rs, RelaxState(u[k - 1], v[k - 1]), RelaxState(u[k], v[k]), state.time)
	q_r, q_l = solution.q_r, solution.q_l

	s_left, s_right = a_left.sqrt, a_right.sqrt
	h_minus = 0.5 * (v[k - 1] + q_r.v) - 0.5 * s_left * (q_r.u - u[k - 1])
	g_minus = 0.5 * a_left.diag * (u[k - 1] + q_r.u) - 0.5 * s_left * (q_r.v - v[k - 1])
	h_plus = 0.5 * (q_l.v + v[k]) - 0.5 * s_right * (u[k] - q_l.u)
	g_plus = 0.5 * a_right.diag * (q_l.u + u[k]) - 0.5 * s_right * (v[k] - q_l.v)

	# U-fluxes are the V-averages, V-fluxes the A U-averages
	h_left = _face_fluxes(u_left, v_left, s_left)
	h_right = _face_fluxes(u_right, v_right, s_right)
	g_left = _face_fluxes(v_left, a_left.diag * u_left, s_left)
	g_right = _face_fluxes(v_right, a_right.diag * u_right, s_right)

	ratio = dt / grid.dx
	u_new = _update(
		u, k,
		np.vstack([h_left[1:], h_minus]),
		np.vstack([h_plus, h_right[:-1]]),
		ratio
	)
	v_star = _update(
		v, k,
		np.vstack([g_left[1:], g_minus]),
		np.vstack([g_plus, g_right[:-1]]),
		ratio
	)

	time = state.time + dt
	_check_finite(time, u_new, v_star)

	stiffness = dt / epsilon
	equilibrium = np.concatenate([flux_left(u_new[:k]), flux_right(u_new[k:])])
	v_new = (v_star + stiffness * equilibrium) / (1 + stiffness)

	return GridState(time, u_new, v_new)


def _initial_cells(initial, grid, dim):
	if callable(initial):
		u = np.array([initial(x) for x in grid.centers], dtype=float)
	else:
		u = np.asarray(initial, dtype=float)

	u = u.reshape(grid.n_cells, -1)

	if u.shape[1] != dim:
		raise ContractViolation(f"Initial data has {u.shape[1]} components, expected {dim}.")

	return u


def run_simulation(config, grid, flux_left, flux_right, a_left, a_right, rs, initial):
	"""Integrate the coupled problem in time.

	The central scheme runs for ``epsilon == 0``, the relaxation scheme
	otherwise, with auxiliary variables starting in equilibrium. Steps are
	shortened to land on output times exactly. The interface cells are
	recorded at the start of every step.

	Parameters:
		config (SchemeConfig): Time integration settings.
		grid (Grid): The mesh.
		flux_left (FluxModel): Flux of the left half-axis.
		flux_right (FluxModel): Flux of the right half-axis.
		a_left (RelaxMatrix): Relaxation matrix of the left half-axis.
		a_right (RelaxMatrix): Relaxation matrix of the right half-axis.
		rs (callable): Riemann solver handle ``rs(q0_minus, q0_plus, time)``.
		initial (callable or array-like): Initial data as a function of
			``x`` or as cell averages.

	Returns:
		SimulationResult: The initial state and one snapshot per positive
		output time, plus the interface traces.

	Raises:
		SchemeError: If a step fails; ``step`` carries its index.
	"""

	u0 = _initial_cells(initial, grid, flux_left.dim)
	k = grid.n_left

	if config.epsilon > 0:
		state = GridState(0.0, u0, np.concatenate([flux_left(u0[:k]), flux_right(u0[k:])]))

		def advance(state, step_dt):
			return relaxation_step(
				state, grid, flux_left, flux_right, a_left, a_right, rs, step_dt, config.epsilon
			)
	else:
		state = GridState(0.0, u0)

		def advance(state, step_dt):
			return central_step(state, grid, flux_left, flux_right, a_left, a_right, rs, step_dt)

	dt = cfl_dt(config.cfl, grid.dx, a_left, a_right)
	output_times = [t for t in config.output_times if t > 0]
	targets = list(output_times)
	if config.end_time > 0 and (not targets or targets[-1] < config.end_time):
		targets.append(config.end_time)

	logger.info(
		"Running %s scheme on %d cells to t=%g with dt=%.6e.",
		'relaxation' if config.epsilon > 0 else 'central',
		grid.n_cells,
		config.end_time,
		dt
	)

	snapshots = Snapshots([state.copy()])
	traces = InterfaceTraces()
	steps = 0
	for target in targets:
		while state.time < target:
			remaining = target - state.time
			landing = remaining <= dt * (1 + 1e-12)
			step_dt = remaining if landing else dt

			traces.append(
				TraceSample(state.time, step_dt, state.u[k - 1].copy(), state.u[k].copy())
			)

			try:
				state = advance(state, step_dt)
			except SchemeError as exc:
				exc.step = steps
				logger.error("Step %d failed: %s", steps, exc)
				raise

			if landing:
				state.time = target

			steps += 1

		if target in output_times:
			logger.debug("Reached output time %g after %d steps.", target, steps)
			snapshots.append(state.copy())

	return SimulationResult(
		grid=grid,
		dt=dt,
		steps=steps,
		snapshots=snapshots,
		traces=traces
	)
