__all__ = [
	'ConvergenceRow',
	'ConvergenceTable',
	'ExperimentResult',
	'Problem',
	'build_problem',
	'consistency_report',
	'convergence_study',
	'run_experiment'
]

import logging
from multiprocessing import Pool

import numpy as np
from attr import attrib, attrs

from .config import with_overrides
from .diagnostics import ErrorSeries, eoc, l1_time_norm
from .models.psystem import (
	DEFAULT_CONSISTENCY_OUTTAKE,
	INITIAL_STATE,
	OuttakeSchedule,
	PSystemModel,
	PSystemSolver,
	build_coupling,
	consistency_samples,
	off_manifold_samples,
	psi_u,
	relax_rate_a
)
from .riemann import KirchhoffSolver, check_consistency
from .scheme import Grid, SchemeConfig, run_simulation
from .structures import DictMixin, ListMixin
from .tables import Scenario

logger = logging.getLogger(__name__)


def _no_outtake(t):
	return 0.0


@attrs(repr=False, eq=False)
class Problem(DictMixin):
	"""Everything needed to run one configured scenario."""

	config = attrib()
	model = attrib()
	grid = attrib()
	flux = attrib()
	a_left = attrib()
	a_right = attrib()
	rs = attrib()
	initial = attrib()
	scheme_config = attrib()
	e_of_t = attrib()

	def run(self):
		return run_simulation(
			self.scheme_config,
			self.grid,
			self.flux,
			self.flux,
			self.a_left,
			self.a_right,
			self.rs,
			self.initial
		)


def build_problem(config):
	"""Assemble mesh, model, Riemann solver and initial data of a configuration.

	Parameters:
		config (RunConfig): The configuration.

	Returns:
		Problem: The assembled problem.

	Raises:
		ConfigurationError: If the model parameters are invalid.
		ContractViolation: If the interface does not fall on a cell boundary.
	"""

	model = PSystemModel(alpha=config.alpha, gamma=config.gamma, rho_max=config.rho_max)
	a_left, a_right = model.relax_matrices()
	grid = Grid(config.cells, config.x_min, config.x_max)

	if config.scenario is Scenario.KIRCHHOFF_DEMO:
		rs = KirchhoffSolver(a_left)
		e_of_t = _no_outtake
	else:
		schedule = OuttakeSchedule()
		rs = PSystemSolver(config.approach, relax_rate_a(model), schedule, config.solver)
		e_of_t = schedule.value

	if config.scenario is Scenario.PSYSTEM_JUMP:
		left, right = INITIAL_STATE, INITIAL_STATE
	else:
		left, right = config.left_state, config.right_state

	initial = np.where(grid.centers[:, np.newaxis] < 0, left, right)

	return Problem(
		config=config,
		model=model,
		grid=grid,
		flux=model.flux_model(),
		a_left=a_left,
		a_right=a_right,
		rs=rs,
		initial=initial,
		scheme_config=SchemeConfig(
			cfl=config.cfl,
			epsilon=config.epsilon,
			end_time=config.final_time,
			output_times=config.output_times
		),
		e_of_t=e_of_t
	)


@attrs(repr=False, eq=False)
class ExperimentResult(DictMixin):
	"""Simulation output with its coupling errors.

	Attributes:
		problem (Problem): The assembled problem.
		simulation (SimulationResult): Snapshots and interface traces.
		errors (ErrorSeries): Coupling errors of every step.
		l1_e1 (float): L1-in-time norm of the momentum condition error.
		l1_e2 (float): L1-in-time norm of the density condition error.
	"""

	problem = attrib()
	simulation = attrib()
	errors = attrib()
	l1_e1 = attrib()
	l1_e2 = attrib()


def run_experiment(config):
	"""Run one configured experiment and evaluate its coupling errors.

	Parameters:
		config (RunConfig): The configuration.

	Returns:
		ExperimentResult: The result.
	"""

	problem = build_problem(config)
	simulation = problem.run()

	errors = ErrorSeries.from_traces(simulation.traces, problem.e_of_t)
	horizon = config.final_time if config.final_time > 0 else None
	l1_e1, l1_e2 = l1_time_norm(errors, horizon=horizon)

	logger.info(
		"Approach %d on %d cells: L1(E1)=%.4e, L1(E2)=%.4e after %d steps.",
		config.approach,
		config.cells,
		l1_e1,
		l1_e2,
		simulation.steps
	)

	return ExperimentResult(
		problem=problem,
		simulation=simulation,
		errors=errors,
		l1_e1=l1_e1,
		l1_e2=l1_e2
	)


@attrs(repr=False, eq=False)
class ConvergenceRow(DictMixin):
	approach = attrib()
	cells = attrib()
	l1_e1 = attrib()
	eoc_e1 = attrib(default=None)
	l1_e2 = attrib(default=None)
	eoc_e2 = attrib(default=None)


class ConvergenceTable(ListMixin):
	item_label = 'rows'

	def rows_for(self, approach):
		return [row for row in self.data if row.approach == approach]


def _coupling_norms(config):
	result = run_experiment(config)

	return result.l1_e1, result.l1_e2


def convergence_study(config, *, cells=None, approaches=None, jobs=1):
	"""Mesh convergence of the coupling errors.

	Parameters:
		config (RunConfig): Base configuration.
		cells (list): Doubling cell counts; ``config.convergence_cells`` if omitted.
		approaches (list): Coupling approaches; ``config.approach`` if omitted.
		jobs (int): Number of worker processes.

	Returns:
		ConvergenceTable: One row per approach and cell count.

	Raises:
		ContractViolation: If the cell counts do not double.
	"""

	cells = list(cells if cells is not None else config.convergence_cells)
	approaches = list(approaches if approaches is not None else [config.approach])

	# Validate the doubling before any run.
	eoc([(n, 1.0) for n in cells])

	configs = [
		with_overrides(config, approach=approach, cells=n)
		for approach in approaches
		for n in cells
	]

	if jobs > 1 and len(configs) > 1:
		with Pool(min(jobs, len(configs))) as pool:
			norms = pool.map(_coupling_norms, configs)
	else:
		norms = [_coupling_norms(c) for c in configs]

	table = ConvergenceTable()
	for index, approach in enumerate(approaches):
		block = norms[index * len(cells):(index + 1) * len(cells)]
		orders_e1 = [None, *eoc(list(zip(cells, [n[0] for n in block])))]
		orders_e2 = [None, *eoc(list(zip(cells, [n[1] for n in block])))]

		for n, (l1_e1, l1_e2), eoc_e1, eoc_e2 in zip(cells, block, orders_e1, orders_e2):
			table.append(ConvergenceRow(approach, n, l1_e1, eoc_e1, l1_e2, eoc_e2))

	return table


def consistency_report(
	approach, *, e_value=DEFAULT_CONSISTENCY_OUTTAKE, count=64, seed=0, model=None, tol=1e-10
):
	"""Check an approach's relaxation coupling against the original p-system coupling.

	Parameters:
		approach (int): Coupling approach 1 to 4.
		e_value (float): Outtake of the sampled states.
		count (int): Number of sampled state pairs on and off the original
			coupling each; pairs off it expose relaxed couplings that impose
			too little.
		seed (int): Seed of the sampler.
		model (PSystemModel): The model, the experiment default if omitted.
		tol (float): Residual tolerance.

	Returns:
		ConsistencyReport: The verdict.
	"""

	model = model if model is not None else PSystemModel()
	flux = model.flux_model()

	return check_consistency(
		psi_u(e_value, model),
		build_coupling(approach, e_value, relax_rate_a(model)),
		flux,
		flux,
		[
			*consistency_samples(e_value, count, seed=seed),
			*off_manifold_samples(e_value, count, seed=seed + 1)
		],
		tol=tol
	)

