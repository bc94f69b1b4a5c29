__all__ = [
	'build_parser',
	'cmd_consistency',
	'cmd_convergence',
	'cmd_run',
	'main'
]

import argparse
import logging
import sys

import pprintpp

from .__about__ import __title__, __version__
from .api import consistency_report, convergence_study, run_experiment
from .config import RunConfig, load, with_overrides
from .exceptions import (
	ConfigurationError,
	ContractViolation,
	DomainError,
	RiemannSolverError,
	SchemeError
)
from .models.psystem import DEFAULT_CONSISTENCY_OUTTAKE
from .serialize import (
	snapshot_filename,
	write_error_series,
	write_snapshot,
	write_table
)
from .tables import ExitCode, Scenario
from .utils import humanize_float

logger = logging.getLogger(__name__)


def cmd_run(config):
	"""Run one experiment and write its snapshots and coupling errors.

	Writes one ``x, rho, momentum, pressure`` file per output time and
	``errors.csv`` with ``t, e1, e2`` to ``config.output_dir``.

	Returns:
		ExitCode: :attr:`ExitCode.SUCCESS`.
	"""

	result = run_experiment(config)
	problem = result.problem
	snapshots = result.simulation.snapshots

	for index, time in enumerate(config.output_times, start=1):
		write_snapshot(
			config.output_dir / snapshot_filename(index, time),
			snapshots.at(time),
			problem.grid,
			problem.model
		)

	write_error_series(config.output_dir / 'errors.csv', result.errors)

	print(
		f"L1(E1) = {humanize_float(result.l1_e1)}, "
		f"L1(E2) = {humanize_float(result.l1_e2)} "
		f"({result.simulation.steps} steps)"
	)

	return ExitCode.SUCCESS


def cmd_convergence(config, *, approaches=None, cells=None, jobs=1):
	"""Run a mesh convergence sweep and write ``convergence.csv``.

	Returns:
		ExitCode: :attr:`ExitCode.SUCCESS`.
	"""

	table = convergence_study(config, cells=cells, approaches=approaches, jobs=jobs)
	write_table(config.output_dir / 'convergence.csv', table)

	print(f"{'approach':>8} {'cells':>6} {'L1(E1)':>10} {'EOC':>10} {'L1(E2)':>10} {'EOC':>10}")
	for row in table:
		print(
			f"{row.approach:>8} {row.cells:>6} "
			f"{humanize_float(row.l1_e1):>10} {humanize_float(row.eoc_e1):>10} "
			f"{humanize_float(row.l1_e2):>10} {humanize_float(row.eoc_e2):>10}"
		)

	return ExitCode.SUCCESS


def cmd_consistency(approach, *, e_value=DEFAULT_CONSISTENCY_OUTTAKE, count=64, seed=0):
	"""Print the consistency report of an approach.

	Returns:
		ExitCode: :attr:`ExitCode.SUCCESS` if consistent, else
		:attr:`ExitCode.CONSISTENCY_FAILURE`.
	"""

	report = consistency_report(approach, e_value=e_value, count=count, seed=seed)

	summary = {
		'approach': approach,
		'consistent': report.ok,
		'forward_ok': report.forward_ok,
		'forward_counterexamples': len(report.forward_counterexamples),
		'reverse_counterexamples': len(report.reverse_counterexamples),
		'kappa': report.kappa,
		'checked': report.checked
	}

	counterexamples = report.forward_counterexamples + report.reverse_counterexamples
	if counterexamples:
		summary['counterexample'] = {
			key: value.tolist() if hasattr(value, 'tolist') else value
			for key, value in counterexamples[0].items()
		}

	pprintpp.pprint(summary)

	return ExitCode.SUCCESS if report.ok else ExitCode.CONSISTENCY_FAILURE


def _base_config(args):
	config = load(args.config) if args.config else RunConfig()

	return with_overrides(
		config,
		scenario=args.scenario,
		cfl=args.cfl,
		epsilon=args.epsilon,
		output_dir=args.out
	)


def _run(args):
	config = with_overrides(_base_config(args), approach=args.approach, cells=args.cells)

	return cmd_run(config)


def _convergence(args):
	return cmd_convergence(
		_base_config(args),
		approaches=args.approach,
		cells=args.cells,
		jobs=args.jobs
	)


def _consistency(args):
	return cmd_consistency(args.approach, e_value=args.outtake, count=args.samples, seed=args.seed)


def build_parser():
	parser = argparse.ArgumentParser(
		prog=__title__,
		description="Relaxation-based central schemes for conservation laws coupled at a point interface."
	)
	parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
	parser.add_argument(
		'-v', '--verbose',
		action='count',
		default=0,
		help="Increase log output; repeat for debug output."
	)

	run_options = argparse.ArgumentParser(add_help=False)
	run_options.add_argument('--config', help="Configuration file of 'key = value' lines.")
	run_options.add_argument(
		'--scenario',
		choices=[scenario.value for scenario in Scenario],
		help="Problem setup."
	)
	run_options.add_argument('--cfl', type=float, help="Courant number in (0, 1).")
	run_options.add_argument('--epsilon', type=float, help="Relaxation parameter; 0 runs the central scheme.")
	run_options.add_argument('--out', help="Output directory.")

	subparsers = parser.add_subparsers(dest='command', metavar='command')
	subparsers.required = True

	run = subparsers.add_parser('run', parents=[run_options], help="Run one experiment.")
	run.add_argument('--approach', type=int, help="Coupling approach 1 to 4.")
	run.add_argument('--cells', type=int, help="Even number of cells.")
	run.set_defaults(func=_run)

	convergence = subparsers.add_parser(
		'convergence',
		parents=[run_options],
		help="Mesh convergence of the coupling errors."
	)
	convergence.add_argument(
		'--approach',
		type=int,
		nargs='+',
		default=[1, 2, 3, 4],
		help="Coupling approaches."
	)
	convergence.add_argument('--cells', type=int, nargs='+', help="Doubling cell counts.")
	convergence.add_argument('--jobs', type=int, default=1, help="Number of worker processes.")
	convergence.set_defaults(func=_convergence)

	consistency = subparsers.add_parser(
		'consistency',
		help="Check an approach against the original coupling conditions."
	)
	consistency.add_argument('--approach', type=int, required=True, help="Coupling approach 1 to 4.")
	consistency.add_argument(
		'--outtake',
		type=float,
		default=DEFAULT_CONSISTENCY_OUTTAKE,
		help="Momentum outtake of the sampled states."
	)
	consistency.add_argument('--samples', type=int, default=64, help="Number of sampled state pairs.")
	consistency.add_argument('--seed', type=int, default=0, help="Sampler seed.")
	consistency.set_defaults(func=_consistency)

	return parser


def _configure_logging(verbosity):
	level = logging.WARNING
	if verbosity == 1:
		level = logging.INFO
	elif verbosity > 1:
		level = logging.DEBUG

	logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')


def main(argv=None):
	parser = build_parser()
	args = parser.parse_args(argv)
	_configure_logging(args.verbose)

	try:
		return int(args.func(args))
	except (ConfigurationError, ContractViolation) as exc:
		logger.error("Invalid configuration: %s", exc)
		print(f"error: {exc}", file=sys.stderr)

		return int(ExitCode.CONFIGURATION_ERROR)
	except (RiemannSolverError, SchemeError, DomainError) as exc:
		logger.error("Solver failure: %s", exc)
		print(f"error: {exc}", file=sys.stderr)

		return int(ExitCode.SOLVER_FAILURE)
