__all__ = [
	'TABLE_COLUMNS',
	'read_csv',
	'read_table',
	'snapshot_filename',
	'write_error_series',
	'write_snapshot',
	'write_table'
]

import csv
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .utils import humanize_float

DATA_FORMAT = '%.16e'
TABLE_COLUMNS = ('approach', 'cells', 'l1_e1', 'eoc_e1', 'l1_e2', 'eoc_e2')


@contextmanager
def _atomic_writer(path):
	path = Path(path)
	path.parent.mkdir(parents=True, exist_ok=True)

	fd, temp_path = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
	try:
		with os.fdopen(fd, 'w', newline='') as f:
			yield f

		os.replace(temp_path, path)
	except BaseException:
		os.unlink(temp_path)
		raise


def _write_columns(path, header, columns):
	with _atomic_writer(path) as f:
		np.savetxt(
			f,
			np.column_stack(columns) if columns[0].size else np.empty((0, len(header))),
			fmt=DATA_FORMAT,
			delimiter=',',
			header=','.join(header),
			comments=''
		)


def snapshot_filename(index, time):
	return f'snapshot-{index}-t{time:.4f}.csv'


def write_snapshot(path, state, grid, model):
	"""Write ``x, rho, rho v, p(rho)`` of a p-system state as comma-separated values."""

	rho = state.u[:, 0]

	_write_columns(
		path,
		('x', 'rho', 'momentum', 'pressure'),
		[grid.centers, rho, state.u[:, 1], model.pressure(rho)]
	)


def write_error_series(path, series):
	_write_columns(path, ('t', 'e1', 'e2'), [series.times, series.e1, series.e2])


def read_csv(path):
	"""Read a data file written by this module as a ``(header, array)`` pair."""

	with open(path, newline='') as f:
		header = f.readline().strip().split(',')
		data = np.loadtxt(f, delimiter=',', ndmin=2)

	return header, data


def write_table(path, rows):
	"""Write convergence rows with 4 significant digits; missing orders stay empty."""

	with _atomic_writer(path) as f:
		writer = csv.writer(f)
		writer.writerow(TABLE_COLUMNS)

		for row in rows:
			writer.writerow([
				row.approach,
				row.cells,
				humanize_float(row.l1_e1),
				humanize_float(row.eoc_e1),
				humanize_float(row.l1_e2),
				humanize_float(row.eoc_e2)
			])


def read_table(path):
	"""Read a convergence table as a list of dicts; empty orders become ``None``."""

	rows = []
	with open(path, newline='') as f:
		for record in csv.DictReader(f):
			rows.append({
				key: (
					int(value) if key in ('approach', 'cells')
					else float(value) if value
					else None
				)
				for key, value in record.items()
			})

	return rows
