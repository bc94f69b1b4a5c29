__all__ = [
	'EigenStructure',
	'FluxModel',
	'RelaxMatrix',
	'RelaxState',
	'SubcharacteristicReport',
	'characteristic_vars',
	'check_subcharacteristic',
	'eigenstructure',
	'from_characteristic_vars',
	'lax_membership_residual',
	'lax_parametrize',
	'relax_states'
]

import numpy as np
from attr import attrib, attrs

from .exceptions import ContractViolation, DomainError
from .structures import DictMixin
from .tables import Side
from .utils import (
	as_matrix,
	as_vector,
	coerce_arguments,
	fd_jacobian,
	inf_norm
)

PSD_TOLERANCE = 1e-10


@attrs(repr=False, eq=False)
class RelaxState(DictMixin):
	"""A relaxation state Q = (U, V).

	Attributes:
		u (numpy.ndarray): The conserved variables.
		v (numpy.ndarray): The auxiliary variables, same length as ``u``.
	"""

	u = attrib(converter=lambda value: as_vector(value, name='state'))
	v = attrib(converter=lambda value: as_vector(value, name='auxiliary state'))

	@v.validator
	def _check_lengths(self, attribute, value):
		if value.shape != self.u.shape:
			raise ContractViolation("State and auxiliary state must have equal length.")

	@property
	def dim(self):
		return self.u.shape[0]

	@property
	def vector(self):
		return np.concatenate([self.u, self.v])

	@classmethod
	def from_vector(cls, q):
		q = as_vector(q, name='relaxation vector')

		if q.shape[0] % 2:
			raise ContractViolation("A relaxation vector must have even length.")

		n = q.shape[0] // 2

		return cls(q[:n], q[n:])

	@classmethod
	def lift(cls, u, flux):
		"""Build the equilibrium state (U, F(U))."""

		u = as_vector(u, name='state')

		return cls(u, flux(u))

	@classmethod
	def coerce(cls, value):
		if isinstance(value, cls):
			return value

		return cls.from_vector(value)


relax_states = coerce_arguments(
	q0_minus=RelaxState.coerce,
	q0_plus=RelaxState.coerce
)


def _positive_diagonal(value):
	diag = as_vector(value, name='relaxation diagonal')

	if np.any(diag <= 0):
		raise DomainError("Relaxation matrix entries must be strictly positive.")

	return diag


@attrs(repr=False, eq=False)
class RelaxMatrix(DictMixin):
	"""A diagonal relaxation matrix A_i.

	Attributes:
		diag (numpy.ndarray): The positive diagonal entries.
		side (Side): The half-axis the matrix belongs to.
	"""

	diag = attrib(converter=_positive_diagonal)
	side = attrib(default=Side.LEFT, converter=Side)

	@property
	def dim(self):
		return self.diag.shape[0]

	@property
	def sqrt(self):
		return np.sqrt(self.diag)

	@property
	def sqrt_inv(self):
		return 1 / np.sqrt(self.diag)

	@property
	def matrix(self):
		return np.diag(self.diag)

	@property
	def max_speed(self):
		return float(np.max(self.sqrt))

	@classmethod
	def scalar(cls, a, n, side=Side.LEFT):
		return cls(np.full(n, float(a)), side)


@attrs(repr=False, eq=False)
class FluxModel(DictMixin):
	"""Flux, Jacobian and sampling box of one half-axis.

	``flux`` maps arrays whose last axis has length ``dim``;
	``jacobian`` maps a single state to a ``dim x dim`` matrix.

	Attributes:
		dim (int): The number of conserved variables.
		flux (callable): The flux function F_i.
		jacobian (callable): The Jacobian DF_i.
		lower (numpy.ndarray): Component-wise lower bounds of admissible states.
		upper (numpy.ndarray): Component-wise upper bounds of admissible states.
		name (str): A label for reports.
	"""

	dim = attrib(converter=int)
	flux = attrib()
	jacobian = attrib()
	lower = attrib(converter=lambda value: as_vector(value, name='lower bound'))
	upper = attrib(converter=lambda value: as_vector(value, name='upper bound'))
	name = attrib(default='flux')

	@dim.validator
	def _check_dim(self, attribute, value):
		if value < 1:
			raise ContractViolation("Flux models need at least one component.")

	@upper.validator
	def _check_box(self, attribute, value):
		if self.lower.shape != (self.dim,) or value.shape != (self.dim,):
			raise ContractViolation("Admissible box bounds must match the model dimension.")

		if np.any(value < self.lower):
			raise ContractViolation("Admissible box has upper bounds below lower bounds.")

	def __call__(self, u):
		return self.flux(u)

	def sample(self, count, rng=None):
		rng = rng if rng is not None else np.random.default_rng()

		return rng.uniform(self.lower, self.upper, size=(count, self.dim))

	def jacobian_error(self, samples, step=1e-6):
		"""Largest relative deviation of ``jacobian`` from central differences of ``flux``."""

		worst = 0.0
		for u in np.atleast_2d(samples):
			exact = np.asarray(self.jacobian(u), dtype=float)
			approx = fd_jacobian(self.flux, u, step=step)
			error = inf_norm(exact - approx) / max(1.0, inf_norm(exact))
			worst = max(worst, error)

		return worst


@attrs(repr=False, eq=False)
class EigenStructure(DictMixin):
	"""Eigenvectors and eigenvalues of the relaxation block matrix.

	Columns and eigenvalues are ordered negative first, each block by component.
	"""

	r_minus = attrib()
	r_plus = attrib()
	l_minus = attrib()
	l_plus = attrib()
	lambdas = attrib()

	@property
	def right(self):
		return np.hstack([self.r_minus, self.r_plus])

	@property
	def left(self):
		return np.vstack([self.l_minus, self.l_plus])

	@property
	def system_matrix(self):
		return self.right @ np.diag(self.lambdas) @ self.left


def eigenstructure(a):
	"""Diagonalize the relaxation block matrix ``[[0, I], [A, 0]]``.

	Parameters:
		a (RelaxMatrix): The relaxation matrix.

	Returns:
		EigenStructure: Right and left eigenvectors and eigenvalues.

	Raises:
		DomainError: If a diagonal entry is not positive.
	"""

	if not isinstance(a, RelaxMatrix):
		a = RelaxMatrix(a)

	n = a.dim
	identity = np.eye(n)
	sqrt = np.diag(a.sqrt)
	sqrt_inv = np.diag(a.sqrt_inv)

	return EigenStructure(
		r_minus=np.vstack([-sqrt_inv, identity]),
		r_plus=np.vstack([sqrt_inv, identity]),
		l_minus=np.hstack([-0.5 * sqrt, 0.5 * identity]),
		l_plus=np.hstack([0.5 * sqrt, 0.5 * identity]),
		lambdas=np.concatenate([-a.sqrt, a.sqrt])
	)


def _check_dims(*arrays):
	dims = {array.shape[0] for array in arrays}

	if len(dims) != 1:
		raise ContractViolation("Dimension mismatch between states and relaxation matrices.")

	return dims.pop()


def characteristic_vars(q, a):
	"""Return the characteristic variables ``w- = (V - sqrt(A) U) / 2`` and ``w+ = (V + sqrt(A) U) / 2``."""

	q = RelaxState.coerce(q)
	_check_dims(q.u, a.diag)

	scaled = a.sqrt * q.u

	return 0.5 * (q.v - scaled), 0.5 * (q.v + scaled)


def from_characteristic_vars(w_minus, w_plus, a):
	w_minus = as_vector(w_minus)
	w_plus = as_vector(w_plus)
	_check_dims(w_minus, w_plus, a.diag)

	return RelaxState(a.sqrt_inv * (w_plus - w_minus), w_plus + w_minus)


@attrs(repr=False, eq=False)
class SubcharacteristicReport(DictMixin):
	ok = attrib()
	worst_eigenvalue = attrib()
	worst_state = attrib()


def check_subcharacteristic(a, model, samples, *, tol=PSD_TOLERANCE):
	"""Check that ``A - DF(U)^2`` is positive semi-definite at sampled states.

	The minimum eigenvalue of the symmetric part is compared against ``-tol``.

	Parameters:
		a (RelaxMatrix): The relaxation matrix.
		model (FluxModel): The flux model of the same half-axis.
		samples (array-like): States to test, one per row.
		tol (float): Absolute tolerance on the minimum eigenvalue.

	Returns:
		SubcharacteristicReport: The verdict and the worst sampled state.
	"""

	samples = as_matrix(samples, name='sample set')
	_check_dims(samples[0], a.diag)

	worst_eigenvalue = np.inf
	worst_state = None
	for u in samples:
		jacobian = np.asarray(model.jacobian(u), dtype=float)
		m = a.matrix - jacobian @ jacobian
		eigenvalue = float(np.linalg.eigvalsh(0.5 * (m + m.T)).min())

		if eigenvalue < worst_eigenvalue:
			worst_eigenvalue = eigenvalue
			worst_state = u.copy()

	return SubcharacteristicReport(
		ok=bool(worst_eigenvalue >= -tol),
		worst_eigenvalue=worst_eigenvalue,
		worst_state=worst_state
	)


@relax_states
def lax_parametrize(sigma_minus, sigma_plus, q0_minus, q0_plus, a_left, a_right):
	"""Coupling data on the Lax curves through the traces.

	Parameters:
		sigma_minus (array-like): Parameter of the curve through ``q0_minus``.
		sigma_plus (array-like): Parameter of the curve through ``q0_plus``.
		q0_minus (RelaxState): Trace of the left half-axis.
		q0_plus (RelaxState): Trace of the right half-axis.
		a_left (RelaxMatrix): Relaxation matrix of the left half-axis.
		a_right (RelaxMatrix): Relaxation matrix of the right half-axis.

	Returns:
		tuple: ``(q_r, q_l)`` as :class:`RelaxState` objects.
	"""

	sigma_minus = as_vector(sigma_minus, name='Lax parameter')
	sigma_plus = as_vector(sigma_plus, name='Lax parameter')
	_check_dims(sigma_minus, sigma_plus, q0_minus.u, q0_plus.u, a_left.diag, a_right.diag)

	q_r = RelaxState(
		q0_minus.u - a_left.sqrt_inv * sigma_minus,
		q0_minus.v + sigma_minus
	)
	q_l = RelaxState(
		q0_plus.u + a_right.sqrt_inv * sigma_plus,
		q0_plus.v + sigma_plus
	)

	return q_r, q_l


@relax_states
def lax_membership_residual(q_r, q_l, q0_minus, q0_plus, a_left, a_right):
	"""Largest projection of the coupling data off the admissible Lax curves."""

	q_r = RelaxState.coerce(q_r)
	q_l = RelaxState.coerce(q_l)

	left = eigenstructure(a_left)
	right = eigenstructure(a_right)

	return max(
		inf_norm(left.l_plus @ (q_r.vector - q0_minus.vector)),
		inf_norm(right.l_minus @ (q_l.vector - q0_plus.vector))
	)
