__all__ = [
	'ConsistencyReport',
	'ConstantPreconditioner',
	'FixedPointSolver',
	'GeneralCoupling',
	'KirchhoffSolver',
	'LinearCoupling',
	'LinearSolver',
	'RiemannSolution',
	'block_lu_inverse',
	'check_consistency',
	'contraction_bound',
	'solve_fixed_point',
	'solve_kirchhoff',
	'solve_linear'
]

import logging

import numpy as np
from attr import attrib, attrs

from .core import (
	RelaxState,
	eigenstructure,
	lax_parametrize,
	relax_states
)
from .exceptions import (
	ContractViolation,
	Divergence,
	IllPosedCoupling,
	NonConvergence,
	SingularBlock
)
from .structures import DictMixin
from .utils import (
	CONDITION_LIMIT,
	as_matrix,
	as_vector,
	condition_number,
	dense_inverse,
	dense_solve,
	fd_jacobian,
	inf_norm
)

logger = logging.getLogger(__name__)

FIXED_POINT_TOLERANCE = 1e-12
FIXED_POINT_MAX_ITER = 100


@attrs(repr=False, eq=False)
class RiemannSolution(DictMixin):
	"""Coupling data assigned by a nodal Riemann solver.

	Attributes:
		q_r (RelaxState): Coupling data of the left half-axis.
		q_l (RelaxState): Coupling data of the right half-axis.
		sigma_minus (numpy.ndarray): Lax parameter of the left half-axis.
		sigma_plus (numpy.ndarray): Lax parameter of the right half-axis.
		residual_norm (float): Maximum norm of the coupling residual.
		iterations (int): Number of fixed-point updates, 0 for direct solvers.
	"""

	q_r = attrib()
	q_l = attrib()
	sigma_minus = attrib()
	sigma_plus = attrib()
	residual_norm = attrib(default=0.0)
	iterations = attrib(default=0)


def _truncated_eigenvectors(a_left, a_right):
	n = a_left.dim
	zeros = np.zeros((2 * n, n))

	r_minus = np.hstack([eigenstructure(a_left).r_minus, zeros])
	r_plus = np.hstack([zeros, eigenstructure(a_right).r_plus])

	return r_minus, r_plus


def _solution(sigma, q0_minus, q0_plus, a_left, a_right, residual, iterations=0):
	n = q0_minus.dim
	q_r, q_l = lax_parametrize(sigma[:n], sigma[n:], q0_minus, q0_plus, a_left, a_right)

	return RiemannSolution(
		q_r=q_r,
		q_l=q_l,
		sigma_minus=sigma[:n].copy(),
		sigma_plus=sigma[n:].copy(),
		residual_norm=inf_norm(residual(q_r, q_l)),
		iterations=iterations
	)


def _trace_scale(q0_minus, q0_plus):
	return max(1.0, inf_norm(q0_minus.vector), inf_norm(q0_plus.vector))


@attrs(repr=False, eq=False)
class LinearCoupling(DictMixin):
	"""Affine-linear coupling ``B_R Q_R - B_L Q_L - P = 0``."""

	b_r = attrib(converter=lambda value: as_matrix(value, name='B_R'))
	b_l = attrib(converter=lambda value: as_matrix(value, name='B_L'))
	p = attrib(converter=lambda value: as_vector(value, name='P'))

	@p.validator
	def _check_shapes(self, attribute, value):
		size = value.shape[0]

		if size % 2 or self.b_r.shape != (size, size) or self.b_l.shape != (size, size):
			raise ContractViolation("Coupling matrices must be 2n x 2n with a 2n offset vector.")

	@property
	def dim(self):
		return self.p.shape[0] // 2

	@classmethod
	def kirchhoff(cls, n):
		identity = np.eye(2 * n)

		return cls(identity, identity, np.zeros(2 * n))

	def residual(self, q_r, q_l):
		return self.b_r @ q_r.vector - self.b_l @ q_l.vector - self.p

	def system_matrix(self, a_left, a_right):
		r_minus, r_plus = _truncated_eigenvectors(a_left, a_right)

		return self.b_r @ r_minus - self.b_l @ r_plus

	def rhs(self, q0_minus, q0_plus):
		return self.p + self.b_l @ q0_plus.vector - self.b_r @ q0_minus.vector

	def as_general(self, a_left, a_right, *, scale=1.0):
		"""Wrap as a :class:`GeneralCoupling` preconditioned by ``scale * B^-1``."""

		return GeneralCoupling(
			residual=self.residual,
			preconditioner=ConstantPreconditioner(
				scale * dense_inverse(self.system_matrix(a_left, a_right))
			)
		)


@attrs(repr=False, eq=False)
class ConstantPreconditioner(DictMixin):
	matrix = attrib(converter=as_matrix)

	def __call__(self, q0_minus, q0_plus):
		return self.matrix


@attrs(repr=False, eq=False)
class GeneralCoupling(DictMixin):
	"""General coupling condition ``Psi_Q(Q_R, Q_L) = 0`` with ``2n`` components.

	Attributes:
		residual (callable): Maps ``(q_r, q_l)`` to the residual vector.
		preconditioner (callable): Maps ``(q0_minus, q0_plus)`` to the
			fixed-point matrix; ``None`` selects Newton updates.
		differentiable (bool): Whether the residual is differentiable.
	"""

	residual = attrib()
	preconditioner = attrib(default=None)
	differentiable = attrib(default=True)

	def reduced_residual(self, sigma, q0_minus, q0_plus, a_left, a_right):
		n = q0_minus.dim
		q_r, q_l = lax_parametrize(sigma[:n], sigma[n:], q0_minus, q0_plus, a_left, a_right)

		return np.asarray(self.residual(q_r, q_l), dtype=float)


def _check_regular(matrix, message, exception=IllPosedCoupling):
	if condition_number(matrix) > CONDITION_LIMIT:
		raise exception(message)


@relax_states
def solve_linear(c, q0_minus, q0_plus, a_left, a_right):
	"""Explicit Riemann solver for affine-linear couplings.

	Parameters:
		c (LinearCoupling): The coupling condition.
		q0_minus (RelaxState): Trace of the left half-axis.
		q0_plus (RelaxState): Trace of the right half-axis.
		a_left (RelaxMatrix): Relaxation matrix of the left half-axis.
		a_right (RelaxMatrix): Relaxation matrix of the right half-axis.

	Returns:
		RiemannSolution: The coupling data.

	Raises:
		IllPosedCoupling: If the system matrix is numerically singular.
	"""

	if not (c.dim == q0_minus.dim == q0_plus.dim == a_left.dim == a_right.dim):
		raise ContractViolation("Dimension mismatch between coupling and traces.")

	matrix = c.system_matrix(a_left, a_right)
	_check_regular(matrix, "Riemann solver is ill-posed for this coupling.")

	sigma = dense_solve(matrix, c.rhs(q0_minus, q0_plus))

	return _solution(sigma, q0_minus, q0_plus, a_left, a_right, c.residual)


def block_lu_inverse(b11, b12, b21, b22):
	"""Invert a 2x2 block matrix through its block LU decomposition.

	Parameters:
		b11, b12, b21, b22 (array-like): The ``n x n`` blocks.

	Returns:
		numpy.ndarray: The ``2n x 2n`` inverse.

	Raises:
		SingularBlock: If ``b11`` or the Schur complement is singular.
	"""

	b11 = as_matrix(b11, name='block')
	n = b11.shape[0]

	if b11.shape != (n, n):
		raise ContractViolation("Blocks must be square.")

	b12, b21, b22 = (as_matrix(block, shape=(n, n), name='block') for block in (b12, b21, b22))

	_check_regular(b11, "Leading block is singular; use a pivoted dense solve.", SingularBlock)
	b11_inv = dense_inverse(b11)

	schur = b22 - b21 @ b11_inv @ b12
	_check_regular(schur, "Schur complement is singular; use a pivoted dense solve.", SingularBlock)
	schur_inv = dense_inverse(schur)

	upper_right = -b11_inv @ b12 @ schur_inv
	lower_left = -schur_inv @ b21 @ b11_inv

	return np.block([
		[b11_inv - upper_right @ b21 @ b11_inv, upper_right],
		[lower_left, schur_inv]
	])


@relax_states
def solve_fixed_point(
	c, q0_minus, q0_plus, a_left, a_right,
	sigma0=None, *, tol=FIXED_POINT_TOLERANCE, max_iter=FIXED_POINT_MAX_ITER
):
	"""Riemann solver for general couplings by fixed-point iteration.

	Iterates ``sigma <- sigma - A(Q0) Psi(sigma)`` until the maximum norm of the
	residual drops below ``tol * max(1, |Q0|)``. Without a preconditioner
	``A(Q0)`` is the inverse finite-difference Jacobian at the current iterate.

	Parameters:
		c (GeneralCoupling): The coupling condition.
		q0_minus (RelaxState): Trace of the left half-axis.
		q0_plus (RelaxState): Trace of the right half-axis.
		a_left (RelaxMatrix): Relaxation matrix of the left half-axis.
		a_right (RelaxMatrix): Relaxation matrix of the right half-axis.
		sigma0 (array-like): Starting parameters, zero by default.
		tol (float): Residual tolerance.
		max_iter (int): Maximum number of updates.

	Returns:
		RiemannSolution: The coupling data.

	Raises:
		NonConvergence: If ``max_iter`` updates do not reach the tolerance.
		Divergence: If an iterate becomes non-finite.
	"""

	n = q0_minus.dim
	sigma = np.zeros(2 * n) if sigma0 is None else as_vector(sigma0, dim=2 * n, name='start value')
	threshold = tol * _trace_scale(q0_minus, q0_plus)

	def psi(s):
		return c.reduced_residual(s, q0_minus, q0_plus, a_left, a_right)

	fixed = c.preconditioner(q0_minus, q0_plus) if c.preconditioner is not None else None

	iterations = 0
	while True:
		residual = psi(sigma)
		norm = inf_norm(residual)

		if not np.isfinite(norm):
			raise Divergence("Fixed-point residual is not finite.", iterations=iterations)

		if norm <= threshold:
			break

		if iterations >= max_iter:
			raise NonConvergence(
				f"Fixed-point iteration did not converge in {max_iter} iterations.",
				residual=norm,
				iterations=iterations
			)

		if fixed is not None:
			step = fixed @ residual
		else:
			jacobian = fd_jacobian(psi, sigma)
			_check_regular(jacobian, "Coupling Jacobian is singular at the current iterate.")
			step = dense_solve(jacobian, residual)

		sigma = sigma - step
		iterations += 1

		if not np.all(np.isfinite(sigma)):
			raise Divergence("Fixed-point iterate is not finite.", iterations=iterations)

	logger.debug("Fixed-point solve converged after %d iterations (residual %.3e).", iterations, norm)

	return _solution(sigma, q0_minus, q0_plus, a_left, a_right, c.residual, iterations)


@relax_states
def solve_kirchhoff(q0_minus, q0_plus, a):
	"""Closed-form Riemann solver for ``Q_R = Q_L`` with equal relaxation matrices."""

	if not (q0_minus.dim == q0_plus.dim == a.dim):
		raise ContractViolation("Dimension mismatch between traces and relaxation matrix.")

	u = 0.5 * (q0_minus.u + q0_plus.u) + 0.5 * a.sqrt_inv * (q0_minus.v - q0_plus.v)
	v = 0.5 * (q0_minus.v + q0_plus.v) + 0.5 * a.sqrt * (q0_minus.u - q0_plus.u)

	return RiemannSolution(
		q_r=RelaxState(u, v),
		q_l=RelaxState(u.copy(), v.copy()),
		sigma_minus=v - q0_minus.v,
		sigma_plus=v - q0_plus.v,
		residual_norm=0.0,
		iterations=0
	)


@relax_states
def contraction_bound(c, q0_minus, q0_plus, a_left, a_right, sigma_samples, *, step=1e-6):
	"""Largest ``|I - A(Q0) D Psi(sigma)|`` over sampled parameters.

	Without a preconditioner, the Newton matrix frozen at ``sigma = 0`` is used.
	A value below 1 certifies a contraction on the sampled set.
	"""

	n = q0_minus.dim

	def psi(s):
		return c.reduced_residual(s, q0_minus, q0_plus, a_left, a_right)

	if c.preconditioner is not None:
		precond = np.asarray(c.preconditioner(q0_minus, q0_plus), dtype=float)
	else:
		precond = dense_inverse(fd_jacobian(psi, np.zeros(2 * n), step=step))

	identity = np.eye(2 * n)
	bound = 0.0
	for sigma in np.atleast_2d(sigma_samples):
		jacobian = fd_jacobian(psi, as_vector(sigma, dim=2 * n), step=step)
		bound = max(bound, inf_norm(np.sum(np.abs(identity - precond @ jacobian), axis=1)))

	return bound


@attrs(repr=False, eq=False)
class ConsistencyReport(DictMixin):
	"""Outcome of checking a relaxation coupling against an original coupling.

	Attributes:
		forward_ok (bool): Every sample satisfying the original coupling has a
			vanishing lifted residual.
		forward_counterexamples (list): Samples violating the forward direction.
		reverse_counterexamples (list): Samples with vanishing lifted residual
			that violate the original coupling.
		kappa (float): Amplification constant applied to the tolerance.
		checked (int): Number of samples.
	"""

	forward_ok = attrib()
	forward_counterexamples = attrib()
	reverse_counterexamples = attrib()
	kappa = attrib()
	checked = attrib()

	@property
	def ok(self):
		return self.forward_ok and not self.reverse_counterexamples


def check_consistency(psi_u, c, flux_left, flux_right, u_samples, *, tol=1e-10, kappa=None):
	"""Check that a relaxation coupling is consistent with an original coupling.

	States are lifted to equilibrium ``(U, F_i(U))`` before evaluating the
	relaxation residual of ``c``.

	Parameters:
		psi_u (callable): Original coupling map of ``(u_r, u_l)``.
		c (GeneralCoupling or LinearCoupling): The relaxation coupling.
		flux_left (FluxModel): Flux of the left half-axis.
		flux_right (FluxModel): Flux of the right half-axis.
		u_samples (list): Pairs ``(u_r, u_l)`` of conserved states.
		tol (float): Residual tolerance.
		kappa (float): Amplification constant; by default ``max(1, |Q|)``
			over all lifted states.

	Returns:
		ConsistencyReport: The verdict with counterexamples.
	"""

	lifted = [
		(RelaxState.lift(u_r, flux_left), RelaxState.lift(u_l, flux_right))
		for u_r, u_l in u_samples
	]

	if kappa is None:
		kappa = max(
			[1.0]
			+ [max(inf_norm(q_r.vector), inf_norm(q_l.vector)) for q_r, q_l in lifted]
		)

	forward = []
	reverse = []
	for (u_r, u_l), (q_r, q_l) in zip(u_samples, lifted):
		original = inf_norm(psi_u(q_r.u, q_l.u))
		relaxed = inf_norm(c.residual(q_r, q_l))

		sample = {
			'u_r': q_r.u,
			'u_l': q_l.u,
			'original_residual': original,
			'lifted_residual': relaxed
		}

		if original <= tol and relaxed > tol * kappa:
			forward.append(sample)

		if relaxed <= tol * kappa and original > tol * kappa:
			reverse.append(sample)

	if forward:
		logger.info("Found %d forward consistency counterexamples.", len(forward))

	return ConsistencyReport(
		forward_ok=not forward,
		forward_counterexamples=forward,
		reverse_counterexamples=reverse,
		kappa=kappa,
		checked=len(lifted)
	)


@attrs(repr=False, eq=False)
class KirchhoffSolver(DictMixin):
	"""Riemann solver handle for ``Q_R = Q_L``."""

	a = attrib()

	def __call__(self, q0_minus, q0_plus, time=0.0):
		return solve_kirchhoff(q0_minus, q0_plus, self.a)


@attrs(repr=False, eq=False)
class LinearSolver(DictMixin):
	"""Riemann solver handle for a fixed affine-linear coupling."""

	coupling = attrib()
	a_left = attrib()
	a_right = attrib()

	def __call__(self, q0_minus, q0_plus, time=0.0):
		return solve_linear(self.coupling, q0_minus, q0_plus, self.a_left, self.a_right)


@attrs(repr=False, eq=False)
class FixedPointSolver(DictMixin):
	"""Riemann solver handle iterating a fixed general coupling."""

	coupling = attrib()
	a_left = attrib()
	a_right = attrib()
	tol = attrib(default=FIXED_POINT_TOLERANCE)
	max_iter = attrib(default=FIXED_POINT_MAX_ITER)

	def __call__(self, q0_minus, q0_plus, time=0.0):
		return solve_fixed_point(
			self.coupling, q0_minus, q0_plus, self.a_left, self.a_right,
			tol=self.tol, max_iter=self.max_iter
		)
