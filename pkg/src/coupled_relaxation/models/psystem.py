__all__ = [
	'APPROACH_BETAS',
	'Approach4Residual',
	'CONVERGENCE_CELLS',
	'CouplingApproach',
	'DEFAULT_CELLS',
	'DEFAULT_CFL',
	'DEFAULT_CONSISTENCY_OUTTAKE',
	'DEFAULT_DOMAIN',
	'DEFAULT_OUTPUT_TIMES',
	'ERROR_HORIZON',
	'EXPERIMENT_ALPHA',
	'INITIAL_STATE',
	'OuttakeSchedule',
	'PSystemCouplingMap',
	'PSystemModel',
	'PSystemSolver',
	'build_coupling',
	'consistency_samples',
	'off_manifold_samples',
	'outtake',
	'psi_u',
	'psystem_flux',
	'relax_rate_a',
	'solve_approach4',
	'solve_linear_psystem'
]

import numpy as np
from attr import attrib, attrs
from bidict import frozenbidict

from ..core import (
	FluxModel,
	RelaxMatrix,
	lax_parametrize,
	relax_states
)
from ..exceptions import (
	ConfigurationError,
	ContractViolation,
	DomainError,
	IllPosedCoupling,
	VacuumError
)
from ..riemann import (
	GeneralCoupling,
	LinearCoupling,
	RiemannSolution,
	solve_fixed_point,
	solve_linear
)
from ..structures import DictMixin
from ..tables import Side, SolverMethod
from ..utils import inf_norm

EXPERIMENT_ALPHA = 146820.4
DEFAULT_DOMAIN = (-200.0, 200.0)
DEFAULT_CELLS = 1000
DEFAULT_CFL = 0.49
DEFAULT_OUTPUT_TIMES = (0.0716, 0.2864, 0.55)
INITIAL_STATE = (1.0, 1.0)
CONVERGENCE_CELLS = (100, 200, 400, 800, 1600)
ERROR_HORIZON = 0.55
DEFAULT_CONSISTENCY_OUTTAKE = -0.5

RHO_FLOOR = 1e-12
DEGENERACY_LIMIT = 1e-12

# Approach id <-> (beta1, beta2) of the linear approaches.
APPROACH_BETAS = frozenbidict({
	1: (1, 0),
	2: (0, 1),
	3: (1, 1)
})


def _positive(instance, attribute, value):
	if value is not None and not value > 0:
		raise ConfigurationError(f"{attribute.name} must be positive.")


def _nonnegative(instance, attribute, value):
	if not value >= 0:
		raise ConfigurationError(f"{attribute.name} must be nonnegative.")


@attrs(repr=False)
class PSystemModel(DictMixin):
	"""Isentropic gas flow with pressure ``p(rho) = alpha * rho^gamma``.

	Attributes:
		alpha (float): Pressure coefficient.
		gamma (float): Adiabatic exponent.
		rho_max (float): Largest density the relaxation rate must cover.
		rho_min (float): Optional density floor for ``gamma < 1``.
	"""

	alpha = attrib(default=EXPERIMENT_ALPHA, converter=float, validator=_positive)
	gamma = attrib(default=1.0, converter=float, validator=_nonnegative)
	rho_max = attrib(default=2.0, converter=float, validator=_positive)
	rho_min = attrib(default=None, validator=_positive)

	def pressure(self, rho):
		return self.alpha * np.power(rho, self.gamma)

	def dpressure(self, rho):
		if self.gamma == 0:
			return np.zeros_like(np.asarray(rho, dtype=float))

		return self.alpha * self.gamma * np.power(rho, self.gamma - 1)

	def flux(self, u):
		return psystem_flux(u, self)

	def jacobian(self, u):
		rho, m = np.asarray(u, dtype=float)

		if rho <= 0:
			raise DomainError("The p-system Jacobian needs a positive density.")

		v = m / rho

		return np.array([
			[0.0, 1.0],
			[-v * v + self.dpressure(rho), 2 * v]
		])

	def flux_model(self):
		rho_low = self.rho_min if self.rho_min is not None else 0.1 * self.rho_max

		return FluxModel(
			dim=2,
			flux=self.flux,
			jacobian=self.jacobian,
			lower=[rho_low, -self.rho_max],
			upper=[self.rho_max, self.rho_max],
			name='p-system'
		)

	def relax_matrices(self):
		a = relax_rate_a(self)

		return RelaxMatrix.scalar(a, 2, Side.LEFT), RelaxMatrix.scalar(a, 2, Side.RIGHT)


def psystem_flux(u, model):
	"""Flux ``(rho v, rho v^2 + p(rho))`` of states ``(rho, rho v)`` along the last axis.

	Raises:
		DomainError: If a density is negative.
		VacuumError: If a vanishing density carries momentum.
	"""

	u = np.asarray(u, dtype=float)
	rho = u[..., 0]
	m = u[..., 1]

	if np.any(rho < 0):
		raise DomainError("Density must be nonnegative.")

	vacuum = rho == 0
	if np.any(vacuum & (m != 0)):
		raise VacuumError("Momentum is undefined at vacuum.")

	# (rho v)^2 / rho is 0 at vacuum
	convective = np.divide(m * m, rho, out=np.zeros_like(rho), where=~vacuum)

	return np.stack([m, convective + model.pressure(rho)], axis=-1)


def relax_rate_a(model):
	"""Square of the largest sound speed, ``max p'(rho)`` over the admissible densities.

	Raises:
		ConfigurationError: If ``p'`` is unbounded or vanishes.
	"""

	if model.gamma >= 1:
		a = model.alpha * model.gamma * model.rho_max ** (model.gamma - 1)
	elif model.gamma > 0 and model.rho_min is not None:
		a = model.alpha * model.gamma * model.rho_min ** (model.gamma - 1)
	elif model.gamma > 0:
		raise ConfigurationError(
			"Pressure derivative is unbounded near vacuum; supply a density floor rho_min."
		)
	else:
		a = 0.0

	if not a > 0:
		raise ConfigurationError("Relaxation rate must be positive.")

	return float(a)


def _check_continuity(instance, attribute, value):
	before = min(instance.plateau, instance.ramp_rate * instance.ramp_down_start)
	after = max(0.0, instance.ramp_rate * (value - instance.ramp_down_start))

	if abs(before - after) > 1e-12:
		raise ConfigurationError("Outtake schedule must be continuous at the ramp-down start.")


@attrs(repr=False)
class OuttakeSchedule(DictMixin):
	"""Trapezoidal momentum outtake profile.

	``-E(t)`` ramps up with ``ramp_rate`` to ``plateau``, and from
	``ramp_down_start`` falls with the same rate to 0 at ``zero_time``.
	"""

	ramp_rate = attrib(default=3.0, converter=float, validator=_positive)
	plateau = attrib(default=0.6, converter=float, validator=_nonnegative)
	ramp_down_start = attrib(default=0.3, converter=float, validator=_nonnegative)
	zero_time = attrib(default=0.5, converter=float, validator=_check_continuity)

	def value(self, t):
		return outtake(t, self)


def outtake(t, schedule=None):
	"""Momentum outtake ``E(t) <= 0`` at the interface.

	Parameters:
		t (float): Time, nonnegative.
		schedule (OuttakeSchedule): The profile, the experiment default if omitted.

	Returns:
		float: ``E(t)``.
	"""

	schedule = schedule if schedule is not None else OuttakeSchedule()

	if t < 0:
		raise ContractViolation("Outtake is defined for nonnegative times only.")

	if t < schedule.ramp_down_start:
		magnitude = min(schedule.plateau, schedule.ramp_rate * t)
	else:
		magnitude = max(0.0, schedule.ramp_rate * (schedule.zero_time - t))

	return -magnitude


def _check_approach(instance, attribute, value):
	if instance.nonlinear_v2:
		valid = instance.id == 4 and (instance.beta1, instance.beta2) == (1, 1)
	else:
		valid = APPROACH_BETAS.inv.get((instance.beta1, instance.beta2)) == instance.id

	if not valid:
		raise ConfigurationError(f"Inconsistent coupling approach {instance.id}.")


@attrs(repr=False)
class CouplingApproach(DictMixin):
	"""One of the four relaxation coupling approaches.

	Attributes:
		id (int): The approach number 1 to 4.
		beta1 (int): Whether the momentum jump enters the U-condition.
		beta2 (int): Whether the momentum jump enters the V-condition.
		nonlinear_v2 (bool): Whether the momentum flux condition is nonlinear.
	"""

	id = attrib(converter=int)  # noqa
	beta1 = attrib(converter=int)
	beta2 = attrib(converter=int)
	nonlinear_v2 = attrib(default=False, converter=bool, validator=_check_approach)

	@classmethod
	def from_id(cls, approach_id):
		if isinstance(approach_id, cls):
			return approach_id

		if approach_id == 4:
			return cls(4, 1, 1, True)

		try:
			beta1, beta2 = APPROACH_BETAS[approach_id]
		except KeyError:
			raise ConfigurationError(f"Unknown coupling approach {approach_id!r}.") from None

		return cls(approach_id, beta1, beta2)

	def offset(self, e_value):
		return np.array([0.0, self.beta1 * e_value, self.beta2 * e_value, 0.0])


@attrs(repr=False, eq=False)
class Approach4Residual(DictMixin):
	"""Residual ``Q_R - Q_L - P - (0, 0, 0, E (2 m_L + E) / rho_L)``."""

	p = attrib()
	e_value = attrib()

	def __call__(self, q_r, q_l):
		rho_l, m_l = q_l.u

		if rho_l <= RHO_FLOOR:
			raise VacuumError("Coupling data reaches vacuum at the interface.")

		correction = np.zeros(4)
		correction[3] = self.e_value * (2 * m_l + self.e_value) / rho_l

		return q_r.vector - q_l.vector - self.p - correction


def _check_outtake(e_value):
	if e_value > 0:
		raise ContractViolation("Momentum outtake must be nonpositive.")


def build_coupling(approach, e_value, a):
	"""Coupling condition of an approach for the outtake ``e_value``.

	Parameters:
		approach (int or CouplingApproach): The approach.
		e_value (float): The outtake, nonpositive.
		a (float): The relaxation rate of both half-axes.

	Returns:
		LinearCoupling or GeneralCoupling: The condition; approach 4 is
		solved by Newton updates.
	"""

	approach = CouplingApproach.from_id(approach)
	_check_outtake(e_value)

	if not a > 0:
		raise ConfigurationError("Relaxation rate must be positive.")

	p = approach.offset(e_value)

	if approach.nonlinear_v2:
		return GeneralCoupling(residual=Approach4Residual(p, e_value))

	identity = np.eye(4)

	return LinearCoupling(identity, identity, p)


@relax_states
def solve_linear_psystem(approach, q0_minus, q0_plus, a, e_value):
	"""Closed-form Riemann solver of the linear approaches 1 to 3."""

	approach = CouplingApproach.from_id(approach)
	_check_outtake(e_value)

	if approach.nonlinear_v2:
		raise ContractViolation("Approach 4 has no linear closed form.")

	p = approach.offset(e_value)
	s = np.sqrt(a)
	jump_u = p[:2] + q0_plus.u - q0_minus.u
	jump_v = p[2:] + q0_plus.v - q0_minus.v

	sigma_minus = -0.5 * s * jump_u + 0.5 * jump_v
	sigma_plus = -0.5 * s * jump_u - 0.5 * jump_v

	a_left = RelaxMatrix.scalar(a, 2, Side.LEFT)
	a_right = RelaxMatrix.scalar(a, 2, Side.RIGHT)
	q_r, q_l = lax_parametrize(sigma_minus, sigma_plus, q0_minus, q0_plus, a_left, a_right)

	return RiemannSolution(
		q_r=q_r,
		q_l=q_l,
		sigma_minus=sigma_minus,
		sigma_plus=sigma_plus,
		residual_norm=inf_norm(q_r.vector - q_l.vector - p)
	)


@relax_states
def solve_approach4(q0_minus, q0_plus, a, e_value, *, rho_floor=RHO_FLOOR):
	"""Closed-form Riemann solver of approach 4.

	The density components are solved first, which fixes ``rho_L``; the
	momentum components then follow from a linear equation.

	Raises:
		VacuumError: If ``rho_L`` does not exceed ``rho_floor``.
		IllPosedCoupling: If the momentum equation degenerates.
	"""

	_check_outtake(e_value)

	s = np.sqrt(a)
	rho0_minus, m0_minus = q0_minus.u
	rho0_plus, m0_plus = q0_plus.u
	jump_v = q0_plus.v - q0_minus.v

	sigma1_plus = 0.5 * (s * (rho0_minus - rho0_plus) - jump_v[0] - e_value)
	rho_l = rho0_plus + sigma1_plus / s

	if rho_l <= rho_floor:
		raise VacuumError("Coupling data reaches vacuum at the interface.")

	coefficient = -2.0 - 2.0 * e_value / (s * rho_l)
	if abs(coefficient) <= DEGENERACY_LIMIT:
		raise IllPosedCoupling("Momentum condition of approach 4 is degenerate.")

	sigma2_plus = (
		jump_v[1]
		- s * (m0_minus - m0_plus - e_value)
		+ e_value * (2 * m0_plus + e_value) / rho_l
	) / coefficient

	sigma_plus = np.array([sigma1_plus, sigma2_plus])
	sigma_minus = s * (q0_minus.u - q0_plus.u - np.array([0.0, e_value])) - sigma_plus

	a_left = RelaxMatrix.scalar(a, 2, Side.LEFT)
	a_right = RelaxMatrix.scalar(a, 2, Side.RIGHT)
	q_r, q_l = lax_parametrize(sigma_minus, sigma_plus, q0_minus, q0_plus, a_left, a_right)

	residual = Approach4Residual(CouplingApproach.from_id(4).offset(e_value), e_value)

	return RiemannSolution(
		q_r=q_r,
		q_l=q_l,
		sigma_minus=sigma_minus,
		sigma_plus=sigma_plus,
		residual_norm=inf_norm(residual(q_r, q_l))
	)


@attrs(repr=False, eq=False)
class PSystemSolver(DictMixin):
	"""Riemann solver handle of an approach with time-dependent outtake.

	Attributes:
		approach (CouplingApproach): The coupling approach.
		a (float): The relaxation rate of both half-axes.
		schedule (OuttakeSchedule): The outtake profile.
		method (SolverMethod): Closed-form solvers or the generic
			linear and fixed-point solvers.
	"""

	approach = attrib(converter=CouplingApproach.from_id)
	a = attrib(converter=float)
	schedule = attrib(factory=OuttakeSchedule)
	method = attrib(default=SolverMethod.CLOSED_FORM, converter=SolverMethod)

	def __call__(self, q0_minus, q0_plus, time=0.0):
		e_value = outtake(time, self.schedule)

		if self.method is SolverMethod.CLOSED_FORM:
			if self.approach.nonlinear_v2:
				return solve_approach4(q0_minus, q0_plus, self.a, e_value)

			return solve_linear_psystem(self.approach, q0_minus, q0_plus, self.a, e_value)

		coupling = build_coupling(self.approach, e_value, self.a)
		a_left = RelaxMatrix.scalar(self.a, 2, Side.LEFT)
		a_right = RelaxMatrix.scalar(self.a, 2, Side.RIGHT)

		if isinstance(coupling, LinearCoupling):
			return solve_linear(coupling, q0_minus, q0_plus, a_left, a_right)

		return solve_fixed_point(coupling, q0_minus, q0_plus, a_left, a_right)


@attrs(repr=False, eq=False)
class PSystemCouplingMap(DictMixin):
	"""Original coupling ``(m_R - m_L - E, p(rho_R) - p(rho_L))`` of conserved states."""

	model = attrib()
	e_value = attrib()

	def __call__(self, u_r, u_l):
		rho_r, m_r = u_r
		rho_l, m_l = u_l

		return np.array([
			m_r - m_l - self.e_value,
			self.model.pressure(rho_r) - self.model.pressure(rho_l)
		])


def psi_u(e_value, model=None):
	return PSystemCouplingMap(model if model is not None else PSystemModel(), e_value)


def consistency_samples(
	e_value=DEFAULT_CONSISTENCY_OUTTAKE, count=64, *, seed=0,
	rho_range=(0.5, 2.0), momentum_range=(0.5, 2.0)
):
	"""State pairs satisfying the original coupling exactly.

	Densities agree on both sides and ``m_R = m_L + E``.
	"""

	rng = np.random.default_rng(seed)
	rho = rng.uniform(*rho_range, size=count)
	m_l = rng.uniform(*momentum_range, size=count)
	m_r = m_l + e_value

	return [
		(np.array([rho[i], m_r[i]]), np.array([rho[i], m_l[i]]))
		for i in range(count)
	]


def off_manifold_samples(
	e_value=DEFAULT_CONSISTENCY_OUTTAKE, count=64, *, seed=0, perturbation=0.25,
	rho_range=(0.5, 2.0), momentum_range=(0.5, 2.0)
):
	"""State pairs violating the original coupling in both components.

	``rho_R`` differs from ``rho_L`` and ``m_R`` from ``m_L + E`` by a relative
	or absolute amount of magnitude in ``[perturbation / 5, perturbation]``.

	Raises:
		ContractViolation: If ``perturbation`` is not in ``(0, 1)``.
	"""

	if not 0 < perturbation < 1:
		raise ContractViolation("Perturbation must lie in (0, 1).")

	rng = np.random.default_rng(seed)
	rho_l = rng.uniform(*rho_range, size=count)
	m_l = rng.uniform(*momentum_range, size=count)
	offsets = rng.uniform(perturbation / 5, perturbation, size=(count, 2))
	offsets *= rng.choice([-1.0, 1.0], size=(count, 2))

	rho_r = rho_l * (1 + offsets[:, 0])
	m_r = m_l + e_value + offsets[:, 1]

	return [
		(np.array([rho_r[i], m_r[i]]), np.array([rho_l[i], m_l[i]]))
		for i in range(count)
	]
