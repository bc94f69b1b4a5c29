__all__ = [
	'BlowUp',
	'ConfigurationError',
	'ContractViolation',
	'CoupledRelaxationException',
	'Divergence',
	'DomainError',
	'IllPosedCoupling',
	'InterfaceCouplingError',
	'NonConvergence',
	'RiemannSolverError',
	'SchemeError',
	'SingularBlock',
	'VacuumError'
]


class CoupledRelaxationException(Exception):
	"""Base exception class."""

	pass


class ContractViolation(CoupledRelaxationException, ValueError):
	"""Exception raised when arguments violate an operation's preconditions."""

	pass


class ConfigurationError(CoupledRelaxationException, ValueError):
	"""Exception raised when a model or run configuration is invalid."""

	pass


class DomainError(CoupledRelaxationException, ValueError):
	"""Exception raised when a value lies outside a model's domain."""

	pass


class VacuumError(DomainError):
	"""Exception raised when a state or coupling data reaches vacuum."""

	pass


class RiemannSolverError(CoupledRelaxationException):
	"""Base exception class for nodal Riemann solver failures."""

	pass


class IllPosedCoupling(RiemannSolverError):
	"""Exception raised when the node system of a coupling is singular or degenerate."""

	pass


class SingularBlock(IllPosedCoupling):
	"""Exception raised when a pivot block or Schur complement is singular.

	A pivoted dense solve should be used instead.
	"""

	pass


class NonConvergence(RiemannSolverError):
	"""Exception raised when the fixed-point iteration exceeds its iteration limit.

	Attributes:
		residual (float): The last residual norm.
		iterations (int): The number of performed updates.
	"""

	def __init__(self, message, *, residual=None, iterations=None):
		super().__init__(message)

		self.residual = residual
		self.iterations = iterations


class Divergence(RiemannSolverError):
	"""Exception raised when a fixed-point iterate is not finite.

	Attributes:
		iterations (int): The number of performed updates.
	"""

	def __init__(self, message, *, iterations=None):
		super().__init__(message)

		self.iterations = iterations


class SchemeError(CoupledRelaxationException):
	"""Base exception class for time integration failures.

	Attributes:
		time (float): Time level of the failing step.
		step (int): Index of the failing step, if known.
	"""

	def __init__(self, message, *, time=None, step=None):
		super().__init__(message)

		self.time = time
		self.step = step


class BlowUp(SchemeError):
	"""Exception raised when cell averages become non-finite.

	Attributes:
		cells (list): Array indices of the non-finite cells.
	"""

	def __init__(self, message, *, time=None, step=None, cells=None):
		super().__init__(message, time=time, step=step)

		self.cells = cells if cells is not None else []


class InterfaceCouplingError(SchemeError):
	"""Exception raised when the Riemann solver fails at the interface cells -1 and 0."""

	pass
