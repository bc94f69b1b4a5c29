__all__ = [
	'ExitCode',
	'Scenario',
	'Side',
	'SolverMethod'
]

from enum import Enum, IntEnum


class _BaseEnum(Enum):  # pragma: nocover
	def __repr__(self):
		return f'<{self.__class__.__name__}.{self.name}>'


class _BaseIntEnum(IntEnum):  # pragma: nocover
	def __repr__(self):
		return f'<{self.__class__.__name__}.{self.name}>'


class Side(_BaseEnum):
	LEFT = 'left'
	RIGHT = 'right'


class Scenario(_BaseEnum):
	PSYSTEM_JUMP = 'psystem-jump'
	KIRCHHOFF_DEMO = 'kirchhoff-demo'
	CUSTOM = 'custom'


class SolverMethod(_BaseEnum):
	CLOSED_FORM = 'closed-form'
	GENERIC = 'generic'


class ExitCode(_BaseIntEnum):
	SUCCESS = 0
	CONFIGURATION_ERROR = 1
	SOLVER_FAILURE = 2
	CONSISTENCY_FAILURE = 3
