__all__ = [
	'burgers',
	'linear_advection'
]

import numpy as np
from attr import attrib, attrs

from ..core import FluxModel


@attrs(frozen=True)
class _LinearFlux:
	speed = attrib()

	def flux(self, u):
		return self.speed * np.asarray(u, dtype=float)

	def jacobian(self, u):
		return np.array([[self.speed]])


def _burgers_flux(u):
	u = np.asarray(u, dtype=float)

	return 0.5 * u * u


def _burgers_jacobian(u):
	return np.array([[float(np.asarray(u, dtype=float).reshape(-1)[0])]])


def linear_advection(speed=1.0, *, lower=-10.0, upper=10.0):
	"""Scalar flux ``F(u) = speed * u``."""

	flux = _LinearFlux(float(speed))

	return FluxModel(
		dim=1,
		flux=flux.flux,
		jacobian=flux.jacobian,
		lower=[lower],
		upper=[upper],
		name='linear advection'
	)


def burgers(*, lower=-2.0, upper=2.0):
	"""Scalar flux ``F(u) = u^2 / 2``."""

	return FluxModel(
		dim=1,
		flux=_burgers_flux,
		jacobian=_burgers_jacobian,
		lower=[lower],
		upper=[upper],
		name='burgers'
	)
