import numpy as np
from coupled_relaxation import RelaxMatrix, RelaxState


def random_state(rng, n, *, low=-1.0, high=1.0):
	return RelaxState(rng.uniform(low, high, n), rng.uniform(low, high, n))


def random_traces(count, n, *, seed=0, low=-1.0, high=1.0):
	rng = np.random.default_rng(seed)

	return [
		(random_state(rng, n, low=low, high=high), random_state(rng, n, low=low, high=high))
		for _ in range(count)
	]


def random_relax_matrix(rng, n, *, low=0.5, high=4.0):
	return RelaxMatrix(rng.uniform(low, high, n))


def trace_scale(*states):
	return max([1.0] + [float(np.max(np.abs(state.vector))) for state in states])
