import numpy as np
import pytest
from coupled_relaxation import (
	ContractViolation,
	Divergence,
	GeneralCoupling,
	IllPosedCoupling,
	LinearCoupling,
	NonConvergence,
	RelaxMatrix,
	RelaxState,
	SingularBlock,
	block_lu_inverse,
	check_consistency,
	contraction_bound,
	lax_membership_residual,
	linear_advection,
	solve_fixed_point,
	solve_kirchhoff,
	solve_linear
)
from coupled_relaxation.riemann import FixedPointSolver, KirchhoffSolver, LinearSolver
from coupled_relaxation.utils import dense_inverse

from .utils import random_relax_matrix, random_traces, trace_scale


def random_linear_coupling(rng, n):
	return LinearCoupling(
		np.eye(2 * n) + 0.05 * rng.uniform(-1.0, 1.0, (2 * n, 2 * n)),
		np.eye(2 * n) + 0.05 * rng.uniform(-1.0, 1.0, (2 * n, 2 * n)),
		rng.uniform(-1.0, 1.0, 2 * n)
	)


def test_LinearCoupling_shapes():
	with pytest.raises(ContractViolation, match='2n x 2n'):
		LinearCoupling(np.eye(2), np.eye(2), np.zeros(3))

	with pytest.raises(ContractViolation, match='2n x 2n'):
		LinearCoupling(np.eye(2), np.eye(4), np.zeros(2))

	assert LinearCoupling.kirchhoff(2).dim == 2


def test_solve_linear_coupled_traces():
	a = RelaxMatrix([2.0, 3.0])
	q0 = RelaxState([1.0, -1.0], [0.5, 2.0])

	solution = solve_linear(LinearCoupling.kirchhoff(2), q0, q0, a, a)

	assert np.allclose(solution.sigma_minus, 0.0, atol=1e-14)
	assert np.allclose(solution.sigma_plus, 0.0, atol=1e-14)
	assert np.allclose(solution.q_r.vector, q0.vector, atol=1e-14)
	assert np.allclose(solution.q_l.vector, q0.vector, atol=1e-14)


def test_solve_linear_example():
	a = RelaxMatrix([1.0])

	solution = solve_linear(LinearCoupling.kirchhoff(1), [1.0, 0.0], [0.0, 0.0], a, a)

	assert np.allclose(solution.q_r.vector, [0.5, 0.5], atol=1e-14)
	assert np.allclose(solution.q_l.vector, [0.5, 0.5], atol=1e-14)
	assert solution.iterations == 0


def test_solve_linear_matches_kirchhoff():
	rng = np.random.default_rng(10)
	coupling = LinearCoupling.kirchhoff(2)

	for q0_minus, q0_plus in random_traces(1000, 2, seed=11):
		a = random_relax_matrix(rng, 2)

		linear = solve_linear(coupling, q0_minus, q0_plus, a, a)
		kirchhoff = solve_kirchhoff(q0_minus, q0_plus, a)

		assert np.allclose(linear.q_r.vector, kirchhoff.q_r.vector, rtol=0, atol=1e-12)
		assert np.allclose(linear.q_l.vector, kirchhoff.q_l.vector, rtol=0, atol=1e-12)


def test_solve_linear_residual_and_membership():
	rng = np.random.default_rng(12)

	for q0_minus, q0_plus in random_traces(200, 2, seed=13):
		coupling = random_linear_coupling(rng, 2)
		a_left = random_relax_matrix(rng, 2)
		a_right = random_relax_matrix(rng, 2)

		solution = solve_linear(coupling, q0_minus, q0_plus, a_left, a_right)

		assert solution.residual_norm <= 1e-12
		assert lax_membership_residual(
			solution.q_r, solution.q_l, q0_minus, q0_plus, a_left, a_right
		) <= 1e-12


def test_solve_linear_ill_posed():
	a = RelaxMatrix([1.0])
	coupling = LinearCoupling(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros(2))

	with pytest.raises(IllPosedCoupling, match='ill-posed'):
		solve_linear(coupling, [1.0, 0.0], [0.0, 0.0], a, a)


def test_solve_linear_dimension_mismatch():
	a = RelaxMatrix([1.0, 1.0])

	with pytest.raises(ContractViolation):
		solve_linear(LinearCoupling.kirchhoff(1), [1.0, 0.0], [0.0, 0.0], a, a)


def test_block_lu_inverse_identity():
	identity = np.eye(2)
	zeros = np.zeros((2, 2))

	assert np.allclose(block_lu_inverse(identity, zeros, zeros, identity), np.eye(4))


def test_block_lu_inverse_scalar_blocks():
	assert np.allclose(block_lu_inverse([[2.0]], [[1.0]], [[1.0]], [[1.0]]), [[1.0, -1.0], [-1.0, 2.0]])


def test_block_lu_inverse_matches_dense():
	rng = np.random.default_rng(14)

	for _ in range(100):
		b11, b12, b21, b22 = (3 * np.eye(2) + rng.uniform(-1.0, 1.0, (2, 2)) for _ in range(4))
		inverse = block_lu_inverse(b11, b12, b21, b22)
		matrix = np.block([[b11, b12], [b21, b22]])

		assert np.allclose(inverse, dense_inverse(matrix), rtol=1e-12, atol=1e-12)
		assert np.allclose(matrix @ inverse, np.eye(4), atol=1e-12)


def test_block_lu_inverse_singular():
	identity = np.eye(2)

	with pytest.raises(SingularBlock, match='Leading block'):
		block_lu_inverse(np.zeros((2, 2)), identity, identity, identity)

	with pytest.raises(SingularBlock, match='Schur complement'):
		block_lu_inverse(identity, identity, identity, identity)

	with pytest.raises(ContractViolation, match='square'):
		block_lu_inverse(np.ones((2, 3)), identity, identity, identity)


def test_solve_fixed_point_matches_linear():
	rng = np.random.default_rng(15)

	for q0_minus, q0_plus in random_traces(50, 2, seed=16):
		coupling = random_linear_coupling(rng, 2)
		a_left = random_relax_matrix(rng, 2)
		a_right = random_relax_matrix(rng, 2)

		linear = solve_linear(coupling, q0_minus, q0_plus, a_left, a_right)
		newton = solve_fixed_point(
			GeneralCoupling(residual=coupling.residual), q0_minus, q0_plus, a_left, a_right
		)

		scale = trace_scale(q0_minus, q0_plus)
		assert np.allclose(newton.q_r.vector, linear.q_r.vector, rtol=0, atol=1e-10 * scale)
		assert np.allclose(newton.q_l.vector, linear.q_l.vector, rtol=0, atol=1e-10 * scale)


def test_solve_fixed_point_exact_preconditioner():
	rng = np.random.default_rng(17)

	for q0_minus, q0_plus in random_traces(50, 2, seed=18):
		coupling = random_linear_coupling(rng, 2)
		a_left = random_relax_matrix(rng, 2)
		a_right = random_relax_matrix(rng, 2)

		solution = solve_fixed_point(coupling.as_general(a_left, a_right), q0_minus, q0_plus, a_left, a_right)
		linear = solve_linear(coupling, q0_minus, q0_plus, a_left, a_right)

		assert solution.iterations == 1
		assert np.allclose(solution.sigma_minus, linear.sigma_minus, rtol=0, atol=1e-10)
		assert np.allclose(solution.sigma_plus, linear.sigma_plus, rtol=0, atol=1e-10)


def test_solve_fixed_point_exact_start():
	a = RelaxMatrix([1.0, 2.0])
	coupling = LinearCoupling.kirchhoff(2)
	q0_minus = RelaxState([1.0, 0.0], [0.5, 0.0])
	q0_plus = RelaxState([0.0, 1.0], [0.0, 0.5])

	exact = solve_kirchhoff(q0_minus, q0_plus, a)
	sigma0 = np.concatenate([exact.sigma_minus, exact.sigma_plus])

	solution = solve_fixed_point(GeneralCoupling(coupling.residual), q0_minus, q0_plus, a, a, sigma0)

	assert solution.iterations == 0
	assert np.allclose(solution.q_r.vector, exact.q_r.vector)


def test_solve_fixed_point_non_convergence():
	a = RelaxMatrix([1.0])
	coupling = GeneralCoupling(LinearCoupling.kirchhoff(1).residual)

	with pytest.raises(NonConvergence) as exc_info:
		solve_fixed_point(coupling, [1.0, 0.0], [0.0, 0.0], a, a, max_iter=0)

	assert exc_info.value.iterations == 0
	assert exc_info.value.residual == pytest.approx(1.0)


def test_solve_fixed_point_divergence():
	a = RelaxMatrix([1.0])
	coupling = GeneralCoupling(lambda q_r, q_l: np.full(2, np.nan))

	with pytest.raises(Divergence):
		solve_fixed_point(coupling, [1.0, 0.0], [0.0, 0.0], a, a)


def test_solve_kirchhoff():
	q = RelaxState([0.3], [-1.2])
	solution = solve_kirchhoff(q, q, RelaxMatrix([2.0]))
	assert solution.q_r == q
	assert solution.q_l == q

	solution = solve_kirchhoff([1.0, 0.0], [0.0, 0.0], RelaxMatrix([1.0]))
	assert solution.q_r == RelaxState([0.5], [0.5])
	assert solution.q_l == RelaxState([0.5], [0.5])

	solution = solve_kirchhoff([1.0, 0.0], [0.0, 2.0], RelaxMatrix([4.0]))
	assert solution.q_r == RelaxState([0.0], [2.0])
	assert solution.q_l == RelaxState([0.0], [2.0])
	assert solution.residual_norm == 0.0


def test_solve_kirchhoff_mirror_symmetry():
	rng = np.random.default_rng(19)

	for q0_minus, q0_plus in random_traces(1000, 2, seed=20):
		a = random_relax_matrix(rng, 2)

		solution = solve_kirchhoff(q0_minus, q0_plus, a)
		mirrored = solve_kirchhoff(
			RelaxState(q0_plus.u, -q0_plus.v),
			RelaxState(q0_minus.u, -q0_minus.v),
			a
		)

		assert np.allclose(mirrored.q_r.u, solution.q_r.u, rtol=0, atol=1e-12)
		assert np.allclose(mirrored.q_r.v, -solution.q_r.v, rtol=0, atol=1e-12)


def test_solve_kirchhoff_lax_membership():
	rng = np.random.default_rng(21)

	for q0_minus, q0_plus in random_traces(200, 3, seed=22):
		a = random_relax_matrix(rng, 3)
		solution = solve_kirchhoff(q0_minus, q0_plus, a)

		assert lax_membership_residual(solution.q_r, solution.q_l, q0_minus, q0_plus, a, a) <= 1e-12


def test_contraction_bound():
	rng = np.random.default_rng(23)
	coupling = random_linear_coupling(rng, 2)
	a_left = random_relax_matrix(rng, 2)
	a_right = random_relax_matrix(rng, 2)
	q0_minus, q0_plus = random_traces(1, 2, seed=24, low=-0.1, high=0.1)[0]
	samples = rng.uniform(-0.1, 0.1, (5, 4))

	exact = contraction_bound(
		coupling.as_general(a_left, a_right), q0_minus, q0_plus, a_left, a_right, samples
	)
	half = contraction_bound(
		coupling.as_general(a_left, a_right, scale=0.5), q0_minus, q0_plus, a_left, a_right, samples
	)
	newton = contraction_bound(
		GeneralCoupling(coupling.residual), q0_minus, q0_plus, a_left, a_right, samples
	)

	assert exact == pytest.approx(0.0, abs=1e-7)
	assert half == pytest.approx(0.5, abs=1e-7)
	assert newton == pytest.approx(0.0, abs=1e-7)


def test_check_consistency_tautology():
	flux = linear_advection(2.0)
	samples = [([u], [u]) for u in np.linspace(-1.0, 1.0, 5)] + [([1.0], [0.0]), ([0.5], [-0.5])]

	report = check_consistency(
		lambda u_r, u_l: u_r - u_l,
		LinearCoupling.kirchhoff(1),
		flux,
		flux,
		samples
	)

	assert report.ok
	assert report.forward_ok
	assert report.reverse_counterexamples == []
	assert report.kappa == 2.0
	assert report.checked == 7


def test_check_consistency_counterexample():
	flux = linear_advection(2.0)
	coupling = LinearCoupling(np.eye(2), np.eye(2), [0.0, 1.0])

	report = check_consistency(lambda u_r, u_l: u_r - u_l, coupling, flux, flux, [([1.0], [1.0])])

	assert not report.ok
	assert len(report.forward_counterexamples) == 1
	assert report.forward_counterexamples[0]['lifted_residual'] == 1.0


def test_solver_handles():
	a = RelaxMatrix([1.0])
	coupling = LinearCoupling.kirchhoff(1)
	expected = RelaxState([0.5], [0.5])

	for rs in (
		KirchhoffSolver(a),
		LinearSolver(coupling, a, a),
		FixedPointSolver(GeneralCoupling(coupling.residual), a, a)
	):
		solution = rs(RelaxState([1.0], [0.0]), RelaxState([0.0], [0.0]), 0.25)

		assert np.allclose(solution.q_r.vector, expected.vector)
		assert np.allclose(solution.q_l.vector, expected.vector)
