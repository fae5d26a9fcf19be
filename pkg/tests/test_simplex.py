import numpy as np
import pytest

from evlot.simplex import LpError, LpProblem, solve_lp

from helpers import lp_vertex_oracle


def random_instance(rng):
    n = int(rng.integers(1, 5))
    m = int(rng.integers(1, 5))
    c = rng.uniform(-2, 3, size=n)
    a = rng.uniform(-1, 2, size=(m, n))
    b = rng.uniform(0.2, 4, size=m)
    ub = rng.uniform(0.5, 5, size=n)  # finite bounds keep every instance bounded
    if rng.random() < 0.3:
        # add a lower-bound style row (-x_i <= -delta) while staying feasible
        i = int(rng.integers(n))
        delta = rng.uniform(0.05, 0.4) * ub[i]
        row = np.zeros(n)
        row[i] = -1.0
        a = np.vstack([a, row])
        b = np.concatenate([b, [-delta]])
        # make sure the original rows admit x_i = delta
        for j in range(m):
            if a[j, i] > 0:
                b[j] = max(b[j], a[j, i] * delta + 0.1)
    return LpProblem(objective=c, a_ub=a, b_ub=b, upper_bounds=ub)


class TestSolveLp:
    def test_single_variable(self):
        value, x = solve_lp(LpProblem(objective=[1.0], a_ub=[[1.0]], b_ub=[3.0]))
        assert value == pytest.approx(3.0)
        assert x[0] == pytest.approx(3.0)

    def test_empty_problem(self):
        value, x = solve_lp(LpProblem(objective=[], a_ub=[], b_ub=[]))
        assert value == 0.0 and x.size == 0

    def test_upper_bounds_respected(self):
        p = LpProblem(objective=[1.0, 1.0], a_ub=np.zeros((0, 2)), b_ub=[],
                      upper_bounds=[2.0, 0.5])
        value, x = solve_lp(p)
        assert value == pytest.approx(2.5)
        assert np.allclose(x, [2.0, 0.5])

    def test_unbounded_detected(self):
        p = LpProblem(objective=[1.0], a_ub=np.zeros((0, 1)), b_ub=[])
        with pytest.raises(LpError, match="unbounded"):
            solve_lp(p)

    def test_infeasible_detected(self):
        p = LpProblem(objective=[1.0], a_ub=[[-1.0]], b_ub=[-5.0], upper_bounds=[1.0])
        with pytest.raises(LpError, match="infeasible"):
            solve_lp(p)

    def test_negative_rhs_phase_one(self):
        # x >= 1 encoded as -x <= -1, maximize -x  => x = 1
        p = LpProblem(objective=[-1.0], a_ub=[[-1.0]], b_ub=[-1.0], upper_bounds=[5.0])
        value, x = solve_lp(p)
        assert value == pytest.approx(-1.0)
        assert x[0] == pytest.approx(1.0)

    def test_degenerate_ties(self):
        # redundant constraints meeting at the same vertex
        p = LpProblem(objective=[1.0, 1.0],
                      a_ub=[[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
                      b_ub=[1.0, 1.0, 1.0, 2.0])
        value, _ = solve_lp(p)
        assert value == pytest.approx(2.0)

    def test_vertex_enumeration_oracle(self):
        rng = np.random.default_rng(2024)
        for _ in range(50):
            problem = random_instance(rng)
            expected = lp_vertex_oracle(problem.objective, problem.a_ub,
                                        problem.b_ub, problem.upper_bounds)
            value, x = solve_lp(problem)
            assert np.isfinite(expected)
            assert abs(value - expected) <= 1e-6 * max(1.0, abs(expected))
            # returned point is feasible and attains the value
            assert np.all(problem.a_ub @ x <= problem.b_ub + 1e-8)
            assert np.all(x >= -1e-9) and np.all(x <= problem.upper_bounds + 1e-9)
            assert problem.objective @ x == pytest.approx(value, abs=1e-8)
