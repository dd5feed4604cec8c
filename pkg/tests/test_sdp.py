import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qrgames.game import HiddenMatchingGame
from qrgames.matchings import canonical_family
from qrgames.sdp import (
    DiscriminationProblem,
    dual_feasibility_margin,
    hidden_matching_problem,
    physical_value,
    selective_vs_physical,
    solution_report,
)


def random_psd(rng, d, scale=1.0):
    a = rng.standard_normal((d, d))
    return scale * (a @ a.T) / d


def helstrom_value(r0, r1):
    # closed form for two answers: Tr R1 + sum of positive eigenvalues of R0 - R1
    return float(
        np.trace(r1).real + np.linalg.eigvalsh(r0 - r1).clip(min=0).sum()
    )


class TestProblemValidation:
    def test_rejects_non_psd(self):
        with pytest.raises(ValueError):
            DiscriminationProblem(operators=(np.diag([1.0, -0.5]),))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError):
            DiscriminationProblem(operators=(np.eye(2), np.eye(3)))

    def test_rejects_oversize_dimension(self):
        with pytest.raises(ValueError):
            DiscriminationProblem(operators=(np.eye(65),))

    def test_rejects_too_many_answers(self):
        ops = tuple(np.eye(2) for _ in range(257))
        with pytest.raises(ValueError):
            DiscriminationProblem(operators=ops)

    def test_rejects_bad_total_state_trace(self):
        with pytest.raises(ValueError):
            DiscriminationProblem(
                operators=(np.eye(2) / 2,), total_state=np.eye(2)
            )

    def test_accepts_unit_trace_total(self):
        prob = DiscriminationProblem(
            operators=(np.eye(2) / 2,), total_state=np.eye(2) / 2
        )
        assert prob.dimension == 2


class TestHelstrom:
    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=15, deadline=None)
    def test_two_state_closed_form(self, seed):
        rng = np.random.default_rng(seed)
        r0, r1 = random_psd(rng, 2), random_psd(rng, 2)
        tr = float(np.trace(r0 + r1))
        r0, r1 = r0 / tr, r1 / tr
        sol = physical_value(DiscriminationProblem(operators=(r0, r1)))
        assert sol.converged
        assert sol.primal_value == pytest.approx(helstrom_value(r0, r1), abs=2e-6)


class TestHiddenMatchingValues:
    def test_single_matching_perfect(self):
        game = HiddenMatchingGame(tuple(canonical_family(1)))
        sol = physical_value(hidden_matching_problem(game))
        assert sol.converged
        assert sol.primal_value == pytest.approx(1.0, abs=1e-4)

    def test_two_matchings_three_quarters(self):
        game = HiddenMatchingGame(tuple(canonical_family(2)))
        prob = hidden_matching_problem(game)
        sol = physical_value(prob)
        assert sol.converged
        assert sol.gap <= 1e-6
        assert sol.gap >= -1e-8
        assert sol.primal_value == pytest.approx(0.75, abs=1e-4)
        assert dual_feasibility_margin(sol, prob) >= -1e-8

    def test_selective_vs_physical_ordering(self):
        sv, pv, flag = selective_vs_physical(
            HiddenMatchingGame(tuple(canonical_family(2)))
        )
        assert sv == pytest.approx(0.75, abs=1e-9)
        assert pv <= sv + 1e-6
        assert flag == "equal"

    def test_selective_vs_physical_single(self):
        sv, pv, flag = selective_vs_physical(
            HiddenMatchingGame(tuple(canonical_family(1)))
        )
        assert (sv, flag) == (1.0, "equal")
        assert pv == pytest.approx(1.0, abs=1e-4)


class TestDegenerate:
    def test_all_zero_operators(self):
        sol = physical_value(
            DiscriminationProblem(operators=tuple(np.zeros((3, 3)) for _ in range(4)))
        )
        assert sol.converged and sol.primal_value == 0.0 and sol.gap == 0.0

    def test_identical_states_give_prior_guess(self):
        # sixteen answers sharing one consistent-weight scalar: value is that scalar
        ops = tuple(np.array([[0.25]]) for _ in range(16))
        sol = physical_value(DiscriminationProblem(operators=ops))
        assert sol.converged
        assert sol.primal_value == pytest.approx(0.25, abs=1e-6)

    def test_single_answer_value_is_trace_bound(self):
        rho = np.diag([0.5, 0.5])
        sol = physical_value(DiscriminationProblem(operators=(rho,)))
        assert sol.primal_value == pytest.approx(1.0, abs=1e-5)


class TestSolutionQuality:
    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=10, deadline=None)
    def test_certificates_on_random_instances(self, seed):
        rng = np.random.default_rng(seed)
        d = int(rng.integers(1, 7))
        na = int(rng.integers(2, 9))
        weights = rng.dirichlet(np.ones(na))
        ops = tuple(random_psd(rng, d, scale=w) for w in weights)
        prob = DiscriminationProblem(operators=ops)
        sol = physical_value(prob)
        assert sol.converged
        assert -1e-8 <= sol.gap <= 1e-6
        assert sol.completeness_residual <= 1e-8
        assert dual_feasibility_margin(sol, prob) >= -1e-8
        for m in sol.povm:
            assert float(np.linalg.eigvalsh(m)[0]) >= -1e-10

    def test_unitary_invariance(self):
        rng = np.random.default_rng(5)
        ops = tuple(random_psd(rng, 4, scale=0.25) for _ in range(4))
        q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        rotated = tuple(q @ op @ q.T for op in ops)
        v1 = physical_value(DiscriminationProblem(operators=ops)).primal_value
        v2 = physical_value(DiscriminationProblem(operators=rotated)).primal_value
        assert v1 == pytest.approx(v2, abs=1e-6)

    def test_zero_answer_leaves_value(self):
        # both solves pushed an order tighter than the comparison tolerance
        rng = np.random.default_rng(11)
        ops = tuple(random_psd(rng, 3, scale=0.5 / 3) for _ in range(3))
        v1 = physical_value(
            DiscriminationProblem(operators=ops), tol=1e-9
        ).primal_value
        v2 = physical_value(
            DiscriminationProblem(operators=ops + (np.zeros((3, 3)),)), tol=1e-9
        ).primal_value
        assert v1 == pytest.approx(v2, abs=1e-8)

    def test_complex_instance(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        r0 = a @ a.conj().T
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        r1 = b @ b.conj().T
        tr = float(np.trace(r0 + r1).real)
        prob = DiscriminationProblem(operators=(r0 / tr, r1 / tr))
        sol = physical_value(prob)
        assert sol.converged
        assert sol.primal_value == pytest.approx(
            helstrom_value(r0 / tr, r1 / tr), abs=2e-6
        )


class TestReport:
    def test_key_value_lines(self):
        game = HiddenMatchingGame(tuple(canonical_family(1)))
        sol = physical_value(hidden_matching_problem(game))
        report = solution_report(sol)
        keys = [line.split("=")[0] for line in report.strip().splitlines()]
        assert keys[:5] == ["primal", "dual", "gap", "iterations", "converged"]
