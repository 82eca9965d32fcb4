import random
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

import support
from cinestagger import (
    BilpModel,
    CertificationError,
    OracleGuardError,
    build_model,
    certify,
    check_feasible,
    evaluate,
    solve_assignment,
    solve_branch_and_bound,
    solve_brute_force,
)

ALL_SOLVERS = [solve_assignment, solve_branch_and_bound, solve_brute_force]


def small_model(weights, configs_per_film=None):
    return build_model(support.matrix_instance(weights, configs_per_film))


def scipy_optimum(model):
    """Independent reference optimum for dense models, in milliunits."""
    weights = np.array(
        [[model.objective[v] for v in row] for _, row in model.equality_rows]
    )
    rows, cols = linear_sum_assignment(weights, maximize=True)
    return int(weights[rows, cols].sum())


@pytest.mark.parametrize("solve", ALL_SOLVERS)
def test_two_by_two_diagonal(solve):
    report = solve(small_model([[5, 1], [1, 5]]))
    assert report.status == "Optimal"
    assert report.objective == 10
    assert report.schedule.choices == {1: (1, 1), 2: (1, 2)}


@pytest.mark.parametrize("solve", ALL_SOLVERS)
def test_pigeonhole_infeasible(solve):
    report = solve(small_model([[5], [4]]))
    assert report.status == "Infeasible"
    assert report.schedule is None and report.objective is None
    assert "pigeonhole" in report.diagnostic


@pytest.mark.parametrize("solve", ALL_SOLVERS)
def test_single_screen_argmax(solve):
    report = solve(small_model([[7, 9, 4]]))
    assert report.objective == 9
    assert report.schedule.choices == {1: (1, 2)}


@pytest.mark.parametrize("solve", ALL_SOLVERS)
def test_all_equal_coefficients_lexicographic_tie_break(solve):
    report = solve(small_model([[3, 3, 3], [3, 3, 3]], configs_per_film=[1, 2]))
    assert report.objective == 6
    # smallest choices in (screen, film, config) order
    assert report.schedule.choices == {1: (1, 1), 2: (2, 1)}


def test_example_model_agreement(example_model):
    first = solve_assignment(example_model)
    second = solve_branch_and_bound(example_model)
    assert first.status == second.status == "Optimal"
    assert first.objective == second.objective == 2615
    assert check_feasible(example_model, first.schedule.variables()).feasible
    assert check_feasible(example_model, second.schedule.variables()).feasible


def test_oracle_guard_rejects_example_model(example_model):
    with pytest.raises(OracleGuardError, match="too large for oracle"):
        solve_brute_force(example_model)


def test_brute_force_enumeration_count():
    report = solve_brute_force(small_model([[1] * 4, [1] * 4, [1] * 4]))
    assert report.stats.nodes == 4 * 3 * 2


def test_brute_force_zero_instance():
    report = solve_brute_force(small_model([[0]]))
    assert report.status == "Optimal"
    assert report.objective == 0


def test_certify_example(example_model):
    report = certify(example_model)
    assert report.status == "Optimal"
    assert report.certified
    assert report.method == "assignment"
    assert report.objective == 2615


def test_certify_infeasible():
    report = certify(small_model([[5], [4]]))
    assert report.status == "Infeasible"
    assert report.certified
    assert "pigeonhole" in report.diagnostic


def test_certify_raises_on_planted_disagreement(example_model, monkeypatch):
    import cinestagger.solver as solver_module

    honest = solver_module.solve_branch_and_bound

    def lying(model):
        report = honest(model)
        return replace(report, objective=report.objective + 1)

    monkeypatch.setattr(solver_module, "solve_branch_and_bound", lying)
    with pytest.raises(CertificationError, match="2615"):
        certify(example_model)


def test_three_way_agreement_random():
    rng = random.Random(90210)
    for _ in range(40):
        model = build_model(support.random_matrix_instance(rng))
        reports = [solve(model) for solve in ALL_SOLVERS]
        assert len({r.objective for r in reports}) == 1
        assert scipy_optimum(model) == int(reports[0].objective * 1000)
        for report in reports:
            assert evaluate(model, report.schedule.variables()) == report.objective
            assert check_feasible(model, report.schedule.variables()).feasible
        # both lexicographic methods agree on the schedule itself
        assert reports[0].schedule == reports[2].schedule


def _with_objective(model, objective):
    return BilpModel(
        variables=model.variables,
        objective=objective,
        equality_rows=model.equality_rows,
        inequality_rows=model.inequality_rows,
    )


def test_scaling_invariance():
    rng = random.Random(777)
    for _ in range(15):
        model = build_model(support.random_matrix_instance(rng, max_screens=5, max_columns=7))
        base = certify(model)
        for alpha in (2, 7):
            scaled = _with_objective(model, {v: alpha * c for v, c in model.objective.items()})
            report = certify(scaled)
            assert report.objective == alpha * base.objective
            # the unscaled winner is still a winner after scaling
            assert evaluate(scaled, base.schedule.variables()) == report.objective


def test_shift_invariance():
    rng = random.Random(778)
    for _ in range(15):
        model = build_model(support.random_matrix_instance(rng, max_screens=5, max_columns=7))
        base = certify(model)
        screens = len(model.equality_rows)
        for k in (-50, 100):
            shifted = _with_objective(
                model, {v: c + k * 1000 for v, c in model.objective.items()}
            )
            report = certify(shifted)
            assert report.objective == base.objective + screens * k
            assert evaluate(shifted, base.schedule.variables()) == report.objective


def test_monotonicity():
    rng = random.Random(779)
    for _ in range(15):
        model = build_model(support.random_matrix_instance(rng, max_screens=5, max_columns=7))
        base = certify(model)
        var = rng.choice(base.schedule.variables())
        bumped_objective = dict(model.objective)
        bumped_objective[var] += rng.randint(1, 50) * 1000
        bumped = certify(_with_objective(model, bumped_objective))
        assert bumped.objective >= base.objective


def test_repeated_solves_identical():
    rng = random.Random(780)
    for _ in range(10):
        model = build_model(support.random_matrix_instance(rng, max_screens=5, max_columns=7))
        for solve in ALL_SOLVERS:
            assert solve(model) == solve(model)


def test_objective_is_exact_fraction(example_model):
    report = solve_assignment(example_model)
    assert isinstance(report.objective, Fraction)
    assert report.objective == Fraction(2615, 1)


def test_schedule_variables_sorted(example_model):
    report = solve_assignment(example_model)
    variables = report.schedule.variables()
    assert [v.screen_id for v in variables] == sorted(v.screen_id for v in variables)
