import json
import math

import numpy as np
import pytest

from copulasched import clayton, eval_rho, independent
from copulasched.marginals import DomainError
from copulasched.mechanism import (
    Allocation,
    Instance,
    InstanceFormatError,
    OracleScaleError,
    allocate,
    check_monotonicity,
    estimate_ratio,
    machine_probabilities,
    makespan,
    opt_makespan,
    read_instance,
    write_instance,
)
from copulasched.copula import sample

ONES = Instance([[1, 1], [1, 1]])


def test_allocate_threshold_rule():
    one = Instance([[1], [1]])
    assert allocate(one, [2.0]).x[:, 0].tolist() == [1, 0]
    assert allocate(one, [0.5]).x[:, 0].tolist() == [0, 1]
    # tie goes to machine 2
    assert allocate(one, [1.0]).x[:, 0].tolist() == [0, 1]


def test_zero_time_conventions():
    assert allocate(Instance([[0], [5]]), [0.01]).x[0, 0] == 1
    assert allocate(Instance([[3], [0]]), [1e9]).x[0, 0] == 0
    assert allocate(Instance([[0], [0]]), [0.5]).x[0, 0] == 1
    assert Instance([[0, 2], [0, 0]]).ratios().tolist() == [0.0, math.inf]


def test_allocation_feasibility():
    with pytest.raises(DomainError):
        Allocation([[1, 1], [1, 0]])
    with pytest.raises(DomainError):
        allocate(ONES, [1.0])
    with pytest.raises(DomainError):
        Instance([[1, -1], [1, 1]])


def test_makespan_examples():
    assert makespan(ONES, Allocation([[1, 0], [0, 1]])) == 1
    assert makespan(ONES, Allocation([[1, 1], [0, 0]])) == 2
    assert makespan(Instance([[2, 3], [4, 1]]), Allocation([[1, 0], [0, 1]])) == 2


def test_opt_examples():
    assert opt_makespan(ONES) == 1
    assert opt_makespan(Instance([[2, 3], [4, 1]])) == 2
    assert opt_makespan(Instance([[1], [2]])) == 1


def test_opt_scale_cap():
    big = Instance(np.ones((2, 25)))
    with pytest.raises(OracleScaleError):
        opt_makespan(big)
    assert opt_makespan(Instance(np.ones((2, 6))), max_tasks=6) == 3


def test_opt_is_a_lower_bound_on_sampled_allocations(f_ind):
    rng = np.random.default_rng(4)
    inst = Instance(rng.exponential(1.0, (2, 6)))
    opt = opt_makespan(inst)
    for row in sample(clayton(6, f_ind), 200, seed=1).draws:
        alloc = allocate(inst, row)
        assert alloc.x.sum(axis=0).tolist() == [1] * 6
        assert makespan(inst, alloc) >= opt - 1e-12


def test_ratio_examples(ind, clay2):
    assert estimate_ratio(ONES, clay2, 100_000, seed=0) == (1.0, 0.0)
    mean, se = estimate_ratio(ONES, ind, 100_000, seed=0)
    assert abs(mean - 1.5) <= 3 * se


def test_ratio_respects_pairwise_bound(ind):
    x, y = 1.3575, 1.5174263351749539
    mean, se = estimate_ratio(Instance([[x, y], [1, 1]]), ind, 50_000, seed=2)
    assert mean <= eval_rho(ind, x, y) + 3 * se


def test_ratio_edge_cases(ind, f_ind):
    assert estimate_ratio(Instance([[0, 0], [0, 0]]), ind, 10, seed=0) == (1.0, 0.0)
    with pytest.raises(DomainError):
        estimate_ratio(Instance([[1], [1]]), ind, 10, seed=0)
    with pytest.raises(DomainError):
        estimate_ratio(ONES, ind, 0, seed=0)


def test_empirical_marginal_law(f_ind):
    inst = Instance([[0.8, 1.0, 1.2], [1.0, 1.0, 1.0]])
    spec = clayton(3, f_ind)
    draws = sample(spec, 100_000, seed=6).draws
    on_first = inst.ratios() < draws
    p = machine_probabilities(inst, spec)[0]
    se = np.sqrt(p * (1 - p) / draws.shape[0])
    assert np.all(np.abs(on_first.mean(axis=0) - p) <= 3 * se + 1e-12)


def test_monotonicity(f_ind):
    rng = np.random.default_rng(0)
    for k in range(20):
        inst = Instance(rng.exponential(1.0, (2, 4)))
        rep = check_monotonicity(inst, clayton(4, f_ind), 50, seed=k)
        assert rep.max_violation <= 1e-12
        assert rep.path_max_violation <= 1e-12


def test_single_task_probability_moves_away():
    from copulasched.marginals import PaperPiecewise

    spec = independent(PaperPiecewise(1.715, 0.76), n=1)
    p = [machine_probabilities(Instance([[t], [1.0]]), spec)[0, 0] for t in np.linspace(0.5, 2, 31)]
    assert all(b <= a for a, b in zip(p, p[1:]))


def test_instance_files(tmp_path):
    inst = Instance([[1.5, 0.25], [2.0, 3.0]])
    for name in ("i.csv", "i.json"):
        write_instance(inst, tmp_path / name)
        assert np.array_equal(read_instance(tmp_path / name).t, inst.t)
    (tmp_path / "bad.json").write_text(json.dumps({"times": [[1]]}))
    with pytest.raises(InstanceFormatError):
        read_instance(tmp_path / "bad.json")
    (tmp_path / "bad.csv").write_text("1,2\n3\n")
    with pytest.raises(InstanceFormatError):
        read_instance(tmp_path / "bad.csv")
    (tmp_path / "nan.csv").write_text("1,x\n3,4\n")
    with pytest.raises(InstanceFormatError):
        read_instance(tmp_path / "nan.csv")
