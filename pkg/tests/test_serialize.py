import json

import numpy as np
import pytest

from ccrm.catalog import make_discs3d, make_fixed_trace, make_socp
from ccrm.serialize import (
    load_problem_file,
    oracle_from_dict,
    oracle_to_dict,
    problem_from_dict,
    problem_to_dict,
    save_problem_file,
    trace_from_csv,
    trace_to_csv,
    trace_to_json,
)
from ccrm.solvers import SolverConfig, run

from helpers import oracle_zoo


def test_oracle_descriptor_round_trips():
    rng = np.random.default_rng(91)
    for oracle, dim in oracle_zoo(rng):
        data = oracle_to_dict(oracle)
        rebuilt = oracle_from_dict(json.loads(json.dumps(data)))
        assert rebuilt.dim == oracle.dim
        for _ in range(10):
            z = rng.normal(size=dim) * 2.0
            assert np.allclose(rebuilt.project(z), oracle.project(z), atol=1e-9)


def test_problem_round_trip_preserves_solutions():
    entry = make_discs3d()
    data = problem_to_dict(entry.problem, z0=entry.suggested_z0)
    problem, z0 = problem_from_dict(json.loads(json.dumps(data)))
    assert np.allclose(z0, entry.suggested_z0)
    assert np.allclose(problem.reference_solution, entry.problem.reference_solution)
    assert problem.known_constants.kappa_x == 0.5
    t1 = run(problem, SolverConfig(method="ccrm"), z0)
    t2 = run(entry.problem, SolverConfig(method="ccrm"), entry.suggested_z0)
    assert np.allclose(t1.iterates, t2.iterates, atol=0.0)


def test_problem_round_trip_matrix_kinds():
    for entry in (make_fixed_trace(), make_socp()):
        data = problem_to_dict(entry.problem, z0=entry.suggested_z0)
        problem, z0 = problem_from_dict(json.loads(json.dumps(data)))
        t1 = run(problem, SolverConfig(method="ccrm", tol_feas=1e-10), z0)
        t2 = run(entry.problem, SolverConfig(method="ccrm", tol_feas=1e-10), entry.suggested_z0)
        assert t1.termination == t2.termination == "feasible"
        assert np.allclose(t1.final, t2.final, atol=1e-12)


def test_problem_file_io(tmp_path):
    entry = make_discs3d()
    path = tmp_path / "discs.json"
    save_problem_file(path, entry.problem, z0=entry.suggested_z0)
    problem, z0 = load_problem_file(path)
    assert problem.dim == 3
    assert np.allclose(z0, entry.suggested_z0)


def test_problem_validation_errors():
    with pytest.raises(ValueError):
        problem_from_dict({"version": "2", "X": {}, "Y": {}})
    with pytest.raises(ValueError):
        problem_from_dict({"version": "1", "X": {"kind": "ball", "center": [0, 0], "radius": 1}})
    with pytest.raises(ValueError):
        problem_from_dict(
            {
                "version": "1",
                "X": {"kind": "ball", "center": [0, 0], "radius": 1},
                "Y": {"kind": "ball", "center": [0, 0, 0], "radius": 1},
            }
        )
    with pytest.raises(ValueError):
        problem_from_dict(
            {
                "version": "1",
                "X": {"kind": "ball", "center": [0, 0], "radius": 1},
                "Y": {"kind": "ball", "center": [1, 0], "radius": 1},
                "z0": [0.0, 0.0, 0.0],
            }
        )
    with pytest.raises(ValueError):
        oracle_from_dict({"kind": "moebius"})
    with pytest.raises(ValueError):
        oracle_from_dict({"kind": "ball", "center": [0, 0]})


def test_trace_csv_round_trip_bit_exact(tmp_path):
    entry = make_discs3d()
    trace = run(entry.problem, SolverConfig(method="ccrm"), entry.suggested_z0)
    path = tmp_path / "trace.csv"
    trace_to_csv(trace, path)
    back = trace_from_csv(path)
    assert back.method == "ccrm"
    assert back.termination == trace.termination
    assert back.iterates.shape == trace.iterates.shape
    assert np.array_equal(back.iterates, trace.iterates)
    assert np.array_equal(back.residuals_x, trace.residuals_x)
    assert np.array_equal(back.residuals_y, trace.residuals_y)
    assert np.array_equal(back.distances_to_reference, trace.distances_to_reference)


def test_trace_csv_without_reference(tmp_path):
    entry = make_discs3d()
    problem, _ = problem_from_dict(
        {k: v for k, v in problem_to_dict(entry.problem).items() if k != "reference"}
    )
    trace = run(problem, SolverConfig(method="ccrm"), entry.suggested_z0)
    path = tmp_path / "trace.csv"
    trace_to_csv(trace, path)
    back = trace_from_csv(path)
    assert back.distances_to_reference is None


def test_trace_json_includes_internals(tmp_path):
    entry = make_discs3d()
    trace = run(
        entry.problem, SolverConfig(method="ccrm", record_internals=True), entry.suggested_z0
    )
    path = tmp_path / "trace.json"
    trace_to_json(trace, path)
    with open(path) as fh:
        data = json.load(fh)
    assert data["method"] == "ccrm"
    assert data["termination"] == "feasible"
    assert len(data["centralized_points"]) == trace.n_steps
    assert data["circum_statuses"][0] in ("nondegenerate", "reduced_rank", "coincident_all")
