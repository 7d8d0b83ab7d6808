import itertools
import os
import random
import sys

import pytest

from cubelearn.errors import BudgetExceeded, FormulaError, SolverError
from cubelearn.formula import (
    And,
    Atom,
    LinearTerm,
    Not,
    Or,
    cube_union_to_formula,
    evaluate,
    false_atom,
    normalize,
    parse_formula,
)
from cubelearn.geometry import POS_INF, Cube, CubeUnion
from cubelearn.learners import LearnerConfig
from cubelearn.solver import (
    BruteBackend,
    ExternalBackend,
    backend_from_spec,
    default_backend,
    formula_equivalence,
    formula_membership,
    formula_subset,
    monadic_decompose,
    solver_check,
)

from conftest import points_in_box

C = LinearTerm.constant
X = LinearTerm.variable

FAKE = f"{sys.executable} {os.path.join(os.path.dirname(__file__), 'fake_smt_solver.py')}"


def fake_backend(*extra, timeout=20.0):
    return ExternalBackend(tuple(FAKE.split()) + extra, timeout=timeout)


# -- backend specs ------------------------------------------------------------------


def test_backend_from_spec_brute():
    b = backend_from_spec("brute:-10:10")
    assert b == BruteBackend(-10, 10)


def test_backend_from_spec_smt():
    b = backend_from_spec('smt:mysolver --flag "a b"')
    assert b == ExternalBackend(("mysolver", "--flag", "a b"))


@pytest.mark.parametrize("bad", ["brute:", "brute:1:2:3", "brute:a:b", "smt:", "z3"])
def test_backend_from_spec_rejects(bad):
    with pytest.raises(FormulaError):
        backend_from_spec(bad)


def test_default_backend_env(monkeypatch):
    monkeypatch.delenv("CUBELEARN_SOLVER_CMD", raising=False)
    assert default_backend() is None
    monkeypatch.setenv("CUBELEARN_SOLVER_CMD", "mysolver -in")
    assert default_backend() == ExternalBackend(("mysolver", "-in"))


# -- brute backend ------------------------------------------------------------------


def test_brute_unsat():
    f = And((Atom(X(0), ">=", C(3)), Atom(X(0), "<=", C(1))))
    assert solver_check(BruteBackend(-10, 10), f, 1) is None


def test_brute_sat_lex_min():
    assert solver_check(BruteBackend(-10, 10), Atom(X(0), ">=", C(3)), 1) == (3,)


def test_brute_lex_min_matches_enumeration():
    rng = random.Random(40)
    from test_formula import random_formula

    for _ in range(40):
        dim = rng.randint(1, 2)
        f = normalize(random_formula(rng, dim, 2))
        got = solver_check(BruteBackend(-6, 6), f, dim)
        expected = next(
            (
                v
                for v in itertools.product(range(-6, 7), repeat=dim)
                if evaluate(f, v)
            ),
            None,
        )
        assert got == expected


def test_brute_point_budget():
    with pytest.raises(BudgetExceeded):
        solver_check(BruteBackend(-1000, 1000, point_budget=10**6), true_formula(), 3)


def true_formula():
    return Atom(C(0), "<=", C(0))


def test_brute_boxes_are_relative():
    # a model outside the box is invisible: that is the documented contract
    f = Atom(X(0), ">=", C(50))
    assert solver_check(BruteBackend(-10, 10), f, 1) is None


# -- formula-backed oracles -----------------------------------------------------------


def test_formula_oracles_with_brute():
    _, f = parse_formula("(declare-const x Int)(assert (and (>= x 0) (<= x 4)))")
    backend = BruteBackend(-10, 10)
    phi = formula_membership(f, 1)
    assert phi((2,)) and not phi((5,))
    eq = formula_equivalence(f, 1, backend)
    assert eq(Cube((0,), (4,)).as_union()) is None
    cex = eq(Cube((0,), (3,)).as_union())
    assert cex == (4,)
    rho = formula_subset(f, 1, backend)
    assert rho(Cube((1,), (2,)).as_union())
    assert not rho(Cube((1,), (5,)).as_union())


# -- external backend over the fake REPL ----------------------------------------------


def test_external_sat_and_model():
    _, f = parse_formula("(declare-const x Int)(assert (>= x 3))")
    assert solver_check(fake_backend(), f, 1) == (3,)


def test_external_unsat():
    f = And((Atom(X(0), ">=", C(3)), Atom(X(0), "<=", C(1))))
    assert solver_check(fake_backend(), f, 1) is None


def test_external_negative_model_values():
    f = Atom(X(0), "<=", C(-4))
    assert solver_check(fake_backend(), f, 1) == (-32,)  # box edge, written (- 32)
    assert solver_check(fake_backend("--plain-negatives"), f, 1) == (-32,)


def test_external_two_variables():
    _, f = parse_formula(
        "(declare-const x Int)(declare-const y Int)"
        "(assert (and (= x 2) (= (+ x y) 1)))"
    )
    assert solver_check(fake_backend(), f, 2) == (2, -1)


def test_external_union_formula_round_trip():
    u = CubeUnion(2, (Cube((-3, 0), (1, 2)), Cube((4, 4), (6, 9))))
    f = cube_union_to_formula(u)
    stray = And((f, Not(cube_union_to_formula(u))))
    assert solver_check(fake_backend(), stray, 2) is None


def test_external_garbage_verdict():
    with pytest.raises(SolverError):
        solver_check(fake_backend("--verdict", "garbage"), true_formula(), 1)


def test_external_error_verdict():
    with pytest.raises(SolverError):
        solver_check(fake_backend("--verdict", "error"), true_formula(), 1)


def test_external_lingering_solver_times_out():
    backend = fake_backend("--no-exit", timeout=0.5)
    with pytest.raises(SolverError):
        solver_check(backend, true_formula(), 1)


def test_external_missing_binary():
    backend = ExternalBackend(("definitely-not-a-solver-9000",))
    with pytest.raises(SolverError):
        solver_check(backend, true_formula(), 1)


# -- monadic decomposition -------------------------------------------------------------


def mondec_cfg(**kw):
    kw.setdefault("algorithm", "maxcube")
    kw.setdefault("strategy", "optimized")
    return LearnerConfig(**kw)


def test_mondec_single_ray():
    _, f = parse_formula("(declare-const x Int)(assert (>= x 3))")
    union, g, result = monadic_decompose(f, 1, mondec_cfg(), BruteBackend(-20, 20))
    assert union.canonical() == Cube((3,), (POS_INF,)).as_union()
    for v in range(-25, 26):
        assert evaluate(g, (v,)) == (v >= 3)


def test_mondec_false_formula():
    union, g, _ = monadic_decompose(false_atom(), 1, mondec_cfg(), BruteBackend(-5, 5))
    assert union.is_empty()
    assert g == false_atom()


def test_mondec_rectangle_via_external():
    _, f = parse_formula(
        "(declare-const x Int)(declare-const y Int)"
        "(assert (and (>= x 0) (<= x 3) (>= (* 2 y) 2) (<= y 5)))"
    )
    union, g, _ = monadic_decompose(f, 2, mondec_cfg(), fake_backend())
    assert points_in_box(union, (-8, -8), (8, 8)) == {
        (x, y) for x, y in itertools.product(range(-8, 9), repeat=2) if evaluate(f, (x, y))
    }


def test_mondec_budget_error_message():
    _, f = parse_formula("(declare-const x Int)(assert (>= x 3))")
    cfg = LearnerConfig(algorithm="overshoot_sym", max_doublings=8, allow_infinite=False)
    with pytest.raises(BudgetExceeded, match="no decomposition found within budget"):
        monadic_decompose(f, 1, cfg, BruteBackend(-20, 20))
