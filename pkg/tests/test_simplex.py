from fractions import Fraction

import pytest

from esl.simplex import InfeasibleError, UnboundedError, solve_min

F = Fraction


def test_simple_assignment():
    # min x1 + x2  s.t.  x1 + x2 = 1  ->  value 1
    value, x = solve_min([F(1), F(1)], [[F(1), F(1)]], [F(1)])
    assert value == 1
    assert sum(x) == 1


def test_prefers_cheap_variable():
    # min 3 x1 + x2  s.t.  x1 + x2 = 1
    value, x = solve_min([F(3), F(1)], [[F(1), F(1)]], [F(1)])
    assert value == 1 and x == [F(0), F(1)]


def test_two_constraints_exact_vertex():
    # min x1 + 2 x2  s.t.  x1 + x2 = 2,  x1 - x2 = 0  ->  x = (1, 1)
    value, x = solve_min(
        [F(1), F(2)],
        [[F(1), F(1)], [F(1), F(-1)]],
        [F(2), F(0)])
    assert value == 3 and x == [F(1), F(1)]


def test_negative_rhs_normalized():
    value, x = solve_min([F(1)], [[F(-1)]], [F(-2)])
    assert value == 2 and x == [F(2)]


def test_infeasible():
    # x1 = -1 with x1 >= 0
    with pytest.raises(InfeasibleError):
        solve_min([F(1)], [[F(1)]], [F(-1)])


def test_infeasible_two_rows():
    with pytest.raises(InfeasibleError):
        solve_min([F(0), F(0)],
                  [[F(1), F(1)], [F(1), F(1)]],
                  [F(1), F(2)])


def test_unbounded():
    # min -x1 s.t. x1 - x2 = 0: increase both without bound
    with pytest.raises(UnboundedError):
        solve_min([F(-1), F(0)], [[F(1), F(-1)]], [F(0)])


def test_degenerate_cycling_guard():
    # Classic degenerate instance; Bland's rule must terminate.
    value, _ = solve_min(
        [F(-3, 4), F(150), F(-1, 50), F(6), F(0), F(0), F(0)],
        [
            [F(1, 4), F(-60), F(-1, 25), F(9), F(1), F(0), F(0)],
            [F(1, 2), F(-90), F(-1, 50), F(3), F(0), F(1), F(0)],
            [F(0), F(0), F(1), F(0), F(0), F(0), F(1)],
        ],
        [F(0), F(0), F(1)])
    assert value == F(-1, 20)


def test_exact_rationals_no_drift():
    value, x = solve_min(
        [F(1, 3), F(1, 7)],
        [[F(2, 5), F(3, 11)]],
        [F(1)])
    # cost/constraint ratio decides: (1/3)/(2/5) = 5/6 vs (1/7)/(3/11) = 11/21
    assert value == F(11, 21)
    assert x == [F(0), F(11, 3)]
