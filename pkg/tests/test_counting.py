from fractions import Fraction

import numpy as np
import pytest

from uniformity_lab.budget import BudgetExceededError
from uniformity_lab.counting import (average_product_direct,
                                     average_product_dual, count_solutions,
                                     solution_probability)
from uniformity_lab.domains import domain
from uniformity_lab.functions import GroupFunction, IndicatorSet, balanced
from uniformity_lab.systems import LinearFormSystem, builtin_system

import oracles


def make(p, rows):
    return LinearFormSystem(p=p, d=len(rows[0]), coeffs=np.array(rows))


def random_functions(dom, rng, m):
    return [GroupFunction(domain=dom,
                          values=rng.uniform(-1, 1, dom.size) +
                          1j * rng.uniform(-1, 1, dom.size))
            for _ in range(m)]


def test_all_ones_gives_one():
    dom = domain(5, 1)
    ones = [GroupFunction.constant(dom, 1.0)] * 3
    sys_ = builtin_system("ap3", 5)
    assert abs(average_product_direct(sys_, ones) - 1) < 1e-12
    assert abs(average_product_dual(sys_, ones) - 1) < 1e-12


def test_single_form_average_is_mean():
    dom = domain(5, 2)
    rng = np.random.default_rng(40)
    f = random_functions(dom, rng, 1)[0]
    sys_ = make(5, [[1]])
    assert abs(average_product_direct(sys_, [f]) - f.values.mean()) < 1e-12


def test_three_ap_balanced_hand_value():
    # A = {0, 1} in F_5: two progressions (both degenerate), so the balanced
    # average is 2/25 - (2/5)^3 = 2/125
    dom = domain(5, 1)
    A = IndicatorSet.from_member_vectors(dom, [[0], [1]])
    f = balanced(A)
    sys_ = builtin_system("ap3", 5)
    direct = average_product_direct(sys_, [f] * 3)
    assert abs(direct - Fraction(2, 125)) < 1e-12
    naive = oracles.naive_average_product(
        [[1, 0], [1, 1], [1, 2]], 5, dom.digits, dom.places, [f.values] * 3)
    assert abs(direct - naive) < 1e-12
    count, degenerate = count_solutions(sys_, A, with_degenerate=True)
    assert count == 2 and degenerate == 2  # degenerate tuples are counted


def test_direct_equals_dual_on_random_instances():
    rng = np.random.default_rng(41)
    for _ in range(10):
        p = int(rng.choice([3, 5]))
        dom = domain(p, int(rng.integers(1, 3)))
        sys_ = builtin_system(str(rng.choice(["ap3", "diff3"])), p)
        fs = random_functions(dom, rng, sys_.m)
        direct = average_product_direct(sys_, fs)
        dual = average_product_dual(sys_, fs)
        assert abs(direct - dual) < 1e-8


def test_direct_matches_naive_oracle():
    rng = np.random.default_rng(42)
    dom = domain(3, 2)
    sys_ = builtin_system("ap3", 3)
    fs = random_functions(dom, rng, 3)
    direct = average_product_direct(sys_, fs)
    naive = oracles.naive_average_product(
        [[1, 0], [1, 1], [1, 2]], 3, dom.digits, dom.places,
        [f.values for f in fs])
    assert abs(direct - naive) < 1e-12


def test_independent_forms_dual_is_product_of_means():
    rng = np.random.default_rng(43)
    dom = domain(3, 2)
    sys_ = make(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    fs = random_functions(dom, rng, 3)
    expected = np.prod([f.values.mean() for f in fs])
    assert abs(average_product_dual(sys_, fs) - expected) < 1e-12
    assert abs(average_product_direct(sys_, fs) - expected) < 1e-12


def test_multilinearity_in_a_slot():
    rng = np.random.default_rng(44)
    dom = domain(3, 2)
    sys_ = builtin_system("ap3", 3)
    f0, g, h = random_functions(dom, rng, 3)
    combined = GroupFunction(domain=dom, values=g.values + h.values)
    lhs = average_product_direct(sys_, [f0, combined, f0])
    rhs = average_product_direct(sys_, [f0, g, f0]) + \
        average_product_direct(sys_, [f0, h, f0])
    assert abs(lhs - rhs) < 1e-9


def test_solution_probability_single_form_is_density():
    dom = domain(5, 1)
    A = IndicatorSet.from_member_vectors(dom, [[0], [1]])
    rep = solution_probability(make(5, [[1]]), A)
    assert rep.observed_exact == "2/5"
    assert rep.observed == complex(float(Fraction(2, 5)))


def test_solution_probability_full_set():
    dom = domain(3, 2)
    A = IndicatorSet(domain=dom, members=np.ones(dom.size, dtype=bool))
    rep = solution_probability(builtin_system("ap3", 3), A)
    assert rep.observed == 1 and rep.reference == 1 and rep.deviation == 0


def test_solution_probability_bound_verdict():
    # p=5, n=2 zero set under gw6a: deviation from alpha^m sits inside 1/5
    from uniformity_lab.verification import quadratic_zero_set
    A = quadratic_zero_set(5, 2)
    rep = solution_probability(builtin_system("gw6a", 5), A, bound=1 / 5)
    assert rep.passed is True
    assert abs(rep.observed.real - 5.0**-6) <= 1 / 5
    tight = solution_probability(builtin_system("gw6a", 5), A, bound=1e-6)
    assert tight.passed is False
    d = rep.to_dict()
    assert d["passed"] is True and d["bound"] == 1 / 5


def test_count_matches_naive_oracle():
    rng = np.random.default_rng(45)
    dom = domain(3, 2)
    members = rng.random(dom.size) < 0.5
    A = IndicatorSet(domain=dom, members=members)
    sys_ = builtin_system("diff3", 3)
    count, _ = count_solutions(sys_, A)
    naive = oracles.naive_count_solutions(
        [[-1, 1, 0], [-1, 0, 1], [0, -1, 1]], 3, dom.digits, dom.places,
        members)
    assert count == naive


def test_threads_do_not_change_results():
    rng = np.random.default_rng(46)
    dom = domain(5, 2)
    sys_ = builtin_system("ap4", 5)
    fs = random_functions(dom, rng, 4)
    serial = average_product_direct(sys_, fs, threads=1)
    pooled = average_product_direct(sys_, fs, threads=4)
    assert serial == pooled  # identical bits: reduction order fixed by chunk index


def test_budget_refusal_names_required_count():
    dom = domain(5, 2)
    sys_ = builtin_system("cube7", 5)
    fs = [GroupFunction.constant(dom, 1.0)] * 7
    with pytest.raises(BudgetExceededError) as err:
        average_product_direct(sys_, fs, budget=1000)
    assert err.value.required == 7 * 25**4


def test_mismatched_inputs_rejected():
    dom = domain(5, 2)
    fs = [GroupFunction.constant(dom, 1.0)] * 3
    with pytest.raises(ValueError):
        average_product_direct(builtin_system("ap3", 7), fs)
    with pytest.raises(ValueError):
        average_product_direct(builtin_system("ap4", 5), fs)
