from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infometric.closures import (InstanceTooLarge, brute_force_closures, delta_closure,
                                 hat_of_tilde, nabla_closure, tiha)
from infometric.inequalities import check_table
from infometric.lengths import DistanceTable, distance_table
from infometric.monoid import free_semilattice, random_submonoid

from conftest import monoids, monotone_instances, rational_tables, set_instances


def test_delta_closure_keeps_a_metric(p2):
    t = distance_table(p2[1])
    assert (delta_closure(t).values == t.values).all()


def test_delta_closure_repairs_fix_bad(bad):
    m, length = bad
    tilde = delta_closure(distance_table(length))
    assert tilde("{x}", "{z}") == 0
    assert tilde.kind == "closed-delta"


def test_two_element_monoid_is_unchanged():
    m = free_semilattice(1)
    t = DistanceTable(m, [[0, 3], [3, 0]])
    assert (delta_closure(t).values == t.values).all()
    assert (nabla_closure(m, t).values == t.values).all()
    tilde, hat = brute_force_closures(m, t)
    assert (tilde.values == t.values).all() and (hat.values == t.values).all()


@given(set_instances(max_points=4))
def test_set_model_tables_are_fixed(inst):
    t = distance_table(inst.length)
    assert (nabla_closure(inst.monoid, t).values == t.values).all()
    assert (tiha(inst.monoid, t).values == t.values).all()


def test_nabla_closure_uses_decompositions(p2):
    m, _ = p2
    i = {x: m.idx(x) for x in m.elements}
    T = np.zeros((4, 4), dtype=object)
    def put(a, b, v):
        T[i[a], i[b]] = T[i[b], i[a]] = F(v)
    put("{1,2}", "{1}", 5)
    put("{2}", "{1}", 1)
    put("{}", "{1}", 4)
    put("{}", "{2}", 4)
    put("{}", "{1,2}", 4)
    put("{1}", "{2}", 1)
    put("{2}", "{1,2}", 4)
    t = DistanceTable(m, T)
    hat = nabla_closure(m, t)
    # {1,2} = {1} v {2}, {1} = {1} v {1}
    assert hat("{1,2}", "{1}") <= t("{1}", "{1}") + t("{2}", "{1}")
    assert hat("{1,2}", "{1}") == 1
    _, brute = brute_force_closures(m, t)
    assert (brute.values == hat.values).all()


def test_fix_bad_tiha_and_brute_force(bad):
    m, length = bad
    t = distance_table(length)
    closed = tiha(m, t)
    rep = check_table(closed)
    assert rep.delta.holds and rep.nabla.holds
    assert (closed.values <= t.values).all()
    tilde, _ = brute_force_closures(m, t, max_parts=2)
    assert (tilde.values == delta_closure(t).values).all()


def test_brute_force_refuses_large_instances():
    m = free_semilattice(4)
    t = DistanceTable(m, np.zeros((16, 16), dtype=int))
    with pytest.raises(InstanceTooLarge):
        brute_force_closures(m, t)


@settings(max_examples=25)
@given(st.data())
def test_relaxations_match_enumeration(data):
    m = data.draw(monoids(max_generators=3).filter(lambda m: len(m) <= 5))
    t = DistanceTable(m, data.draw(rational_tables(m)))
    tilde, hat = brute_force_closures(m, t)
    assert (tilde.values == delta_closure(t).values).all()
    assert (hat.values == nabla_closure(m, t).values).all()


@given(st.data())
def test_closure_properties(data):
    m = data.draw(monoids())
    t = DistanceTable(m, data.draw(rational_tables(m)))
    tilde, hat, both = delta_closure(t), nabla_closure(m, t), tiha(m, t)
    for c in (tilde, hat, both):
        v = c.values
        assert (v <= t.values).all()
        assert (v >= 0).all() and (v == v.T).all() and (np.diag(v) == 0).all()
    assert check_table(tilde).delta.holds
    assert check_table(hat).nabla.holds
    rep = check_table(both)
    assert rep.delta.holds and rep.nabla.holds
    assert (tiha(m, both).values == both.values).all()
    # tilde is all-pairs shortest paths: no single detour improves it
    v = tilde.values
    assert all((v <= v[:, k:k + 1] + v[k:k + 1, :]).all() for k in range(len(m)))
    # the diagnostic order is available but not the canonical one
    assert hat_of_tilde(m, t).kind == "custom"


@given(st.data())
def test_tilde_is_the_largest_metric_below(data):
    m = data.draw(monoids())
    t = DistanceTable(m, data.draw(rational_tables(m)))
    # any table that is a metric and below t is below tilde; use tilde of a smaller table
    smaller = DistanceTable(m, t.values * F(1, 2))
    rho = delta_closure(smaller).values
    assert (rho <= delta_closure(t).values).all()


@given(monotone_instances())
def test_length_difference_below_closure(inst):
    m, length = inst
    L = length.values
    tilde = delta_closure(distance_table(length)).values
    assert (abs(L[:, None] - L[None, :]) <= tilde).all()


def test_float_tables_close_with_tolerance():
    m = random_submonoid(2, 4, 0)
    t = DistanceTable(m, np.array([[0, .1, .2, .7], [.1, 0, .3, .2], [.2, .3, 0, .1], [.7, .2, .1, 0]]))
    assert check_table(tiha(m, t)).delta.holds
