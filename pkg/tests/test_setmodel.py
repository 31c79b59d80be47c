from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from infometric.boolean import random_expr, zeta
from infometric.instances import fix_p2
from infometric.lengths import d_of, d_table, sigma_of, sigma_table
from infometric.setmodel import (NegativeWeight, UnknownSet, UnsupportedComplement,
                                 build_set_instance, oracle_d, oracle_sigma, oracle_tables,
                                 oracle_zeta, realize, random_set_instance)

from conftest import set_instances


def test_two_singletons_give_fix_p2():
    inst = build_set_instance([{1}, {2}])
    m, length = fix_p2()
    assert inst.monoid == m
    assert inst.length == length


def test_weights_add():
    inst = build_set_instance([{1}, {2}], {1: 3, 2: 5})
    assert inst.length["{1,2}"] == 8


def test_single_set_is_a_chain():
    inst = build_set_instance([{1}])
    assert inst.monoid.elements == ("{}", "{1}")


def test_negative_weight_rejected():
    with pytest.raises(NegativeWeight):
        build_set_instance([{1}], {1: -1})


def test_oracle_examples():
    inst = build_set_instance([{1, 2}, {2, 3}])
    assert oracle_d(inst, "{1,2}", "{2,3}") == 1
    assert oracle_sigma(inst, "{1,2}", "{2,3}") == 2
    assert oracle_d(inst, "{1,2}", "{1,2,3}") == 1
    assert oracle_d(inst, "{2,3}", "{2,3}") == 0 == oracle_sigma(inst, "{2,3}", "{2,3}")
    with pytest.raises(UnknownSet):
        oracle_d(inst, "{1}", "{1,2}")


def test_oracle_zeta_examples():
    inst = build_set_instance([{1}, {2}])
    assert oracle_zeta(inst, "{1} & {2}") == 0
    assert oracle_zeta(inst, "{1,2} \\ {2}") == 1
    assert oracle_zeta(inst, "({1}|{2}) & {1,2}") == 2
    assert oracle_zeta(inst, "{1,2} & ~{1}") == 1
    with pytest.raises(UnsupportedComplement):
        oracle_zeta(inst, "~{1}")
    with pytest.raises(UnsupportedComplement):
        oracle_zeta(inst, "1")


def test_random_instances_are_bounded_and_deterministic():
    for seed in range(30):
        inst = random_set_instance(seed)
        assert len(inst.universe) <= 6 and len(inst.family) <= 32
        assert inst.family[0] == frozenset()
        assert random_set_instance(seed).monoid == inst.monoid


@given(set_instances())
def test_generic_distances_match_closed_forms(inst):
    od, os = oracle_tables(inst)
    assert (d_table(inst.length) == od).all()
    assert (sigma_table(inst.length) == os).all()
    x, y = inst.monoid.elements[0], inst.monoid.elements[-1]
    assert d_of(inst.length, x, y) == oracle_d(inst, x, y)
    assert sigma_of(inst.length, x, y) == oracle_sigma(inst, x, y)


@given(set_instances(max_points=4), st.integers(0, 2**31 - 1))
def test_zeta_is_the_measure_of_the_realized_set(inst, seed):
    rng = np.random.default_rng(seed)
    e = random_expr(inst.monoid.elements, rng, 3)
    try:
        expected = oracle_zeta(inst, e)
    except UnsupportedComplement:
        return
    assert zeta(inst.length, e) == expected
