from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from infometric.boolean import (Atom, Complement, Difference, ExprSyntaxError, Intersection, One,
                                TooManyAtoms, Union, Zero, atoms, check_signed_measure,
                                parse_bool_expr, random_expr, shannon_dnf, to_dnf, truth_table,
                                zeta, zeta_by_terms)
from infometric.monoid import UnknownElement, free_semilattice
from infometric.instances import random_monotone_length

from conftest import monotone_instances, nonmonotone_instances, seeds


def test_parse_examples():
    assert parse_bool_expr("a & b") == Intersection((Atom("a"), Atom("b")))
    assert parse_bool_expr("a \\ (b | c)") == Difference(Atom("a"), Union((Atom("b"), Atom("c"))))
    assert parse_bool_expr("~a") == Complement(Atom("a"))
    assert parse_bool_expr("0 | 1") == Union((Zero(), One()))


def test_precedence():
    # ~ > & > \ > |
    e = parse_bool_expr("a | b \\ c & ~d")
    assert e == Union((Atom("a"), Difference(Atom("b"), Intersection((Atom("c"), Complement(Atom("d")))))))


def test_brace_and_quoted_atoms(p2):
    m, _ = p2
    assert parse_bool_expr("{1, 2} & '{1}'", m) == Intersection((Atom("{1,2}"), Atom("{1}")))
    with pytest.raises(UnknownElement):
        parse_bool_expr("{3}", m)


@pytest.mark.parametrize("text,pos", [("a &", 3), ("(a | b", 6), ("a b", 2), ("{1", 0), ("a # b", 2)])
def test_syntax_errors_carry_positions(text, pos):
    with pytest.raises(ExprSyntaxError) as exc:
        parse_bool_expr(text)
    assert exc.value.position == pos


@given(st.integers(0, 2**31 - 1))
def test_printing_round_trips(seed):
    e = random_expr(("a", "{1,2}", "b c"), np.random.default_rng(seed), 3)
    assert parse_bool_expr(str(e)) == e


@given(st.integers(0, 2**31 - 1))
def test_normal_forms_expand_to_the_same_function(seed):
    e = random_expr(("a", "b", "c", "d", "e"), np.random.default_rng(seed), 3)
    order = atoms(e)
    for dnf in (to_dnf(e), shannon_dnf(e)):
        assert (truth_table(dnf.expand(), order) == truth_table(e, order)).all()
        for pos, neg in dnf.terms:
            assert not pos & neg
        # disjointness: no assignment satisfies two terms
        hits = np.zeros(2 ** len(order), dtype=int)
        for pos, neg in dnf.terms:
            s = np.arange(2 ** len(order))
            ok = np.ones_like(s, dtype=bool)
            for i, a in enumerate(order):
                bit = (s >> i) & 1
                if a in pos:
                    ok &= bit == 1
                if a in neg:
                    ok &= bit == 0
            hits += ok
        assert hits.max(initial=0) <= 1


def test_zeta_examples(p2):
    m, length = p2
    assert zeta(length, "{1} & {2}") == 0
    assert zeta(length, "~{1,2}") == -2
    assert zeta(length, "{1,2} \\ {2}") == 1
    assert zeta(length, "({1}|{2}) & {1,2}") == 2
    assert zeta(length, "0") == 0 and zeta(length, "1") == 0


def test_zeta_base_cases_by_hand(bad):
    m, length = bad
    l = length.as_dict()
    assert zeta(length, "{x} & {z}") == l["{x}"] + l["{z}"] - l["{x,z}"]
    assert zeta(length, "{x} \\ {y}") == l["{x,y}"] - l["{y}"]
    assert zeta(length, "{x} | {y} | {z}") == l["{x,y,z}"]


def test_too_many_atoms():
    m = free_semilattice(5)
    length = random_monotone_length(m, 0, "features")
    expr = " & ".join(f"'{x}'" for x in m.elements[:17])
    with pytest.raises(TooManyAtoms):
        zeta(length, expr)


def test_identities_on_fixtures(p2, bad):
    r = check_signed_measure(p2[1])
    assert r.holds and r.checked > 0
    assert check_signed_measure(bad[1]).holds


def test_redundant_atom_on_intersection(p2):
    m, length = p2
    base = zeta(length, "{1} & {1,2}")
    assert zeta(length, "{1} & {1,2} & ({2} | ~{2})") == base


@given(monotone_instances(max_elements=6), seeds)
def test_signed_measure_random_monotone(inst, seed):
    r = check_signed_measure(inst[1], n_random=8, seed=seed)
    assert r.holds, r.failures


@given(nonmonotone_instances(), seeds)
def test_signed_measure_nonmonotone(inst, seed):
    r = check_signed_measure(inst[1], n_random=8, seed=seed)
    assert r.holds, r.failures


@given(monotone_instances(max_elements=6), st.integers(0, 2**31 - 1))
def test_two_normalizations_agree(inst, seed):
    m, length = inst
    e = random_expr(m.elements, np.random.default_rng(seed), 3)
    assert zeta(length, e) == zeta_by_terms(length, e)
