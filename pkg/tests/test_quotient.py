import numpy as np
import pytest
from hypothesis import given

from infometric.fixpoint import ideal_length
from infometric.inequalities import check_table
from infometric.lengths import DistanceTable, d_table, distance_table
from infometric.quotient import NoNablaInequality, NotPseudometric, quotient

from conftest import monotone_instances, set_instances


def check_result(m, t, q):
    """Faithfulness, representative independence, projection is a hom."""
    Q = q.metric.values
    n = len(q.quotient)
    off = ~np.eye(n, dtype=bool)
    assert (Q[off] > 0).all()
    rep = check_table(q.metric)
    assert rep.delta.holds and rep.nabla.holds
    pi = q.projection
    for x in m.elements:
        for y in m.elements:
            assert q.metric(pi[x], pi[y]) == t(x, y)
            assert pi[m.join(x, y)] == q.quotient.join(pi[x], pi[y])
    assert pi[m.neutral] == q.quotient.neutral


def test_faithful_input_is_identity(p2):
    m, length = p2
    q = quotient(m, distance_table(length))
    assert q.is_trivial
    assert q.quotient.elements == m.elements


def test_zero_table_gives_trivial_monoid(p2):
    m, _ = p2
    q = quotient(m, DistanceTable(m, np.zeros((4, 4), dtype=int)))
    assert len(q.classes) == 1 and len(q.quotient) == 1
    assert q.classes[0][0] == min(m.elements)


def test_fix_bad_pipeline(bad):
    m, length = bad
    res = ideal_length(length, "d")
    q = quotient(m, res.table)
    assert q.classes == (("{}",), ("{x,y,z}", "{x,y}", "{x,z}", "{x}", "{y,z}", "{y}", "{z}"))
    check_result(m, res.table, q)
    assert (d_table(q.induced_length) == q.metric.values).all()
    assert q.induced_length.mode == "monotone"
    assert quotient(q.quotient, q.metric).is_trivial


def test_rejections(bad):
    m, length = bad
    with pytest.raises(NotPseudometric) as exc:
        quotient(m, distance_table(length))
    assert exc.value.witness == ("{x}", "{y}", "{z}")
    # a metric that breaks d(x v z, y v z) <= d(x, y) at x={x}, y={y}, z={z}
    n = len(m)
    disc = np.ones((n, n), dtype=int) - np.eye(n, dtype=int)
    a, b = m.idx("{x,z}"), m.idx("{y,z}")
    disc[a, b] = disc[b, a] = 2
    t = DistanceTable(m, disc)
    assert check_table(t).delta.holds
    with pytest.raises(NoNablaInequality):
        quotient(m, t)


@given(monotone_instances())
def test_quotient_of_ideal_tables(inst):
    m, length = inst
    res = ideal_length(length, "d")
    q = quotient(m, res.table)
    check_result(m, res.table, q)
    assert (d_table(q.induced_length) == q.metric.values).all()
    assert q.induced_length.mode == "monotone"
    assert quotient(q.quotient, q.metric).is_trivial


@given(set_instances())
def test_set_model_quotient(inst):
    q = quotient(inst.monoid, distance_table(inst.length))
    check_result(inst.monoid, distance_table(inst.length), q)
