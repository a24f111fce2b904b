from __future__ import annotations

import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import glb_from_order, lub_from_order
from latmeet.errors import (BudgetExceededError, NotALatticeError,
                            NotDistributiveError)
from latmeet.lattice import (Lattice, PowersetLattice, build, chain,
                             from_cover_relation, from_leq, m_n, powerset,
                             product, read_cover_file, write_cover_file)


def test_builder_shapes():
    assert chain(1).n == 1
    assert chain(5).n == 5
    assert powerset(0).n == 1
    assert powerset(3).n == 8
    assert m_n(0).n == 2
    assert m_n(3).n == 5
    assert product(chain(2), chain(3)).n == 6


def test_bottom_and_top(corpus_lattice):
    lat = corpus_lattice
    for a in range(lat.n):
        assert lat.le(lat.bottom, a)
        assert lat.le(a, lat.top)


def test_join_meet_match_order_oracle(corpus_lattice):
    lat = corpus_lattice
    if lat.n > 10:
        pytest.skip('oracle is cubic per pair')
    leq = [[lat.le(a, b) for b in range(lat.n)] for a in range(lat.n)]
    for a in range(lat.n):
        for b in range(lat.n):
            assert lat.join(a, b) == lub_from_order(leq, a, b)
            assert lat.meet(a, b) == glb_from_order(leq, a, b)


def test_mask_backed_powerset_matches_table_backed():
    for m in range(4):
        masked = powerset(m)
        tabled = from_leq(np.array(
            [[a | b == b for b in range(1 << m)] for a in range(1 << m)]))
        assert isinstance(masked, PowersetLattice)
        for a in range(masked.n):
            assert masked.covers_of(a) == tabled.covers_of(a)
            for b in range(masked.n):
                assert masked.join(a, b) == tabled.join(a, b)
                assert masked.meet(a, b) == tabled.meet(a, b)
                assert masked.le(a, b) == tabled.le(a, b)
        assert masked.join_irreducibles == tabled.join_irreducibles
        assert masked.is_distributive() and tabled.is_distributive()


def test_covers_are_immediate_predecessors(corpus_lattice):
    lat = corpus_lattice
    for b in range(lat.n):
        covers = lat.covers_of(b)
        assert list(covers) == sorted(covers)
        for a in covers:
            assert lat.le(a, b) and a != b
            between = [c for c in range(lat.n) if c not in (a, b)
                       and lat.le(a, c) and lat.le(c, b)]
            assert not between
        for a in range(lat.n):
            if a != b and lat.le(a, b) and a not in covers:
                assert any(lat.le(a, c) for c in covers
                           ), f'{a} below {b} but under no cover'


def test_join_irreducibles_match_definition(corpus_lattice):
    lat = corpus_lattice
    expected = []
    for c in range(lat.n):
        strictly_below = [a for a in range(lat.n) if a != c and lat.le(a, c)]
        reducible = c == lat.bottom or any(
            lat.join(a, b) == c
            for a in strictly_below for b in strictly_below)
        if not reducible:
            expected.append(c)
    assert sorted(lat.join_irreducibles) == expected


def test_down_up_sets_and_jdown(corpus_lattice):
    lat = corpus_lattice
    for c in range(lat.n):
        assert lat.down_set(c) == tuple(
            a for a in range(lat.n) if lat.le(a, c))
        assert lat.up_set(c) == tuple(
            a for a in range(lat.n) if lat.le(c, a))
        assert lat.jdown(c) == tuple(
            a for a in lat.join_irreducibles if lat.le(a, c))


def test_linear_extension_and_height(corpus_lattice):
    lat = corpus_lattice
    order = lat.linear_extension()
    assert sorted(order) == list(range(lat.n))
    pos = {c: i for i, c in enumerate(order)}
    for a in range(lat.n):
        for b in range(lat.n):
            if a != b and lat.le(a, b):
                assert pos[a] < pos[b]
    longest = {c: 0 for c in range(lat.n)}
    for c in order:
        for a in lat.covers_of(c):
            longest[c] = max(longest[c], longest[a] + 1)
    assert lat.height == max(longest.values())


def test_height_known_values():
    assert chain(1).height == 0
    assert chain(6).height == 5
    assert powerset(3).height == 3
    assert m_n(4).height == 2


def test_distributive_modular_flags(corpus_lattice):
    lat = corpus_lattice
    assert lat.is_distributive() == _distributive_scan(lat)
    assert lat.is_modular() == _modular_scan(lat)


def _distributive_scan(lat):
    return all(lat.meet(a, lat.join(b, c))
               == lat.join(lat.meet(a, b), lat.meet(a, c))
               for a in range(lat.n) for b in range(lat.n)
               for c in range(lat.n))


def _modular_scan(lat):
    return all(not lat.le(a, b)
               or lat.join(a, lat.meet(c, b)) == lat.meet(lat.join(a, c), b)
               for a in range(lat.n) for b in range(lat.n)
               for c in range(lat.n))


def test_known_flag_values():
    assert m_n(3).is_modular() and not m_n(3).is_distributive()
    from conftest import n5
    pent = n5()
    assert not pent.is_modular() and not pent.is_distributive()
    from conftest import modular7
    mod7 = modular7()
    assert mod7.is_modular() and not mod7.is_distributive()
    assert chain(5).is_distributive()
    assert powerset(4).is_distributive()


def test_subtraction_galois_property():
    for lat in (chain(5), powerset(3), product(chain(2), chain(4))):
        for a in range(lat.n):
            for b in range(lat.n):
                for c in range(lat.n):
                    holds = lat.le(c, lat.join(a, b))
                    assert holds == lat.le(lat.subtraction(c, a), b)


def test_subtraction_rejects_non_distributive():
    with pytest.raises(NotDistributiveError):
        m_n(3).subtraction(1, 2)


def test_from_cover_relation_round_trip(corpus_lattice):
    lat = corpus_lattice
    buf = io.StringIO()
    write_cover_file(buf, lat, comment='round trip')
    clone = read_cover_file(io.StringIO(buf.getvalue()))
    assert clone.n == lat.n
    for a in range(lat.n):
        for b in range(lat.n):
            assert clone.le(a, b) == lat.le(a, b)


def test_from_leq_validation():
    bad = np.ones((2, 2), dtype=bool)
    with pytest.raises(NotALatticeError):
        from_leq(bad)
    missing_reflexive = np.zeros((2, 2), dtype=bool)
    with pytest.raises(NotALatticeError):
        from_leq(missing_reflexive)
    no_meet = np.eye(2, dtype=bool)
    with pytest.raises(NotALatticeError):
        from_leq(no_meet)


def test_build_spec_strings():
    assert build('chain:4').n == 4
    assert build('powerset:3').n == 8
    assert build('mn:3').n == 5
    assert build('chain:2*chain:3').n == 6
    with pytest.raises(ValueError):
        build('mystery:3')


def test_build_file_spec(tmp_path):
    path = tmp_path / 'pentagon.txt'
    with open(path, 'w') as fh:
        write_cover_file(fh, from_cover_relation(
            5, [(0, 1), (0, 2), (2, 3), (1, 4), (3, 4)]))
    lat = build(f'file:{path}')
    assert lat.n == 5 and not lat.is_modular()


def test_instrumented_view_counts():
    lat = powerset(2)
    view = lat.instrumented_view()
    view.join(1, 2)
    view.join(0, 3)
    view.meet(1, 2)
    view.subtraction(3, 1)
    assert view.counts == {'join': 2, 'meet': 1, 'subtraction': 1}
    assert view.le(1, 3) and view.counts['join'] == 2


def test_powerset_table_guard():
    big = powerset(13)
    with pytest.raises(BudgetExceededError):
        big.join_table


def test_product_order_is_componentwise():
    left, right = chain(3), powerset(2)
    prod = product(left, right)
    assert prod.n == left.n * right.n
    for a in range(prod.n):
        for b in range(prod.n):
            la, ra = divmod(a, right.n)
            lb, rb = divmod(b, right.n)
            assert prod.le(a, b) == (left.le(la, lb) and right.le(ra, rb))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=6), st.data())
def test_powerset_ops_are_bitwise(m, data):
    lat = powerset(m)
    a = data.draw(st.integers(min_value=0, max_value=lat.n - 1))
    b = data.draw(st.integers(min_value=0, max_value=lat.n - 1))
    assert lat.join(a, b) == a | b
    assert lat.meet(a, b) == a & b
    assert lat.subtraction(a, b) == a & ~b
    assert lat.le(a, b) == (a | b == b)
