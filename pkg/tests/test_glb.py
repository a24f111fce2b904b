from __future__ import annotations

import pytest

from conftest import (DIAMOND_F, DIAMOND_G, DIAMOND_GLB, M3_F, M3_G, M3_GLB,
                      M3_POINTWISE_MEET, MODULAR7_F, MODULAR7_G, MODULAR7_GLB,
                      MODULAR7_SIGMA_MISMATCHES, brute_of, modular7, n5)
from latmeet.endo import (Endofunction, is_join_endomorphism,
                          pointwise_leq, random_join_endomorphism)
from latmeet.errors import (BudgetExceededError, EmptySetError,
                            NotDistributiveError, NotModularError)
from latmeet.glb import (ALL_PAIRS, COVER_PAIRS, MeetResult, a1_naive,
                         brute_force_meet, dmeet, dmeet_plus, gmeet,
                         gmeet_plus, gmeet_plus_modular, meet_algorithms,
                         verify_01_relations_preserving)
from latmeet.lattice import chain, m_n, powerset

ALL_ALGS = ('brute', 'a1', 'dmeet', 'dmeet+', 'gmeet', 'gmeet+', 'gmeet+mod')


def _applicable(lat, name):
    if name in ('a1', 'dmeet', 'dmeet+'):
        return lat.is_distributive()
    if name == 'gmeet+mod':
        return lat.is_modular()
    return True


def _run(lat, name, fs):
    return meet_algorithms()[name](lat, fs)


def test_algorithm_registry():
    assert set(meet_algorithms()) == set(ALL_ALGS)


def test_diamond_example_all_algorithms():
    lat = powerset(2)
    fs = [Endofunction(lat, DIAMOND_F), Endofunction(lat, DIAMOND_G)]
    for name in ALL_ALGS:
        result = _run(lat, name, fs)
        assert isinstance(result, MeetResult)
        assert result.endofunction.values == DIAMOND_GLB, name
        assert is_join_endomorphism(result.endofunction)


def test_three_atom_example():
    lat = m_n(3)
    fs = [Endofunction(lat, M3_F), Endofunction(lat, M3_G)]
    assert not is_join_endomorphism(Endofunction(lat, M3_POINTWISE_MEET))
    for name in ('brute', 'gmeet', 'gmeet+', 'gmeet+mod'):
        assert _run(lat, name, fs).endofunction.values == M3_GLB, name
    for name in ('a1', 'dmeet', 'dmeet+'):
        with pytest.raises(NotDistributiveError):
            _run(lat, name, fs)


def test_seven_element_modular_example():
    lat = modular7()
    fs = [Endofunction(lat, MODULAR7_F), Endofunction(lat, MODULAR7_G)]
    sigma = tuple(lat.meet(a, b) for a, b in zip(MODULAR7_F, MODULAR7_G))
    assert sum(s != h for s, h in zip(sigma, MODULAR7_GLB)) \
        == MODULAR7_SIGMA_MISMATCHES
    for name in ('brute', 'gmeet', 'gmeet+', 'gmeet+mod'):
        result = _run(lat, name, fs)
        assert result.endofunction.values == MODULAR7_GLB, name
    assert gmeet(lat, fs).sigma_reductions == MODULAR7_SIGMA_MISMATCHES


def test_result_below_inputs_and_greatest(meet_cases):
    for case in meet_cases[:40]:
        lat, fs = case['lattice'], case['fs']
        got = brute_of(case).endofunction
        for f in fs:
            assert pointwise_leq(got, f)
        for name in ('gmeet', 'gmeet+'):
            assert _run(lat, name, fs).endofunction.values == got.values


def test_all_algorithms_match_brute_on_named_lattices():
    lats = [chain(4), powerset(2), powerset(3), m_n(2), m_n(3), m_n(4),
            n5(), modular7()]
    for lat in lats:
        for seed in range(6):
            fs = [random_join_endomorphism(lat, seed=100 * seed + k)
                  for k in range(1 + seed % 3)]
            expected = brute_force_meet(lat, fs).endofunction.values
            for name in ALL_ALGS[1:]:
                if _applicable(lat, name):
                    got = _run(lat, name, fs).endofunction.values
                    assert got == expected, (lat.label, name, seed)


def test_single_function_meet_is_identity_on_that_function():
    lat = powerset(3)
    f = random_join_endomorphism(lat, seed=5)
    for name in ALL_ALGS:
        assert _run(lat, name, [f]).endofunction.values == f.values


def test_empty_family_rejected():
    lat = chain(3)
    for name in ALL_ALGS:
        with pytest.raises(EmptySetError):
            _run(lat, name, [])


def test_gmeet_plus_modular_requires_modularity():
    lat = n5()
    f = random_join_endomorphism(lat, seed=1)
    with pytest.raises(NotModularError):
        gmeet_plus_modular(lat, [f, f])


def test_pair_budget_guard():
    lat = powerset(3)
    fs = [random_join_endomorphism(lat, seed=k) for k in range(2)]
    with pytest.raises(BudgetExceededError):
        gmeet(lat, fs, max_pairs=3)
    with pytest.raises(BudgetExceededError):
        gmeet_plus(lat, fs, max_pairs=3)


def test_dmeet_plus_fold_cost_model():
    '''One pairwise fold costs exactly one meet per join-irreducible and
    one join per remaining non-bottom element.'''
    for m in (2, 3, 4, 5, 6):
        lat = powerset(m)
        fs = [random_join_endomorphism(lat, seed=40 + k) for k in range(2)]
        result = dmeet_plus(lat, fs)
        n, j = lat.n, len(lat.join_irreducibles)
        assert result.op_counts.get('meet', 0) == j
        assert result.op_counts.get('join', 0) == n - j - 1
        assert result.op_counts.get('subtraction', 0) == 0


def test_dmeet_plus_on_chain_costs_no_joins():
    lat = chain(6)
    fs = [random_join_endomorphism(lat, seed=k) for k in range(2)]
    result = dmeet_plus(lat, fs)
    assert result.op_counts.get('meet', 0) == 5
    assert result.op_counts.get('join', 0) == 0


def test_fold_costs_scale_with_family_size():
    lat = powerset(3)
    fs = [random_join_endomorphism(lat, seed=60 + k) for k in range(4)]
    result = dmeet_plus(lat, fs)
    n, j = lat.n, len(lat.join_irreducibles)
    assert result.op_counts['meet'] == 3 * j
    assert result.op_counts['join'] == 3 * (n - j - 1)


def test_gmeet_updates_decrease_and_stay_above_answer(meet_cases):
    for case in meet_cases[:60]:
        lat, fs = case['lattice'], case['fs']
        answer = brute_of(case).endofunction.values
        trace = []
        result = gmeet(lat, fs, on_update=trace.append)
        prev = tuple(_big_meet(lat, fs, u) for u in range(lat.n))
        for snapshot in trace:
            assert snapshot != prev
            for old, new in zip(prev, snapshot):
                assert lat.le(new, old)
            for new, floor in zip(snapshot, answer):
                assert lat.le(floor, new)
            prev = snapshot
        assert result.endofunction.values == answer
        assert result.sigma_reductions <= lat.n * lat.height


def _big_meet(lat, fs, u):
    acc = lat.top
    for f in fs:
        acc = lat.meet(acc, f.values[u])
    return acc


def test_gmeet_plus_bucket_invariants(meet_cases):
    for case in meet_cases[:40]:
        lat, fs = case['lattice'], case['fs']
        events = []

        def watch(state, event):
            state.check_invariants()
            events.append(event)

        result = gmeet_plus(lat, fs, on_event=watch)
        assert result.endofunction.values == brute_of(case).endofunction.values
        assert set(events) <= {'reduce', 'move'}
        assert events.count('reduce') == result.sigma_reductions


def test_gmeet_plus_cover_pairs_on_modular():
    for lat in (m_n(3), m_n(4), modular7(), chain(5), powerset(3)):
        for seed in range(4):
            fs = [random_join_endomorphism(lat, seed=200 + seed + k)
                  for k in range(2)]
            full = gmeet_plus(lat, fs).endofunction.values
            restricted = gmeet_plus_modular(lat, fs)
            assert restricted.endofunction.values == full
            assert restricted.algorithm == 'gmeet+mod'


def test_cover_pair_universe_is_smaller():
    lat = m_n(4)
    fs = [random_join_endomorphism(lat, seed=k) for k in range(2)]
    full = gmeet_plus(lat, fs, pair_universe=ALL_PAIRS)
    restricted = gmeet_plus(lat, fs, pair_universe=COVER_PAIRS)
    assert restricted.endofunction.values == full.endofunction.values


def test_verify_01_relations_on_known_maps():
    lat = m_n(3)
    good = Endofunction(lat, M3_F)
    assert verify_01_relations_preserving(lat, good)
    bad = Endofunction(lat, M3_POINTWISE_MEET)
    assert not verify_01_relations_preserving(lat, bad)


def test_a1_and_dmeet_agree_with_dmeet_plus(meet_cases):
    for case in meet_cases:
        lat, fs = case['lattice'], case['fs']
        if not lat.is_distributive():
            continue
        base = dmeet_plus(lat, fs).endofunction.values
        assert dmeet(lat, fs).endofunction.values == base
        assert a1_naive(lat, fs).endofunction.values == base


def test_op_counts_only_contain_lattice_ops(meet_cases):
    case = meet_cases[0]
    for name in ALL_ALGS:
        if _applicable(case['lattice'], name):
            result = _run(case['lattice'], name, case['fs'])
            assert set(result.op_counts) <= {'join', 'meet', 'subtraction'}
            assert all(v >= 0 for v in result.op_counts.values())
            assert result.total_ops == sum(result.op_counts.values())
