'''Greatest join-endomorphism below a family of join-endomorphisms.

E(L) is a complete lattice under the pointwise order, so any nonempty family
S has a greatest lower bound there; note it is generally NOT the pointwise
meet.  Six routes compute it:

  brute_force_meet   enumerate E(L), join everything below S          (oracle)
  a1_naive           meet of f(a) join g(b) over all pairs a join b >= c
  dmeet              meet of f(a) join g(c - a) over a <= c      (subtraction)
  dmeet_plus         meet on irreducibles, forced joins elsewhere
  gmeet              decrease the pointwise meet until joins are preserved
  gmeet_plus         same, with support/conflict/failure bookkeeping

a1/dmeet/dmeet_plus require a distributive lattice; gmeet_plus_modular runs
gmeet_plus over cover pairs only, which is sound on modular lattices.  Every
algorithm reports how many binary lattice operations it performed and, for
the iterative ones, how many times sigma strictly decreased at an element.
'''
from __future__ import annotations

from dataclasses import dataclass, field

from .endo import Endofunction, enumerate_join_endomorphisms, pointwise_leq
from .errors import (BudgetExceededError, EmptySetError, NotDistributiveError,
                     NotModularError, StructureError)

ALL_PAIRS = 'all'
COVER_PAIRS = 'covers'
MAX_PAIRS = 10 ** 7

_SUP, _CON, _FAIL = 0, 1, 2


@dataclass
class MeetResult:
    endofunction: Endofunction
    algorithm: str
    op_counts: dict = field(default_factory=dict)
    sigma_reductions: int = 0

    @property
    def total_ops(self):
        return sum(self.op_counts.values())


def meet_algorithms():
    'Algorithm name -> callable(lattice, fs) for every implemented route.'
    return {
        'brute': brute_force_meet,
        'a1': a1_naive,
        'dmeet': dmeet,
        'dmeet+': dmeet_plus,
        'gmeet': gmeet,
        'gmeet+': gmeet_plus,
        'gmeet+mod': gmeet_plus_modular,
    }


def _prep(lattice, fs, algorithm):
    if not fs:
        raise EmptySetError(f'{algorithm}: the family S must be nonempty')
    for f in fs:
        if len(f.values) != lattice.n:
            raise ValueError(f'{algorithm}: endofunction does not match {lattice.label}')
    return lattice.instrumented_view()


def _require_distributive(lattice, algorithm):
    if not lattice.is_distributive():
        raise NotDistributiveError(
            f'{algorithm} requires a distributive lattice; {lattice.label} is not')


def brute_force_meet(lattice, fs, budget=10 ** 8):
    'Join of every join-endomorphism below all of S.  Exponential; the oracle.'
    view = _prep(lattice, fs, 'brute')
    vals = [lattice.bottom] * lattice.n
    for g in enumerate_join_endomorphisms(lattice, budget):
        if all(pointwise_leq(g, f) for f in fs):
            vals = [view.join(a, b) for a, b in zip(vals, g.values)]
    return MeetResult(Endofunction(lattice, vals), 'brute', view.counts)


def a1_naive(lattice, fs):
    'h(c) = meet of f(a) join g(b) over every pair with a join b >= c.'
    _require_distributive(lattice, 'a1')
    view = _prep(lattice, fs, 'a1')
    out = fs[0]
    for g in fs[1:]:
        out = _a1_pair(view, out, g)
    return MeetResult(out, 'a1', view.counts)


def _a1_pair(view, f, g):
    lat = view.lattice
    n = lat.n
    vals = []
    for c in range(n):
        acc = lat.top
        for a in range(n):
            fa = f.values[a]
            for b in range(n):
                if lat.le(c, view.join(a, b)):
                    acc = view.meet(acc, view.join(fa, g.values[b]))
        vals.append(acc)
    return Endofunction(lat, vals)


def dmeet(lattice, fs):
    'h(c) = meet of f(a) join g(c - a) over a <= c, using co-Heyting subtraction.'
    _require_distributive(lattice, 'dmeet')
    view = _prep(lattice, fs, 'dmeet')
    out = fs[0]
    for g in fs[1:]:
        out = _dmeet_pair(view, out, g)
    return MeetResult(out, 'dmeet', view.counts)


def _dmeet_pair(view, f, g):
    lat = view.lattice
    vals = []
    for c in range(lat.n):
        acc = lat.top
        for a in lat.down_set(c):
            acc = view.meet(acc, view.join(f.values[a], g.values[view.subtraction(c, a)]))
        vals.append(acc)
    return Endofunction(lat, vals)


def dmeet_plus(lattice, fs):
    '''h = f meet g on join-irreducibles, extended by forced joins.

    Per pairwise fold this costs exactly |J(L)| meets and n - |J(L)| - 1
    joins: one meet per irreducible, one join per reducible non-bottom
    element (its value is the join at two covered elements, memoized in a
    linear-extension pass).
    '''
    _require_distributive(lattice, 'dmeet+')
    view = _prep(lattice, fs, 'dmeet+')
    out = fs[0]
    for g in fs[1:]:
        out = _dmeet_plus_pair(view, out, g)
    return MeetResult(out, 'dmeet+', view.counts)


def _dmeet_plus_pair(view, f, g):
    lat = view.lattice
    jirr = set(lat.join_irreducibles)
    vals = [lat.bottom] * lat.n
    for e in lat.linear_extension():
        if e == lat.bottom:
            continue
        if e in jirr:
            vals[e] = view.meet(f.values[e], g.values[e])
        else:
            cs = lat.covers_of(e)
            if len(cs) < 2:
                raise StructureError(
                    f'{lat.label}: join-reducible element {e} has fewer than two covers')
            vals[e] = view.join(vals[cs[0]], vals[cs[1]])
    return Endofunction(lat, vals)


def gmeet(lattice, fs, on_update=None, max_pairs=MAX_PAIRS):
    '''Decrease sigma = pointwise meet of S until it preserves all joins.

    Each round rescans ordered pairs (u <= v) lexicographically and repairs
    the first violation: sigma(u join v) drops to sigma(u) join sigma(v)
    when the latter is strictly below, otherwise sigma(u) and sigma(v) are
    met with sigma(u join v).  `on_update` receives the sigma tuple after
    every update round.
    '''
    view = _prep(lattice, fs, 'gmeet')
    n = lattice.n
    if n * (n + 1) // 2 > max_pairs:
        raise BudgetExceededError(f'gmeet: {n}^2 pair scan exceeds max_pairs={max_pairs}')
    sigma = [view.big_meet([f.values[u] for f in fs]) for u in range(n)]
    reductions = 0
    while True:
        hit = None
        for u in range(n):
            su = sigma[u]
            for v in range(u + 1, n):
                w = view.join(u, v)
                j = view.join(su, sigma[v])
                if j != sigma[w]:
                    hit = (u, v, w, j)
                    break
            if hit:
                break
        if hit is None:
            break
        u, v, w, j = hit
        if lattice.le(j, sigma[w]):
            sigma[w] = j
            reductions += 1
        else:
            for t in (u, v):
                m = view.meet(sigma[t], sigma[w])
                if m != sigma[t]:
                    sigma[t] = m
                    reductions += 1
        if on_update is not None:
            on_update(tuple(sigma))
    return MeetResult(Endofunction(lattice, sigma), 'gmeet', view.counts, reductions)


class GMeetState:
    '''Sigma plus the Support/Conflict/Failure pair buckets of GMeet+.

    Pairs are indexed; each pair lives in exactly one bucket of its join
    value w (disjointness holds by construction: a pair has a single
    location tag), except for the one pair currently popped for
    reprocessing, tracked in `active`.  Bucket membership moves are O(1)
    swap-pops.
    '''

    def __init__(self, view, sigma, pairs):
        self.view = view
        self.lattice = view.lattice
        self.sigma = sigma
        self.pairs = pairs
        self.pair_join = [view.join(u, v) for u, v in pairs]
        n = self.lattice.n
        self.buckets = [[[] for _ in range(n)] for _ in range(3)]
        self.loc = [None] * len(pairs)
        self.active = None
        self.by_elem = [[] for _ in range(n)]
        for pid, (u, v) in enumerate(pairs):
            self.by_elem[u].append(pid)
            if v != u:
                self.by_elem[v].append(pid)
        for pid in range(len(pairs)):
            self.insert(pid, self.classify(pid))

    def classify(self, pid):
        'Compare sigma(u) join sigma(v) against sigma(u join v); costs one join.'
        u, v = self.pairs[pid]
        j = self.view.join(self.sigma[u], self.sigma[v])
        sw = self.sigma[self.pair_join[pid]]
        if j == sw:
            return _SUP
        return _CON if self.lattice.le(j, sw) else _FAIL

    def insert(self, pid, kind):
        bucket = self.buckets[kind][self.pair_join[pid]]
        self.loc[pid] = (kind, len(bucket))
        bucket.append(pid)
        if self.active == pid:
            self.active = None

    def remove(self, pid):
        kind, pos = self.loc[pid]
        bucket = self.buckets[kind][self.pair_join[pid]]
        last = bucket.pop()
        if last != pid:
            bucket[pos] = last
            self.loc[last] = (kind, pos)
        self.loc[pid] = None
        self.active = pid

    def move(self, pid, kind):
        self.remove(pid)
        self.insert(pid, kind)

    def first_nonempty(self, kind):
        'Smallest w with a nonempty bucket, then its lexicographically least pair.'
        for w in range(self.lattice.n):
            bucket = self.buckets[kind][w]
            if bucket:
                return min(bucket, key=lambda pid: self.pairs[pid])
        return None

    def flush_sup_to_fail(self, w):
        'All supports of w become failures (sigma(w) just strictly decreased).'
        sup, fail = self.buckets[_SUP][w], self.buckets[_FAIL][w]
        for pid in sup:
            self.loc[pid] = (_FAIL, len(fail))
            fail.append(pid)
        sup.clear()

    def check_supports(self, x):
        'Re-test support pairs containing x after sigma(x) decreased.'
        for pid in self.by_elem[x]:
            if self.loc[pid] is not None and self.loc[pid][0] == _SUP:
                kind = self.classify(pid)
                if kind != _SUP:
                    self.move(pid, kind)

    def check_invariants(self):
        '''Raise AssertionError unless buckets partition the pairs (minus the
        one possibly in flight) and every Support entry is exact.'''
        seen = set()
        for kind in (_SUP, _CON, _FAIL):
            for w in range(self.lattice.n):
                for pos, pid in enumerate(self.buckets[kind][w]):
                    assert self.loc[pid] == (kind, pos)
                    assert self.pair_join[pid] == w
                    assert pid not in seen, 'pair in two buckets'
                    seen.add(pid)
        missing = set(range(len(self.pairs))) - seen
        expected = set() if self.active is None else {self.active}
        assert missing == expected, 'pair missing from all buckets'
        lat = self.lattice
        for w in range(lat.n):
            for pid in self.buckets[_SUP][w]:
                u, v = self.pairs[pid]
                assert lat.join(self.sigma[u], self.sigma[v]) == self.sigma[w]


def gmeet_plus(lattice, fs, pair_universe=ALL_PAIRS, on_event=None,
               max_pairs=MAX_PAIRS, _tag='gmeet+'):
    '''GMeet with explicit bookkeeping instead of rescans.

    The outer loop drains Conflict pairs (sigma(w) drops to the pair join);
    the inner loop drains Failure pairs (the pair elements are met with
    sigma(w), then the pair is reclassified).  Because a sigma update can
    stale-date Conflict entries, popped Conflict pairs are re-verified and
    re-bucketed when their classification changed; Failure pops re-derive
    everything anyway.  `on_event(state, event)` fires after every sigma
    reduction ("reduce") and bucket transition ("move").
    '''
    view = _prep(lattice, fs, _tag)
    pairs = _pair_universe(lattice, pair_universe)
    if len(pairs) > max_pairs:
        raise BudgetExceededError(
            f'{_tag}: {len(pairs)} pairs exceed max_pairs={max_pairs}')
    n = lattice.n
    sigma = [view.big_meet([f.values[u] for f in fs]) for u in range(n)]
    state = GMeetState(view, sigma, pairs)
    reductions = 0

    def emit(event):
        if on_event is not None:
            on_event(state, event)

    def reduce_at(x, value):
        nonlocal reductions
        state.sigma[x] = value
        reductions += 1
        state.flush_sup_to_fail(x)
        state.check_supports(x)
        emit('reduce')

    def drain_failures():
        while True:
            pid = state.first_nonempty(_FAIL)
            if pid is None:
                return
            state.remove(pid)
            x, y = state.pairs[pid]
            z = state.pair_join[pid]
            for t in (x, y):
                m = view.meet(state.sigma[t], state.sigma[z])
                if m != state.sigma[t]:
                    reduce_at(t, m)
            j = view.join(state.sigma[x], state.sigma[y])
            state.insert(pid, _SUP if j == state.sigma[z] else _CON)
            emit('move')

    drain_failures()
    while True:
        pid = state.first_nonempty(_CON)
        if pid is None:
            break
        state.remove(pid)
        u, v = state.pairs[pid]
        w = state.pair_join[pid]
        j = view.join(state.sigma[u], state.sigma[v])
        if j == state.sigma[w]:
            state.insert(pid, _SUP)
            emit('move')
            continue
        if not lattice.le(j, state.sigma[w]):
            state.insert(pid, _FAIL)
            emit('move')
            drain_failures()
            continue
        reduce_at(w, j)
        state.insert(pid, _SUP)
        drain_failures()
    return MeetResult(Endofunction(lattice, state.sigma), _tag, view.counts, reductions)


def gmeet_plus_modular(lattice, fs, on_event=None, max_pairs=MAX_PAIRS):
    '''GMeet+ over cover pairs only.

    On a modular lattice a bottom-preserving map that preserves joins of
    pairs within each cover set is already a join-endomorphism, so the
    restricted pair universe suffices.
    '''
    if not lattice.is_modular():
        raise NotModularError(
            f'gmeet+mod requires a modular lattice; {lattice.label} is not')
    return gmeet_plus(lattice, fs, pair_universe=COVER_PAIRS, on_event=on_event,
                      max_pairs=max_pairs, _tag='gmeet+mod')


def _pair_universe(lattice, kind):
    if kind == ALL_PAIRS:
        return [(u, v) for u in range(lattice.n) for v in range(u + 1, lattice.n)]
    if kind == COVER_PAIRS:
        pairs = set()
        for w in range(lattice.n):
            cs = lattice.cover_set(w)
            for i, a in enumerate(cs):
                for b in cs[i + 1:]:
                    pairs.add((a, b) if a < b else (b, a))
        return sorted(pairs)
    raise ValueError(f'unknown pair universe {kind!r}')


def verify_01_relations_preserving(lattice, f):
    'True when f preserves the join of every pair within every cover set.'
    vals = f.values
    for c in range(lattice.n):
        cs = lattice.cover_set(c)
        for i, a in enumerate(cs):
            for b in cs[i + 1:]:
                if vals[lattice.join(a, b)] != lattice.join(vals[a], vals[b]):
                    return False
    return True
