'''Join-endomorphisms of a finite lattice.

A join-endomorphism maps bottom to bottom and preserves binary joins.  The
set E(L) of all of them is itself a lattice under the pointwise order; this
module provides the membership test, pointwise structure, exhaustive
enumeration and seeded random sampling, plus the one-line text format.
'''
from __future__ import annotations

import random

import numpy as np

from .errors import BudgetExceededError, EmptySetError, RetryExhaustedError
from .lattice import PowersetLattice

ENUM_BUDGET = 10 ** 8
RETRY_CAP = 10 ** 4


class Endofunction:
    'Immutable self-map of a lattice; equality and hashing use the value tuple.'

    __slots__ = ('lattice', 'values')

    def __init__(self, lattice, values):
        values = tuple(int(v) for v in values)
        if len(values) != lattice.n:
            raise ValueError(f'expected {lattice.n} values, got {len(values)}')
        for v in values:
            if not 0 <= v < lattice.n:
                raise ValueError(f'value {v} out of range for {lattice.label}')
        self.lattice = lattice
        self.values = values

    def __call__(self, a):
        return self.values[a]

    def __eq__(self, other):
        return isinstance(other, Endofunction) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f'Endofunction({self.lattice.label}, {list(self.values)})'


def is_join_endomorphism(f):
    'True when f(bottom) = bottom and f(a join b) = f(a) join f(b) for all a, b.'
    lat, vals = f.lattice, f.values
    if vals[lat.bottom] != lat.bottom:
        return False
    if isinstance(lat, PowersetLattice):
        # On a distributive lattice f is a join-endomorphism iff every value
        # is the join of the values at the irreducibles below it.
        for e in range(lat.n):
            acc = 0
            for j in lat.jdown(e):
                acc |= vals[j]
            if acc != vals[e]:
                return False
        return True
    v = np.asarray(vals, dtype=np.intp)
    jt = lat.join_table
    return bool(np.array_equal(v[jt], jt[np.ix_(v, v)]))


def pointwise_leq(f, g):
    'True when f(a) <= g(a) for every a.'
    lat = f.lattice
    return all(lat.le(a, b) for a, b in zip(f.values, g.values))


def pointwise_join(f, g):
    lat = f.lattice
    return Endofunction(lat, (lat.join(a, b) for a, b in zip(f.values, g.values)))


def pointwise_meet_many(fs):
    'Pointwise meet of a nonempty family; usually not a join-endomorphism.'
    if not fs:
        raise EmptySetError('pointwise_meet_many needs a nonempty family')
    lat = fs[0].lattice
    vals = list(fs[0].values)
    for g in fs[1:]:
        vals = [lat.meet(a, b) for a, b in zip(vals, g.values)]
    return Endofunction(lat, vals)


def enumerate_join_endomorphisms(lattice, budget=ENUM_BUDGET):
    '''Yield every join-endomorphism of the lattice exactly once.

    Backtracks over a fixed linear extension: values at join-reducible
    elements are forced (join of the values at two covered elements, checked
    consistent across all covered pairs), join-irreducibles range over the
    up-set of the value at their single covered element.  The searched
    candidate space is at most n^|J(L)|; refuses upfront when that exceeds
    the budget.  Non-modular lattices get a final validation pass.
    '''
    jirr = lattice.join_irreducibles
    if lattice.n ** len(jirr) > budget:
        raise BudgetExceededError(
            f'{lattice.label}: n^|J| = {lattice.n}^{len(jirr)} exceeds budget {budget}')
    return _enumerate(lattice, set(jirr))


def _enumerate(lattice, jirr):
    n, bottom = lattice.n, lattice.bottom
    order = lattice.linear_extension()
    covers = {e: lattice.covers_of(e) for e in order}
    validate = not lattice.is_modular()
    f = [bottom] * n

    def rec(idx):
        if idx == n:
            cand = Endofunction(lattice, f)
            if not validate or _preserves_joins(lattice, f):
                yield cand
            return
        e = order[idx]
        if e == bottom:
            f[e] = bottom
            yield from rec(idx + 1)
        elif e in jirr:
            for v in lattice.up_set(f[covers[e][0]]):
                f[e] = v
                yield from rec(idx + 1)
        else:
            cs = covers[e]
            v = lattice.join(f[cs[0]], f[cs[1]])
            if all(lattice.join(f[cs[i]], f[cs[j]]) == v
                   for i in range(len(cs)) for j in range(i + 1, len(cs))):
                f[e] = v
                yield from rec(idx + 1)

    return rec(0)


def _preserves_joins(lattice, vals):
    for u in range(lattice.n):
        for v in range(u, lattice.n):
            if vals[lattice.join(u, v)] != lattice.join(vals[u], vals[v]):
                return False
    return True


def count_join_endomorphisms(lattice, budget=ENUM_BUDGET):
    return sum(1 for _ in enumerate_join_endomorphisms(lattice, budget))


def random_join_endomorphism(lattice, seed=None, retry_cap=RETRY_CAP, repair=True):
    '''Seeded random join-endomorphism.

    Draws independent uniform values on the join-irreducibles and extends by
    joins; on distributive lattices every extension is valid.  Elsewhere the
    extension is rejection-tested and, after `retry_cap` failures, repaired
    by corrective descent (always terminates at a join-endomorphism).  The
    resulting distribution over E(L) is NOT uniform in either case.
    '''
    rng = random.Random(seed)
    jirr = lattice.join_irreducibles
    distributive = lattice.is_distributive()
    cand = None
    for _ in range(max(1, retry_cap)):
        g = {j: rng.randrange(lattice.n) for j in jirr}
        cand = Endofunction(lattice, _extend_by_joins(lattice, g))
        if distributive or is_join_endomorphism(cand):
            return cand
    if repair:
        return Endofunction(lattice, _corrective_descent(lattice, list(cand.values)))
    raise RetryExhaustedError(
        f'{lattice.label}: no join-endomorphism found in {retry_cap} draws')


def _extend_by_joins(lattice, g):
    'f(e) = join of g over the irreducibles below e (bottom for none).'
    if lattice.is_distributive():
        # The union identity jdown(a join b) = jdown(a) | jdown(b) lets the
        # extension run incrementally along covers.
        vals = [lattice.bottom] * lattice.n
        for e in lattice.linear_extension():
            cs = lattice.covers_of(e)
            if not cs:
                vals[e] = lattice.bottom
            elif len(cs) == 1:
                vals[e] = lattice.join(vals[cs[0]], g[e])
            else:
                vals[e] = lattice.join(vals[cs[0]], vals[cs[1]])
        return vals
    return [lattice.big_join([g[j] for j in lattice.jdown(e)])
            for e in range(lattice.n)]


def _corrective_descent(lattice, vals):
    'Lower values until all joins are preserved; strictly decreasing, so it terminates.'
    n = lattice.n
    while True:
        hit = None
        for u in range(n):
            for v in range(u, n):
                w = lattice.join(u, v)
                j = lattice.join(vals[u], vals[v])
                if j != vals[w]:
                    hit = (u, v, w, j)
                    break
            if hit:
                break
        if hit is None:
            return vals
        u, v, w, j = hit
        if lattice.le(j, vals[w]):
            vals[w] = j
        else:
            vals[u] = lattice.meet(vals[u], vals[w])
            vals[v] = lattice.meet(vals[v], vals[w])


# -- text format -----------------------------------------------------------------


def format_endofunction(f):
    return ' '.join(str(v) for v in f.values)


def parse_endofunction(line, lattice):
    'Parse the single-line format: n whitespace-separated element ids.'
    return Endofunction(lattice, (int(tok) for tok in line.split()))
