'''Finite lattices on dense integer elements 0..n-1.

Two interchangeable backends implement the same element-level interface:
`Lattice` stores the order as an n x n boolean matrix with join/meet lookup
tables, `PowersetLattice` represents elements as bitmasks and computes every
operation directly (full tables for 2^16 elements would not fit in memory).
Instances are immutable once built.  `instrumented_view` wraps either backend
with per-operation counters for the cost model used by the meet algorithms:
joins, meets and subtractions are counted, order tests are free.
'''
from __future__ import annotations

from functools import cached_property, reduce

import numpy as np

from .errors import BudgetExceededError, NotALatticeError, NotDistributiveError

# Largest n for which n x n tables/matrices are materialized on demand.
TABLE_LIMIT = 4096


class LatticeBase:
    'Shared conveniences; subclasses provide le/join/meet and structure.'

    n: int
    bottom: int
    top: int
    label: str

    def elements(self):
        return range(self.n)

    def big_join(self, xs):
        'Join of an iterable, bottom if empty.'
        return reduce(self.join, xs, self.bottom)

    def big_meet(self, xs):
        'Meet of an iterable, top if empty.'
        return reduce(self.meet, xs, self.top)

    def cover_set(self, a):
        'Elements covered by a, plus a itself.'
        return self.covers_of(a) + (a,)

    def instrumented_view(self):
        return OpCountingLattice(self)

    def _check_element(self, a):
        if not 0 <= a < self.n:
            raise ValueError(f'element {a} out of range for {self.label} (n={self.n})')
        return a

    def __repr__(self):
        return f'<{type(self).__name__} {self.label} n={self.n}>'


class Lattice(LatticeBase):
    '''Table-backed finite lattice.

    Built from a reflexive order matrix `leq` (leq[a, b] means a <= b).
    When `check` is true the order axioms are verified and the join/meet
    tables are derived from the order, raising NotALatticeError with the
    offending pair if some lub or glb is missing.  Builders with closed-form
    tables pass them in and skip the generic derivation.
    '''

    def __init__(self, leq, label='lattice', join_table=None, meet_table=None,
                 distributive=None, modular=None, subtraction_fn=None, check=True):
        leq = np.ascontiguousarray(np.asarray(leq, dtype=bool))
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise NotALatticeError('leq must be a square matrix')
        self.n = n = leq.shape[0]
        if n == 0:
            raise NotALatticeError('a lattice needs at least one element')
        self.label = label
        if check:
            _check_partial_order(leq)
        leq.flags.writeable = False
        self.leq = leq
        if join_table is None or meet_table is None:
            join_table, meet_table = _tables_from_leq(leq)
        self._join_table = np.ascontiguousarray(join_table, dtype=np.int32)
        self._meet_table = np.ascontiguousarray(meet_table, dtype=np.int32)
        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bottoms) != 1 or len(tops) != 1:
            raise NotALatticeError('order has no unique bottom/top')
        self.bottom = int(bottoms[0])
        self.top = int(tops[0])
        self._distributive = distributive
        self._modular = modular
        self._subtraction_fn = subtraction_fn
        self._subtraction_table = None

    # -- order and operations -------------------------------------------------

    def le(self, a, b):
        return bool(self.leq[a, b])

    def join(self, a, b):
        return int(self._join_table[a, b])

    def meet(self, a, b):
        return int(self._meet_table[a, b])

    @property
    def join_table(self):
        return self._join_table

    @property
    def meet_table(self):
        return self._meet_table

    def subtraction(self, c, a):
        '''Least b such that a `join` b >= c (co-Heyting subtraction).

        Raises NotDistributiveError when no least such b exists, which can
        happen only on non-distributive lattices.
        '''
        if self._subtraction_fn is not None:
            return self._subtraction_fn(c, a)
        if self.is_distributive():
            if self._subtraction_table is None:
                self._subtraction_table = self._build_subtraction_table()
            return int(self._subtraction_table[c, a])
        b = self.big_meet([e for e in range(self.n) if self.leq[c, self._join_table[a, e]]])
        if not self.leq[c, self._join_table[a, b]]:
            raise NotDistributiveError(
                f'{self.label}: subtraction({c}, {a}) undefined; '
                f'the meet of candidates is not itself a candidate')
        return b

    def _build_subtraction_table(self):
        n, jt = self.n, self._join_table
        table = np.empty((n, n), dtype=np.int32)
        for a in range(n):
            ge = self.leq[:, jt[a]]          # ge[c, e]: c <= a join e
            for c in range(n):
                b = self.big_meet(np.flatnonzero(ge[c]))
                if not ge[c, b]:
                    raise NotDistributiveError(
                        f'{self.label}: subtraction({c}, {a}) undefined')
                table[c, a] = b
        return table

    # -- structure -------------------------------------------------------------

    @cached_property
    def _cover_matrix(self):
        'cover[a, b] is true when b covers a.'
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        return lt & ~(lt @ lt)

    def covers_of(self, a):
        'Elements covered by a (lower covers), ascending.'
        return tuple(int(b) for b in np.flatnonzero(self._cover_matrix[:, a]))

    def upper_covers_of(self, a):
        return tuple(int(b) for b in np.flatnonzero(self._cover_matrix[a, :]))

    def cover_edges(self):
        'All pairs (a, b) with b covering a, lexicographic.'
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self._cover_matrix))]

    @cached_property
    def join_irreducibles(self):
        'Elements with exactly one lower cover (equivalently: join-irreducible).'
        counts = self._cover_matrix.sum(axis=0)
        return tuple(int(a) for a in range(self.n)
                     if a != self.bottom and counts[a] == 1)

    def down_set(self, c):
        return tuple(int(a) for a in np.flatnonzero(self.leq[:, c]))

    def up_set(self, a):
        return tuple(int(b) for b in np.flatnonzero(self.leq[a, :]))

    def jdown(self, c):
        'Join-irreducibles below (or equal to) c.'
        return tuple(j for j in self.join_irreducibles if self.leq[j, c])

    def linear_extension(self):
        'Elements ordered compatibly with leq (smaller down-sets first).'
        sizes = self.leq.sum(axis=0)
        return tuple(int(a) for a in np.argsort(sizes, kind='stable'))

    @cached_property
    def height(self):
        'Length in edges of the longest chain.'
        h = [0] * self.n
        for a in sorted(range(self.n), key=lambda a: int(self.leq[:, a].sum())):
            covs = self.covers_of(a)
            h[a] = 1 + max(h[b] for b in covs) if covs else 0
        return h[self.top]

    # -- identities ------------------------------------------------------------

    def is_distributive(self):
        if self._distributive is None:
            self._distributive = self._scan_distributive() is None
        return self._distributive

    def is_modular(self):
        if self._modular is None:
            self._modular = self._scan_modular() is None
        return self._modular

    def _scan_distributive(self):
        'First triple violating a join (b meet c) = (a join b) meet (a join c), else None.'
        jt, mt = self._join_table, self._meet_table
        for a in range(self.n):
            lhs = jt[a][mt]
            rhs = mt[np.ix_(jt[a], jt[a])]
            if not np.array_equal(lhs, rhs):
                b, c = np.argwhere(lhs != rhs)[0]
                return a, int(b), int(c)
        return None

    def _scan_modular(self):
        'First (a, b, c) with a <= b violating a join (c meet b) = (a join c) meet b.'
        jt, mt = self._join_table, self._meet_table
        for a in range(self.n):
            for b in np.flatnonzero(self.leq[a]):
                lhs = jt[a][mt[:, b]]
                rhs = mt[jt[a], b]
                if not np.array_equal(lhs, rhs):
                    c = int(np.flatnonzero(lhs != rhs)[0])
                    return a, int(b), c
        return None


class PowersetLattice(LatticeBase):
    '''Lattice of all subsets of {0..m-1}; elements are bitmasks.

    Operations are O(1) bit arithmetic, so no tables are stored; the matrix
    and table properties materialize lazily and refuse above TABLE_LIMIT.
    '''

    def __init__(self, m, label=None):
        if m < 0:
            raise ValueError('m must be >= 0')
        self.m = m
        self.n = 1 << m
        self.bottom = 0
        self.top = self.n - 1
        self.label = label if label is not None else f'powerset:{m}'

    def le(self, a, b):
        return a & ~b == 0

    def join(self, a, b):
        return a | b

    def meet(self, a, b):
        return a & b

    def subtraction(self, c, a):
        return c & ~a

    def covers_of(self, a):
        return tuple(sorted(a ^ (1 << i) for i in range(self.m) if a >> i & 1))

    def upper_covers_of(self, a):
        return tuple(sorted(a | (1 << i) for i in range(self.m) if not a >> i & 1))

    def cover_edges(self):
        return sorted((b, a) for a in range(self.n) for b in self.covers_of(a))

    @property
    def join_irreducibles(self):
        return tuple(1 << i for i in range(self.m))

    def jdown(self, c):
        return tuple(1 << i for i in range(self.m) if c >> i & 1)

    def down_set(self, c):
        subs = []
        s = c
        while True:
            subs.append(s)
            if s == 0:
                break
            s = (s - 1) & c
        return tuple(sorted(subs))

    def up_set(self, a):
        free = self.top & ~a
        return tuple(sorted(a | s for s in PowersetLattice._submasks(free)))

    @staticmethod
    def _submasks(mask):
        s = mask
        while True:
            yield s
            if s == 0:
                return
            s = (s - 1) & mask

    def linear_extension(self):
        return tuple(sorted(range(self.n), key=lambda a: (a.bit_count(), a)))

    @property
    def height(self):
        return self.m

    def is_distributive(self):
        return True

    def is_modular(self):
        return True

    def _guard_table(self):
        if self.n > TABLE_LIMIT:
            raise BudgetExceededError(
                f'{self.label}: n={self.n} exceeds TABLE_LIMIT={TABLE_LIMIT}; '
                'use the mask-level operations instead of materialized tables')

    @cached_property
    def leq(self):
        self._guard_table()
        x = np.arange(self.n)
        return np.bitwise_and(x[:, None], ~x[None, :]) == 0

    @cached_property
    def join_table(self):
        self._guard_table()
        x = np.arange(self.n, dtype=np.int32)
        return np.bitwise_or.outer(x, x)

    @cached_property
    def meet_table(self):
        self._guard_table()
        x = np.arange(self.n, dtype=np.int32)
        return np.bitwise_and.outer(x, x)


class OpCountingLattice:
    '''View of a lattice that counts join/meet/subtraction calls.

    Structural queries (order tests, covers, irreducibles, down-sets) are
    free, mirroring the cost model where only binary lattice operations are
    charged.  big_join/big_meet fold through the counted binary operations,
    seeded with bottom/top, so a k-element family costs k operations.
    '''

    def __init__(self, lattice):
        self.lattice = lattice
        self.counts = {'join': 0, 'meet': 0, 'subtraction': 0}

    def reset(self):
        for k in self.counts:
            self.counts[k] = 0

    def join(self, a, b):
        self.counts['join'] += 1
        return self.lattice.join(a, b)

    def meet(self, a, b):
        self.counts['meet'] += 1
        return self.lattice.meet(a, b)

    def subtraction(self, c, a):
        self.counts['subtraction'] += 1
        return self.lattice.subtraction(c, a)

    def big_join(self, xs):
        return reduce(self.join, xs, self.lattice.bottom)

    def big_meet(self, xs):
        return reduce(self.meet, xs, self.lattice.top)

    def __getattr__(self, name):
        return getattr(self.lattice, name)


# -- builders -------------------------------------------------------------------


def chain(k, label=None):
    'Total order on k elements; 0 is bottom.'
    if k < 1:
        raise ValueError('a chain needs at least one element')
    r = np.arange(k, dtype=np.int32)
    return Lattice(
        r[:, None] <= r[None, :],
        label=label if label is not None else f'chain:{k}',
        join_table=np.maximum.outer(r, r),
        meet_table=np.minimum.outer(r, r),
        distributive=True, modular=True,
        subtraction_fn=lambda c, a: 0 if c <= a else c,
        check=False)


def powerset(m):
    'Boolean lattice of all subsets of an m-element set.'
    return PowersetLattice(m)


def m_n(k, label=None):
    'Antichain of k elements with a bottom and a top glued on (M_k).'
    if k < 0:
        raise ValueError('k must be >= 0')
    n = k + 2
    bot, top = 0, n - 1
    leq = np.eye(n, dtype=bool)
    leq[bot, :] = True
    leq[:, top] = True
    jt = np.full((n, n), top, dtype=np.int32)
    mt = np.full((n, n), bot, dtype=np.int32)
    for a in range(n):
        jt[a, a] = mt[a, a] = a
        jt[bot, a] = jt[a, bot] = a
        mt[top, a] = mt[a, top] = a
    return Lattice(leq, label=label if label is not None else f'mn:{k}',
                   join_table=jt, meet_table=mt,
                   distributive=k <= 2, modular=True, check=False)


def from_cover_relation(n, edges, label='cover-relation'):
    'Lattice from cover edges (a, b) meaning b covers a; validates everything.'
    rel = np.eye(n, dtype=bool)
    for a, b in edges:
        if not (0 <= a < n and 0 <= b < n) or a == b:
            raise NotALatticeError(f'bad cover edge ({a}, {b})', pair=(a, b))
        rel[a, b] = True
    closed = _transitive_closure_matrix(rel)
    bad = closed & closed.T & ~np.eye(n, dtype=bool)
    if bad.any():
        a, b = np.argwhere(bad)[0]
        raise NotALatticeError(f'cover edges create a cycle through {a} and {b}',
                               pair=(int(a), int(b)))
    return Lattice(closed, label=label)


def product(a, b, label=None):
    'Direct product; element (i, j) is encoded as i * b.n + j.'
    na, nb = a.n, b.n
    if na * nb > TABLE_LIMIT:
        raise BudgetExceededError(f'product size {na * nb} exceeds {TABLE_LIMIT}')
    leq_a, jt_a, mt_a = a.leq, np.asarray(a.join_table), np.asarray(a.meet_table)
    leq_b, jt_b, mt_b = b.leq, np.asarray(b.join_table), np.asarray(b.meet_table)
    leq = np.kron(leq_a.astype(np.uint8), leq_b.astype(np.uint8)).astype(bool)
    blow = lambda t: np.repeat(np.repeat(t, nb, axis=0), nb, axis=1).astype(np.int64)
    tile = lambda t: np.tile(t, (na, na)).astype(np.int64)
    dist = a.is_distributive() and b.is_distributive()
    mod = a.is_modular() and b.is_modular()
    return Lattice(leq, label=label if label is not None else f'product({a.label},{b.label})',
                   join_table=blow(jt_a) * nb + tile(jt_b),
                   meet_table=blow(mt_a) * nb + tile(mt_b),
                   distributive=dist, modular=mod, check=False)


def from_leq(leq, label='lattice'):
    'Lattice from an explicit order matrix; validates everything.'
    return Lattice(leq, label=label)


def build(spec):
    '''Build a lattice from a descriptor string.

    Grammar: "chain:K", "powerset:M", "mn:K", "file:PATH" (cover-relation
    file), or products joined with "*" (left associative), e.g.
    "chain:2*mn:3".
    '''
    parts = [p.strip() for p in spec.split('*')]
    lats = [_build_atom(p) for p in parts]
    return reduce(product, lats)


def _build_atom(part):
    kind, sep, arg = part.partition(':')
    if not sep:
        raise ValueError(f'bad lattice spec {part!r}')
    if kind == 'chain':
        return chain(int(arg))
    if kind == 'powerset':
        return powerset(int(arg))
    if kind == 'mn':
        return m_n(int(arg))
    if kind == 'file':
        with open(arg, encoding='utf-8') as fh:
            return read_cover_file(fh, label=f'file:{arg}')
    raise ValueError(f'unknown lattice kind {kind!r}')


# -- cover-relation text format ---------------------------------------------------


def read_cover_file(fh, label='cover-file'):
    '''Parse the cover-relation format: first line n, then "a b" edge lines.

    "#" starts a comment; blank lines are ignored.
    '''
    lines = []
    for raw in fh:
        line = raw.split('#', 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise NotALatticeError('empty cover-relation file')
    n = int(lines[0])
    edges = []
    for line in lines[1:]:
        a, b = line.split()
        edges.append((int(a), int(b)))
    return from_cover_relation(n, edges, label=label)


def write_cover_file(fh, lattice, comment=None):
    'Write a lattice in the cover-relation format; edges sorted lexicographically.'
    if comment:
        fh.write(f'# {comment}\n')
    fh.write(f'{lattice.n}\n')
    for a, b in sorted(lattice.cover_edges()):
        fh.write(f'{a} {b}\n')


# -- internals ---------------------------------------------------------------------


def _check_partial_order(leq):
    n = leq.shape[0]
    if not leq.diagonal().all():
        raise NotALatticeError('order is not reflexive')
    sym = leq & leq.T & ~np.eye(n, dtype=bool)
    if sym.any():
        a, b = np.argwhere(sym)[0]
        raise NotALatticeError(f'order is not antisymmetric at ({a}, {b})',
                               pair=(int(a), int(b)))
    if ((leq @ leq) & ~leq).any():
        raise NotALatticeError('order is not transitive')


def _tables_from_leq(leq):
    'Derive join/meet tables; lub(a, b) is the element whose up-set is up(a) & up(b).'
    n = leq.shape[0]
    up_id = {leq[i].tobytes(): i for i in range(n)}
    geq = np.ascontiguousarray(leq.T)
    dn_id = {geq[i].tobytes(): i for i in range(n)}
    jt = np.empty((n, n), dtype=np.int32)
    mt = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        up_i, dn_i = leq[i], geq[i]
        for j in range(i, n):
            lub = up_id.get((up_i & leq[j]).tobytes())
            if lub is None:
                raise NotALatticeError(f'elements {i} and {j} have no least upper bound',
                                       pair=(i, j))
            glb = dn_id.get((dn_i & geq[j]).tobytes())
            if glb is None:
                raise NotALatticeError(f'elements {i} and {j} have no greatest lower bound',
                                       pair=(i, j))
            jt[i, j] = jt[j, i] = lub
            mt[i, j] = mt[j, i] = glb
    return jt, mt


def _transitive_closure_matrix(rel):
    closed = rel.copy()
    while True:
        nxt = closed | (closed @ closed)
        if np.array_equal(nxt, closed):
            return nxt
        closed = nxt
