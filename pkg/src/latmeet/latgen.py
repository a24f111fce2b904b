'''Lattice generation by augmentation.

A lattice relation grows two ways: an edge augmentation adds order pairs and
closes transitively; a node augmentation adds a fresh element wedged between
two existing ones.  Exhaustive generation walks node steps then single-pair
edge steps, deduplicating up to isomorphism; random generation walks the same
steps with a seeded generator.  The conjecture hunt compares endomorphism
counts across distributive single-pair augmentations.

Free pairs are computed from the definition: (a,b) with a not below b whose
single-pair closure is still a lattice relation.  `free_pairs_bowtie` is a
structural shortcut whose correctness is unproven; it exists to be compared
against the definition, not relied on.
'''
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .endo import count_join_endomorphisms
from .errors import (AntisymmetryError, AugmentationError, BudgetExceededError,
                     OutOfRangeError, SizeUnreachableError)
from .lattice import Lattice, chain, from_leq

GENERATION_CAP = 8
RANDOM_DRAW_CAP = 64


class OrderRelation:
    'A reflexive antisymmetric boolean relation; transitivity is on demand.'

    __slots__ = ('matrix',)

    def __init__(self, matrix, check=True):
        m = np.array(matrix, dtype=bool)
        if check:
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError('relation matrix must be square')
            if not m.diagonal().all():
                raise ValueError('relation must be reflexive')
            if (m & m.T & ~np.eye(len(m), dtype=bool)).any():
                raise AntisymmetryError('relation must be antisymmetric')
        m.setflags(write=False)
        self.matrix = m

    @property
    def n(self):
        return self.matrix.shape[0]

    def le(self, a, b):
        return bool(self.matrix[a, b])

    def __eq__(self, other):
        return (isinstance(other, OrderRelation)
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        return f'OrderRelation(n={self.n})'


@dataclass(frozen=True)
class EdgeStep:
    pairs: frozenset

    def __init__(self, pairs):
        object.__setattr__(self, 'pairs', frozenset(pairs))


@dataclass(frozen=True)
class NodeStep:
    below: int
    above: int


@dataclass(frozen=True)
class MixedStep:
    node: NodeStep
    edge: EdgeStep


def transitive_closure(rel):
    'Close under composition; a 2-cycle in the closure is an error.'
    m = rel.matrix.copy()
    while True:
        nxt = m | (m @ m)
        if np.array_equal(nxt, m):
            break
        m = nxt
    if (m & m.T & ~np.eye(len(m), dtype=bool)).any():
        raise AntisymmetryError('transitive closure creates a cycle')
    return OrderRelation(m, check=False)


def is_lattice_relation(rel):
    '''True when rel is a complete lattice relation: a transitive partial
    order in which every pair has a unique least upper and greatest lower
    bound (top and bottom follow).'''
    m = rel.matrix
    if ((m @ m) & ~m).any():
        return False
    try:
        Lattice(m, check=False)
    except Exception:
        return False
    return True


def to_lattice(rel, label='generated'):
    return from_leq(rel.matrix, label=label)


def relation_of(lattice):
    return OrderRelation(lattice.leq, check=False)


def free_pairs(rel):
    '''All ordered pairs (a,b), a not below b, whose single-pair closure is
    still a lattice relation.  Computed by doing exactly that.'''
    out = []
    for a in range(rel.n):
        for b in range(rel.n):
            if a != b and not rel.le(a, b) and _closes_to_lattice(rel, a, b):
                out.append((a, b))
    return out


def _closes_to_lattice(rel, a, b):
    m = rel.matrix.copy()
    m.setflags(write=True)
    m[a, b] = True
    try:
        closed = transitive_closure(OrderRelation(m, check=False))
    except AntisymmetryError:
        return False
    return is_lattice_relation(closed)


def free_pairs_bowtie(rel):
    '''The structural characterization: (a,b) incomparable with no witness
    pair x strictly below b and y strictly above a such that x is strictly
    below y but x is not below a and b is not below y.  Unproven; compare
    against free_pairs.'''
    m = rel.matrix
    lt = m & ~np.eye(rel.n, dtype=bool)
    out = []
    for a in range(rel.n):
        for b in range(rel.n):
            if a == b or rel.le(a, b) or rel.le(b, a):
                continue
            xs = lt[:, b] & ~lt[:, a]
            ys = lt[a, :] & ~lt[b, :]
            if not (lt & np.outer(xs, ys)).any():
                out.append((a, b))
    return out


def augment(rel, step):
    'Apply an augmentation step; the closed result must be a lattice relation.'
    if isinstance(step, EdgeStep):
        m = rel.matrix.copy()
        m.setflags(write=True)
        for a, b in step.pairs:
            m[a, b] = True
        return _close_checked(m, step)
    if isinstance(step, NodeStep):
        n = rel.n
        if not (0 <= step.below < n and 0 <= step.above < n):
            raise AugmentationError(f'node step endpoints out of range: {step}')
        m = np.zeros((n + 1, n + 1), dtype=bool)
        m[:n, :n] = rel.matrix
        m[n, n] = True
        m[step.below, n] = True
        m[n, step.above] = True
        return _close_checked(m, step)
    if isinstance(step, MixedStep):
        return augment(augment(rel, step.node), step.edge)
    raise TypeError(f'not an augmentation step: {step!r}')


def _close_checked(matrix, step):
    try:
        closed = transitive_closure(OrderRelation(matrix, check=False))
    except AntisymmetryError as exc:
        raise AugmentationError(f'{step} creates a cycle') from exc
    if not is_lattice_relation(closed):
        raise AugmentationError(f'{step} does not yield a lattice relation')
    return closed


def node_steps(rel):
    'All valid node augmentation steps of rel.'
    out = []
    for a in range(rel.n):
        for b in range(rel.n):
            if a == b:
                continue
            step = NodeStep(a, b)
            try:
                augment(rel, step)
            except AugmentationError:
                continue
            out.append(step)
    return out


def canonical_key(rel):
    '''A relabelling-invariant encoding of the order.

    Elements get structural colors (down-set size, up-set size, cover
    degrees) refined by repeated neighbor-profile hashing-free interning;
    the key is the minimum order-matrix byte string over all permutations
    that respect the final color classes.'''
    m = rel.matrix
    n = rel.n
    lt = m & ~np.eye(n, dtype=bool)
    covers = lt & ~(lt @ lt)
    colors = [
        (int(m[:, i].sum()), int(m[i, :].sum()),
         int(covers[:, i].sum()), int(covers[i, :].sum()))
        for i in range(n)
    ]
    colors = _intern(colors)
    while True:
        refined = [
            (colors[i],
             tuple(sorted(colors[j] for j in range(n) if covers[j, i])),
             tuple(sorted(colors[j] for j in range(n) if covers[i, j])))
            for i in range(n)
        ]
        refined = _intern(refined)
        if refined == colors:
            break
        colors = refined
    classes = {}
    for i, c in enumerate(colors):
        classes.setdefault(c, []).append(i)
    groups = [classes[c] for c in sorted(classes)]
    best = None
    for perm_parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = [i for part in perm_parts for i in part]
        key = m[np.ix_(order, order)].tobytes()
        if best is None or key < best:
            best = key
    return best


def _intern(values):
    table = {v: i for i, v in enumerate(sorted(set(values)))}
    return [table[v] for v in values]


def generate_all_lattices(n_max):
    '''Every lattice of each size up to n_max, one per isomorphism class.

    Sizes 1 and 2 have a single lattice each and are seeded directly (a node
    step needs two distinct endpoints, so nothing grows out of one element).
    Each larger size is the closure of the previous size's node steps under
    single free-pair edge steps, deduplicated by canonical key.'''
    if n_max > GENERATION_CAP:
        raise BudgetExceededError(f'generation capped at {GENERATION_CAP} elements')
    if n_max < 1:
        raise OutOfRangeError(f'n_max must be positive, got {n_max}')
    by_size = {1: [relation_of(chain(1))]}
    if n_max >= 2:
        by_size[2] = [relation_of(chain(2))]
    for size in range(3, n_max + 1):
        found = {}
        queue = []
        for rel in by_size[size - 1]:
            for step in node_steps(rel):
                grown = augment(rel, step)
                key = canonical_key(grown)
                if key not in found:
                    found[key] = grown
                    queue.append(grown)
        while queue:
            rel = queue.pop()
            for pair in free_pairs(rel):
                grown = augment(rel, EdgeStep([pair]))
                key = canonical_key(grown)
                if key not in found:
                    found[key] = grown
                    queue.append(grown)
        by_size[size] = [found[key] for key in sorted(found)]
    return {
        size: [to_lattice(rel, label=f'gen:{size}:{i}')
               for i, rel in enumerate(rels)]
        for size, rels in by_size.items()
    }


def random_lattice(n, seed=None):
    '''A random lattice of exactly n elements.

    Walks augmentation steps from the 2-chain: below the target size, draw
    uniformly among applicable steps (node steps and free-pair edge steps,
    realized by rejection sampling over candidate pairs); once the target
    size is reached, apply extra free-pair edge steps, each with
    probability 1/2.  Valid by construction, not uniform over lattices.'''
    if n < 1:
        raise OutOfRangeError(f'n must be positive, got {n}')
    rng = random.Random(seed)
    if n == 1:
        return chain(1)
    rel = relation_of(chain(2))
    while rel.n < n:
        rel = _random_step(rel, rng)
    while rng.random() < 0.5:
        pairs = free_pairs(rel)
        if not pairs:
            break
        rel = augment(rel, EdgeStep([rng.choice(pairs)]))
    return to_lattice(rel, label=f'random:{n}')


def _random_step(rel, rng):
    node_candidates = [(a, b) for a in range(rel.n) for b in range(rel.n) if a != b]
    edge_candidates = [(a, b) for a, b in node_candidates
                       if not rel.le(a, b) and not rel.le(b, a)]
    candidates = ([('node', p) for p in node_candidates]
                  + [('edge', p) for p in edge_candidates])
    for _ in range(RANDOM_DRAW_CAP * rel.n):
        kind, (a, b) = rng.choice(candidates)
        step = NodeStep(a, b) if kind == 'node' else EdgeStep([(a, b)])
        try:
            return augment(rel, step)
        except AugmentationError:
            continue
    steps = node_steps(rel) + [EdgeStep([p]) for p in free_pairs(rel)]
    return augment(rel, rng.choice(steps))


def random_distributive_lattice(n, seed=None, strict=False, attempts=200):
    '''A random distributive lattice of exactly n elements.

    Samples a random poset on k points and takes its lattice of down-sets,
    retrying k and the poset until the size lands on n.  A chain poset of
    n - 1 points always gives exactly n down-sets, so after `attempts`
    random posets the sampler falls back to that (or errors under strict
    mode).  Distributivity is verified on the result.'''
    if n < 1:
        raise OutOfRangeError(f'n must be positive, got {n}')
    rng = random.Random(seed)
    if n == 1:
        return chain(1)
    k_lo = (n - 1).bit_length()
    k_hi = min(n - 1, k_lo + 10)
    for _ in range(attempts):
        k = rng.randint(k_lo, k_hi)
        poset = _random_poset(k, rng)
        masks = _downset_masks(poset)
        if len(masks) == n:
            return _downset_lattice(masks, n)
    if strict:
        raise SizeUnreachableError(
            f'no sampled poset produced a {n}-element down-set lattice')
    return _downset_lattice(_downset_masks(_chain_poset(n - 1)), n)


def _random_poset(k, rng):
    m = np.eye(k, dtype=bool)
    density = rng.random()
    for i in range(k):
        for j in range(i + 1, k):
            if rng.random() < density:
                m[i, j] = True
    return transitive_closure(OrderRelation(m, check=False)).matrix


def _chain_poset(k):
    m = np.ones((k, k), dtype=bool)
    return np.triu(m)


def _downset_masks(poset):
    'Every down-set of the poset as a bitmask, grown from the empty set.'
    k = len(poset)
    below = [sum(1 << i for i in range(k) if poset[i, j]) for j in range(k)]
    masks = [0]
    seen = {0}
    for mask in masks:
        for j in range(k):
            if mask >> j & 1:
                continue
            grown = mask | below[j]
            if grown not in seen:
                seen.add(grown)
                masks.append(grown)
    return sorted(masks)


def _downset_lattice(masks, n):
    index = {m: i for i, m in enumerate(masks)}
    leq = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(masks):
        for j, b in enumerate(masks):
            leq[i, j] = a & ~b == 0
    lat = Lattice(leq, label=f'downsets:{n}', check=False)
    assert lat.is_distributive()
    return lat


@dataclass
class ConjectureReport:
    n_max: int
    pairs_checked: int
    counterexample: tuple | None

    @property
    def exhausted(self):
        return self.counterexample is None


CONJECTURE_CAP = 10


def conjecture_search(n_max=6, seed=None, budget=10 ** 8):
    '''Hunt for a distributive lattice whose distributive edge augmentation
    does NOT strictly increase the number of join-endomorphisms.

    An edge augmentation of a relation is exactly a lattice relation that
    strictly contains it (close the union with the target and the target
    comes back), and any containment pair can be relabelled so both sides
    are upper triangular.  So the search enumerates all upper-triangular
    lattice relations per size, keeps the distributive ones, and compares
    endomorphism counts across every strict-containment pair.  Exhaustive,
    so `seed` is accepted for interface parity but unused.  Returns the
    lexicographically first offending (before, after, added pairs, count
    before, count after), or an exhaustion report.'''
    del seed
    if n_max > CONJECTURE_CAP:
        raise BudgetExceededError(f'conjecture search capped at {CONJECTURE_CAP}')
    checked = 0
    for size in range(2, n_max + 1):
        dist = []
        for pred in _ut_lattice_preds(size):
            lat = Lattice(_pred_to_leq(pred, size), check=False)
            if lat.is_distributive():
                dist.append((pred, lat))
        counts = {pred: count_join_endomorphisms(lat, budget) for pred, lat in dist}
        for p1, before_lat in dist:
            for p2, after_lat in dist:
                if p1 == p2 or any(a & ~b for a, b in zip(p1, p2)):
                    continue
                checked += 1
                if counts[p2] <= counts[p1]:
                    added = tuple(
                        (i, j)
                        for j in range(size)
                        for i in range(j)
                        if p2[j] >> i & 1 and not p1[j] >> i & 1)
                    before_lat.label = f'conjecture:{size}:before'
                    after_lat.label = f'conjecture:{size}:after'
                    return ConjectureReport(
                        n_max, checked,
                        (before_lat, after_lat, added, counts[p1], counts[p2]))
    return ConjectureReport(n_max, checked, None)


def _ut_lattice_preds(n):
    '''Every lattice relation on 0..n-1 in which the element order is a
    linear extension, produced as tuples of strict-predecessor bitmasks.

    Element 0 is forced to be the bottom and element n-1 the top.  A new
    element's predecessor set must be down-closed, and each pair (i, new)
    must have a greatest lower bound among the elements so far; later
    elements are never below earlier ones, so pairwise meets (and, given
    the top, joins) of the final relation are exactly those established
    here.  Every isomorphism class appears at least once.'''
    if n == 1:
        yield (0,)
        return

    def downsets(down):
        k = len(down)
        masks = [1]
        seen = {1}
        for mask in masks:
            for j in range(1, k):
                if not mask >> j & 1:
                    grown = mask | down[j]
                    if grown not in seen:
                        seen.add(grown)
                        masks.append(grown)
        return masks

    def rec(pred, down):
        k = len(pred)
        if k == n:
            yield tuple(pred)
            return
        choices = downsets(down) if k < n - 1 else [(1 << k) - 1]
        for d in choices:
            dj = d | (1 << k)
            for i in range(k):
                common = down[i] & dj
                if common & ~down[common.bit_length() - 1]:
                    break
            else:
                pred.append(d)
                down.append(dj)
                yield from rec(pred, down)
                pred.pop()
                down.pop()

    yield from rec([0], [1])


def _pred_to_leq(pred, n):
    leq = np.eye(n, dtype=bool)
    for j, mask in enumerate(pred):
        for i in range(j):
            leq[i, j] = bool(mask >> i & 1)
    return leq
