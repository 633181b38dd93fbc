import itertools
import re
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache

from sympy.utilities.iterables import multiset_permutations

from bquiver.align_utils import AlignmentClass, classify
from bquiver.forest_utils import (ZERO, Forest, ForestError, ForestSum, Leaf, Node, NotLabeled, bullet, encoding,
                                  erase, forest_key, format_forest, format_terms, left_spine, mirror, parse_forest,
                                  positions, relabel, replace_at, subtree_at)
from bquiver.word_utils import WordPoly, pi, pi_tree, wp_product


class OrbitError(ForestError):
    pass


class LengthZero(OrbitError):
    pass


class NotAdmissible(OrbitError):
    pass


def borbit_canonical(f):
    """
    Canonical representative of the B-orbit of a forest.

    The first tree is kept. Each later tree V is replaced by the smaller of
    V and its mirror image under `encoding`, then the later trees are sorted
    by the same encoding. Labels travel with their nodes.

    Examples
    --------
    >>> format_forest(borbit_canonical(parse_forest('4 (2 1)@1')))
    '4 (1 2)@1'
    """
    rest = [min(v, mirror(v), key=encoding) for v in f.trees[1:]]
    rest.sort(key=encoding)
    return Forest((f.trees[0],) + tuple(rest), check=False)


class BOrbit:
    """
    A B-orbit of forests, stored through its canonical representative.

    Parameters
    ----------
    forest : Forest
        Any member of the orbit.
    canonical : bool, optional
        Skip canonicalization when `forest` is known to be canonical.
    """
    __slots__ = ('rep', '_hash')

    def __init__(self, forest, canonical=False):
        self.rep = forest if canonical else borbit_canonical(forest)
        self._hash = hash(('borbit', self.rep))

    def __eq__(self, other):
        return isinstance(other, BOrbit) and other.rep == self.rep

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f'BOrbit({self})'

    def __str__(self):
        return f'[ {format_forest(self.rep)} ]B'

    def forests(self):
        '''The distinct forests of the orbit'''
        return _expand(self.rep)

    @property
    def size(self):
        return len(_expand(self.rep))

    @property
    def length(self):
        return self.rep.length

    @property
    def labeled(self):
        return self.rep.labeled


def parse_borbit(text):
    '''Parse "[ <forest> ]B" or a bare forest into a BOrbit'''
    m = re.fullmatch(r'\s*\[(.*)\]\s*B\s*', text)
    return BOrbit(parse_forest(m.group(1) if m else text))


def orbit_key(o):
    return forest_key(o.rep)


def aorbit_expand(trees):
    """
    All distinct rearrangements of a sequence of trees.

    Parameters
    ----------
    trees : sequence of Leaf or Node

    Returns
    -------
    list of tuple
        One tuple per distinct arrangement, the first one sorted by
        `encoding`.

    Examples
    --------
    >>> len(aorbit_expand([Leaf(1), Leaf(1), Leaf(2)]))
    3
    """
    trees = tuple(trees)
    if len(trees) < 2:
        return [trees]
    distinct = sorted(set(trees), key=encoding)
    index = {t: i for i, t in enumerate(distinct)}
    codes = sorted(index[t] for t in trees)
    return [tuple(distinct[i] for i in perm) for perm in multiset_permutations(codes)]


@lru_cache(maxsize=None)
def _expand(rep):
    first, rest = rep.trees[0], rep.trees[1:]
    choices = [sorted({v, mirror(v)}, key=encoding) for v in rest]
    out = set()
    for pick in itertools.product(*choices):
        for arrangement in aorbit_expand(pick):
            out.add(Forest((first,) + arrangement, check=False))
    return tuple(sorted(out, key=forest_key))


def borbit_expand(o):
    """
    The sum of the distinct forests of a B-orbit, each with coefficient one.

    Examples
    --------
    >>> len(borbit_expand(parse_borbit('[ 4 (1 2)@1 ]B')))
    2
    """
    if not isinstance(o, BOrbit):
        o = BOrbit(o)
    return ForestSum((f, 1) for f in o.forests())


def orbit_sum(orbits):
    '''Expand a {BOrbit: coefficient} map into a ForestSum'''
    out = ForestSum()
    for o, c in orbits.items():
        for f in o.forests():
            out.add(f, c)
    return out


def collect_orbits(fsum):
    """
    Express an orbit-invariant ForestSum in the B-orbit basis.

    The coefficient of an orbit is read off at its canonical representative.
    """
    out = {}
    for f, c in fsum.terms.items():
        if borbit_canonical(f) == f:
            out[BOrbit(f, canonical=True)] = c
    return out


def erase_scaling(f):
    """
    Index alpha with E([X]_A) = alpha [E(X)]_A.

    Returns
    -------
    Fraction
        Ratio of the A-orbit sizes of the labeled forest and of its erasure.
    """
    labeled = len(aorbit_expand(f.trees[1:]))
    unlabeled = len(aorbit_expand(erase(f).trees[1:]))
    return Fraction(labeled, unlabeled)


def erase_orbits(orbits):
    """
    Apply the erase map to a {BOrbit: coefficient} map of labeled orbits.

    Each labeled orbit sum maps onto a multiple of the orbit sum of its
    erased representative, the multiple being the ratio of orbit sizes.
    """
    out = defaultdict(Fraction)
    for o, c in orbits.items():
        target = BOrbit(erase(o.rep))
        out[target] += c * Fraction(o.size, target.size)
    return {o: c for o, c in out.items() if c != 0}


def delta_step(f):
    """
    One step of the delta recursion on a labeled forest.

    Parameters
    ----------
    f : Forest
        A labeled forest of positive length.

    Returns
    -------
    ForestSum
        If the node labeled 1 is the root of the first tree U, the two terms
        U1 U2 V... and -U1 mirror(U2) V...; if it is the root of a later
        tree Vi, the two terms with Vi split into Vi1 Vi2 and -Vi2 Vi1. All
        labels are decremented by one.

    Raises
    ------
    LengthZero
        If the forest has no nodes.
    NotLabeled
        If the forest is unlabeled.
    """
    if f.length == 0:
        raise LengthZero(f'{format_forest(f)} has length zero')
    if f.labeled is False:
        raise NotLabeled(f"{format_forest(f)} is not labeled")
    index = next(i for i, t in enumerate(f.trees) if t.label == 1)
    trees = [relabel(t, -1) if not t.is_leaf and t.label != 1 else t for t in f.trees]
    top = f.trees[index]
    left, right = relabel(top.left, -1), relabel(top.right, -1)
    before, after = tuple(trees[:index]), tuple(trees[index + 1:])
    out = ForestSum()
    if index == 0:
        out.add(Forest((left, right) + after), 1)
        out.add(Forest((left, mirror(right)) + after), -1)
    else:
        out.add(Forest(before + (left, right) + after), 1)
        out.add(Forest(before + (right, left) + after), -1)
    return out


def delta_iterate(f):
    '''Delta by iterating delta_step down to length zero, then applying pi'''
    current = ForestSum([(f, 1)])
    for _ in range(f.length):
        nxt = ForestSum()
        for g, c in current.terms.items():
            for h, d in delta_step(g).terms.items():
                nxt.add(h, c * d)
        current = nxt
    return pi(current)


def delta_forest(f):
    """
    Closed form of delta on a single forest.

    With U the first tree of depth m and V1, ..., Vj the others, delta is the
    product pi(U_{1^m}) (2 pi(U_{1^{m-1}2})) ... (2 pi(U_2)) pi(V1) ... pi(Vj)
    when every right child along the left spine of U has odd length, and zero
    otherwise. Labels are ignored.

    Examples
    --------
    >>> str(delta_forest(parse_forest('(1 (1 5)@2)@1')))
    '2*[1,1,5] - 2*[1,5,1]'
    """
    if f.labeled:
        f = erase(f)
    rights, bottom = left_spine(f.trees[0])
    if any(r.length % 2 == 0 for r in rights):
        return WordPoly()
    factors = [pi_tree(bottom)]
    factors.extend(pi_tree(r).scale(2) for r in reversed(rights))
    factors.extend(pi_tree(v) for v in f.trees[1:])
    return wp_product(factors)


def delta_borbit(o):
    """
    Delta of the sum of the distinct forests of a B-orbit.

    Parameters
    ----------
    o : BOrbit or Forest

    Returns
    -------
    WordPoly
        2^(r+m) pi(U_{1^m} U_{1^{m-1}2} ... U_2 [V1 ... Vj]_A) where r counts
        the later trees of positive length, or zero unless every right child
        along the spine has odd length and every later tree even length.
    """
    if not isinstance(o, BOrbit):
        o = BOrbit(o)
    rep = erase(o.rep) if o.rep.labeled else o.rep
    rights, bottom = left_spine(rep.trees[0])
    rest = rep.trees[1:]
    if any(r.length % 2 == 0 for r in rights) or any(v.length % 2 for v in rest):
        return WordPoly()
    # arrangements are taken on the labeled trees, pi ignores the labels
    arrangements = WordPoly()
    for arrangement in aorbit_expand(o.rep.trees[1:]):
        arrangements = arrangements + wp_product(pi_tree(_unlabel(v)) for v in arrangement)
    r = sum(1 for v in rest if v.length > 0)
    head = wp_product([pi_tree(bottom)] + [pi_tree(t) for t in reversed(rights)])
    return (head * arrangements).scale(2 ** (r + len(rights)))


def _unlabel(tree):
    if tree.is_leaf or tree.label is None:
        return tree
    return Node(_unlabel(tree.left), _unlabel(tree.right))


def delta(x):
    """
    Delta of a forest, a ForestSum or a {BOrbit: coefficient} map.

    Returns
    -------
    WordPoly
    """
    out = WordPoly()
    if isinstance(x, Forest):
        return delta_forest(x)
    if isinstance(x, BOrbit):
        return delta_borbit(x)
    if isinstance(x, ForestSum):
        for f, c in x.terms.items():
            out = out + delta_forest(f).scale(c)
        return out
    for o, c in x.items():
        out = out + delta_borbit(o).scale(c)
    return out


def _sim_slots(trees):
    # even-length subtrees off the left spine of the first tree
    slots = []
    for i, tree in enumerate(trees):
        for pos, sub in positions(tree):
            if i == 0 and set(pos) <= {'1'}:
                continue
            if sub.length % 2 == 0:
                slots.append((i, pos, sub))
    return slots


def _parent_label(trees, i, pos):
    if not pos:
        return None
    return subtree_at(trees[i], pos[:-1]).label


def _replace(trees, changes):
    trees = list(trees)
    for i, pos, new in changes:
        trees[i] = replace_at(trees[i], pos, new)
    return Forest(trees)


def _moves(f):
    trees = f.trees
    slots = _sim_slots(trees)
    for i, pos, sub in slots:
        if sub.length > 0:
            yield _replace(trees, [(i, pos, mirror(sub))])
    for a, b in itertools.combinations(slots, 2):
        (i, p, u), (k, q, v) = a, b
        if u.value != v.value or u == v:
            continue
        if i == k and (p.startswith(q) or q.startswith(p)):
            continue
        parents = [x for x in (_parent_label(trees, i, p), _parent_label(trees, k, q)) if x is not None]
        labels = [x for x in (u.label, v.label) if x is not None]
        if any(pl >= nl for pl in parents for nl in labels):
            continue
        yield _replace(trees, [(i, p, v), (k, q, u)])


def sim_closure(f):
    """
    All B-orbits related to a labeled admissible forest by the moves.

    The moves are: mirror an even-length subtree off the left spine of the
    first tree; exchange two such subtrees of equal squash when the labels
    of both parents are smaller than the labels of both subtrees; permute
    the later trees. The closure is a fixpoint over canonical forms.

    Parameters
    ----------
    f : Forest
        An admissible labeled forest.

    Returns
    -------
    set of BOrbit

    Raises
    ------
    NotAdmissible
        If the underlying unlabeled forest is not admissible.
    """
    if classify(erase(f)) < AlignmentClass.Admissible:
        raise NotAdmissible(f'{format_forest(f)} is not admissible')
    start = borbit_canonical(f)
    seen = {start}
    frontier = [start]
    while frontier:
        x = frontier.pop()
        for y in _moves(x):
            c = borbit_canonical(y)
            if c not in seen:
                seen.add(c)
                frontier.append(c)
    return {BOrbit(c, canonical=True) for c in seen}


def borbit_bullet(x, y):
    """
    Product of two combinations of B-orbit sums, in the B-orbit basis.

    Parameters
    ----------
    x, y : dict
        Maps BOrbit -> coefficient.

    Returns
    -------
    dict
        Maps BOrbit -> coefficient. The product of orbit sums is again orbit
        invariant, so only the products that land on a canonical
        representative are accumulated.
    """
    by_squash = defaultdict(list)
    for oy, cy in y.items():
        for fy in oy.forests():
            by_squash[fy.squash].append((fy, cy))
    out = defaultdict(Fraction)
    for ox, cx in x.items():
        for fx in ox.forests():
            for fy, cy in by_squash.get(fx.foliage, ()):
                z = bullet(fx, fy)
                if z is not ZERO and borbit_canonical(z) == z:
                    out[BOrbit(z, canonical=True)] += cx * cy
    return {o: c for o, c in out.items() if c != 0}


def edge_tree(a, b, c):
    '''The labeled tree (a (b c)@2)@1'''
    return Node(Leaf(a), Node(Leaf(b), Leaf(c), 2), 1)


def green_edge(q0, a, b, c, rest=()):
    """
    The cyclic three-term combination of (Q2)-shaped B-orbits.

    [q0 (a (b c)) q]_B + [q0 (b (c a)) q]_B + [q0 (c (a b)) q]_B lies in the
    kernel of delta.
    """
    tail = tuple(Leaf(p) for p in rest)
    out = defaultdict(Fraction)
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        out[BOrbit(Forest((Leaf(q0), edge_tree(x, y, z)) + tail))] += 1
    return dict(out)


def green_arrow_swap(a, b, c, rest=()):
    '''[(a (c b)) q]_B + [(a (b c)) q]_B, which lies in the kernel of delta'''
    tail = tuple(Leaf(p) for p in rest)
    out = defaultdict(Fraction)
    out[BOrbit(Forest((edge_tree(a, b, c),) + tail))] += 1
    out[BOrbit(Forest((edge_tree(a, c, b),) + tail))] += 1
    return dict(out)


def format_orbits(orbits):
    '''Print a {BOrbit: coefficient} map'''
    items = sorted(orbits.items(), key=lambda item: orbit_key(item[0]))
    return format_terms([(c, o) for o, c in items], str)
