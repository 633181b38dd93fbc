import itertools
from collections import defaultdict
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache

from bquiver.forest_utils import (Forest, ForestError, ForestSum, Leaf, MissingPosition, Node, bullet, depth,
                                  erase, erase_tree, format_forest, format_tree, left_spine, parity, subtree_at)


class AlignmentError(ForestError):
    pass


class NotOddLength(AlignmentError):
    pass


class NotEvenLength(AlignmentError):
    pass


class NotComparable(AlignmentError):
    pass


class NotRightAligned(AlignmentError):
    pass


class ShapeMismatch(AlignmentError):
    pass


class AlignmentClass(IntEnum):
    '''Nested alignment classes, a larger value is a stronger condition'''
    NotEven = 0
    Even = 1
    Admissible = 2
    RightAligned = 3
    StronglyRightAligned = 4


def _inner_nodes(tree, parent_label=0):
    # (node, label of its parent) for every node of the tree
    if tree.is_leaf:
        return
    yield tree, parent_label
    yield from _inner_nodes(tree.left, tree.label or 0)
    yield from _inner_nodes(tree.right, tree.label or 0)


def _strong_tie(a, b):
    return a.value == b.value and not (a.is_leaf and b.is_leaf)


def _grade(nodes, labeled):
    has_odd_pair = fails_right = fails_strong = False
    for v, parent_label in nodes:
        p = parity(v)
        if p == (1, 1):
            has_odd_pair = True
        elif p == (1, 0):
            fails_right = True
        elif p == (0, 0):
            if v.left.value >= v.right.value:
                fails_right = True
            if labeled and v.label != parent_label + 1:
                fails_right = True
        else:
            z1, z21, z22 = v.left, v.right.left, v.right.right
            if z1.value > z22.value:
                fails_right = True
            elif _strong_tie(z1, z21) or _strong_tie(z1, z22):
                fails_strong = True
    if has_odd_pair:
        return AlignmentClass.Even
    if fails_right:
        return AlignmentClass.Admissible
    if fails_strong:
        return AlignmentClass.RightAligned
    return AlignmentClass.StronglyRightAligned


def classify_tree(tree):
    """
    Alignment class of a single tree, every node subject to the conditions.

    Returns
    -------
    AlignmentClass
        NotEven for odd length; Even if a node has parity (1,1); Admissible
        if some node violates the right alignment conditions; RightAligned if
        only the strong conditions fail.
    """
    if tree.length % 2:
        return AlignmentClass.NotEven
    return _grade(_inner_nodes(tree), tree.labeled)


def classify(f):
    """
    Alignment class of a forest.

    Parameters
    ----------
    f : Forest
        Labeled or unlabeled.

    Returns
    -------
    AlignmentClass

    Notes
    -----
    Function Name: classify
    The leftmost nodes of a forest are the nodes in positions 1^i, i >= 0,
    of its first tree U, the root of U included. The forest is even when its
    leftmost nodes and its later trees have even length. The squash
    conditions are checked on every node that is not leftmost: a node of
    parity (0,0) needs squash(Z1) < squash(Z2), a node of parity (0,1) needs
    squash(Z1) <= squash(Z22), and strongly right aligned further forbids
    squash(Z1) = squash(Z21) or squash(Z1) = squash(Z22) unless both trees
    are leaves. Labeled forests also need every (0,0) node to carry the
    label of its parent plus one.

    Examples
    --------
    >>> classify(parse_forest('3 4'))
    <AlignmentClass.StronglyRightAligned: 4>
    """
    first = f.trees[0]
    rights, _ = left_spine(first)
    spine_lengths = [first.length]
    t = first
    while not t.is_leaf:
        t = t.left
        spine_lengths.append(t.length)
    if any(x % 2 for x in spine_lengths) or any(v.length % 2 for v in f.trees[1:]):
        return AlignmentClass.NotEven
    nodes = []
    t = first
    for r in rights:
        nodes.extend(_inner_nodes(r, t.label or 0))
        t = t.left
    for v in f.trees[1:]:
        nodes.extend(_inner_nodes(v))
    return _grade(nodes, bool(f.labeled))


def _add(out, tree, coeff):
    if coeff:
        out[tree] += coeff


def _result(out):
    return tuple((t, c) for t, c in out.items() if c != 0)


def _as_sum(items):
    return ForestSum((Forest((t,), check=False), c) for t, c in items)


@lru_cache(maxsize=None)
def _odd(v):
    left, right = v.left, v.right
    if left == right:
        return ()
    if left.value > right.value:
        return tuple((t, -c) for t, c in _odd(Node(right, left)))
    out = defaultdict(Fraction)
    if left.length % 2:
        # both children odd: [[X,Y],W] = [X,[Y,W]] - [Y,[X,W]]
        for t, c in _odd(left):
            x, y = t.left, t.right
            for u, d in _odd(Node(x, Node(y, right))):
                _add(out, u, c * d)
            for u, d in _odd(Node(y, Node(x, right))):
                _add(out, u, -c * d)
        return _result(out)
    if left.value < right.value:
        return ((v, Fraction(1)),)
    # both children even with equal squash
    sign = 1
    if right.is_leaf:
        left, right, sign = right, left, -1
    b, w = right.left, right.right
    if w.length % 2 == 0:
        b, w, sign = w, b, -sign
    a = left
    # [A,[B,[C,D]]] = -[D,[C,[B,A]]] + [C,[D,[B,A]]] - [B,[[C,D],A]]
    for t, c in _odd(w):
        cc, dd = t.left, t.right
        _add(out, Node(dd, Node(cc, Node(b, a))), -sign * c)
        _add(out, Node(cc, Node(dd, Node(b, a))), sign * c)
        _add(out, Node(b, Node(Node(cc, dd), a)), -sign * c)
    return _result(out)


def _unlabeled(tree):
    return erase_tree(tree) if tree.labeled else tree


def odd_align(tree):
    """
    Rewrite a tree of odd length modulo the kernel of pi.

    Parameters
    ----------
    tree : Leaf or Node
        An unlabeled tree of odd length.

    Returns
    -------
    ForestSum
        Single-tree forests whose children have even length and strictly
        increasing squash, with the same image under pi as `tree`.

    Raises
    ------
    NotOddLength
        If `tree` has even length.

    Examples
    --------
    >>> str(odd_align(parse_tree('(2 1)')))
    '-1 * (1 2)'
    """
    tree = _unlabeled(tree)
    if tree.length % 2 == 0:
        raise NotOddLength(f'{format_tree(tree)} has even length')
    return _as_sum(_odd(tree))


@lru_cache(maxsize=None)
def _even(v):
    if v.is_leaf:
        return ((v, Fraction(1)),)
    left, right, sign = v.left, v.right, 1
    if left.length % 2:
        left, right, sign = right, left, -1
    out = defaultdict(Fraction)
    for t, c in _odd(right):
        a, b = t.left, t.right
        if left.value > b.value:
            # [V1,[A,B]] = [B,[A,V1]] - [A,[B,V1]]
            parts = [(1, b, a, left), (-1, a, b, left)]
        else:
            parts = [(1, left, a, b)]
        for s, p, q, r in parts:
            for (tp, cp), (tq, cq), (tr, cr) in itertools.product(_even(p), _even(q), _even(r)):
                _add(out, Node(tp, Node(tq, tr)), sign * s * c * cp * cq * cr)
    return _result(out)


def even_align(tree):
    """
    Rewrite a tree of even length as a combination of right aligned trees
    with the same image under pi.

    Raises
    ------
    NotEvenLength
        If `tree` has odd length.
    """
    tree = _unlabeled(tree)
    if tree.length % 2:
        raise NotEvenLength(f'{format_tree(tree)} has odd length')
    return _as_sum(_even(tree))


def _ad_terms(n):
    # ad of N = (A (B C)) as signed triples: Y -> sum s [X1,[X2,[X3,Y]]]
    a, b, c = n.left, n.right.left, n.right.right
    return ((1, a, b, c), (-1, a, c, b), (-1, b, c, a), (1, c, b, a))


def _nest(out, coeff, x1, x2, inner):
    # terms of coeff * (x1 (x2 inner)) with inner strongly aligned
    for t, c in _strong(inner):
        _add(out, Node(x1, Node(x2, t)), coeff * c)


def _fix_top(p, q, r):
    # p, q, r strongly right aligned with p <= r and q < r in squash
    if not _strong_tie(p, q) and not _strong_tie(p, r):
        return ((Node(p, Node(q, r)), Fraction(1)),)
    out = defaultdict(Fraction)
    # a tie on a tree p: unfold p and push Q, R one level down
    if not p.is_leaf:
        for s, x1, x2, x3 in _ad_terms(p):
            _nest(out, s, x1, x2, Node(x3, Node(q, r)))
    elif _strong_tie(p, q):
        _leaf_ad(out, 1, p, q, r)
    else:
        # [p,[Q,R]] = [R,[Q,p]] + [Q,[p,R]]
        for s, x1, x2, x3 in _ad_terms(r):
            _nest(out, s, x1, x2, Node(x3, Node(q, p)))
        if not q.is_leaf:
            for s, x1, x2, x3 in _ad_terms(q):
                _nest(out, s, x1, x2, Node(x3, Node(p, r)))
        else:
            for s, x1, x2, x3 in _ad_terms(r):
                inner = Node(x2, Node(x3, p))
                if _strong_tie(q, x1):
                    _leaf_ad(out, -s, q, x1, inner)
                else:
                    for t, c in _strong(inner):
                        _add(out, Node(q, Node(x1, t)), -s * c)
    return _result(out)


def _leaf_ad(out, coeff, p, n, w):
    # coeff * [p,[N,W]] with p a leaf, expanded as [p, ad_N(W)]
    for s, x1, x2, x3 in _ad_terms(n):
        for t, c in _strong(Node(x2, Node(x3, w))):
            _add(out, Node(p, Node(x1, t)), coeff * s * c)


@lru_cache(maxsize=None)
def _strong_right(v):
    # v is right aligned
    if v.is_leaf:
        return ((v, Fraction(1)),)
    out = defaultdict(Fraction)
    # children first, then the top node
    pieces = (_strong_right(v.left), _strong_right(v.right.left), _strong_right(v.right.right))
    for (p, cp), (q, cq), (r, cr) in itertools.product(*pieces):
        for t, c in _fix_top(p, q, r):
            _add(out, t, cp * cq * cr * c)
    return _result(out)


@lru_cache(maxsize=None)
def _strong(v):
    # right align, then remove the squash ties node by node
    out = defaultdict(Fraction)
    for t, c in _even(v):
        for u, d in _strong_right(t):
            _add(out, u, c * d)
    return _result(out)


def strong_align(tree):
    """
    Rewrite a tree of even length as a combination of strongly right
    aligned trees with the same image under pi.

    Parameters
    ----------
    tree : Leaf or Node
        An unlabeled tree of even length.

    Returns
    -------
    ForestSum

    Raises
    ------
    NotEvenLength
        If `tree` has odd length.

    Notes
    -----
    Function Name: strong_align
    The tree is first right aligned with even_align. Each right aligned
    term (P (Q R)) is then repaired bottom-up: when squash(P) ties with
    squash(Q) or squash(R) and the pair is not two leaves, the term is
    expanded with the four-term identity
    [[A,[B,C]],Y] = [A,[B,[C,Y]]] - [A,[C,[B,Y]]] - [B,[C,[A,Y]]] + [C,[B,[A,Y]]]
    around whichever of P, Q, R has positive length. Every recursive call is
    on a strictly shorter tree.
    """
    tree = _unlabeled(tree)
    if tree.length % 2:
        raise NotEvenLength(f'{format_tree(tree)} has odd length')
    return _as_sum(_strong(tree))


def _aligned_right_children(r):
    # odd_align, then strong_align both children of every term
    out = defaultdict(Fraction)
    for t, c in _odd(r):
        for (a, ca), (b, cb) in itertools.product(_strong(t.left), _strong(t.right)):
            _add(out, Node(a, b), c * ca * cb)
    return _result(out)


def render_unlabeled(f):
    """
    Strongly right aligned rendering of a forest, modulo the kernel of delta.

    Parameters
    ----------
    f : Forest
        Labeled or unlabeled; labels are erased first.

    Returns
    -------
    ForestSum
        Unlabeled strongly right aligned forests with the same image under
        delta as `f`, read on B-orbits with the weights used by
        relation_utils.render_orbits; the empty sum
        when a right child along the left spine has even length or a later
        tree has odd length.

    Notes
    -----
    The comparison is between orbit sums. A single forest with an odd
    later tree V has a nonzero delta_forest, but V and its mirror image
    cancel in the orbit sum, so its B-orbit lies in the kernel of delta.
    """
    if f.labeled:
        f = erase(f)
    rights, bottom = left_spine(f.trees[0])
    out = ForestSum()
    if any(r.length % 2 == 0 for r in rights) or any(v.length % 2 for v in f.trees[1:]):
        return out
    choices = [_aligned_right_children(r) for r in rights] + [_strong(v) for v in f.trees[1:]]
    m = len(rights)
    for combo in itertools.product(*choices):
        coeff = Fraction(1)
        for _, c in combo:
            coeff *= c
        u = bottom
        for r, _ in reversed(combo[:m]):
            u = Node(u, r)
        out.add(Forest((u,) + tuple(t for t, _ in combo[m:]), check=False), coeff)
    return out


def render_forest(f):
    '''render_unlabeled followed by the preferred labeling F of every term'''
    out = ForestSum()
    for g, c in render_unlabeled(f).terms.items():
        out.add(F(g), c)
    return out


@lru_cache(maxsize=None)
def tree_key(tree):
    """
    Sort key realizing the total order < on admissible unlabeled trees of
    even length.

    Trees compare by squash; then the longer tree is smaller; then parity
    (0,1) comes before (1,0); then recursively by the even child U_E and by
    the two children of the odd child U_O.

    Raises
    ------
    NotComparable
        If the tree has odd length or is not admissible.
    """
    if tree.is_leaf:
        return (tree.value, 0)
    if tree.length % 2 or tree.labeled:
        raise NotComparable(f'{format_tree(tree)} is not an unlabeled tree of even length')
    p = parity(tree)
    if p == (0, 1):
        even, odd, rank = tree.left, tree.right, 0
    else:
        even, odd, rank = tree.right, tree.left, 1
    if parity(odd) != (0, 0):
        raise NotComparable(f'{format_tree(tree)} is not admissible')
    return (tree.value, -tree.length, rank, tree_key(even), tree_key(odd.left), tree_key(odd.right))


def tree_less(u, v):
    """
    The total order < on admissible unlabeled trees of even length.

    Examples
    --------
    >>> tree_less(parse_tree('(1 (1 2))'), Leaf(4))
    True
    """
    return tree_key(_unlabeled(u)) < tree_key(_unlabeled(v))


def F(f):
    """
    Preferred labeled preimage of a right aligned unlabeled forest.

    Parameters
    ----------
    f : Forest
        A right aligned unlabeled forest.

    Returns
    -------
    Forest
        A labeled forest whose erasure is `f`. The <-minimal tree of positive
        length receives the labels 1 and 2 on its root and right child, the
        remaining nodes are labeled recursively.

    Raises
    ------
    NotRightAligned
        If `f` is not right aligned.
    """
    if f.labeled:
        f = erase(f)
    if classify(f) < AlignmentClass.RightAligned:
        raise NotRightAligned(f'{format_forest(f)} is not right aligned')
    return _peel(f)


def _peel(f):
    if f.length == 0:
        return f
    trees = f.trees
    i = min((i for i, t in enumerate(trees) if t.length > 0), key=lambda i: (tree_key(trees[i]), i))
    top = trees[i]
    outer = [Leaf(t.value) for t in trees]
    outer[i] = Node(Leaf(top.left.value), Node(Leaf(top.right.left.value), Leaf(top.right.right.value), 2), 1)
    inner = trees[:i] + (top.left, top.right.left, top.right.right) + trees[i + 1:]
    return bullet(Forest(outer), _peel(Forest(inner, check=False)))


preferred_labeling = F


def _prec_positions(f):
    m = depth(f)
    out = [(i, '') for i in range(1, len(f.trees))]
    for i in range(m):
        out.append((0, '1' * i + '21'))
        out.append((0, '1' * i + '22'))
    return out


def _key_at(f, position):
    i, pos = position
    try:
        return tree_key(subtree_at(f.trees[i], pos))
    except MissingPosition as exc:
        raise ShapeMismatch(str(exc)) from exc


def forest_prec(x, y, base):
    """
    Lexicographic order on admissible forests with the shape of `base`.

    Parameters
    ----------
    x, y : Forest
        Admissible forests with as many trees as `base` and the same depth.
    base : Forest
        The reference forest fixing the order of the positions.

    Returns
    -------
    bool
        True when x precedes y. Positions are the later trees and the
        children 1^i21, 1^i22 of the right children along the spine,
        ordered by the < order of the subtrees of `base` there (ties broken
        by tree index and position word); the first position where x and y
        differ decides.

    Notes
    -----
    With base X strongly right aligned, no forest whose B-orbit is related
    to F(X) by the moves of sim_closure precedes X: X is the minimum of its
    class.

    Raises
    ------
    ShapeMismatch
        If the tree count or depth differ.
    """
    x, y, base = (erase(g) if g.labeled else g for g in (x, y, base))
    for g in (x, y):
        if len(g.trees) != len(base.trees) or depth(g) != depth(base):
            raise ShapeMismatch(f'{format_forest(g)} does not have the shape of {format_forest(base)}')
    order = sorted(_prec_positions(base), key=lambda p: (_key_at(base, p), p))
    for position in order:
        kx, ky = _key_at(x, position), _key_at(y, position)
        if kx != ky:
            return kx < ky
    return False
