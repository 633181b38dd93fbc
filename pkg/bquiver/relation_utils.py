import itertools
import os
from collections import Counter, defaultdict, deque
from fractions import Fraction
from functools import partial
from multiprocessing import Pool

import pandas as pd
from sympy.utilities.iterables import partitions
from tqdm import tqdm

from bquiver.align_utils import AlignmentClass, classify_tree, render_unlabeled
from bquiver.config_utils import load_config
from bquiver.file_utils import load_pickle, save_pickle
from bquiver.forest_utils import Forest, ForestError, Leaf, Node, format_terms, mirror
from bquiver.linalg_utils import RatMatrix, SingularMatrix, Subspace, inverse, normalize_vector, rank, rank_kernel
from bquiver.orbit_utils import BOrbit, delta, edge_tree, erase_orbits, orbit_key
from bquiver.quiver_utils import (QuiverError, build_quiver, format_partition, iota_orbits, path_counts,
                                  path_of_orbit_lift, remove_parts)
from bquiver.word_utils import WordPoly, jacobi


class RelationError(ValueError):
    pass


class SymbolError(RelationError):
    pass


class GeneratorOutsideKernel(RelationError):
    pass


class LiftOutsideKernel(RelationError):
    pass


class BudgetExceeded(RelationError):
    pass


class PathVector:
    """
    An element of the path algebra: a finite map path id -> rational.

    Parameters
    ----------
    terms : dict or iterable of (int, coefficient), optional
        Path ids of a single QuiverN. Zero coefficients are dropped.
    label : str, optional
        Where the vector comes from, e.g. "B1 15.<o1;1,5|<1;1,2|".
    """
    __slots__ = ('terms', 'label')

    def __init__(self, terms=None, label=None):
        self.terms = {}
        self.label = label
        if terms is None:
            return
        items = terms.items() if isinstance(terms, dict) else terms
        for pid, c in items:
            self.add(pid, c)

    def add(self, pid, coeff):
        if coeff == 0:
            return self
        c = self.terms.get(pid, 0) + Fraction(coeff)
        if c == 0:
            self.terms.pop(pid, None)
        else:
            self.terms[pid] = c
        return self

    def copy(self):
        out = PathVector(label=self.label)
        out.terms = dict(self.terms)
        return out

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, pid):
        return self.terms.get(pid, Fraction(0))

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, PathVector) and other.terms == self.terms

    __hash__ = None

    def __add__(self, other):
        out = self.copy()
        for pid, c in other.terms.items():
            out.add(pid, c)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        coeff = Fraction(coeff)
        out = PathVector(label=self.label)
        if coeff != 0:
            out.terms = {pid: c * coeff for pid, c in self.terms.items()}
        return out

    __mul__ = scale
    __rmul__ = scale

    @property
    def support(self):
        return sorted(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def normalized(self):
        '''Coprime integer coefficients, the smallest path id positive'''
        ids = self.support
        values = normalize_vector([self.terms[i] for i in ids])
        return PathVector(zip(ids, values), label=self.label)

    def key(self):
        return tuple(self.normalized().items())

    def __repr__(self):
        return f'PathVector({self})'

    def __str__(self):
        return format_terms([(c, pid) for pid, c in self.items()], lambda pid: f'p{pid}', separator='*')


def format_vector(v, q):
    '''Print a PathVector with the edge sequences of its paths'''
    return format_terms([(c, pid) for pid, c in v.items()], lambda pid: str(q.paths[pid]), separator='*')


def vertex_vector(p, q):
    '''The idempotent of a vertex as a PathVector'''
    pid = q.find_path(p, ())
    if pid is None:
        raise QuiverError(f'{format_partition(p)} is not a vertex of Q{q.n}')
    return PathVector({pid: 1})


def delta_column(path, q):
    '''Delta of the image of a path under iota, cached on the quiver'''
    col = q._delta_cache.get(path.id)
    if col is None:
        col = delta(iota_orbits(path, q))
        q._delta_cache[path.id] = col
    return col


def delta_matrix(q, verbose=False):
    """
    The matrix of delta composed with iota in the path basis.

    Parameters
    ----------
    q : QuiverN
    verbose : bool, optional

    Returns
    -------
    RatMatrix
        One column per path (in path id order), one row per word occurring
        in some column; `row_keys` holds the words.
    """
    columns = [delta_column(path, q).terms for path in q.paths]
    m = RatMatrix.from_columns(columns)
    if verbose:
        print(f'delta matrix of Q{q.n}: {m.nrows} words x {m.ncols} paths')
    return m


def split_blocks(q):
    """
    The columns of delta_matrix grouped by (source, dest) of their paths.

    Returns
    -------
    dict
        (source, dest) -> (list of path ids, RatMatrix).
    """
    blocks = {}
    for key, ids in q.blocks.items():
        columns = [delta_column(q.paths[i], q).terms for i in ids]
        blocks[key] = (list(ids), RatMatrix.from_columns(columns))
    return blocks


def kernel_I(q, threads=1, cache_dir=None, verbose=False):
    """
    Basis of the ideal I of paths whose image under iota lies in the kernel
    of delta.

    Parameters
    ----------
    q : QuiverN
    threads : int, optional
        Worker processes for the block eliminations.
    cache_dir : str, optional
        Directory of a pickle cache keyed by n.
    verbose : bool, optional

    Returns
    -------
    list of PathVector
        Normalized vectors, each supported on the paths of one
        (source, dest) block and labeled "source->dest".

    Dependencies
    ------------
    - multiprocessing: Required to solve the blocks in a pool of workers.
    - pickle (through file_utils): Required for the optional cache.

    Notes
    -----
    Function Name: kernel_I
    The image of a path from p to p' is a combination of forests whose
    first part and squash are fixed by p and p', so the kernel splits over
    the blocks and every block is solved on its own.
    """
    cache = None
    if cache_dir:
        cache = os.path.join(cache_dir, f'kernel_Q{q.n}.pickle')
        if os.path.exists(cache):
            return [PathVector(terms, label) for terms, label in load_pickle(cache, verbose=verbose)]
    blocks = split_blocks(q)
    keys = list(blocks)
    matrices = [blocks[key][1] for key in keys]
    if threads > 1 and len(matrices) > 1:
        with Pool(threads) as pool:
            solved = pool.map(rank_kernel, matrices)
    else:
        solved = [rank_kernel(m) for m in matrices]
    kernel = []
    for key, (_, basis) in zip(keys, solved):
        ids = blocks[key][0]
        label = f'{format_partition(key[0])}->{format_partition(key[1])}'
        for vec in basis:
            kernel.append(PathVector(zip(ids, vec), label=label))
    if verbose:
        print(f'dim I = {len(kernel)} in Q{q.n}')
    if cache:
        os.makedirs(cache_dir, exist_ok=True)
        save_pickle([(v.terms, v.label) for v in kernel], cache)
    return kernel


def block_kernel_dims(q):
    '''(source, dest) -> kernel dimension, for the blocks with a kernel'''
    dims = {}
    for key, (ids, m) in split_blocks(q).items():
        d = len(ids) - rank(m)
        if d:
            dims[key] = d
    return dims


def check_block_split(q):
    """
    Kernel dimension of the whole delta matrix against the sum over blocks.

    Returns
    -------
    (int, int)
        Equal when the block splitting loses nothing.
    """
    full = q.dim - rank(delta_matrix(q))
    blocks = sum(block_kernel_dims(q).values())
    return full, blocks


def short_paths_independent(q):
    '''True when the columns of the vertices and edges are independent'''
    ids = [p.id for p in q.paths if p.length <= 1]
    m = RatMatrix.from_columns([delta_column(q.paths[i], q).terms for i in ids])
    return rank(m) == len(ids)


def delta_of_vector(v, q):
    out = WordPoly()
    for pid, c in v.terms.items():
        out = out + delta_column(q.paths[pid], q).scale(c)
    return out


def in_ideal(v, q):
    '''Membership in I: delta of iota(v) vanishes'''
    return not delta_of_vector(v, q)


class BranchSymbol:
    """
    A letter of the branch monoid.

    Parameters
    ----------
    circled : bool
        Circled symbols append (Q1) edges, plain ones (Q2) and (Q3) edges.
    a, b, c : int
        The leaves of the tree (a (b c)) of the appended edge; b < c, and
        a <= c for a plain symbol.

    Raises
    ------
    SymbolError
        If the entries violate the inequalities.
    """
    __slots__ = ('circled', 'a', 'b', 'c')

    def __init__(self, circled, a, b, c):
        for x in (a, b, c):
            if not isinstance(x, int) or x < 1:
                raise SymbolError(f'entries must be positive integers, got {x!r}')
        if not b < c:
            raise SymbolError(f'the lower entries must increase, got {b} and {c}')
        if not circled and a > c:
            raise SymbolError(f'the top entry {a} of a plain symbol exceeds the last entry {c}')
        self.circled = bool(circled)
        self.a, self.b, self.c = a, b, c

    @classmethod
    def from_edge(cls, edge):
        return cls(*edge.symbol)

    @property
    def total(self):
        return self.a + self.b + self.c

    @property
    def parts(self):
        return (self.b, self.c) if self.circled else (self.a, self.b, self.c)

    @property
    def key(self):
        return (self.circled, self.a, self.b, self.c)

    def __eq__(self, other):
        return isinstance(other, BranchSymbol) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f'BranchSymbol({self})'

    def __str__(self):
        top = f'o{self.a}' if self.circled else str(self.a)
        return f'<{top};{self.b},{self.c}|'


def symbol_edge(source, s, q):
    """
    The edge appended by symbol `s` to a path with source `source`, or None.
    """
    if s.circled:
        if s.a != q.value - sum(source) - s.b - s.c:
            return None
        rep = Forest((edge_tree(s.a, s.b, s.c),) + tuple(Leaf(x) for x in sorted(source)))
    else:
        rest = remove_parts(source, s.total)
        p0 = q.value - sum(source)
        if rest is None or p0 < 1:
            return None
        rep = Forest((Leaf(p0), edge_tree(s.a, s.b, s.c)) + tuple(Leaf(x) for x in sorted(rest)))
    return q.edge_by_orbit.get(BOrbit(rep))


def branch_act(p, s, q):
    """
    Right action of a branch symbol on the path algebra.

    Parameters
    ----------
    p : PathVector or tuple
        A combination of paths, or a vertex.
    s : BranchSymbol
    q : QuiverN

    Returns
    -------
    PathVector
        Every path is extended at its source by the edge of `s`; paths
        without such an edge are sent to zero.

    Examples
    --------
    >>> v = branch_act((), BranchSymbol(True, 1, 1, 5), build_quiver(6))
    >>> len(v)
    1
    """
    if not isinstance(p, PathVector):
        p = vertex_vector(tuple(p), q)
    out = PathVector()
    for pid, c in p.terms.items():
        path = q.paths[pid]
        e = symbol_edge(path.source, s, q)
        if e is None:
            continue
        new = q.find_path(path.dest_vertex, path.edges + (e,))
        if new is not None:
            out.add(new, c)
    return out


def act_word(p, symbols, q):
    '''p.s1.s2...sk'''
    v = p if isinstance(p, PathVector) else vertex_vector(tuple(p), q)
    for s in symbols:
        v = branch_act(v, s, q)
        if not v:
            break
    return v


def _b1(s):
    return s[1].total not in s[0].parts


def _b2(s):
    return s[0].total not in s[1].parts and s[1].total not in s[0].parts


def _b3(s):
    return s[1].total == s[2].total and s[1].total in s[0].parts


def _b4(s):
    return s[2].total in set(s[0].parts) & set(s[1].parts) and s[1].total not in s[0].parts


def _b5(s):
    return s[0].total == s[1].total and s[0].total in s[2].parts


def _b6(s):
    return (s[2].total in set(s[0].parts) & set(s[1].parts)
            and s[0].total not in s[1].parts and s[1].total not in s[0].parts)


_SWAP = ((1, (0, 1)), (-1, (1, 0)))
_ROTATE = ((1, (0, 1, 2)), (1, (2, 0, 1)), (-1, (0, 2, 1)), (-1, (1, 2, 0)))

# name -> (circled flags, signed index permutations, side condition)
B_FAMILIES = {
    'B1': ((True, False), _SWAP, _b1),
    'B2': ((False, False), _SWAP, _b2),
    'B3': ((True, False, False), ((1, (0, 1, 2)), (1, (1, 2, 0)), (-1, (1, 0, 2)), (-1, (2, 0, 1))), _b3),
    'B4': ((True, False, False), _ROTATE, _b4),
    'B5': ((False, False, False), _ROTATE, _b5),
    'B6': ((False, False, False), _ROTATE, _b6),
}


def b_element(vertex, family, symbols, q):
    """
    p.B for a vertex p and the element B of a (B) family built on the
    given symbols.
    """
    _, terms, _ = B_FAMILIES[family]
    out = PathVector()
    for sign, perm in terms:
        out = out + act_word(vertex, [symbols[i] for i in perm], q).scale(sign)
    return out


def _report(diagnostics, error, message):
    if diagnostics is None:
        raise error(message)
    diagnostics.append({'kind': error.__name__, 'message': message})


def gen_B_family(q, families=None, diagnostics=None, verbose=False):
    """
    All nonzero elements p.B of the families (B1)-(B6).

    Parameters
    ----------
    q : QuiverN
    families : list of str, optional
        Subset of 'B1', ..., 'B6'.
    diagnostics : list, optional
        Receives a record for every element outside I. Without it such an
        element raises GeneratorOutsideKernel.
    verbose : bool, optional

    Returns
    -------
    list of PathVector

    Notes
    -----
    Function Name: gen_B_family
    Candidates are read off the existing paths: every nonzero p.B has a
    term that is a path, so inverting each term's permutation on the
    symbols of every path of the right length enumerates all of them.
    """
    out = []
    seen = set()
    for name in families or B_FAMILIES:
        kinds, terms, condition = B_FAMILIES[name]
        k = len(kinds)
        found = 0
        for path in q.paths_of_length(k):
            t = tuple(BranchSymbol.from_edge(e) for e in path.edges)
            for _, perm in terms:
                s = [None] * k
                for i, j in enumerate(perm):
                    s[j] = t[i]
                s = tuple(s)
                if tuple(x.circled for x in s) != kinds or not condition(s):
                    continue
                key = (name, path.dest_vertex, s)
                if key in seen:
                    continue
                seen.add(key)
                v = b_element(path.dest_vertex, name, s, q)
                if not v:
                    continue
                v.label = f'{name} {format_partition(path.dest_vertex)}.' + ''.join(str(x) for x in s)
                if not in_ideal(v, q):
                    _report(diagnostics, GeneratorOutsideKernel, v.label)
                out.append(v)
                found += 1
        if verbose:
            print(f'{name}: {found} elements in Q{q.n}')
    return out


def _compositions(total, k):
    for cuts in itertools.combinations(range(1, total), k - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def _tails(m):
    if m == 0:
        yield ()
        return
    for p in partitions(m):
        yield tuple(sorted(Counter(p).elements()))


def _comb(*values):
    # right comb (v0 (v1 (... vk)))
    tree = Leaf(values[-1])
    for v in reversed(values[:-1]):
        tree = Node(Leaf(v), tree)
    return tree


def _j1(params):
    z = Leaf(params[0])
    x, y = _comb(*params[1:3]), _comb(*params[3:])
    return [((Node(Node(z, x), y),), 1), ((Node(Node(z, y), x),), -1), ((Node(z, Node(x, y)),), -2)]


def _j2(params, q0=None):
    z = Leaf(params[0])
    if len(params) == 5:
        triple = jacobi(Leaf(params[1]), Leaf(params[2]), _comb(*params[3:]))
    else:
        triple = jacobi(Leaf(params[1]), _comb(*params[2:4]), _comb(*params[4:]))
    head = () if q0 is None else (Leaf(q0),)
    return [(head + (Node(z, t),), c) for t, c in triple.trees()]


def _j3(params):
    q0 = Leaf(params[0])
    if len(params) == 6:
        triple = jacobi(Leaf(params[1]), Leaf(params[2]), _comb(*params[3:]))
    else:
        triple = jacobi(Leaf(params[1]), _comb(*params[2:5]), _comb(*params[5:]))
    return [((q0, t), c) for t, c in triple.trees()]


# (family, number of leaf parameters, builder of (head trees, coefficient) terms)
J_SHAPES = (
    ('J1', 5, _j1),
    ('J1', 7, _j1),
    ('J2', 5, _j2),
    ('J2', 7, _j2),
    ('J2', 6, lambda p: _j2(p[1:], q0=p[0])),
    ('J2', 8, lambda p: _j2(p[1:], q0=p[0])),
    ('J3', 6, _j3),
    ('J3', 8, _j3),
)


def j_element(terms, tail=()):
    """
    A (J) element in the B-orbit basis.

    Parameters
    ----------
    terms : list of (tuple, coefficient)
        Head trees of every term; the leaves of `tail` follow them.
    tail : tuple of int

    Returns
    -------
    dict
        Unlabeled BOrbit -> Fraction, zero terms dropped.
    """
    leaves = tuple(Leaf(x) for x in tail)
    out = defaultdict(Fraction)
    for heads, c in terms:
        out[BOrbit(Forest(heads + leaves))] += c
    return {o: c for o, c in out.items() if c != 0}


def _element_key(orbits):
    items = sorted(orbits.items(), key=lambda item: orbit_key(item[0]))
    first = items[0][1]
    return tuple((orbit_key(o), c / first) for o, c in items)


def render_orbits(orbits):
    """
    Strongly right aligned rendering of a combination of unlabeled B-orbit
    sums.

    Each orbit [X]_B contributes the orbits [Y]_B of the terms c Y of the
    rendering of X, weighted by c |[X]_B| / |[Y]_B|; the result has the same
    image under delta.
    """
    out = defaultdict(Fraction)
    for o, c in orbits.items():
        for y, cy in render_unlabeled(o.rep).terms.items():
            target = BOrbit(y)
            out[target] += c * cy * Fraction(o.size, target.size)
    return {o: c for o, c in out.items() if c != 0}


def _aligned_rep(o):
    # the canonical form may hold the mirror image of a right aligned later tree
    first, rest = o.rep.trees[0], o.rep.trees[1:]
    rest = [v if classify_tree(v) >= AlignmentClass.RightAligned else mirror(v) for v in rest]
    return Forest((first,) + tuple(rest), check=False)


class OrbitLifter:
    """
    Lifts of strongly right aligned unlabeled B-orbits to the path algebra.

    The lift of [Y]_B starts from the path p(F(Y)) divided by the
    coefficient beta of [Y]_B in E(iota(p(F(Y)))). With `correction`, the
    rest of that image is rendered and the lifts of all orbits reached this
    way are solved for together, so that delta(iota(lift)) equals
    delta([Y]_B) also when a rendering leads back to an orbit being lifted.

    Notes
    -----
    Every orbit Z reached from [Y]_B gives one equation

        p(F(Z)) / beta_Z = L(Z) + sum_W r(Z, W) L(W)

    with r(Z, .) the rendering of the rest of the image of p(F(Z)), scaled
    by 1 / beta_Z. The system is solved with exact rationals; lifts already
    known move to the right hand side. A singular system raises
    LiftOutsideKernel.
    """

    def __init__(self, q, correction=True):
        self.q = q
        self.correction = correction
        self._memo = {}

    def _leading(self, o):
        path = path_of_orbit_lift(_aligned_rep(o), self.q)
        image = erase_orbits(iota_orbits(path, self.q))
        beta = image.get(o)
        if not beta:
            raise LiftOutsideKernel(f'{o} does not occur in the image of {path}')
        residual = {k: c / beta for k, c in image.items() if k != o}
        return PathVector({path.id: 1 / beta}), residual

    def orbit(self, o):
        if o in self._memo:
            return self._memo[o]
        if not self.correction:
            self._memo[o] = self._leading(o)[0]
            return self._memo[o]
        # orbits whose lift is still unknown, each with its rendered residual
        rows = {}
        queue = deque([o])
        while queue:
            z = queue.popleft()
            if z in rows:
                continue
            lead, residual = self._leading(z)
            rendered = render_orbits(residual) if residual and delta(residual) else {}
            rows[z] = (lead, rendered)
            queue.extend(w for w in rendered if w not in rows and w not in self._memo)
        order = list(rows)
        index = {z: i for i, z in enumerate(order)}
        matrix = [[0] * len(order) for _ in order]
        rhs = []
        for i, z in enumerate(order):
            lead, rendered = rows[z]
            matrix[i][i] = 1
            for w, c in rendered.items():
                if w in index:
                    matrix[i][index[w]] += c
                else:
                    lead = lead - self._memo[w].scale(c)
            rhs.append(lead)
        try:
            inv = inverse(RatMatrix(matrix))
        except SingularMatrix as exc:
            raise LiftOutsideKernel(f'lift of {o}: {exc}') from exc
        for i, z in enumerate(order):
            lift = PathVector()
            for j, c in enumerate(inv[i]):
                if c:
                    lift = lift + rhs[j].scale(c)
            self._memo[z] = lift
        return self._memo[o]

    def lift(self, orbits):
        out = PathVector()
        for o, c in orbits.items():
            out = out + self.orbit(o).scale(c)
        return out


def gen_J_family(q, correction=True, diagnostics=None, verbose=False):
    """
    Lifts of the right aligned renderings of the families (J1)-(J3).

    Parameters
    ----------
    q : QuiverN
    correction : bool, optional
        Apply the recursive lift correction (see OrbitLifter).
    diagnostics : list, optional
        Receives a record for every lift outside I or that fails; without
        it the first such lift raises LiftOutsideKernel.
    verbose : bool, optional

    Returns
    -------
    list of PathVector
        Distinct nonzero lifts lying in I.

    Notes
    -----
    Function Name: gen_J_family
    Every shape is enumerated with all leaf parameters positive and the
    remaining value n+1 spread over the trailing leaves q1...qj. Elements
    that cancel, or whose rendering is zero, are discarded.
    """
    total = q.value
    lifter = OrbitLifter(q, correction)
    out = []
    seen_elements = set()
    seen_vectors = set()
    for name, k, build in J_SHAPES:
        found = 0
        # s is the value taken by the leaf parameters of the shape
        for s in range(k, total + 1):
            for params in _compositions(s, k):
                terms = build(params)
                for tail in _tails(total - s):
                    element = j_element(terms, tail)
                    if not element:
                        continue
                    # same element up to a scalar
                    key = _element_key(element)
                    if key in seen_elements:
                        continue
                    seen_elements.add(key)
                    label = f"{name} {','.join(str(x) for x in params)}|{format_partition(tail)}"
                    # render, lift and keep what lands in I
                    try:
                        rendering = render_orbits(element)
                        if not rendering:
                            continue
                        v = lifter.lift(rendering)
                    except (ForestError, LiftOutsideKernel) as exc:
                        _report(diagnostics, LiftOutsideKernel, f'{label}: {exc}')
                        continue
                    if not v:
                        continue
                    if not in_ideal(v, q):
                        _report(diagnostics, LiftOutsideKernel, f'{label}: {v}')
                        continue
                    vkey = v.key()
                    if vkey in seen_vectors:
                        continue
                    seen_vectors.add(vkey)
                    v.label = label
                    out.append(v)
                    found += 1
        if verbose:
            print(f'{name} ({k} parameters): {found} lifts in Q{q.n}')
    return out


def _products(vec, q):
    # one vector per edge and side: vec composed with the edge
    right = defaultdict(dict)
    left = defaultdict(dict)
    for pid, c in vec.items():
        path = q.paths[pid]
        for e in q.edges_into[path.source]:
            new = q.find_path(path.dest_vertex, path.edges + (e,))
            if new is not None:
                right[e.id][new] = c
        for e in q.edges_out_of[path.dest]:
            new = q.find_path(e.dest, (e,) + path.edges)
            if new is not None:
                left[e.id][new] = c
    return [right[i] for i in sorted(right)] + [left[i] for i in sorted(left)]


def ideal_closure(gens, q, verbose=False):
    """
    The two-sided ideal generated by some elements of the path algebra.

    Parameters
    ----------
    gens : list of PathVector or dict
    q : QuiverN
    verbose : bool, optional

    Returns
    -------
    Subspace
        Closed under composition with edges on both sides. Rows are
        multiplied breadth first, generators in order, edges by id.
    """
    space = Subspace()
    queue = deque()
    for g in gens:
        row = space.insert(g.terms if isinstance(g, PathVector) else g)
        if row is not None:
            queue.append(row)
    while queue:
        for product in _products(queue.popleft(), q):
            row = space.insert(product)
            if row is not None:
                queue.append(row)
    if verbose:
        print(f'ideal closure in Q{q.n}: dimension {space.dim}')
    return space


def verify_conjecture(n, config=None, threads=None, j_correction=None, max_n=None, verbose=False):
    """
    Check that the (B) and (J) families generate I as an ideal.

    Parameters
    ----------
    n : int
    config : BquiverConfig, optional
        Defaults for the other arguments; load_config() when omitted.
    threads, j_correction, max_n : optional
        Override the configuration.
    verbose : bool, optional

    Returns
    -------
    dict
        n, dim_kQ, dim_I, dim_quotient, expected_quotient (2^n), dim_ideal,
        verdict ('PASS' or 'FAIL'), witnesses (kernel vectors outside the
        closure), dim_B, dim_J, b_diagnostics, j_diagnostics.

    Raises
    ------
    BudgetExceeded
        If n is above the configured maximum.

    Dependencies
    ------------
    - configparser (through config_utils): Required for the defaults of
      threads, j_correction and max_n.
    - multiprocessing: Required by kernel_I when threads > 1.

    Notes
    -----
    Function Name: verify_conjecture
    The ideal closure of the (B) and (J) generators is compared with the
    kernel basis block by block; every kernel vector outside the closure
    is reported as a witness.
    """
    config = config or load_config()
    threads = threads or config.threads
    max_n = max_n or config.max_n
    if j_correction is None:
        j_correction = config.j_correction
    if n < 1:
        raise RelationError(f'n must be positive, got {n}')
    if n > max_n:
        raise BudgetExceeded(f'n={n} exceeds the configured maximum {max_n}')
    q = build_quiver(n, verbose=verbose)
    kernel = kernel_I(q, threads=threads, verbose=verbose)
    b_diagnostics, j_diagnostics = [], []
    b_gens = gen_B_family(q, diagnostics=b_diagnostics, verbose=verbose)
    j_gens = gen_J_family(q, correction=j_correction, diagnostics=j_diagnostics, verbose=verbose)
    closure = ideal_closure(b_gens + j_gens, q, verbose=verbose)
    witnesses = [format_vector(v, q) for v in kernel if not closure.contains(v.terms)]
    dim_quotient = q.dim - len(kernel)
    passed = (not witnesses and not b_diagnostics and closure.dim == len(kernel)
              and dim_quotient == 2 ** n)
    report = {
        'n': n,
        'dim_kQ': q.dim,
        'dim_I': len(kernel),
        'dim_quotient': dim_quotient,
        'expected_quotient': 2 ** n,
        'dim_ideal': closure.dim,
        'verdict': 'PASS' if passed else 'FAIL',
        'witnesses': witnesses,
        'dim_B': Subspace(v.terms for v in b_gens).dim,
        'dim_J': Subspace(v.terms for v in j_gens).dim,
        'b_diagnostics': b_diagnostics,
        'j_diagnostics': j_diagnostics,
    }
    if verbose:
        print(f"Q{n}: {report['verdict']} (dim I = {report['dim_I']}, closure {report['dim_ideal']})")
    return report


def reports_dataframe(reports):
    '''One row per report; list fields are replaced by their lengths'''
    rows = []
    for report in reports:
        row = dict(report)
        for key in ('witnesses', 'b_diagnostics', 'j_diagnostics'):
            row[key] = len(row[key])
        rows.append(row)
    return pd.DataFrame(rows)


def verify_range(ns, threads=1, **kwargs):
    """
    verify_conjecture for several n, with a progress bar.

    With threads > 1 the values of n are spread over worker processes.

    Returns
    -------
    pandas.DataFrame

    Dependencies
    ------------
    - tqdm: Required for the progress bar.
    - multiprocessing: Required to spread n over workers.
    - pandas: Required for the returned table.
    """
    ns = list(ns)
    if threads > 1 and len(ns) > 1:
        run = partial(verify_conjecture, threads=1, **kwargs)
        with Pool(threads) as pool:
            reports = list(tqdm(pool.imap(run, ns), total=len(ns), desc='verify'))
    else:
        reports = [verify_conjecture(n, threads=threads, **kwargs) for n in tqdm(ns, desc='verify')]
    return reports_dataframe(reports)


def dims_dataframe(q, kernel=None):
    """
    Counts of the quiver and of its presentation.

    Returns
    -------
    pandas.DataFrame
        Columns quantity and value: vertices, edges, paths of each length,
        dim kQ, dim I, dim quotient and 2^n.
    """
    if kernel is None:
        kernel = kernel_I(q)
    rows = [('vertices', len(q.vertices)), ('edges', len(q.edges))]
    rows += [(f'paths of length {k}', c) for k, c in path_counts(q).items()]
    rows += [('dim kQ', q.dim), ('dim I', len(kernel)), ('dim quotient', q.dim - len(kernel)),
             ('2^n', 2 ** q.n)]
    return pd.DataFrame(rows, columns=['quantity', 'value'])
