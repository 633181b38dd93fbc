import json
from collections import Counter, defaultdict
from fractions import Fraction

import pandas as pd
from sympy.utilities.iterables import partitions

from bquiver.align_utils import AlignmentClass, F, NotRightAligned, classify
from bquiver.forest_utils import Forest, ForestError, Leaf, format_forest, parse_forest, relabel
from bquiver.orbit_utils import BOrbit, borbit_bullet, edge_tree, orbit_sum


class QuiverError(ForestError):
    pass


class TooShort(QuiverError):
    pass


class FactorNotAnEdge(QuiverError):
    pass


def partition_of(parts):
    '''Weakly decreasing tuple of the given parts'''
    return tuple(sorted(parts, reverse=True))


def format_partition(p):
    """
    Vertex name of a partition: its parts in increasing order, or "∅".

    Parts are separated by commas as soon as one of them has two digits.

    Examples
    --------
    >>> format_partition((2, 2, 1, 1))
    '1122'
    """
    if not p:
        return '∅'
    parts = sorted(p)
    sep = ',' if parts[-1] >= 10 else ''
    return sep.join(str(x) for x in parts)


def parse_partition(text):
    text = text.strip()
    if text in ('∅', '', '0', 'empty'):
        return ()
    if ',' in text:
        return partition_of(int(x) for x in text.split(','))
    return partition_of(int(x) for x in text)


def remove_parts(parts, *values):
    counts = Counter(parts)
    for v in values:
        counts[v] -= 1
        if counts[v] < 0:
            return None
    return partition_of(counts.elements())


class Edge:
    """
    An edge of the quiver, carried by the B-orbit of a length-two forest.

    Attributes
    ----------
    id : int
        Stable index in enumeration order.
    kind : str
        'Q1', 'Q2' or 'Q3'.
    source, dest : tuple
        Partitions; the source has two more parts than the destination.
    rep : Forest
        The labeled representative as displayed for its kind.
    orbit : BOrbit
        The B-orbit of `rep`.
    symbol : tuple
        (circled, a, b, c): the branch symbol whose action appends this edge.
    """
    __slots__ = ('id', 'kind', 'source', 'dest', 'rep', 'orbit', 'symbol')

    def __init__(self, id, kind, source, dest, rep):
        self.id = id
        self.kind = kind
        self.source = source
        self.dest = dest
        self.rep = rep
        self.orbit = BOrbit(rep)
        top = rep.trees[0] if kind == 'Q1' else rep.trees[1]
        self.symbol = (kind == 'Q1', top.left.value, top.right.left.value, top.right.right.value)

    def __repr__(self):
        return f'Edge({self.id}, {self.kind}, {format_partition(self.source)}->{format_partition(self.dest)}, {format_forest(self.rep)})'

    def __eq__(self, other):
        return isinstance(other, Edge) and other.id == self.id and other.rep == self.rep

    def __hash__(self):
        return hash((self.id, self.rep))


class Path:
    """
    A path of the quiver: a vertex or a composable sequence of edges.

    Parameters
    ----------
    dest_vertex : tuple
        Destination partition (the source as well for a vertex path).
    edges : tuple of Edge
        e1, ..., el in product order with source(e_i) = dest(e_{i+1}).
    id : int, optional
        Index in QuiverN.paths.
    """
    __slots__ = ('dest_vertex', 'edges', 'id')

    def __init__(self, dest_vertex, edges=(), id=None):
        self.dest_vertex = dest_vertex
        self.edges = tuple(edges)
        self.id = id
        for e, f in zip(self.edges, self.edges[1:]):
            if e.source != f.dest:
                raise QuiverError(f'edges {e.id} and {f.id} are not composable')
        if self.edges and self.edges[0].dest != dest_vertex:
            raise QuiverError('destination vertex does not match the first edge')

    @property
    def key(self):
        return (self.dest_vertex, tuple(e.id for e in self.edges))

    @property
    def length(self):
        return len(self.edges)

    @property
    def source(self):
        return self.edges[-1].source if self.edges else self.dest_vertex

    @property
    def dest(self):
        return self.dest_vertex

    def __eq__(self, other):
        return isinstance(other, Path) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f'Path({self})'

    def __str__(self):
        if not self.edges:
            return f'<{format_partition(self.dest_vertex)}>'
        return '[' + ','.join(f'e{e.id}' for e in self.edges) + ']'


class QuiverN:
    """
    The quiver Q_n with all of its paths.

    Attributes
    ----------
    n : int
    vertices : list of tuple
        All partitions of 0, 1, ..., n.
    edges : list of Edge
    paths : list of Path
        Vertices first, then paths by increasing length; `Path.id` indexes
        this list.
    blocks : dict
        (source, dest) -> list of path ids.

    Notes
    -----
    Class Name: QuiverN
    Built by build_quiver. Computed values of iota are cached on the
    instance.
    """

    def __init__(self, n, vertices, edges):
        self.n = n
        self.vertices = vertices
        self.edges = edges
        self.edge_by_orbit = {e.orbit: e for e in edges}
        self.edges_into = defaultdict(list)
        self.edges_out_of = defaultdict(list)
        for e in edges:
            self.edges_into[e.dest].append(e)
            self.edges_out_of[e.source].append(e)
        self.paths = []
        self.path_index = {}
        self.blocks = defaultdict(list)
        self._iota_cache = {}
        self._delta_cache = {}

    def add_path(self, dest_vertex, edges):
        path = Path(dest_vertex, edges, id=len(self.paths))
        self.paths.append(path)
        self.path_index[path.key] = path.id
        self.blocks[(path.source, path.dest)].append(path.id)
        return path

    def find_path(self, dest_vertex, edges):
        '''Id of the path with these edges, or None'''
        return self.path_index.get((dest_vertex, tuple(e.id for e in edges)))

    def paths_of_length(self, length):
        return [p for p in self.paths if p.length == length]

    @property
    def dim(self):
        return len(self.paths)

    @property
    def value(self):
        return self.n + 1

    def __repr__(self):
        return f'QuiverN(n={self.n}, vertices={len(self.vertices)}, edges={len(self.edges)}, paths={len(self.paths)})'


def quiver_vertices(n):
    """
    All partitions of 0, 1, ..., n, by size then in decreasing lexicographic
    order of their parts.
    """
    vertices = [()]
    for m in range(1, n + 1):
        # sympy reuses the yielded dict
        parts = [partition_of(Counter(p).elements()) for p in partitions(m)]
        vertices.extend(sorted(parts, reverse=True))
    return vertices


def _vertex_edges(n, p):
    # (kind, dest, rep) for every edge out of vertex p
    total = sum(p)
    values = sorted(set(p))
    counts = Counter(p)
    out = []
    for i, b in enumerate(values):
        for c in values[i + 1:]:
            rest = remove_parts(p, b, c)
            a = n + 1 - sum(rest) - b - c
            rep = Forest((edge_tree(a, b, c),) + tuple(Leaf(x) for x in sorted(rest)))
            out.append(('Q1', rest, rep))
    q0 = n + 1 - total
    for i, a in enumerate(values):
        for j, b in enumerate(values[i + 1:], start=i + 1):
            for c in values[j + 1:]:
                rest = remove_parts(p, a, b, c)
                dest = partition_of(rest + (a + b + c,))
                tail = tuple(Leaf(x) for x in sorted(rest))
                for x, y, z in ((a, b, c), (b, a, c)):
                    rep = Forest((Leaf(q0), edge_tree(x, y, z)) + tail)
                    out.append(('Q2', dest, rep))
    for a in values:
        if counts[a] < 2:
            continue
        for b in values:
            if b == a:
                continue
            rest = remove_parts(p, a, a, b)
            dest = partition_of(rest + (2 * a + b,))
            tree = edge_tree(a, a, b) if a < b else edge_tree(a, b, a)
            rep = Forest((Leaf(q0), tree) + tuple(Leaf(x) for x in sorted(rest)))
            out.append(('Q3', dest, rep))
    return out


def enumerate_paths(q, verbose=False):
    """
    Fill `q.paths` with every path of the quiver.

    Paths are grown at their source end: a path of length l ending at
    source s is extended by every edge into s. The quiver is graded by the
    number of parts, so the enumeration terminates.

    Returns
    -------
    dict
        (source, dest, length) -> list of Path.
    """
    q.paths.clear()
    q.path_index.clear()
    q.blocks.clear()
    layer = [q.add_path(v, ()) for v in q.vertices]
    length = 0
    while layer:
        if verbose:
            print(f'{len(layer)} paths of length {length}')
        nxt = []
        for path in layer:
            for e in q.edges_into[path.source]:
                edges = path.edges + (e,)
                dest = edges[0].dest
                nxt.append((dest, edges))
        nxt.sort(key=lambda item: tuple(e.id for e in item[1]))
        layer = [q.add_path(dest, edges) for dest, edges in nxt]
        length += 1
    grouped = defaultdict(list)
    for path in q.paths:
        grouped[(path.source, path.dest, path.length)].append(path)
    return dict(grouped)


def build_quiver(n, verbose=False):
    """
    Construct Q_n: vertices, edges of kinds (Q1)-(Q3) and all paths.

    Parameters
    ----------
    n : int
        At least one.
    verbose : bool, optional
        Print counts while building.

    Returns
    -------
    QuiverN

    Dependencies
    ------------
    - sympy: Required to enumerate the partitions that are the vertices.

    Notes
    -----
    Function Name: build_quiver
    For each vertex p: one (Q1) edge [(a (b c)) q]_B per pair of distinct
    part values b < c, where q is p without b and c and a = n+1-|q|-b-c;
    two (Q2) edges [q0 (a (b c)) q]_B and [q0 (b (a c)) q]_B per triple of
    distinct part values a < b < c, ending at q plus the part a+b+c; one
    (Q3) edge [q0 (a (a b)) q]_B, or [q0 (a (b a)) q]_B when a > b, per
    value a occurring twice and value b != a. Here q0 = n+1-|p|.

    Examples
    --------
    >>> q = build_quiver(6)
    >>> len(q.vertices), len(q.edges)
    (30, 28)
    """
    if n < 1:
        raise QuiverError(f'n must be positive, got {n}')
    vertices = quiver_vertices(n)
    edges = []
    for p in vertices:
        for kind, dest, rep in _vertex_edges(n, p):
            edges.append(Edge(len(edges), kind, p, dest, rep))
    q = QuiverN(n, vertices, edges)
    if verbose:
        print(f'Q{n}: {len(vertices)} vertices, {len(edges)} edges')
    enumerate_paths(q, verbose=verbose)
    return q


def find_edge(q, source, dest, rep=None):
    """
    Edges from `source` to `dest`, optionally only the one whose orbit
    contains `rep`.

    Parameters
    ----------
    source, dest : tuple or str
        Partitions or their vertex names.
    rep : Forest or str, optional
    """
    if isinstance(source, str):
        source = parse_partition(source)
    if isinstance(dest, str):
        dest = parse_partition(dest)
    found = [e for e in q.edges_out_of[partition_of(source)] if e.dest == partition_of(dest)]
    if rep is None:
        return found
    if isinstance(rep, str):
        rep = parse_forest(rep)
    orbit = BOrbit(rep)
    return [e for e in found if e.orbit == orbit]


def primary_factorization(f):
    """
    Split a labeled forest around the node labeled 1.

    Parameters
    ----------
    f : Forest
        A labeled forest of length at least two whose node labeled 1 has a
        right child labeled 2.

    Returns
    -------
    (Forest, Forest)
        X' of length two and X'' with labels reduced by two, such that
        bullet(X', X'') == f.

    Raises
    ------
    TooShort
        If the forest has length below two.
    NotRightAligned
        If the right child of the node labeled 1 is not labeled 2.
    """
    if f.length < 2:
        raise TooShort(f'{format_forest(f)} has length {f.length}')
    if not f.labeled:
        raise NotRightAligned(f'{format_forest(f)} is not labeled')
    trees = f.trees
    i = next(i for i, t in enumerate(trees) if t.label == 1)
    top = trees[i]
    if top.right.is_leaf or top.right.label != 2:
        raise NotRightAligned(f'the right child of node 1 in {format_forest(f)} is not labeled 2')
    outer = [Leaf(t.value) for t in trees]
    outer[i] = edge_tree(top.left.value, top.right.left.value, top.right.right.value)
    parts = (top.left, top.right.left, top.right.right)
    inner = tuple(relabel(t, -2) for t in trees[:i] + parts + trees[i + 1:])
    return Forest(outer), Forest(inner)


def vertex_of(f):
    '''Partition of the squash of a forest with its first part dropped'''
    return partition_of(f.squash[1:])


def path_of(f, q):
    """
    The path p(X) of a right aligned labeled forest.

    Parameters
    ----------
    f : Forest
        Labeled, right aligned, of value n+1.
    q : QuiverN

    Returns
    -------
    Path
        The vertex path of the squash when f has length zero; otherwise
        the edge of the primary factor X' followed by p(X'').

    Raises
    ------
    FactorNotAnEdge
        If a primary factor is not the representative of an edge.
    """
    if f.value != q.value:
        raise QuiverError(f'{format_forest(f)} has value {f.value}, expected {q.value}')
    edges = []
    current = f
    while current.length > 0:
        outer, current = primary_factorization(current)
        edge = q.edge_by_orbit.get(BOrbit(outer))
        if edge is None:
            raise FactorNotAnEdge(f'{format_forest(outer)} is not an edge of Q{q.n}')
        edges.append(edge)
    dest = edges[0].dest if edges else vertex_of(f)
    pid = q.find_path(dest, edges)
    if pid is None:
        raise FactorNotAnEdge(f'the factors of {format_forest(f)} do not compose')
    return q.paths[pid]


def path_of_orbit_lift(y, q):
    '''p(F(Y)) for a strongly right aligned unlabeled forest Y'''
    if classify(y) < AlignmentClass.RightAligned:
        raise NotRightAligned(f'{format_forest(y)} is not right aligned')
    return path_of(F(y), q)


def iota_orbits(path, q):
    """
    The image of a path in the B-orbit basis.

    The edge orbit sums are multiplied with the partial product in the order
    e1 . e2 . ... . el; a vertex maps to the orbit of its composition
    forest q0 q1 ... qj.

    Returns
    -------
    dict
        BOrbit -> Fraction.
    """
    key = path.key
    if key in q._iota_cache:
        return q._iota_cache[key]
    if not path.edges:
        parts = path.dest_vertex
        forest = Forest(Leaf(x) for x in (q.value - sum(parts),) + tuple(sorted(parts)))
        result = {BOrbit(forest): Fraction(1)}
    elif len(path.edges) == 1:
        result = {path.edges[0].orbit: Fraction(1)}
    else:
        tail = Path(path.edges[1].dest, path.edges[1:])
        result = borbit_bullet({path.edges[0].orbit: Fraction(1)}, iota_orbits(tail, q))
    q._iota_cache[key] = result
    return result


def iota(path, q):
    '''The image of a path as a ForestSum of labeled forests'''
    return orbit_sum(iota_orbits(path, q))


def to_dot(q, include_isolated=True):
    """
    DOT description of the quiver.

    Parameters
    ----------
    q : QuiverN
    include_isolated : bool, optional
        Also list vertices without edges (default True).

    Returns
    -------
    str
    """
    lines = [f'digraph Q{q.n} {{']
    used = {e.source for e in q.edges} | {e.dest for e in q.edges}
    for v in q.vertices:
        if include_isolated or v in used:
            lines.append(f'  "{format_partition(v)}";')
    for e in q.edges:
        lines.append(f'  "{format_partition(e.source)}" -> "{format_partition(e.dest)}" '
                     f'[label="{e.kind} e{e.id}"];')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def edge_record(e):
    return {'id': e.id, 'kind': e.kind, 'source': format_partition(e.source),
            'dest': format_partition(e.dest), 'rep': format_forest(e.rep)}


def to_json(q):
    '''JSON text with the vertices and the edge fields of the quiver'''
    data = {'n': q.n,
            'vertices': [format_partition(v) for v in q.vertices],
            'edges': [edge_record(e) for e in q.edges]}
    return json.dumps(data, indent=2, ensure_ascii=False)


def quiver_dataframe(q):
    '''One row per edge: id, kind, source, dest, rep'''
    return pd.DataFrame([edge_record(e) for e in q.edges], columns=['id', 'kind', 'source', 'dest', 'rep'])


def path_counts(q):
    '''Number of paths of each length'''
    counts = Counter(p.length for p in q.paths)
    return dict(sorted(counts.items()))


def format_path(path):
    return f'{path} {format_partition(path.source)}->{format_partition(path.dest)}'
