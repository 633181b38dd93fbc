import re
from fractions import Fraction


class ForestError(ValueError):
    '''Base class for errors raised while building or walking forests'''


class MissingPosition(ForestError):
    pass


class MixedLabeling(ForestError):
    pass


class NotLabeled(ForestError):
    pass


class LeafHasNoParity(ForestError):
    pass


class LabelError(ForestError):
    pass


class ForestSyntaxError(ForestError):
    '''Raised by parse_forest, carries the column where parsing stopped'''

    def __init__(self, message, position):
        super().__init__(f'{message} at column {position}')
        self.position = position


class Leaf:
    """
    A leaf of a binary tree carrying a positive integer value.

    Parameters
    ----------
    value : int
        The value of the leaf, at least one.

    Notes
    -----
    Class Name: Leaf
    Leaves have no node label. They are neutral with respect to labeling, so a
    leaf can be part of both labeled and unlabeled forests.
    """
    __slots__ = ('value', '_hash')
    length = 0
    label = None
    labeled = None
    is_leaf = True

    def __init__(self, value):
        if not isinstance(value, int) or value < 1:
            raise ForestError(f'leaf value must be a positive integer, got {value!r}')
        self.value = value
        self._hash = hash(('leaf', value))

    def __eq__(self, other):
        return isinstance(other, Leaf) and other.value == self.value

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f'Leaf({self.value})'

    def __str__(self):
        return format_tree(self)


class Node:
    """
    An inner node of a binary tree.

    Parameters
    ----------
    left, right : Leaf or Node
        The children in positions 1 and 2.
    label : int or None
        The node label. A tree is labeled when every node carries a label and
        unlabeled when none does; mixing the two raises MixedLabeling.

    Notes
    -----
    Class Name: Node
    Nodes are immutable. Value, length and hash are computed once at
    construction, equality is structural and includes the labels.
    """
    __slots__ = ('left', 'right', 'label', 'value', 'length', 'labeled', '_hash')
    is_leaf = False

    def __init__(self, left, right, label=None):
        labeled = label is not None
        for child in (left, right):
            if child.labeled is not None and child.labeled != labeled:
                raise MixedLabeling('a tree must be fully labeled or fully unlabeled')
        if labeled and (not isinstance(label, int) or label < 1):
            raise LabelError(f'node labels must be positive integers, got {label!r}')
        self.left = left
        self.right = right
        self.label = label
        self.labeled = labeled
        self.value = left.value + right.value
        self.length = left.length + right.length + 1
        self._hash = hash((left._hash, right._hash, label))

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, Node) and other._hash == self._hash
                and other.label == self.label and other.left == self.left
                and other.right == self.right)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f'Node({self.left!r}, {self.right!r}, {self.label!r})'

    def __str__(self):
        return format_tree(self)


class _Zero:
    '''The zero of the forest algebra, returned by bullet on mismatched shapes'''
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        return False

    def __repr__(self):
        return 'ZERO'


ZERO = _Zero()


class Forest:
    """
    A nonempty sequence of trees, all labeled or all unlabeled.

    Parameters
    ----------
    trees : iterable of Leaf or Node
        The trees X_0, X_1, ..., X_j of the forest.
    check : bool, optional
        Validate the labeling (default True). In the labeled case the node
        labels must be exactly 1, ..., l where l is the number of nodes and
        every child must carry a larger label than its parent.

    Attributes
    ----------
    trees : tuple
        The trees of the forest.
    length : int
        The number of nodes.
    labeled : bool or None
        True or False when the forest has nodes, None for compositions.

    Raises
    ------
    MixedLabeling
        If labeled and unlabeled trees are combined.
    LabelError
        If the labels of a labeled forest are not a valid labeling.

    Examples
    --------
    >>> f = parse_forest('(1 (2 3)@2)@1 4')
    >>> f.squash
    (6, 4)
    """
    __slots__ = ('trees', 'length', 'labeled', '_hash')

    def __init__(self, trees, check=True):
        trees = tuple(trees)
        if not trees:
            raise ForestError('a forest has at least one tree')
        kinds = {t.labeled for t in trees if t.labeled is not None}
        if len(kinds) > 1:
            raise MixedLabeling('a forest must be fully labeled or fully unlabeled')
        self.trees = trees
        self.length = sum(t.length for t in trees)
        self.labeled = kinds.pop() if kinds else None
        self._hash = hash(trees)
        if check and self.labeled:
            _check_labels(trees, self.length)

    def __eq__(self, other):
        return isinstance(other, Forest) and other._hash == self._hash and other.trees == self.trees

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    def __getitem__(self, index):
        return self.trees[index]

    def __repr__(self):
        return f"Forest('{format_forest(self)}')"

    def __str__(self):
        return format_forest(self)

    @property
    def value(self):
        return sum(t.value for t in self.trees)

    @property
    def squash(self):
        return tuple(t.value for t in self.trees)

    @property
    def foliage(self):
        return foliage(self)

    @property
    def depth(self):
        return depth(self)

    @property
    def first(self):
        return self.trees[0]

    @property
    def rest(self):
        return self.trees[1:]

    @property
    def is_labeled(self):
        '''True unless the forest has an unlabeled node'''
        return self.labeled is not False


def _check_labels(trees, count):
    # labels must be exactly 1..count and increase away from the roots
    seen = []
    stack = [(t, 0) for t in trees]
    while stack:
        tree, parent = stack.pop()
        if tree.is_leaf:
            continue
        if tree.label <= parent:
            raise LabelError(f'label {tree.label} is not greater than its parent label {parent}')
        seen.append(tree.label)
        stack.append((tree.left, tree.label))
        stack.append((tree.right, tree.label))
    if sorted(seen) != list(range(1, count + 1)):
        raise LabelError(f'node labels must be exactly 1..{count}, got {sorted(seen)}')


def length(obj):
    '''Number of nodes of a tree or forest'''
    return obj.length


def leaves(tree):
    # iterative left-to-right walk
    out = []
    stack = [tree]
    while stack:
        t = stack.pop()
        if t.is_leaf:
            out.append(t.value)
        else:
            stack.append(t.right)
            stack.append(t.left)
    return out


def foliage(f):
    """
    Left-to-right sequence of leaf values of a forest.

    Examples
    --------
    >>> foliage(parse_forest('(1 2) 3'))
    (1, 2, 3)
    """
    out = []
    for tree in f.trees:
        out.extend(leaves(tree))
    return tuple(out)


def squash(f):
    '''Sequence of the values of the trees of a forest'''
    return f.squash


def depth(f):
    """
    Depth of a forest: the largest m such that position 1^m of the first
    tree exists.
    """
    m = 0
    tree = f.trees[0]
    while not tree.is_leaf:
        tree = tree.left
        m += 1
    return m


def left_spine(tree):
    """Right children along the left spine of a tree, top first, and the bottom leaf."""
    rights = []
    while not tree.is_leaf:
        rights.append(tree.right)
        tree = tree.left
    return rights, tree


def subtree_at(tree, pos):
    """
    Subtree of `tree` in position `pos`.

    Parameters
    ----------
    tree : Leaf or Node
    pos : str
        A word over {'1', '2'}; the empty word is the root.

    Raises
    ------
    MissingPosition
        If the walk falls off a leaf.
    """
    t = tree
    for i, step in enumerate(pos):
        if t.is_leaf:
            raise MissingPosition(f'position {pos!r} of {format_tree(tree)} does not exist (leaf at {pos[:i]!r})')
        if step == '1':
            t = t.left
        elif step == '2':
            t = t.right
        else:
            raise MissingPosition(f'invalid position {pos!r}')
    return t


def replace_at(tree, pos, new):
    '''Tree with the subtree in position `pos` replaced by `new`'''
    if not pos:
        return new
    if tree.is_leaf:
        raise MissingPosition(f'position {pos!r} does not exist')
    if pos[0] == '1':
        return Node(replace_at(tree.left, pos[1:], new), tree.right, tree.label)
    return Node(tree.left, replace_at(tree.right, pos[1:], new), tree.label)


def positions(tree, prefix=''):
    '''Yield (position, subtree) pairs in preorder'''
    yield prefix, tree
    if not tree.is_leaf:
        yield from positions(tree.left, prefix + '1')
        yield from positions(tree.right, prefix + '2')


def node(left, right, label=None):
    # unlabeled by default, used heavily by the rewriting code
    return Node(left, right, label)


def leaf(value):
    return Leaf(value)


def mirror(tree):
    """
    Mirror image of a tree: children swapped recursively, every label stays
    with its node.

    Examples
    --------
    >>> format_tree(mirror(parse_tree('(1 (2 3))')))
    '((3 2) 1)'
    """
    if tree.is_leaf:
        return tree
    return Node(mirror(tree.right), mirror(tree.left), tree.label)


def relabel(tree, shift):
    '''Add `shift` to every node label of a labeled tree'''
    if tree.is_leaf or shift == 0:
        return tree
    return Node(relabel(tree.left, shift), relabel(tree.right, shift), tree.label + shift)


def erase_tree(tree):
    if tree.is_leaf or tree.label is None:
        return tree
    return Node(erase_tree(tree.left), erase_tree(tree.right))


def erase(f):
    """
    Remove all node labels of a labeled forest.

    Raises
    ------
    NotLabeled
        If the forest has unlabeled nodes.
    """
    if f.labeled is False:
        raise NotLabeled(f'{format_forest(f)} is not labeled')
    if f.labeled is None:
        return f
    return Forest((erase_tree(t) for t in f.trees), check=False)


def parity(tree):
    """
    Parity of a tree of positive length: the lengths of its children mod 2.

    Raises
    ------
    LeafHasNoParity
        If `tree` is a leaf.
    """
    if tree.is_leaf:
        raise LeafHasNoParity(f'leaf {tree.value} has no parity')
    return (tree.left.length % 2, tree.right.length % 2)


def composition_forest(parts):
    '''The length-0 forest whose leaves are the given parts'''
    return Forest(Leaf(p) for p in parts)


def bullet(x, y):
    """
    Partial product of forests: graft the trees of `y` onto the leaves of `x`.

    Parameters
    ----------
    x, y : Forest
        Both labeled or both unlabeled.

    Returns
    -------
    Forest or ZERO
        The grafted forest when foliage(x) equals squash(y), ZERO otherwise.
        In the labeled case the labels of `y` are shifted by the length of
        `x`.

    Raises
    ------
    MixedLabeling
        If exactly one of the two forests is labeled.

    Examples
    --------
    >>> bullet(parse_forest('(3 3)@1'), parse_forest('(1 2)@1 (1 2)@2'))
    Forest('((1 2)@2 (1 2)@3)@1')
    """
    if x.labeled is not None and y.labeled is not None and x.labeled != y.labeled:
        raise MixedLabeling('cannot multiply a labeled and an unlabeled forest')
    if foliage(x) != y.squash:
        return ZERO
    shift = x.length if y.labeled else 0
    grafts = iter(relabel(t, shift) for t in y.trees)
    return Forest((_graft(t, grafts) for t in x.trees), check=False)


def _graft(tree, grafts):
    if tree.is_leaf:
        return next(grafts)
    left = _graft(tree.left, grafts)
    right = _graft(tree.right, grafts)
    return Node(left, right, tree.label)


def tree_code(tree):
    '''Preorder encoding of the shape: (1, left, right) for nodes, (0, value) for leaves'''
    if tree.is_leaf:
        return (0, tree.value)
    return (1,) + tree_code(tree.left) + tree_code(tree.right)


def tree_labels(tree):
    if tree.is_leaf:
        return ()
    return (tree.label or 0,) + tree_labels(tree.left) + tree_labels(tree.right)


def encoding(tree):
    '''Total encoding used for canonical forms, shape first then labels'''
    return (tree_code(tree), tree_labels(tree))


def format_tree(tree):
    if tree.is_leaf:
        return str(tree.value)
    text = f'({format_tree(tree.left)} {format_tree(tree.right)})'
    if tree.label is not None:
        text += f'@{tree.label}'
    return text


def format_forest(f):
    """
    Print a forest in the text grammar.

    Examples
    --------
    >>> format_forest(parse_forest('(1  (2 3)@2)@1   4'))
    '(1 (2 3)@2)@1 4'
    """
    return ' '.join(format_tree(t) for t in f.trees)


_TOKEN = re.compile(r'\s*(?:(\d+)|(\()|(\))|(@))')


class _Parser:
    '''Recursive descent parser for the forest grammar'''

    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if m is None:
            return None, None
        return m, m.lastindex

    def take(self):
        m, kind = self.peek()
        if m is None:
            rest = self.text[self.pos:].strip()
            if rest:
                raise ForestSyntaxError(f'unexpected character {rest[0]!r}', self.text.index(rest[0], self.pos))
            raise ForestSyntaxError('unexpected end of input', len(self.text))
        self.pos = m.end()
        return m, kind

    def tree(self):
        m, kind = self.take()
        if kind == 1:
            return Leaf(int(m.group(1)))
        if kind != 2:
            raise ForestSyntaxError(f'expected a tree, found {m.group(0).strip()!r}', m.start(kind))
        left = self.tree()
        right = self.tree()
        m, kind = self.take()
        if kind != 3:
            raise ForestSyntaxError(f'expected ")", found {m.group(0).strip()!r}', m.start(kind))
        label = None
        m, kind = self.peek()
        if kind == 4:
            self.take()
            m, kind = self.take()
            if kind != 1:
                raise ForestSyntaxError('expected a label after "@"', m.start(kind))
            label = int(m.group(1))
        return Node(left, right, label)

    def forest(self):
        trees = [self.tree()]
        while self.text[self.pos:].strip():
            trees.append(self.tree())
        return trees


def parse_tree(text):
    '''Parse a single tree; labels are not validated as a forest labeling'''
    parser = _Parser(text)
    tree = parser.tree()
    if parser.text[parser.pos:].strip():
        raise ForestSyntaxError('trailing input after tree', parser.pos)
    return tree


def parse_forest(text):
    """
    Parse a forest literal.

    Parameters
    ----------
    text : str
        tree := INT | '(' tree WS tree ')' ['@' INT] ; forest := tree (WS tree)*

    Returns
    -------
    Forest

    Raises
    ------
    ForestSyntaxError
        With the column of the offending token.
    LabelError, MixedLabeling
        If the labels do not form a valid labeling.

    Examples
    --------
    >>> parse_forest('(1 (1 5)@2)@1').length
    2
    """
    if not text or not text.strip():
        raise ForestSyntaxError('empty forest', 0)
    return Forest(_Parser(text).forest())


def format_coefficient(c):
    '''Print a Fraction as p or p/q'''
    if c.denominator == 1:
        return str(c.numerator)
    return f'{c.numerator}/{c.denominator}'


def format_terms(items, fmt, separator=' * '):
    # items are (coefficient, key) pairs already in print order
    parts = []
    for coeff, key in items:
        mag = format_coefficient(abs(coeff))
        body = f'{mag}{separator}{fmt(key)}'
        if not parts:
            parts.append(body if coeff > 0 else f'-{body}')
        else:
            parts.append(f'+ {body}' if coeff > 0 else f'- {body}')
    return ' '.join(parts) if parts else '0'


def forest_key(f):
    return tuple(encoding(t) for t in f.trees)


class ForestSum:
    """
    A finite rational linear combination of forests.

    Parameters
    ----------
    terms : dict or iterable of (Forest, coefficient), optional
        Repeated forests are merged, zero coefficients dropped.

    Notes
    -----
    Class Name: ForestSum
    All forests of a sum share their labeledness. Trees are stored as
    single-tree forests when a sum of trees is needed (the rewriting code
    of align_utils works that way).
    """

    def __init__(self, terms=None):
        self.terms = {}
        if terms is None:
            return
        items = terms.items() if isinstance(terms, dict) else terms
        for f, c in items:
            self.add(f, c)

    def add(self, f, coeff=1):
        if f is ZERO or coeff == 0:
            return self
        if not isinstance(f, Forest):
            f = Forest((f,), check=False)
        c = self.terms.get(f, 0) + Fraction(coeff)
        if c == 0:
            self.terms.pop(f, None)
        else:
            self.terms[f] = c
        return self

    def copy(self):
        out = ForestSum()
        out.terms = dict(self.terms)
        return out

    def __iter__(self):
        return iter(self.sorted_items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, f):
        return self.terms.get(f, Fraction(0))

    def __eq__(self, other):
        return isinstance(other, ForestSum) and other.terms == self.terms

    def __add__(self, other):
        out = self.copy()
        for f, c in other.terms.items():
            out.add(f, c)
        return out

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        if scalar == 0:
            return ForestSum()
        out = ForestSum()
        out.terms = {f: c * scalar for f, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def sorted_items(self):
        '''(forest, coefficient) pairs in canonical key order'''
        return sorted(self.terms.items(), key=lambda item: forest_key(item[0]))

    def trees(self):
        '''(tree, coefficient) pairs of a sum of single-tree forests'''
        return [(f.trees[0], c) for f, c in self.sorted_items()]

    def bullet(self, other):
        # bilinear extension, mismatched pairs vanish
        out = ForestSum()
        for x, a in self.terms.items():
            for y, b in other.terms.items():
                out.add(bullet(x, y), a * b)
        return out

    def erase(self):
        out = ForestSum()
        for f, c in self.terms.items():
            out.add(erase(f), c)
        return out

    def __repr__(self):
        return f'ForestSum({self})'

    def __str__(self):
        return format_terms([(c, f) for f, c in self.sorted_items()], format_forest)
