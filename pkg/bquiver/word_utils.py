from fractions import Fraction
from functools import lru_cache

from bquiver.forest_utils import ForestSum, Node, erase, format_terms


def word_key(word):
    '''Canonical order on words: length first, then lexicographic'''
    return (len(word), word)


class WordPoly:
    """
    A rational linear combination of words over the positive integers.

    Parameters
    ----------
    terms : dict or iterable of (word, coefficient), optional
        Words are tuples of positive integers. Zero coefficients are dropped.

    Notes
    -----
    Class Name: WordPoly
    Elements of the free associative algebra; the codomain of pi and of the
    map delta. Multiplication concatenates words. Printing follows the
    order of word_key, coefficients are printed as p or p/q.

    Examples
    --------
    >>> str(WordPoly({(1, 2): 1, (2, 1): -1}))
    '1*[1,2] - 1*[2,1]'
    """
    __slots__ = ('terms',)

    def __init__(self, terms=None):
        self.terms = {}
        if terms is None:
            return
        items = terms.items() if isinstance(terms, dict) else terms
        for word, c in items:
            self.add(tuple(word), c)

    @classmethod
    def word(cls, letters):
        return cls({tuple(letters): 1})

    @classmethod
    def one(cls):
        return cls({(): 1})

    def add(self, word, coeff):
        if coeff == 0:
            return self
        c = self.terms.get(word, 0) + Fraction(coeff)
        if c == 0:
            self.terms.pop(word, None)
        else:
            self.terms[word] = c
        return self

    def copy(self):
        out = WordPoly()
        out.terms = dict(self.terms)
        return out

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, WordPoly) and other.terms == self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __getitem__(self, word):
        return self.terms.get(tuple(word), Fraction(0))

    def __add__(self, other):
        out = self.copy()
        for word, c in other.terms.items():
            out.add(word, c)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        out = self.copy()
        for word, c in other.terms.items():
            out.add(word, -c)
        return out

    def scale(self, coeff):
        coeff = Fraction(coeff)
        out = WordPoly()
        if coeff != 0:
            out.terms = {w: c * coeff for w, c in self.terms.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, WordPoly):
            return self.scale(other)
        out = WordPoly()
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                out.add(u + v, a * b)
        return out

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def items(self):
        return sorted(self.terms.items(), key=lambda item: word_key(item[0]))

    def __repr__(self):
        return f'WordPoly({self})'

    def __str__(self):
        return format_terms([(c, w) for w, c in self.items()],
                            lambda w: '[' + ','.join(str(a) for a in w) + ']',
                            separator='*')


def wp_add(a, b):
    return a + b


def wp_scale(a, c):
    return a.scale(c)


def wp_mul(a, b):
    '''Distributive concatenation product'''
    return a * b


def wp_product(factors):
    out = WordPoly.one()
    for f in factors:
        out = out * f
        if not out:
            break
    return out


@lru_cache(maxsize=None)
def pi_tree(tree):
    """
    Bracket expansion of a single unlabeled tree.

    Every node is replaced by the commutator of its children:
    pi(U) = pi(U1) pi(U2) - pi(U2) pi(U1), and pi(leaf a) = [a].
    """
    if tree.is_leaf:
        return WordPoly.word((tree.value,))
    left = pi_tree(tree.left)
    right = pi_tree(tree.right)
    return left * right - right * left


def pi(f):
    """
    Free Lie projection of an unlabeled forest.

    Parameters
    ----------
    f : Forest or ForestSum
        A forest, or a linear combination of forests, without labels.

    Returns
    -------
    WordPoly
        The product over the trees of their bracket expansions.

    Examples
    --------
    >>> str(pi(parse_forest('(1 2)')))
    '1*[1,2] - 1*[2,1]'
    """
    if isinstance(f, ForestSum):
        out = WordPoly()
        for forest, c in f.terms.items():
            out = out + pi(forest).scale(c)
        return out
    if f.labeled:
        f = erase(f)
    return wp_product(pi_tree(t) for t in f.trees)


def pi_labeled(f):
    '''pi applied after erasing the labels'''
    return pi(erase(f))


def jacobi(x, y, z):
    """
    The three cyclic left-nested bracketings of x, y, z.

    Returns
    -------
    ForestSum
        ((x y) z) + ((z x) y) + ((y z) x) as single-tree forests; pi of the
        sum is zero by the Jacobi identity.
    """
    return ForestSum([(Node(Node(x, y), z), 1),
                      (Node(Node(z, x), y), 1),
                      (Node(Node(y, z), x), 1)])
