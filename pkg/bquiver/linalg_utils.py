from fractions import Fraction
from math import gcd, lcm


class RatMatrix:
    """
    Dense matrix of exact rationals.

    Parameters
    ----------
    rows : list of list
        Entries convertible to Fraction; all rows have `ncols` entries.
    ncols : int, optional
        Needed when there are no rows.

    Examples
    --------
    >>> rank_kernel(RatMatrix([[1, 1]]))[0]
    1
    """

    def __init__(self, rows, ncols=None):
        self.rows = [[Fraction(x) for x in row] for row in rows]
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        for row in self.rows:
            if len(row) != ncols:
                raise ValueError(f'row of length {len(row)} in a matrix with {ncols} columns')

    @classmethod
    def from_columns(cls, columns, row_keys=None):
        """
        Build a matrix from sparse columns.

        Parameters
        ----------
        columns : list of dict
            row key -> coefficient.
        row_keys : list, optional
            Row order; by default the sorted union of the column supports.
        """
        if row_keys is None:
            row_keys = sorted({k for col in columns for k in col}, key=_sort_key)
        index = {k: i for i, k in enumerate(row_keys)}
        rows = [[0] * len(columns) for _ in row_keys]
        for j, col in enumerate(columns):
            for k, c in col.items():
                rows[index[k]][j] = c
        m = cls(rows, ncols=len(columns))
        m.row_keys = row_keys
        return m

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def column(self, j):
        return [row[j] for row in self.rows]

    def __repr__(self):
        return f'RatMatrix({self.nrows}x{self.ncols})'


def _sort_key(k):
    # words sort by length first
    return (len(k), k) if isinstance(k, tuple) else (0, k)


def _integer_rows(rows):
    out = []
    for row in rows:
        den = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out


def echelon(rows, ncols):
    """
    Fraction-free row echelon form of an integer matrix.

    Returns
    -------
    (list of list, list of int)
        The nonzero echelon rows and their pivot columns. Every elimination
        step divides exactly by the previous pivot.
    """
    m = [row[:] for row in rows]
    pivots = []
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        top = m[r]
        for i in range(r + 1, len(m)):
            row = m[i]
            lead = row[c]
            for j in range(c + 1, ncols):
                row[j] = (top[c] * row[j] - lead * top[j]) // prev
            row[c] = 0
        prev = top[c]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def normalize_vector(vec):
    """
    Scale a rational vector to coprime integers with its first nonzero
    entry positive.
    """
    nonzero = [x for x in vec if x != 0]
    if not nonzero:
        return [Fraction(0)] * len(vec)
    den = lcm(*(Fraction(x).denominator for x in nonzero))
    ints = [int(Fraction(x) * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    sign = 1 if next(x for x in ints if x != 0) > 0 else -1
    return [Fraction(sign * x // g) for x in ints]


def rank_kernel(m):
    """
    Exact rank and kernel basis of a rational matrix.

    Parameters
    ----------
    m : RatMatrix

    Returns
    -------
    (int, list of list)
        The rank and one normalized kernel vector per non-pivot column.

    Notes
    -----
    Function Name: rank_kernel
    Rows are cleared of denominators, brought to echelon form with
    fraction-free elimination and the kernel is read off by back
    substitution, one free column at a time.
    """
    rows, pivots = echelon(_integer_rows(m.rows), m.ncols)
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    kernel = []
    for f in free:
        x = [Fraction(0)] * m.ncols
        x[f] = Fraction(1)
        for row, p in reversed(list(zip(rows, pivots))):
            s = sum(row[j] * x[j] for j in range(p + 1, m.ncols) if row[j])
            x[p] = Fraction(-s, row[p])
        kernel.append(normalize_vector(x))
    return len(pivots), kernel


def rank(m):
    _, pivots = echelon(_integer_rows(m.rows), m.ncols)
    return len(pivots)


class SingularMatrix(ValueError):
    pass


def inverse(m):
    """
    Exact inverse of a square rational matrix by Gauss-Jordan elimination.

    Parameters
    ----------
    m : RatMatrix

    Returns
    -------
    list of list of Fraction

    Raises
    ------
    SingularMatrix
        If `m` is not square or not invertible.
    """
    n = m.nrows
    if m.ncols != n:
        raise SingularMatrix(f'{m} is not square')
    a = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m.rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise SingularMatrix(f'{m} is singular')
        a[c], a[piv] = a[piv], a[c]
        top = a[c]
        p = top[c]
        a[c] = top = [x / p for x in top]
        for i in range(n):
            if i != c and a[i][c] != 0:
                lead = a[i][c]
                a[i] = [x - lead * y for x, y in zip(a[i], top)]
    return [row[n:] for row in a]


class Subspace:
    """
    Span of sparse rational vectors kept in reduced echelon-like form.

    Vectors are dicts key -> Fraction. Each stored row has its largest key
    as pivot with coefficient one, so reduction runs from the largest key
    downwards and always terminates.
    """

    def __init__(self, vectors=()):
        self.rows = {}
        for v in vectors:
            self.insert(v)

    def __len__(self):
        return len(self.rows)

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, vec):
        v = {k: Fraction(c) for k, c in vec.items() if c != 0}
        while True:
            hits = [k for k in v if k in self.rows]
            if not hits:
                return v
            k = max(hits)
            c = v[k]
            for j, d in self.rows[k].items():
                x = v.get(j, 0) - c * d
                if x == 0:
                    v.pop(j, None)
                else:
                    v[j] = x

    def insert(self, vec):
        '''Add a vector, returning the new reduced row or None if it was in the span'''
        v = self.reduce(vec)
        if not v:
            return None
        k = max(v)
        c = v[k]
        row = {j: x / c for j, x in v.items()}
        self.rows[k] = row
        return row

    def contains(self, vec):
        return not self.reduce(vec)

    def basis(self):
        return [dict(self.rows[k]) for k in sorted(self.rows)]


def in_span(vectors, vec):
    '''Exact membership of a sparse vector in the span of sparse vectors'''
    return Subspace(vectors).contains(vec)
