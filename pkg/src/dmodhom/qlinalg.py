"""Exact linear algebra over Q for the truncated complexes.

Row-vector convention throughout: a matrix m maps u to u . m, kernels are
left null spaces, and solve finds u with u . m = rhs.
"""

from fractions import Fraction

from .errors import ContainmentViolated, DmodError

QQ = Fraction


class RationalMatrix:
    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows, ncols=None):
        self.rows = [[QQ(e) for e in row] for row in rows]
        self.nrows = len(self.rows)
        if self.rows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise DmodError("ragged matrix")
        else:
            if ncols is None:
                raise DmodError("empty matrix needs a column count")
            self.ncols = ncols

    @classmethod
    def zero(cls, nrows, ncols):
        return cls([[QQ(0)] * ncols for _ in range(nrows)], ncols=ncols)

    def entry(self, i, j):
        return self.rows[i][j]

    def transpose(self):
        return RationalMatrix([[self.rows[i][j] for i in range(self.nrows)]
                               for j in range(self.ncols)], ncols=self.nrows)

    def mul(self, other):
        if self.ncols != other.nrows:
            raise DmodError("shape mismatch")
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                row.append(sum((self.rows[i][k] * other.rows[k][j]
                                for k in range(self.ncols)), QQ(0)))
            out.append(row)
        return RationalMatrix(out, ncols=other.ncols)

    def apply_left(self, u):
        """u . m for a coordinate list u of length nrows."""
        if len(u) != self.nrows:
            raise DmodError("vector length mismatch")
        return [sum((u[i] * self.rows[i][j] for i in range(self.nrows)),
                    QQ(0)) for j in range(self.ncols)]

    def is_zero(self):
        return all(not e for row in self.rows for e in row)

    def __eq__(self, other):
        return (isinstance(other, RationalMatrix)
                and self.rows == other.rows and self.ncols == other.ncols)

    def __repr__(self):
        return "RationalMatrix(%d x %d)" % (self.nrows, self.ncols)


def rref(m):
    """Reduced row echelon form; returns (RationalMatrix, pivot columns)."""
    rows = [list(r) for r in m.rows]
    nrows, ncols = m.nrows, m.ncols
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [e / pv for e in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return RationalMatrix(rows, ncols=ncols), pivots


def rank(m):
    return len(rref(m)[1])


class Basis:
    """A list of independent coordinate vectors with optional labels."""

    __slots__ = ("vectors", "labels")

    def __init__(self, vectors, labels=None):
        self.vectors = [list(map(QQ, v)) for v in vectors]
        self.labels = labels

    def __len__(self):
        return len(self.vectors)

    def dim(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def kernel_basis(m):
    """Basis of {u : u . m = 0} (left null space)."""
    # Row-reduce m^T; free columns of m^T index kernel coordinates.
    mt = m.transpose()
    red, pivots = rref(mt)
    pivot_set = set(pivots)
    free_cols = [j for j in range(m.nrows) if j not in pivot_set]
    vectors = []
    for fc in free_cols:
        u = [QQ(0)] * m.nrows
        u[fc] = QQ(1)
        for r, pc in enumerate(pivots):
            u[pc] = -red.rows[r][fc]
        vectors.append(u)
    return Basis(vectors)


def solve(m, rhs):
    """Any u with u . m = rhs, or None when inconsistent."""
    mt = m.transpose()
    aug = RationalMatrix([mt.rows[i] + [QQ(rhs[i])] for i in range(mt.nrows)],
                         ncols=mt.ncols + 1)
    red, pivots = rref(aug)
    if mt.ncols in pivots:
        return None
    u = [QQ(0)] * m.nrows
    for r, pc in enumerate(pivots):
        u[pc] = red.rows[r][mt.ncols]
    return u


def in_span(vectors, v):
    """Is v in the rational span of the given vectors?"""
    if not vectors:
        return all(not e for e in v)
    m = RationalMatrix(vectors)
    return solve(m, list(v)) is not None


def quotient_basis(ker, im):
    """Representatives completing span(im) to span(ker).

    Picks kernel vectors greedily in their given order, so the choice is
    reproducible for a fixed basis ordering.
    """
    for v in im:
        if not in_span(ker.vectors, v):
            raise ContainmentViolated("image vector outside the kernel")
    chosen = []
    current = [list(v) for v in im]
    base_rank = rank(RationalMatrix(current, ncols=_width(ker, im))) \
        if current else 0
    r = base_rank
    for v in ker:
        trial = current + [list(v)]
        tr = rank(RationalMatrix(trial))
        if tr > r:
            current = trial
            r = tr
            chosen.append(list(v))
    return Basis(chosen, labels=ker.labels)


def _width(ker, im):
    for v in ker:
        return len(v)
    for v in im:
        return len(v)
    return 0


def independent(vectors):
    """True when the vectors are linearly independent over Q."""
    if not vectors:
        return True
    m = RationalMatrix(vectors)
    return rank(m) == len(vectors)
