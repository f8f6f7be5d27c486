"""Exact arithmetic in the rational Weyl algebra D_n (and D_2n).

Elements are stored normally ordered: every term is c * x^alpha * d^beta
with all x-factors to the left of all d-factors.  Products are expanded
through the closed form

    d^b x^a = sum_k C(a,k) C(b,k) k! x^(a-k) d^(b-k)

applied per variable, which keeps multiplication a single pass over term
pairs instead of a rewriting loop.
"""

from fractions import Fraction
from math import comb, factorial

from .errors import ContextMismatch, DmodError

QQ = Fraction


class WeylAlgebra:
    """Variable bookkeeping for D_n.

    ``nvars`` x-type generators paired with their derivations.  A D_2n
    context built by :meth:`double` records ``pairs_n`` so the maps that
    only make sense there (eta, the diagonal rewrite) can check for it.
    """

    def __init__(self, xnames, dnames, pairs_n=None):
        if len(xnames) != len(dnames) or not xnames:
            raise DmodError("need matching nonempty generator name lists")
        self.xnames = tuple(xnames)
        self.dnames = tuple(dnames)
        self.pairs_n = pairs_n

    @classmethod
    def standard(cls, n):
        return cls(tuple("x%d" % (i + 1) for i in range(n)),
                   tuple("dx%d" % (i + 1) for i in range(n)))

    @classmethod
    def double(cls, n):
        """D_2n with variable order (x1..xn, y1..yn; dx1..dxn, dy1..dyn)."""
        xs = tuple("x%d" % (i + 1) for i in range(n)) + \
            tuple("y%d" % (i + 1) for i in range(n))
        ds = tuple("dx%d" % (i + 1) for i in range(n)) + \
            tuple("dy%d" % (i + 1) for i in range(n))
        return cls(xs, ds, pairs_n=n)

    @property
    def nvars(self):
        return len(self.xnames)

    def is_double(self):
        return self.pairs_n is not None

    def extended(self, extra_names):
        """Context with extra commutative x-type variables appended."""
        extra = tuple(extra_names)
        dummies = tuple("d_" + name for name in extra)
        return WeylAlgebra(self.xnames + extra, self.dnames + dummies)

    def __eq__(self, other):
        return (isinstance(other, WeylAlgebra)
                and self.xnames == other.xnames
                and self.dnames == other.dnames)

    def __hash__(self):
        return hash((self.xnames, self.dnames))

    def __repr__(self):
        return "WeylAlgebra(%s)" % ",".join(self.xnames)

    def zero(self):
        return WeylElement(self, {})

    def one(self):
        return self.monomial((0,) * self.nvars, (0,) * self.nvars)

    def monomial(self, xexp, dexp, coeff=1):
        xexp, dexp = tuple(xexp), tuple(dexp)
        if len(xexp) != self.nvars or len(dexp) != self.nvars:
            raise DmodError("exponent length mismatch")
        c = QQ(coeff)
        return WeylElement(self, {(xexp, dexp): c} if c else {})

    def x(self, i, power=1):
        e = [0] * self.nvars
        e[i] = power
        return self.monomial(tuple(e), (0,) * self.nvars)

    def d(self, i, power=1):
        e = [0] * self.nvars
        e[i] = power
        return self.monomial((0,) * self.nvars, tuple(e))

    def theta(self, i):
        """The Euler operator x_i d_i."""
        return self.x(i) * self.d(i)

    def scalar(self, c):
        return self.monomial((0,) * self.nvars, (0,) * self.nvars, c)


def _term_product(xe1, de1, xe2, de2):
    """Normally order (x^xe1 d^de1)(x^xe2 d^de2).

    Yields (rational multiplier, xexp, dexp) triples; one per contraction
    vector k with 0 <= k_i <= min(de1_i, xe2_i).
    """
    n = len(xe1)
    hot = [i for i in range(n) if de1[i] and xe2[i]]
    base_x = tuple(a + b for a, b in zip(xe1, xe2))
    base_d = tuple(a + b for a, b in zip(de1, de2))
    if not hot:
        yield 1, base_x, base_d
        return
    stack = [(0, 1, base_x, base_d)]
    while stack:
        pos, mult, xs, ds = stack.pop()
        if pos == len(hot):
            yield mult, xs, ds
            continue
        i = hot[pos]
        kmax = min(de1[i], xe2[i])
        for k in range(kmax + 1):
            if k == 0:
                stack.append((pos + 1, mult, xs, ds))
            else:
                m = mult * comb(xe2[i], k) * comb(de1[i], k) * factorial(k)
                xs2 = xs[:i] + (xs[i] - k,) + xs[i + 1:]
                ds2 = ds[:i] + (ds[i] - k,) + ds[i + 1:]
                stack.append((pos + 1, m, xs2, ds2))


def _grevlex_key(exps):
    return (sum(exps),) + tuple(-e for e in reversed(exps))


class WeylElement:
    """A finite sum of normally ordered terms over the rationals.

    Terms live in ``self.terms``: a dict (xexp, dexp) -> nonzero Fraction.
    Instances are treated as immutable; all operations return new values.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = terms

    # -- construction helpers ------------------------------------------

    @staticmethod
    def _merge(ctx, acc):
        return WeylElement(ctx, {m: c for m, c in acc.items() if c})

    def _check(self, other):
        if self.ctx != other.ctx:
            raise ContextMismatch(
                "%r vs %r" % (self.ctx, other.ctx))

    # -- basic predicates ----------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_scalar(self):
        if not self.terms:
            return True
        n = self.ctx.nvars
        zero = (0,) * n
        return set(self.terms) == {(zero, zero)}

    def scalar_value(self):
        if not self.is_scalar():
            raise DmodError("not a scalar")
        return next(iter(self.terms.values()), QQ(0))

    def is_polynomial(self):
        """True when no derivation occurs (an element of K[x])."""
        return all(not any(de) for _, de in self.terms)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(xe) + sum(de) for xe, de in self.terms)

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.scalar(other)
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, QQ(0)) + c
        return self._merge(self.ctx, acc)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = QQ(other)
            if not c:
                return self.ctx.zero()
            return WeylElement(self.ctx,
                               {m: v * c for m, v in self.terms.items()})
        self._check(other)
        acc = {}
        for (xe1, de1), c1 in self.terms.items():
            for (xe2, de2), c2 in other.terms.items():
                c = c1 * c2
                for mult, xs, ds in _term_product(xe1, de1, xe2, de2):
                    key = (xs, ds)
                    acc[key] = acc.get(key, QQ(0)) + c * mult
        return self._merge(self.ctx, acc)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, k):
        if k < 0:
            raise DmodError("negative operator power")
        result = self.ctx.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.scalar(other)
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    # -- structural maps --------------------------------------------------

    def tau(self):
        """Standard transposition x^a d^b -> (-d)^b x^a, normally ordered."""
        acc = {}
        for (xe, de), c in self.terms.items():
            sign = -1 if sum(de) % 2 else 1
            for mult, xs, ds in _term_product((0,) * len(xe), de, xe,
                                              (0,) * len(de)):
                key = (xs, ds)
                acc[key] = acc.get(key, QQ(0)) + c * sign * mult
        return self._merge(self.ctx, acc)

    def substitute(self, x_images, d_images):
        """Ring map sending generators to the given elements.

        Images must pairwise satisfy the Weyl relations for the result to
        be meaningful; used for fourier and eta.
        """
        ctx = x_images[0].ctx
        out = ctx.zero()
        for (xe, de), c in sorted(self.terms.items()):
            term = ctx.scalar(c)
            for i, e in enumerate(xe):
                for _ in range(e):
                    term = term * x_images[i]
            for i, e in enumerate(de):
                for _ in range(e):
                    term = term * d_images[i]
            out = out + term
        return out

    def fourier(self, d=None):
        """x_i -> d_i, d_i -> -x_i on the first d variables."""
        n = self.ctx.nvars
        if d is None:
            d = n
        if not 1 <= d <= n:
            raise DmodError("fourier index out of range")
        xi = [self.ctx.d(i) if i < d else self.ctx.x(i) for i in range(n)]
        di = [-self.ctx.x(i) if i < d else self.ctx.d(i) for i in range(n)]
        return self.substitute(xi, di)

    def fourier_inverse(self, d=None):
        n = self.ctx.nvars
        if d is None:
            d = n
        xi = [-self.ctx.d(i) if i < d else self.ctx.x(i) for i in range(n)]
        di = [self.ctx.x(i) if i < d else self.ctx.d(i) for i in range(n)]
        return self.substitute(xi, di)

    def eta(self):
        return self.substitute(*_eta_images(self.ctx, inverse=False))

    def eta_inverse(self):
        return self.substitute(*_eta_images(self.ctx, inverse=True))

    # -- normalization / inspection ---------------------------------------

    def sorted_terms(self):
        """Terms sorted grevlex-descending on (alpha, beta) jointly."""
        return sorted(self.terms.items(),
                      key=lambda mc: _grevlex_key(mc[0][0] + mc[0][1]),
                      reverse=True)

    def coefficient(self, xexp, dexp):
        return self.terms.get((tuple(xexp), tuple(dexp)), QQ(0))

    def map_coefficients(self, fn):
        return self._merge(self.ctx, {m: fn(c) for m, c in self.terms.items()})

    # -- display / serialization ------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for (xe, de), c in self.sorted_terms():
            factors = []
            for i, e in enumerate(xe):
                if e == 1:
                    factors.append(self.ctx.xnames[i])
                elif e:
                    factors.append("%s^%d" % (self.ctx.xnames[i], e))
            for i, e in enumerate(de):
                if e == 1:
                    factors.append(self.ctx.dnames[i])
                elif e:
                    factors.append("%s^%d" % (self.ctx.dnames[i], e))
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = "%s*%s" % (abs(c), mono)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += " %s %s" % (sign, body)
        return out

    __repr__ = __str__

    def to_json(self):
        return {"terms": [{"c": str(c), "x": list(xe), "d": list(de)}
                          for (xe, de), c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, ctx, data):
        acc = {}
        for t in data["terms"]:
            key = (tuple(t["x"]), tuple(t["d"]))
            acc[key] = acc.get(key, QQ(0)) + QQ(t["c"])
        return cls._merge(ctx, acc)


def _eta_images(ctx, inverse):
    """Generator images of the algebra isomorphism eta on D_2n.

    eta:  x_i -> x_i/2 - dy_i   dx_i -> y_i/2 + dx_i
          y_i -> -x_i/2 - dy_i  dy_i -> y_i/2 - dx_i
    Its inverse sends x_i -> x_i - y_i, y_i -> dx_i + dy_i,
    dx_i -> (dx_i - dy_i)/2, dy_i -> -(x_i + y_i)/2.
    """
    if not ctx.is_double():
        raise ContextMismatch("eta needs a D_2n context")
    n = ctx.pairs_n
    half = QQ(1, 2)
    xi, di = [], []
    for i in range(n):
        x, y = ctx.x(i), ctx.x(n + i)
        dx, dy = ctx.d(i), ctx.d(n + i)
        if not inverse:
            xi.append(x * half - dy)
            di.append(y * half + dx)
        else:
            xi.append(x - y)
            di.append((dx - dy) * half)
    for i in range(n):
        x, y = ctx.x(i), ctx.x(n + i)
        dx, dy = ctx.d(i), ctx.d(n + i)
        if not inverse:
            xi.append(-x * half - dy)
            di.append(y * half - dx)
        else:
            xi.append(dx + dy)
            di.append(-(x + y) * half)
    return xi, di


def box_embed(p, q, double_ctx=None):
    """Image of p (x) q inside D_2n: p in the x-copy, q in the y-copy."""
    if p.ctx != q.ctx:
        raise ContextMismatch("box factors from different base algebras")
    n = p.ctx.nvars
    ctx = double_ctx or WeylAlgebra.double(n)
    if ctx.pairs_n != n:
        raise ContextMismatch("double context size mismatch")
    acc = {}
    for (xe1, de1), c1 in p.terms.items():
        for (xe2, de2), c2 in q.terms.items():
            key = (xe1 + xe2, de1 + de2)
            acc[key] = acc.get(key, QQ(0)) + c1 * c2
    return WeylElement._merge(ctx, acc)


class FreeVector:
    """A row vector in D^rank; module maps act by right multiplication."""

    __slots__ = ("ctx", "entries")

    def __init__(self, ctx, entries):
        self.ctx = ctx
        self.entries = tuple(entries)
        for e in self.entries:
            if e.ctx != ctx:
                raise ContextMismatch("vector entry from another context")

    @classmethod
    def zero(cls, ctx, rank):
        return cls(ctx, [ctx.zero()] * rank)

    @classmethod
    def unit(cls, ctx, rank, i, value=None):
        entries = [ctx.zero()] * rank
        entries[i] = value if value is not None else ctx.one()
        return cls(ctx, entries)

    @classmethod
    def wrap(cls, element):
        return cls(element.ctx, [element])

    @property
    def rank(self):
        return len(self.entries)

    def is_zero(self):
        return all(e.is_zero() for e in self.entries)

    def __add__(self, other):
        return FreeVector(self.ctx, [a + b for a, b in
                                     zip(self.entries, other.entries)])

    def __sub__(self, other):
        return FreeVector(self.ctx, [a - b for a, b in
                                     zip(self.entries, other.entries)])

    def __neg__(self):
        return FreeVector(self.ctx, [-a for a in self.entries])

    def left_mul(self, op):
        """op . v with op a WeylElement or rational scalar."""
        if isinstance(op, (int, Fraction)):
            return FreeVector(self.ctx, [e * QQ(op) for e in self.entries])
        return FreeVector(self.ctx, [op * e for e in self.entries])

    def __eq__(self, other):
        return (isinstance(other, FreeVector) and self.ctx == other.ctx
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ctx, self.entries))

    def map(self, fn):
        return FreeVector(fn(self.entries[0]).ctx if self.entries else self.ctx,
                          [fn(e) for e in self.entries])

    def __str__(self):
        return "[" + ", ".join(str(e) for e in self.entries) + "]"

    __repr__ = __str__

    def to_json(self):
        return [e.to_json() for e in self.entries]


class OperatorMatrix:
    """Rectangular operator matrix acting on row vectors from the right."""

    __slots__ = ("ctx", "nrows", "ncols", "rows")

    def __init__(self, ctx, rows, ncols=None):
        self.ctx = ctx
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if self.rows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise DmodError("ragged matrix")
        else:
            if ncols is None:
                raise DmodError("empty matrix needs an explicit column count")
            self.ncols = ncols

    @classmethod
    def identity(cls, ctx, n):
        return cls(ctx, [[ctx.one() if i == j else ctx.zero()
                          for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zero(cls, ctx, nrows, ncols):
        return cls(ctx, [[ctx.zero()] * ncols for _ in range(nrows)],
                   ncols=ncols)

    @classmethod
    def from_rows(cls, vectors, ncols=None, ctx=None):
        if vectors:
            return cls(vectors[0].ctx, [v.entries for v in vectors])
        return cls(ctx, [], ncols=ncols)

    def row(self, i):
        return FreeVector(self.ctx, self.rows[i])

    def row_vectors(self):
        return [self.row(i) for i in range(self.nrows)]

    def entry(self, i, j):
        return self.rows[i][j]

    def __mul__(self, other):
        """Matrix product; (.A)(.B) composes to .(AB)."""
        if self.ncols != other.nrows:
            raise DmodError("shape mismatch %dx%d * %dx%d" %
                            (self.nrows, self.ncols, other.nrows, other.ncols))
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = self.ctx.zero()
                for k in range(self.ncols):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return OperatorMatrix(self.ctx, out, ncols=other.ncols)

    def apply(self, vector):
        """vector . self for a FreeVector of length nrows."""
        if vector.rank != self.nrows:
            raise DmodError("vector/matrix shape mismatch")
        out = []
        for j in range(self.ncols):
            acc = self.ctx.zero()
            for i in range(self.nrows):
                acc = acc + vector.entries[i] * self.rows[i][j]
            out.append(acc)
        return FreeVector(self.ctx, out)

    def tau(self):
        """tau(A) = [tau(a_ij)]^T, an s x r matrix."""
        out = [[self.rows[i][j].tau() for i in range(self.nrows)]
               for j in range(self.ncols)]
        return OperatorMatrix(self.ctx, out, ncols=self.nrows)

    def map(self, fn):
        rows = [[fn(e) for e in row] for row in self.rows]
        ctx = rows[0][0].ctx if (rows and rows[0]) else self.ctx
        return OperatorMatrix(ctx, rows, ncols=self.ncols)

    def scale(self, c):
        return self.map(lambda e: e * c)

    def is_zero(self):
        return all(e.is_zero() for row in self.rows for e in row)

    def __eq__(self, other):
        return (isinstance(other, OperatorMatrix) and self.ctx == other.ctx
                and self.nrows == other.nrows and self.ncols == other.ncols
                and all(self.rows[i][j] == other.rows[i][j]
                        for i in range(self.nrows) for j in range(self.ncols)))

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in row)
                               for row in self.rows) + "]"

    __repr__ = __str__

    def to_json(self):
        return {"nrows": self.nrows, "ncols": self.ncols,
                "rows": [[e.to_json() for e in row] for row in self.rows]}


# ---------------------------------------------------------------------------
# Polynomial helpers and the solution pairing.
#
# Plain commutative polynomials over Q are dicts exponent-tuple -> Fraction;
# they carry no context and exist only to support the operator action on
# rational functions c/f^k.
# ---------------------------------------------------------------------------


def poly_from_element(p):
    if not p.is_polynomial():
        raise DmodError("element has derivation factors")
    return {xe: c for (xe, de), c in p.terms.items()}


def poly_to_element(ctx, poly):
    zero = (0,) * ctx.nvars
    return WeylElement._merge(
        ctx, {(xe, zero): c for xe, c in poly.items()})


def poly_mul(a, b):
    acc = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            acc[key] = acc.get(key, QQ(0)) + ca * cb
    return {e: c for e, c in acc.items() if c}


def poly_scale(a, c):
    c = QQ(c)
    return {e: v * c for e, v in a.items()} if c else {}


def poly_add(a, b):
    acc = dict(a)
    for e, c in b.items():
        acc[e] = acc.get(e, QQ(0)) + c
    return {e: c for e, c in acc.items() if c}


def poly_diff(a, i):
    acc = {}
    for e, c in a.items():
        if e[i]:
            key = e[:i] + (e[i] - 1,) + e[i + 1:]
            acc[key] = acc.get(key, QQ(0)) + c * e[i]
    return acc


def poly_pow(a, k):
    out = {(0,) * _poly_nvars(a): QQ(1)}
    for _ in range(k):
        out = poly_mul(out, a)
    return out


def _poly_nvars(a):
    for e in a:
        return len(e)
    raise DmodError("cannot infer arity of the zero polynomial")


class RationalFunction:
    """c / f^k with polynomial numerator and a fixed denominator base."""

    __slots__ = ("numer", "base", "k")

    def __init__(self, numer, base, k=0):
        self.numer = numer
        self.base = base
        self.k = k

    @classmethod
    def from_poly(cls, poly, nvars):
        one = {(0,) * nvars: QQ(1)}
        return cls(poly, one, 0)

    def nvars(self):
        return _poly_nvars(self.base) if self.base else _poly_nvars(self.numer)

    def is_zero(self):
        return not self.numer

    def diff(self, i):
        # (c f^-k)' = (c' f - k c f_i) f^-(k+1)
        dnum = poly_add(poly_mul(poly_diff(self.numer, i), self.base),
                        poly_scale(poly_mul(self.numer, poly_diff(self.base, i)),
                                   -self.k))
        return RationalFunction(dnum, self.base, self.k + 1)

    def mul_x(self, i, power=1):
        mono = {tuple(power if j == i else 0
                      for j in range(self.nvars())): QQ(1)}
        return RationalFunction(poly_mul(self.numer, mono), self.base, self.k)

    def scale(self, c):
        return RationalFunction(poly_scale(self.numer, c), self.base, self.k)

    def add(self, other):
        if self.base != other.base:
            raise DmodError("rational functions need a common base")
        k = max(self.k, other.k)
        a = poly_mul(self.numer, poly_pow(self.base, k - self.k))
        b = poly_mul(other.numer, poly_pow(other.base, k - other.k))
        return RationalFunction(poly_add(a, b), self.base, k)

    def same_line(self, other):
        """True if self = c * other for some nonzero rational c."""
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        k = max(self.k, other.k)
        a = poly_mul(self.numer, poly_pow(self.base, k - self.k))
        b = poly_mul(other.numer, poly_pow(other.base, k - other.k))
        if set(a) != set(b):
            return False
        e0 = next(iter(a))
        ratio = a[e0] / b[e0]
        return all(a[e] == ratio * b[e] for e in a)

    def __str__(self):
        num = str(poly_to_element(WeylAlgebra.standard(self.nvars()),
                                  self.numer))
        if self.k == 0:
            return num
        den = str(poly_to_element(WeylAlgebra.standard(self.nvars()),
                                  self.base))
        return "(%s) * (%s)^-%d" % (num, den, self.k)


def apply_operator(op, f):
    """Natural action of an operator on a rational function or polynomial.

    ``f`` may be a RationalFunction or a bare polynomial dict; the result
    is a RationalFunction.  Used to verify computed solutions.
    """
    if isinstance(f, dict):
        f = RationalFunction.from_poly(f, op.ctx.nvars)
    out = RationalFunction({}, f.base, 0)
    for (xe, de), c in op.terms.items():
        g = f
        for i in range(len(de)):
            for _ in range(de[i]):
                g = g.diff(i)
        for i in range(len(xe)):
            if xe[i]:
                g = g.mul_x(i, xe[i])
        out = out.add(g.scale(c))
    return out


# ---------------------------------------------------------------------------
# Operator text grammar (shared with the command line front end):
#   expr   := term (("+"|"-") term)*
#   term   := factor ("*" factor)*        -- juxtaposition not allowed
#   factor := atom ("^" integer)?
#   atom   := identifier | rational | "(" expr ")" | "-" factor
#   rational := integer ("/" integer)?
# ---------------------------------------------------------------------------


def _tokenize_operator(text, line=1, col0=0):
    from .errors import ParseError
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif ch in "+-*^()/":
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ParseError("unexpected character %r" % ch, line, col0 + i + 1)
    tokens.append(("end", "", len(text)))
    return tokens


def parse_operator(ctx, text, line=1, col0=0):
    """Parse an operator expression in the given context."""
    from .errors import ParseError
    tokens = _tokenize_operator(text, line, col0)
    pos = [0]
    names = {}
    for i, nm in enumerate(ctx.xnames):
        names[nm] = ctx.x(i)
    for i, nm in enumerate(ctx.dnames):
        names[nm] = ctx.d(i)

    def peek():
        return tokens[pos[0]]

    def take(kind=None):
        tok = tokens[pos[0]]
        if kind is not None and tok[0] != kind:
            raise ParseError("expected %s, found %r" % (kind, tok[1] or "end"),
                             line, col0 + tok[2] + 1)
        pos[0] += 1
        return tok

    def parse_atom():
        kind, value, at = peek()
        if kind == "int":
            take()
            if peek()[0] == "/":
                take()
                den = take("int")[1]
                return ctx.scalar(QQ(int(value), int(den)))
            return ctx.scalar(int(value))
        if kind == "name":
            take()
            if value not in names:
                raise ParseError("undeclared variable %r" % value,
                                 line, col0 + at + 1)
            return names[value]
        if kind == "(":
            take()
            e = parse_expr()
            take(")")
            return e
        if kind == "-":
            take()
            return -parse_factor()
        raise ParseError("expected operand, found %r" % (value or "end"),
                         line, col0 + at + 1)

    def parse_factor():
        base = parse_atom()
        if peek()[0] == "^":
            take()
            neg = False
            if peek()[0] == "-":
                take()
                neg = True
            exp = int(take("int")[1])
            if neg:
                raise ParseError("negative exponent", line, col0 + peek()[2])
            return base ** exp
        return base

    def parse_term():
        out = parse_factor()
        while peek()[0] == "*":
            take()
            out = out * parse_factor()
        return out

    def parse_expr():
        kind = peek()[0]
        out = parse_term()
        while peek()[0] in ("+", "-"):
            op = take()[0]
            rhs = parse_term()
            out = out + rhs if op == "+" else out - rhs
        return out

    result = parse_expr()
    tok = peek()
    if tok[0] != "end":
        raise ParseError("trailing input %r" % tok[1], line, col0 + tok[2] + 1)
    return result


def push_through_inverse(p, f_elem, m):
    """Rewrite P * f^-m as f^-(m+e) * Ptilde inside D[f^-1].

    Returns (Ptilde, e).  Uses d_i f^-j = f^-(j+1) (f d_i - j f_i).
    """
    ctx = p.ctx
    n = ctx.nvars
    df = [poly_to_element(ctx, poly_diff(poly_from_element(f_elem), i))
          for i in range(n)]
    e = max((sum(de) for _, de in p.terms), default=0)
    out = ctx.zero()
    for (xe, de), c in p.terms.items():
        # peel derivations off the right: d_i f^-j = f^-(j+1)(f d_i - j f_i)
        tail = ctx.one()
        j = m
        seq = []
        for i in range(n):
            seq.extend([i] * de[i])
        for idx in range(len(seq) - 1, -1, -1):
            i = seq[idx]
            tail = (f_elem * ctx.d(i) - j * df[i]) * tail
            j += 1
        # x^a f^-j tail = f^-(m+e) f^(m+e-j) x^a tail
        padded = (f_elem ** ((m + e) - j)) * ctx.monomial(xe, (0,) * n) * tail
        out = out + padded * c
    return out, e
