"""Left Groebner bases in free modules over the Weyl algebra.

Weight orders (u, v) with u + v >= 0 are not well-orders on D, so those
computations run in the homogenized Weyl algebra (central variable h,
relation d_i x_i = x_i d_i + h^2) and are dehomogenized afterwards; term
orders run directly.

Internal module monomials are (component, xexp, dexp, hexp) tuples and
module elements are dicts monomial -> Fraction.
"""

import heapq
import itertools
import logging
from fractions import Fraction
from math import comb, factorial

from .errors import DmodError, NotInImage
from .weyl import FreeVector, OperatorMatrix, WeylElement

QQ = Fraction
log = logging.getLogger("dmodhom.groebner")


# ---------------------------------------------------------------------------
# Term orders
# ---------------------------------------------------------------------------


def _revlex(exps):
    return tuple(-e for e in reversed(exps))


class StandardOrder:
    """Position over graded reverse lexicographic; e_0 largest.

    ``priority`` optionally remaps component rank (larger priority value =
    larger component); used to push one component to the bottom when
    computing component quotients.
    """

    kind = "standard"
    weighted = False

    def __init__(self, priority=None):
        self.priority = priority

    def comp_rank(self, c):
        return self.priority[c] if self.priority is not None else -c

    def key(self, mono):
        c, xe, de, he = mono
        exps = xe + de + (he,)
        return (self.comp_rank(c), sum(exps)) + _revlex(exps)


class WeightedOrder:
    """Degree, then weight u.alpha + v.beta + shift(comp), then standard.

    Requires u + v >= 0 componentwise; computations homogenize.
    """

    kind = "weighted"
    weighted = True

    def __init__(self, u, v, shift=None):
        self.u = tuple(u)
        self.v = tuple(v)
        if any(a + b < 0 for a, b in zip(self.u, self.v)):
            raise DmodError("weight order needs u + v >= 0")
        self.shift = tuple(shift) if shift is not None else None

    def with_shift(self, shift):
        return WeightedOrder(self.u, self.v, shift)

    def wdeg(self, mono):
        c, xe, de, _ = mono
        w = sum(a * b for a, b in zip(self.u, xe)) + \
            sum(a * b for a, b in zip(self.v, de))
        if self.shift is not None:
            w += self.shift[c]
        return w

    def key(self, mono):
        c, xe, de, he = mono
        exps = xe + de + (he,)
        return (sum(exps), self.wdeg(mono), -c) + _revlex(exps)


class ElimOrder:
    """Eliminate the flagged variables: their total degree is primary."""

    kind = "elim"
    weighted = False

    def __init__(self, elim_x, elim_d):
        self.elim_x = tuple(elim_x)
        self.elim_d = tuple(elim_d)

    def key(self, mono):
        c, xe, de, he = mono
        exps = xe + de + (he,)
        edeg = sum(e for e, f in zip(xe, self.elim_x) if f) + \
            sum(e for e, f in zip(de, self.elim_d) if f)
        return (edeg, sum(exps)) + _revlex(exps) + (-c,)


class ParamOrder:
    """Graded order on the first ``n_real`` variable pairs; the remaining
    (commutative parameter) variables compare last, so a parameter-free
    basis reduces parametric elements coefficientwise."""

    kind = "param"
    weighted = False

    def __init__(self, n_real):
        self.n_real = n_real

    def key(self, mono):
        c, xe, de, he = mono
        n = self.n_real
        real = xe[:n] + de[:n] + (he,)
        par = xe[n:] + de[n:]
        return ((sum(real),) + _revlex(real) + (-c,)
                + (sum(par),) + _revlex(par))


def standard_order():
    return StandardOrder()


def weighted_order(u, v, shift=None):
    return WeightedOrder(u, v, shift)


def restriction_weight(nvars, d, shift=None):
    """(-w, w) with w = indicator of the first d variables."""
    u = tuple(-1 if i < d else 0 for i in range(nvars))
    v = tuple(1 if i < d else 0 for i in range(nvars))
    return WeightedOrder(u, v, shift)


def integration_weight(nvars, d, shift=None):
    u = tuple(1 if i < d else 0 for i in range(nvars))
    v = tuple(-1 if i < d else 0 for i in range(nvars))
    return WeightedOrder(u, v, shift)


class _TagOrder:
    """Main components under ``base``, tag components strictly below."""

    def __init__(self, base, main_rank):
        self.base = base
        self.main_rank = main_rank
        self.weighted = base.weighted

    def key(self, mono):
        c, xe, de, he = mono
        if c < self.main_rank:
            return (1,) + tuple(self.base.key(mono))
        exps = xe + de + (he,)
        return (0, sum(exps), -c) + _revlex(exps)


# ---------------------------------------------------------------------------
# Internal arithmetic on (component, xe, de, he) -> coefficient dicts
# ---------------------------------------------------------------------------


def _vec_to_dict(v):
    out = {}
    for c, entry in enumerate(v.entries):
        for (xe, de), coeff in entry.terms.items():
            out[(c, xe, de, 0)] = coeff
    return out


def _dict_to_vec(ctx, rank, d):
    entries = [dict() for _ in range(rank)]
    for (c, xe, de, he), coeff in d.items():
        if he:
            raise DmodError("dehomogenize before converting back")
        key = (xe, de)
        entries[c][key] = entries[c].get(key, QQ(0)) + coeff
    return FreeVector(ctx, [WeylElement._merge(ctx, e) for e in entries])


def _homogenize(d):
    if not d:
        return d
    top = max(sum(xe) + sum(de) + he for (_, xe, de, he) in d)
    return {(c, xe, de, he + top - sum(xe) - sum(de) - he): coeff
            for (c, xe, de, he), coeff in d.items()}


def _dehomogenize(d):
    out = {}
    for (c, xe, de, _), coeff in d.items():
        key = (c, xe, de, 0)
        out[key] = out.get(key, QQ(0)) + coeff
    return {k: v for k, v in out.items() if v}


def _h_strip(d):
    """Divide by the largest common power of h."""
    if not d:
        return d, 0
    s = min(he for (_, _, _, he) in d)
    if not s:
        return d, 0
    return {(c, xe, de, he - s): v for (c, xe, de, he), v in d.items()}, s


def _mono_mul_dict(coeff, xe1, de1, he1, d):
    """Left multiply the module element d by coeff * x^xe1 d^de1 h^he1."""
    out = {}
    for (c, xe2, de2, he2), c2 in d.items():
        cc = coeff * c2
        n = len(xe1)
        hot = [i for i in range(n) if de1[i] and xe2[i]]
        base_x = tuple(a + b for a, b in zip(xe1, xe2))
        base_d = tuple(a + b for a, b in zip(de1, de2))
        he = he1 + he2
        if not hot:
            key = (c, base_x, base_d, he)
            out[key] = out.get(key, QQ(0)) + cc
            continue
        stack = [(0, 1, base_x, base_d, he)]
        while stack:
            pos, mult, xs, ds, hh = stack.pop()
            if pos == len(hot):
                key = (c, xs, ds, hh)
                out[key] = out.get(key, QQ(0)) + cc * mult
                continue
            i = hot[pos]
            for k in range(min(de1[i], xe2[i]) + 1):
                if k == 0:
                    stack.append((pos + 1, mult, xs, ds, hh))
                else:
                    m = mult * comb(xe2[i], k) * comb(de1[i], k) * factorial(k)
                    stack.append((pos + 1, m,
                                  xs[:i] + (xs[i] - k,) + xs[i + 1:],
                                  ds[:i] + (ds[i] - k,) + ds[i + 1:],
                                  hh + 2 * k))
        del stack
    return {k: v for k, v in out.items() if v}


def _add_into(acc, d, scale=QQ(1)):
    for k, v in d.items():
        acc[k] = acc.get(k, QQ(0)) + scale * v
        if not acc[k]:
            del acc[k]
    return acc


def _keyfun(order):
    """Memoized order key; monomials repeat heavily across reductions."""
    keyf = getattr(order, "_memo_key", None)
    if keyf is None:
        cache = {}
        raw = order.key

        def keyf(mono):
            k = cache.get(mono)
            if k is None:
                k = raw(mono)
                cache[mono] = k
            return k

        order._memo_key = keyf
    return keyf


def _lead(d, order):
    return max(d, key=_keyfun(order))


def _divides(m1, m2):
    c1, xe1, de1, he1 = m1
    c2, xe2, de2, he2 = m2
    return (c1 == c2 and he1 <= he2
            and all(a <= b for a, b in zip(xe1, xe2))
            and all(a <= b for a, b in zip(de1, de2)))


def _mono_quot(m2, m1):
    _, xe1, de1, he1 = m1
    _, xe2, de2, he2 = m2
    return (tuple(a - b for a, b in zip(xe2, xe1)),
            tuple(a - b for a, b in zip(de2, de1)), he2 - he1)


def _neg_key(key):
    return tuple(-v for v in key)


def _reduce(f, basis, order, quotients=None):
    """Full normal form of f against basis entries (lead, dict) pairs.

    ``quotients`` maps basis index -> accumulated quotient dict; basis
    elements are assumed monic.  Terms are visited largest-first through a
    lazy-deletion heap.
    """
    keyf = _keyfun(order)
    work = dict(f)
    remainder = {}
    by_comp = {}
    for idx, (lead, g) in enumerate(basis):
        by_comp.setdefault(lead[0], []).append((lead, g, idx))
    heap = [(_neg_key(keyf(m)), m) for m in work]
    heapq.heapify(heap)
    while heap:
        _, t = heapq.heappop(heap)
        ct = work.get(t)
        if ct is None:
            continue
        hit = None
        for lead, g, idx in by_comp.get(t[0], ()):
            if _divides(lead, t):
                hit = (lead, g, idx)
                break
        if hit is None:
            remainder[t] = ct
            del work[t]
            continue
        lead, g, idx = hit
        xq, dq, hq = _mono_quot(t, lead)
        piece = _mono_mul_dict(ct, xq, dq, hq, g)
        for m, v in piece.items():
            cur = work.get(m)
            if cur is None:
                work[m] = -v
                heapq.heappush(heap, (_neg_key(keyf(m)), m))
            else:
                cur = cur - v
                if cur:
                    work[m] = cur
                else:
                    del work[m]
        if quotients is not None:
            qd = quotients.setdefault(idx, {})
            key = (0, xq, dq, hq)
            qd[key] = qd.get(key, QQ(0)) + ct
    return remainder


def _spair(lead1, g1, lead2, g2, order):
    _, xe1, de1, he1 = lead1
    _, xe2, de2, he2 = lead2
    lx = tuple(max(a, b) for a, b in zip(xe1, xe2))
    ld = tuple(max(a, b) for a, b in zip(de1, de2))
    lh = max(he1, he2)
    s1 = _mono_mul_dict(QQ(1), tuple(a - b for a, b in zip(lx, xe1)),
                        tuple(a - b for a, b in zip(ld, de1)), lh - he1, g1)
    s2 = _mono_mul_dict(QQ(1), tuple(a - b for a, b in zip(lx, xe2)),
                        tuple(a - b for a, b in zip(ld, de2)), lh - he2, g2)
    return _add_into(dict(s1), s2, QQ(-1))


def _monic(d, order):
    c = d[_lead(d, order)]
    if c == 1:
        return d
    inv = QQ(1) / c
    return {k: v * inv for k, v in d.items()}


def _buchberger(inputs, order, tag_rank=None):
    """Groebner basis of the span of ``inputs`` (internal dicts).

    Returns the auto-reduced monic basis as a list of dicts, sorted by
    descending leading monomial.  When ``tag_rank`` is given, components
    >= tag_rank form a cofactor block: pairs between two tag-lead rows are
    skipped and tag-lead rows are never discarded by minimalization.
    """
    G = []
    leads = []
    for d in inputs:
        if d:
            G.append(_monic(dict(d), order))
            leads.append(_lead(G[-1], order))
    pairs = []
    counter = itertools.count()

    def is_tag(lead):
        return tag_rank is not None and lead[0] >= tag_rank

    def push_pairs(j):
        if is_tag(leads[j]):
            return
        for i in range(j):
            if leads[i][0] != leads[j][0]:
                continue
            _, xe1, de1, he1 = leads[i]
            _, xe2, de2, he2 = leads[j]
            lcm = (leads[i][0],
                   tuple(max(a, b) for a, b in zip(xe1, xe2)),
                   tuple(max(a, b) for a, b in zip(de1, de2)),
                   max(he1, he2))
            heapq.heappush(pairs, (order.key(lcm), next(counter), i, j))

    for j in range(len(G)):
        push_pairs(j)
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        s = _spair(leads[i], G[i], leads[j], G[j], order)
        if not s:
            continue
        r = _reduce(s, list(zip(leads, G)), order)
        if not r:
            continue
        G.append(_monic(r, order))
        leads.append(_lead(G[-1], order))
        log.debug("new basis element %d with lead %s", len(G) - 1, leads[-1])
        push_pairs(len(G) - 1)
    # minimalize: drop elements whose lead is divisible by another lead
    keep = []
    for i in range(len(G)):
        if is_tag(leads[i]):
            keep.append(i)
            continue
        if not any(j != i and _divides(leads[j], leads[i]) and
                   (not _divides(leads[i], leads[j]) or j < i)
                   for j in range(len(G))):
            keep.append(i)
    G = [G[i] for i in keep]
    leads = [leads[i] for i in keep]
    # auto-reduce tails
    changed = True
    while changed:
        changed = False
        for i in range(len(G)):
            others = [(leads[j], G[j]) for j in range(len(G)) if j != i]
            r = _reduce(G[i], others, order)
            r = _monic(r, order)
            if r != G[i]:
                G[i] = r
                leads[i] = _lead(r, order)
                changed = True
    idx = sorted(range(len(G)), key=lambda i: order.key(leads[i]),
                 reverse=True)
    return [G[i] for i in idx]


# ---------------------------------------------------------------------------
# Public layer on FreeVectors
# ---------------------------------------------------------------------------


class GBasis:
    """A completed left Groebner basis of a submodule of D^rank."""

    def __init__(self, ctx, rank, order, generators, h_basis, inputs,
                 transform=None):
        self.ctx = ctx
        self.rank = rank
        self.order = order
        self.generators = generators      # list of FreeVector, dehomogenized
        self._h_basis = h_basis           # [(lead, dict)] in division form
        self.inputs = inputs
        self.transform = transform        # OperatorMatrix or None

    def __len__(self):
        return len(self.generators)


def _prepare(gens):
    if not gens:
        raise DmodError("cannot infer context from an empty generator list")
    ctx = gens[0].ctx
    rank = gens[0].rank
    for g in gens:
        if g.ctx != ctx or g.rank != rank:
            raise DmodError("mixed contexts or ranks in generator list")
    return ctx, rank


def _run_basis(gens_dicts, order):
    if order.weighted:
        data = [_homogenize(d) for d in gens_dicts if d]
    else:
        data = [d for d in gens_dicts if d]
    basis = _buchberger(data, order)
    return [( _lead(d, order), d) for d in basis]


def groebner_basis(gens, order=None, transform=False):
    """Groebner basis of the left submodule generated by ``gens``."""
    order = order or standard_order()
    if not gens:
        raise DmodError("empty generator list; build from a context instead")
    ctx, rank = _prepare(gens)
    if transform:
        egb = extended_gb(gens, order)
        generators = [m for m, _ in egb.rows]
        tf = OperatorMatrix.from_rows([c for _, c in egb.rows],
                                      ncols=len(gens), ctx=ctx)
        hb = egb._main_basis
        return GBasis(ctx, rank, order, generators, hb, list(gens), tf)
    dicts = [_vec_to_dict(g) for g in gens]
    basis = _run_basis(dicts, order)
    generators = [_dict_to_vec(ctx, rank, _dehomogenize(d)) for _, d in basis]
    return GBasis(ctx, rank, order, generators, basis, list(gens))


def normal_form(v, gb, quotients=None):
    """Remainder of v on division by the basis; zero iff v is a member."""
    d = _vec_to_dict(v)
    if not d:
        return v
    order = gb.order
    if not order.weighted:
        r = _reduce(d, gb._h_basis, order, quotients)
        return _dict_to_vec(v.ctx, v.rank, r)
    # homogenized division with h-stripping
    work = _homogenize(d)
    while True:
        r = _reduce(work, gb._h_basis, order, quotients)
        if not r:
            return FreeVector.zero(v.ctx, v.rank)
        stripped, s = _h_strip(r)
        if not s:
            return _dict_to_vec(v.ctx, v.rank, _dehomogenize(r))
        work = stripped


def is_member(v, gb):
    return normal_form(v, gb).is_zero()


class ExtendedGB:
    """Groebner data of {g_i (+) e_i}: basis rows with cofactors plus the
    syzygies that surfaced as pure tag rows."""

    def __init__(self, ctx, rank, k, order, rows, syzygies, main_basis):
        self.ctx = ctx
        self.rank = rank
        self.k = k
        self.order = order
        self.rows = rows            # [(main FreeVector, cofactor FreeVector)]
        self.syzygies = syzygies    # [FreeVector of rank k]
        self._main_basis = None     # division form of main parts
        self._full_basis = main_basis

    def main_gb(self):
        return [m for m, _ in self.rows]


def extended_gb(gens, order=None):
    """Run Buchberger on tagged generators g_i (+) e_i in D^(rank+k)."""
    order = order or standard_order()
    ctx, rank = _prepare(gens)
    k = len(gens)
    tag_order = _TagOrder(order, rank)
    dicts = []
    for i, g in enumerate(gens):
        d = _vec_to_dict(g)
        d[(rank + i, (0,) * ctx.nvars, (0,) * ctx.nvars, 0)] = QQ(1)
        dicts.append(d)
    if order.weighted:
        dicts = [_homogenize(d) for d in dicts]
    basis = _buchberger(dicts, tag_order, tag_rank=rank)
    rows, syz = [], []
    main_basis = []
    for d in basis:
        dd = _dehomogenize(d)
        main = {m: c for m, c in dd.items() if m[0] < rank}
        cof = {(m[0] - rank, m[1], m[2], m[3]): c
               for m, c in dd.items() if m[0] >= rank}
        cof_vec = _dict_to_vec(ctx, k, cof)
        if main:
            mvec = _dict_to_vec(ctx, rank, main)
            rows.append((mvec, cof_vec))
            mh = {m: c for m, c in d.items() if m[0] < rank}
            main_basis.append((_lead(mh, order), mh))
        else:
            syz.append(cof_vec)
    egb = ExtendedGB(ctx, rank, k, order, rows, syz, basis)
    egb._main_basis = main_basis
    return egb


def _quotients_to_vec(ctx, width, quot):
    """Division quotients {basis index -> dict} as a width-long FreeVector."""
    out = {}
    for idx, qd in quot.items():
        for (_, xe, de, he), c in _dehomogenize(qd).items():
            key = (idx, xe, de, 0)
            out[key] = out.get(key, QQ(0)) + c
    return _dict_to_vec(ctx, width, out)


def schreyer_syzygies(gb):
    """Syzygies of the rows of a completed Groebner basis.

    One generator per same-component S-pair: sigma = m_i e_i - m_j e_j -
    sum q_k e_k from the (necessarily exact) reduction of the pair.
    """
    order = gb.order
    basis = gb._h_basis
    ctx = gb.ctx
    t = len(basis)
    out = []
    for j in range(t):
        for i in range(j):
            li, lj = basis[i][0], basis[j][0]
            if li[0] != lj[0]:
                continue
            s = _spair(li, basis[i][1], lj, basis[j][1], order)
            quot = {}
            r = s
            while True:
                r = _reduce(r, basis, order, quotients=quot)
                if not r:
                    break
                stripped, hs = _h_strip(r)
                if not hs:
                    raise DmodError("S-pair of a Groebner basis did not "
                                    "reduce to zero")
                r = stripped
            sigma = {}
            _, xe1, de1, he1 = li
            _, xe2, de2, he2 = lj
            lx = tuple(max(a, b) for a, b in zip(xe1, xe2))
            ld = tuple(max(a, b) for a, b in zip(de1, de2))
            lh = max(he1, he2)
            sigma[(i, tuple(a - b for a, b in zip(lx, xe1)),
                   tuple(a - b for a, b in zip(ld, de1)), 0)] = QQ(1)
            key_j = (j, tuple(a - b for a, b in zip(lx, xe2)),
                     tuple(a - b for a, b in zip(ld, de2)), 0)
            sigma[key_j] = sigma.get(key_j, QQ(0)) - 1
            vec = _dict_to_vec(ctx, t, {k: v for k, v in sigma.items() if v})
            vec = vec - _quotients_to_vec(ctx, t, quot)
            if not vec.is_zero():
                out.append(vec)
    return out


def syzygies(gens, order=None):
    """Generators of {(l_1..l_k) : sum l_i gens_i = 0}.

    Schreyer-style: syzygies of the Groebner basis conjugated through the
    transform, plus the rows of (I - B A) where F = B G and G = A F.
    """
    if not gens:
        return []
    order = order or standard_order()
    ctx, rank = _prepare(gens)
    k = len(gens)
    live = [g for g in gens if not g.is_zero()]
    out = []
    if live:
        gb = groebner_basis(live, order, transform=True)
        amat = gb.transform  # G = A . live
        sigmas = schreyer_syzygies(gb)
        live_index = [i for i, g in enumerate(gens) if not g.is_zero()]

        def widen(vec_over_live):
            entries = [ctx.zero()] * k
            for pos, i in enumerate(live_index):
                entries[i] = vec_over_live.entries[pos]
            return FreeVector(ctx, entries)

        for s in sigmas:
            out.append(widen(amat.apply(s)))
        # rows of (I - B A) over the live generators
        for pos, g in enumerate(live):
            quot = {}
            r = normal_form(g, gb, quotients=quot)
            if not r.is_zero():
                raise DmodError("generator failed to reduce by its own basis")
            brow = _quotients_to_vec(ctx, len(gb.generators), quot)
            resid = FreeVector.unit(ctx, len(live), pos) - amat.apply(brow)
            out.append(widen(resid))
    for i, g in enumerate(gens):
        if g.is_zero():
            out.append(FreeVector.unit(ctx, k, i))
    return [v for v in out if not v.is_zero()]


def kernel(matrix, target_relations=()):
    """Generators of ker(D^r -> D^s / <target_relations>) for . matrix."""
    rows = matrix.row_vectors()
    rels = list(target_relations)
    all_gens = rows + rels
    if not all_gens:
        return []
    if not rows:
        return []
    syz = syzygies(all_gens)
    out = []
    r = matrix.nrows
    for s in syz:
        head = FreeVector(matrix.ctx, s.entries[:r])
        if not head.is_zero():
            out.append(head)
    return out


def division_lift(v, gens, order=None):
    """Express v as sum q_i gens_i (modulo nothing); None if not a member."""
    if v.is_zero():
        return [v.ctx.zero() for _ in gens]
    egb = extended_gb(gens, order)
    order = egb.order
    quot = {}
    gb = GBasis(v.ctx, v.rank, order, egb.main_gb(), egb._main_basis, gens)
    r = normal_form(v, gb, quotients=quot)
    if not r.is_zero():
        return None
    coeffs = [v.ctx.zero() for _ in gens]
    for idx, qd in quot.items():
        q_el = _dict_to_vec(v.ctx, 1, {(0, xe, de, 0): c
                                       for (_, xe, de, he), c in
                                       _dehomogenize(qd).items()}).entries[0]
        cof = egb.rows[idx][1]
        for i in range(len(gens)):
            coeffs[i] = coeffs[i] + q_el * cof.entries[i]
    return coeffs


def lift(v, matrix, target_relations=(), order=None):
    """u with u . matrix == v modulo the target relations.

    Raises NotInImage when no such u exists.
    """
    rows = matrix.row_vectors()
    rels = list(target_relations)
    coeffs = division_lift(v, rows + rels, order) if (rows or rels) else None
    if coeffs is None:
        if v.is_zero():
            return FreeVector.zero(matrix.ctx, matrix.nrows)
        raise NotInImage("vector is not in the image modulo the relations")
    return FreeVector(matrix.ctx, coeffs[:matrix.nrows])


def prune_generators(gens, order=None):
    """Drop generators lying in the span of the others (stable order)."""
    out = [g for g in gens if not g.is_zero()]
    changed = True
    while changed:
        changed = False
        for i in range(len(out)):
            rest = out[:i] + out[i + 1:]
            if not rest:
                continue
            gb = groebner_basis(rest, order)
            if is_member(out[i], gb):
                out.pop(i)
                changed = True
                break
    return out


# ---------------------------------------------------------------------------
# V-degrees and initial forms
# ---------------------------------------------------------------------------


def vdeg(v, d, shift=None, variant="restriction"):
    """Largest shifted V_d-degree over the terms of v; None when v = 0.

    restriction: |beta_H| - |alpha_H| + shift(j); integration flips sign.
    """
    best = None
    sgn = 1 if variant == "restriction" else -1
    for c, entry in enumerate(v.entries):
        off = shift[c] if shift is not None else 0
        for (xe, de) in entry.terms:
            w = sgn * (sum(de[:d]) - sum(xe[:d])) + off
            if best is None or w > best:
                best = w
    return best


def initial_form(v, d, shift=None, variant="restriction"):
    """Sum of the terms of v of maximal shifted V_d-degree."""
    top = vdeg(v, d, shift, variant)
    if top is None:
        return v
    sgn = 1 if variant == "restriction" else -1
    entries = []
    for c, entry in enumerate(v.entries):
        off = shift[c] if shift is not None else 0
        kept = {m: coeff for m, coeff in entry.terms.items()
                if sgn * (sum(m[1][:d]) - sum(m[0][:d])) + off == top}
        entries.append(WeylElement._merge(v.ctx, kept))
    return FreeVector(v.ctx, entries)
