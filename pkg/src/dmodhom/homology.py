"""Bounded complexes of free modules with shift vectors.

A ShiftedComplex stores one free module per degree in a contiguous range
and one map per adjacent pair, acting on row vectors by right
multiplication and raising degree by one.  Consecutive maps must compose
to zero; this is checked on construction.
"""

import logging

from .errors import (DmodError, InternalCapExceeded, LiftCapExceeded,
                     NotChainMap, NotInImage, NotStrict)
from .groebner import (groebner_basis, is_member, lift, prune_generators,
                       restriction_weight, schreyer_syzygies, syzygies, vdeg)
from .weyl import (FreeVector, OperatorMatrix, WeylAlgebra, box_embed,
                   push_through_inverse)

log = logging.getLogger("dmodhom.homology")

DEFAULT_LIFT_CAP = 50


class Presentation:
    """M = D^rank / D . relations."""

    def __init__(self, ctx, rank, relations):
        self.ctx = ctx
        self.rank = rank
        self.relations = [r if isinstance(r, FreeVector) else
                          FreeVector(ctx, [r]) for r in relations]
        for r in self.relations:
            if r.rank != rank or r.ctx != ctx:
                raise DmodError("relation rank/context mismatch")

    @classmethod
    def cyclic(cls, operators):
        """D / D . {operators}."""
        ops = list(operators)
        return cls(ops[0].ctx, 1, [FreeVector.wrap(p) for p in ops])

    def relation_matrix(self):
        return OperatorMatrix.from_rows(self.relations, ncols=self.rank,
                                        ctx=self.ctx)

    def fourier(self):
        return Presentation(self.ctx, self.rank,
                            [r.map(lambda e: e.fourier())
                             for r in self.relations])

    def __repr__(self):
        return "Presentation(rank %d, %d relations)" % (
            self.rank, len(self.relations))


class ShiftedComplex:
    """Free complex: maps[d] : C^d -> C^(d+1), shapes ranks[d] x ranks[d+1]."""

    def __init__(self, ctx, lo, ranks, maps, shifts=None, check=True):
        self.ctx = ctx
        self.lo = lo
        self.ranks = list(ranks)
        self.maps = list(maps)
        self.shifts = list(shifts) if shifts is not None else None
        if len(self.maps) != max(len(self.ranks) - 1, 0):
            raise DmodError("need one map per adjacent degree pair")
        if self.shifts is not None and len(self.shifts) != len(self.ranks):
            raise DmodError("need one shift vector per degree")
        if check:
            self.verify()

    @property
    def hi(self):
        return self.lo + len(self.ranks) - 1

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def rank(self, d):
        if self.lo <= d <= self.hi:
            return self.ranks[d - self.lo]
        return 0

    def shift(self, d):
        if self.shifts is None:
            return None
        if self.lo <= d <= self.hi:
            return self.shifts[d - self.lo]
        return ()

    def map(self, d):
        """The differential C^d -> C^(d+1); zero matrix outside range."""
        if self.lo <= d < self.hi:
            return self.maps[d - self.lo]
        return OperatorMatrix.zero(self.ctx, self.rank(d), self.rank(d + 1))

    def verify(self):
        for d in range(self.lo, self.hi):
            m = self.map(d)
            if (m.nrows, m.ncols) != (self.rank(d), self.rank(d + 1)):
                raise DmodError("map shape mismatch at degree %d" % d)
            if d + 1 < self.hi:
                comp = m * self.map(d + 1)
                if not comp.is_zero():
                    raise DmodError("differentials do not compose to zero "
                                    "at degree %d" % d)

    def verify_strict(self, d, variant):
        """Entrywise shifted V-degree inequality for every differential."""
        if self.shifts is None:
            raise NotStrict("complex carries no shift vectors")
        for deg in range(self.lo, self.hi):
            m = self.map(deg)
            sh_src = self.shift(deg)
            sh_tgt = self.shift(deg + 1)
            for i in range(m.nrows):
                for j in range(m.ncols):
                    entry = m.entry(i, j)
                    if entry.is_zero():
                        continue
                    w = vdeg(FreeVector.wrap(entry), d, None, variant)
                    if w > sh_src[i] - sh_tgt[j]:
                        raise NotStrict(
                            "entry (%d,%d) of map at degree %d has V-degree "
                            "%d > %d" % (i, j, deg, w,
                                         sh_src[i] - sh_tgt[j]))

    def shifted_degrees(self, offset):
        """Same complex re-indexed with lo increased by offset."""
        return ShiftedComplex(self.ctx, self.lo + offset, self.ranks,
                              self.maps, self.shifts, check=False)

    def map_entries(self, fn, check=True):
        return ShiftedComplex(self.ctx if self.ranks else self.ctx,
                              self.lo, self.ranks,
                              [m.map(fn) for m in self.maps],
                              self.shifts, check=check)

    def to_json(self):
        return {"lo": self.lo, "ranks": self.ranks,
                "shifts": self.shifts,
                "maps": [m.to_json() for m in self.maps]}

    def __repr__(self):
        body = " -> ".join("D^%d%s" % (r, list(self.shifts[i])
                                       if self.shifts else "")
                           for i, r in enumerate(self.ranks))
        return "ShiftedComplex[%d..%d]: %s" % (self.lo, self.hi, body)


class ChainMap:
    """Degreewise right-multiplication maps source^d -> target^d.

    ``denominators`` (optional) gives, per degree, a per-row power m so the
    actual component row is f^-m times the stored row.
    """

    def __init__(self, source, target, components, localizer=None,
                 denominators=None, check=True):
        self.source = source
        self.target = target
        self.components = dict(components)
        self.localizer = localizer
        self.denominators = dict(denominators) if denominators else None
        if check and localizer is None:
            self.verify()

    def component(self, d):
        if d in self.components:
            return self.components[d]
        return OperatorMatrix.zero(self.source.ctx, self.source.rank(d),
                                   self.target.rank(d))

    def verify(self):
        degs = sorted(self.components)
        for d in degs[:-1]:
            lhs = self.component(d) * self.target.map(d)
            rhs = self.source.map(d) * self.component(d + 1)
            if lhs != rhs:
                raise NotChainMap("square at degree %d does not commute" % d)


def free_resolution(presentation, max_length=None):
    """Iterated-syzygy free resolution; H^0 is the presented module.

    The first map keeps the given relations verbatim; later maps use
    pruned syzygy generators.  Stops at a zero kernel, or raises once the
    hard cap 2n + 2 is passed.
    """
    ctx = presentation.ctx
    cap = max_length if max_length is not None else 2 * ctx.nvars + 2
    ranks = [presentation.rank]
    maps = []
    rows = [r for r in presentation.relations if not r.is_zero()]
    while rows:
        maps.append(OperatorMatrix.from_rows(rows))
        ranks.append(len(rows))
        if len(maps) > cap:
            raise InternalCapExceeded("resolution exceeded length %d" % cap)
        rows = prune_generators(syzygies(rows))
    ranks.reverse()
    maps.reverse()
    return ShiftedComplex(ctx, -len(maps), ranks, maps)


def v_strict_resolution(presentation, d, shift0=None, variant="restriction",
                        length=None):
    """Free V_d-strict (or integration-variant) resolution.

    Returned with degrees [-length .. 0]; H^0 is the presented module and
    the stored shift vectors satisfy the strictness inequality.  The
    integration variant computes on the Fourier transform and maps the
    matrices back, so its shifts are Vtilde-shifts.
    """
    ctx = presentation.ctx
    n = ctx.nvars
    if length is None:
        length = n + 1
    shift0 = tuple(shift0) if shift0 is not None else (0,) * presentation.rank
    work = presentation.fourier() if variant == "integration" else presentation
    ranks = [work.rank]
    shifts = [shift0]
    maps = []
    rows = [r for r in work.relations if not r.is_zero()]
    cur_shift = shift0
    for _ in range(length):
        if not rows:
            # pad with zero modules
            ranks.append(0)
            shifts.append(())
            maps.append(OperatorMatrix.zero(ctx, 0, ranks[-2]))
            continue
        order = restriction_weight(n, d, cur_shift)
        gb = groebner_basis(rows, order)
        gens = gb.generators
        maps.append(OperatorMatrix.from_rows(gens))
        ranks.append(len(gens))
        cur_shift = tuple(vdeg(g, d, shifts[-1]) for g in gens)
        shifts.append(cur_shift)
        rows = schreyer_syzygies(gb)
    ranks.reverse()
    shifts.reverse()
    maps.reverse()
    out = ShiftedComplex(ctx, -length, ranks, maps, shifts)
    if variant == "integration":
        out = out.map_entries(lambda e: e.fourier_inverse())
    out.verify_strict(d, variant)
    return out


def dual_transpose(x):
    """tau(Hom_D(X, D)): reverse arrows, transpose matrices, apply tau.

    Degrees negate: the module at degree d moves to degree -d.
    """
    ranks = list(reversed(x.ranks))
    maps = [x.map(d).tau() for d in range(x.hi - 1, x.lo - 1, -1)]
    return ShiftedComplex(x.ctx, -x.hi, ranks, maps)


def box_total_complex(xdual, y, double_ctx=None):
    """Total complex of xdual (boxtimes) y over D_2n.

    Summand order at total degree k: ascending in the xdual-degree i with
    i + (y-degree) = k.  Vertical differentials carry (-1)^i.
    """
    n = xdual.ctx.nvars
    if y.ctx.nvars != n:
        raise DmodError("box factors over different base sizes")
    ctx2 = double_ctx or WeylAlgebra.double(n)
    lo = xdual.lo + y.lo
    hi = xdual.hi + y.hi

    def summands(k):
        out = []
        for i in xdual.degrees():
            j = k - i
            if y.lo <= j <= y.hi:
                out.append((i, j))
        return out

    def offsets(k):
        offs, total = {}, 0
        for (i, j) in summands(k):
            offs[(i, j)] = total
            total += xdual.rank(i) * y.rank(j)
        return offs, total

    ranks = []
    maps = []
    for k in range(lo, hi + 1):
        _, total = offsets(k)
        ranks.append(total)
    for k in range(lo, hi):
        src_offs, src_total = offsets(k)
        tgt_offs, tgt_total = offsets(k + 1)
        rows = [[ctx2.zero() for _ in range(tgt_total)]
                for _ in range(src_total)]
        for (i, j), off in src_offs.items():
            rx, ry = xdual.rank(i), y.rank(j)
            # horizontal: (i, j) -> (i+1, j) via xdual.map(i) (x) id
            if (i + 1, j) in tgt_offs:
                a = xdual.map(i)
                toff = tgt_offs[(i + 1, j)]
                for p in range(rx):
                    for q in range(a.ncols):
                        entry = a.entry(p, q)
                        if entry.is_zero():
                            continue
                        emb = box_embed(entry, y.ctx.one(), ctx2)
                        for s in range(ry):
                            rows[off + p * ry + s][toff + q * ry + s] = emb
            # vertical: (i, j) -> (i, j+1) via (-1)^i id (x) y.map(j)
            if (i, j + 1) in tgt_offs:
                b = y.map(j)
                toff = tgt_offs[(i, j + 1)]
                sign = -1 if i % 2 else 1
                for s in range(ry):
                    for t in range(b.ncols):
                        entry = b.entry(s, t)
                        if entry.is_zero():
                            continue
                        emb = box_embed(xdual.ctx.one(), entry, ctx2) * sign
                        for p in range(rx):
                            rows[off + p * ry + s][toff + p * b.ncols + t] \
                                = emb
        maps.append(OperatorMatrix(ctx2, rows, ncols=tgt_total))
    cx = ShiftedComplex(ctx2, lo, ranks, maps)
    cx.box_layout = {k: _layout(xdual, y, k) for k in range(lo, hi + 1)}
    return cx


def _layout(xdual, y, k):
    out = []
    for i in xdual.degrees():
        j = k - i
        if y.lo <= j <= y.hi:
            out.append(((i, j), xdual.rank(i), y.rank(j)))
    return out


def chain_lift(pi_top, e, target, top_degree, down_to=0, localizer=None,
               lift_cap=DEFAULT_LIFT_CAP):
    """Lift pi_top : E^top -> target^top to a chain map on [down_to, top].

    Solves component(d) . target.map(d) = e.map(d) . component(d+1) degree
    by degree.  With ``localizer`` f, rows acquire denominators f^m found
    by the successive-powers membership search (cap ``lift_cap``).
    """
    comp = {top_degree: pi_top}
    denom = {top_degree: [0] * pi_top.nrows}
    ctx = e.ctx
    check = comp[top_degree] * target.map(top_degree)
    if not check.is_zero():
        raise NotChainMap("top map does not annihilate the next differential")
    gb_cache = {}

    def target_rows(d):
        if d not in gb_cache:
            rows = target.map(d).row_vectors()
            gb_cache[d] = rows
        return gb_cache[d]

    for d in range(top_degree - 1, down_to - 1, -1):
        a = e.map(d)
        pi_next = comp[d + 1]
        den_next = denom[d + 1]
        rows = []
        dens = []
        tgt_rank = target.rank(d)
        b = target.map(d)
        brows = target_rows(d)
        for c in range(a.nrows):
            # v = (row c of a . pi_next) with denominators from pi_next
            if localizer is None:
                v = FreeVector(ctx, [sum((a.entry(c, k) *
                                          pi_next.entry(k, j)
                                          for k in range(a.ncols)),
                                         ctx.zero())
                                     for j in range(pi_next.ncols)])
                if v.is_zero():
                    rows.append([ctx.zero()] * tgt_rank)
                    dens.append(0)
                    continue
                u = lift(v, b)
                rows.append(list(u.entries))
                dens.append(0)
            else:
                v, m = _localized_row(ctx, a, pi_next, den_next, c,
                                      localizer)
                if v.is_zero():
                    rows.append([ctx.zero()] * tgt_rank)
                    dens.append(0)
                    continue
                u, mm = _localized_lift(v, m, b, brows, localizer, lift_cap)
                rows.append(list(u.entries))
                dens.append(mm)
        comp[d] = OperatorMatrix(ctx, rows, ncols=tgt_rank)
        denom[d] = dens
    return ChainMap(e, target, comp, localizer=localizer,
                    denominators=denom if localizer is not None else None,
                    check=localizer is None)


def _localized_row(ctx, a, pi_next, den_next, c, f):
    """Row c of a . pi_next where pi_next rows carry f^-m denominators.

    Returns (w, M) meaning the true row is f^-M w.
    """
    pieces = []
    for k in range(a.ncols):
        entry = a.entry(c, k)
        if entry.is_zero():
            continue
        m = den_next[k]
        if m:
            moved, extra = push_through_inverse(entry, f, m)
        else:
            moved, extra = entry, 0
        vec = FreeVector(ctx, [moved * pi_next.entry(k, j)
                               for j in range(pi_next.ncols)])
        pieces.append((vec, m + extra))
    if not pieces:
        return FreeVector.zero(ctx, pi_next.ncols), 0
    big = max(m for _, m in pieces)
    total = FreeVector.zero(ctx, pi_next.ncols)
    for vec, m in pieces:
        total = total + vec.map(lambda el: (f ** (big - m)) * el)
    return total, big


def _localized_lift(v, m, b, brows, f, cap):
    """u, mm with (f^-mm u) . b = f^-m v, via successive powers of f."""
    for j in range(cap + 1):
        candidate = v.map(lambda el: (f ** j) * el)
        try:
            u = lift(candidate, b)
        except NotInImage:
            continue
        return u, m + j
    raise LiftCapExceeded("no f-power up to %d clears the denominator" % cap)
