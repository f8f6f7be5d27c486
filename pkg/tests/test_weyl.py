import random
from fractions import Fraction as QQ

import pytest

from dmodhom.errors import ContextMismatch, DmodError, ParseError
from dmodhom.weyl import (FreeVector, OperatorMatrix, RationalFunction,
                          WeylAlgebra, apply_operator, box_embed,
                          parse_operator, poly_from_element,
                          push_through_inverse)

D1 = WeylAlgebra.standard(1)
D2 = WeylAlgebra.standard(2)


def naive_product(a, b):
    """Oracle: expand d*x one commutator at a time via the defining relation.

    Works on a flattened word representation, so it is independent of the
    closed-form expansion used by WeylElement.__mul__.
    """
    ctx = a.ctx

    def term_words(p):
        for (xe, de), c in p.terms.items():
            word = []
            for i, e in enumerate(xe):
                word += [("x", i)] * e
            for i, e in enumerate(de):
                word += [("d", i)] * e
            yield c, word

    def normalize(c, word):
        # find a d immediately left of a matching x and rewrite
        for k in range(len(word) - 1):
            a_, b_ = word[k], word[k + 1]
            if a_[0] == "d" and b_[0] == "x":
                if a_[1] == b_[1]:
                    swapped = word[:k] + [b_, a_] + word[k + 2:]
                    dropped = word[:k] + word[k + 2:]
                    return (normalize(c, swapped) + normalize(c, dropped))
                swapped = word[:k] + [b_, a_] + word[k + 2:]
                return normalize(c, swapped)
        xe = [0] * ctx.nvars
        de = [0] * ctx.nvars
        for kind, i in word:
            (xe if kind == "x" else de)[i] += 1
        return [(c, tuple(xe), tuple(de))]

    acc = ctx.zero()
    for c1, w1 in term_words(a):
        for c2, w2 in term_words(b):
            for c, xe, de in normalize(c1 * c2, w1 + w2):
                acc = acc + ctx.monomial(xe, de, c)
    return acc


def random_element(ctx, rng, maxdeg=4, nterms=3):
    acc = ctx.zero()
    for _ in range(nterms):
        xe, de = [0] * ctx.nvars, [0] * ctx.nvars
        budget = rng.randrange(maxdeg + 1)
        for _ in range(budget):
            which = rng.randrange(2 * ctx.nvars)
            if which < ctx.nvars:
                xe[which] += 1
            else:
                de[which - ctx.nvars] += 1
        acc = acc + ctx.monomial(tuple(xe), tuple(de),
                                 rng.randrange(-4, 5))
    return acc


class TestMultiply:
    def test_leibniz(self):
        # d1 * x1 = x1 d1 + 1
        assert D1.d(0) * D1.x(0) == D1.x(0) * D1.d(0) + 1

    def test_theta_square(self):
        th = D1.theta(0)
        expected = D1.monomial((2,), (2,)) + D1.monomial((1,), (1,))
        assert th * th == expected
        assert th * th == naive_product(th, th)

    def test_zero(self):
        p = D1.x(0) * D1.d(0) - 3
        assert D1.zero() * p == D1.zero()
        assert p * D1.zero() == D1.zero()

    def test_against_naive_oracle(self):
        rng = random.Random(7)
        for _ in range(40):
            a = random_element(D2, rng, maxdeg=3)
            b = random_element(D2, rng, maxdeg=3)
            assert a * b == naive_product(a, b)

    def test_associative_randomized(self):
        rng = random.Random(11)
        for _ in range(60):
            a = random_element(D2, rng)
            b = random_element(D2, rng)
            c = random_element(D2, rng)
            assert (a * b) * c == a * (b * c)

    def test_context_mismatch(self):
        with pytest.raises(ContextMismatch):
            D1.x(0) * D2.x(0)


class TestTau:
    def test_fixed_points_and_sign(self):
        assert D1.x(0).tau() == D1.x(0)
        assert D1.d(0).tau() == -D1.d(0)

    def test_theta(self):
        # tau(x d) = -x d - 1
        th = D1.theta(0)
        assert th.tau() == -th - 1
        assert th.tau() == naive_product(-D1.d(0), D1.x(0))

    def test_anti_involution(self):
        rng = random.Random(3)
        for _ in range(30):
            p = random_element(D2, rng)
            q = random_element(D2, rng)
            assert p.tau().tau() == p
            assert (p * q).tau() == q.tau() * p.tau()


class TestFourier:
    def test_generators(self):
        assert D1.x(0).fourier(1) == D1.d(0)
        assert D1.d(0).fourier(1) == -D1.x(0)
        assert D2.x(1).fourier(1) == D2.x(1)

    def test_automorphism_and_order_four(self):
        rng = random.Random(5)
        for _ in range(20):
            p = random_element(D2, rng)
            q = random_element(D2, rng)
            assert (p * q).fourier() == p.fourier() * q.fourier()
            r = p
            for _ in range(4):
                r = r.fourier()
            assert r == p
            assert p.fourier().fourier_inverse() == p

    def test_partial(self):
        p = D2.x(0) * D2.x(1)
        assert p.fourier(1) == D2.d(0) * D2.x(1)


class TestEta:
    DD = WeylAlgebra.double(1)

    def test_diagonal_generators(self):
        x, y = self.DD.x(0), self.DD.x(1)
        dx, dy = self.DD.d(0), self.DD.d(1)
        assert (x - y).eta() == x
        assert (dx + dy).eta() == y

    def test_inverse(self):
        rng = random.Random(13)
        for _ in range(15):
            p = random_element(self.DD, rng, maxdeg=3)
            assert p.eta().eta_inverse() == p
            assert p.eta_inverse().eta() == p

    def test_is_homomorphism(self):
        rng = random.Random(17)
        for _ in range(10):
            p = random_element(self.DD, rng, maxdeg=3)
            q = random_element(self.DD, rng, maxdeg=3)
            assert (p * q).eta() == p.eta() * q.eta()

    def test_requires_double(self):
        with pytest.raises(ContextMismatch):
            D2.x(0).eta()


class TestBox:
    def test_embed(self):
        dd = WeylAlgebra.double(1)
        p = D1.d(0) - 1
        assert box_embed(p, D1.one(), dd) == dd.d(0) - 1
        assert box_embed(D1.one(), D1.one(), dd) == dd.one()
        assert box_embed(D1.x(0), D1.d(0), dd) == dd.x(0) * dd.d(1)

    def test_bilinear(self):
        dd = WeylAlgebra.double(2)
        rng = random.Random(23)
        a, b = random_element(D2, rng), random_element(D2, rng)
        c = random_element(D2, rng)
        lhs = box_embed(a + b, c, dd)
        assert lhs == box_embed(a, c, dd) + box_embed(b, c, dd)
        # multiplicativity across the two commuting copies
        assert box_embed(a, c, dd) == box_embed(a, D2.one(), dd) * \
            box_embed(D2.one(), c, dd)


class TestApply:
    def test_gkz_solution(self):
        # (th1 + 2 th2 - 5) and (d1^2 + d2) kill x1^5 - 20 x1^3 x2 + 60 x1 x2^2
        u = D2.theta(0) + D2.theta(1) * 2 - 5
        v = D2.d(0) ** 2 + D2.d(1)
        sol = {(5, 0): QQ(1), (3, 1): QQ(-20), (1, 2): QQ(60)}
        assert apply_operator(u, sol).is_zero()
        assert apply_operator(v, sol).is_zero()

    def test_derivative(self):
        out = apply_operator(D1.d(0), {(2,): QQ(1)})
        assert out.same_line(RationalFunction.from_poly({(1,): QQ(2)}, 1))

    def test_rational(self):
        # (x d + 1) kills 1/x
        op = D1.theta(0) + 1
        f = RationalFunction({(0,): QQ(1)}, {(1,): QQ(1)}, 1)
        assert apply_operator(op, f).is_zero()

    def test_composition(self):
        rng = random.Random(29)
        for _ in range(10):
            p = random_element(D2, rng, maxdeg=2)
            q = random_element(D2, rng, maxdeg=2)
            f = RationalFunction(
                {(1, 0): QQ(3), (0, 2): QQ(-1)},
                {(1, 1): QQ(1), (0, 0): QQ(1)}, rng.randrange(3))
            lhs = apply_operator(p * q, f)
            rhs = apply_operator(p, apply_operator(q, f))
            diff = lhs.add(rhs.scale(-1))
            assert diff.is_zero() or not any(diff.numer.values())


class TestPushThroughInverse:
    def test_roundtrip(self):
        rng = random.Random(31)
        f = D1.x(0)  # denominator base x
        for _ in range(10):
            p = random_element(D1, rng, maxdeg=3)
            m = rng.randrange(1, 4)
            ptilde, e = push_through_inverse(p, f, m)
            # p * f^-m = f^-(m+e) ptilde  <=>  f^(m+e) p f^-m = ptilde
            # verify by right-multiplying with f^m: p f^... check instead:
            # f^(m+e) * p == ptilde * f^(m+e) pushed? Simplest: act on x^k
            for k in range(3, 6):
                xk = {(k,): QQ(1)}
                lhs = apply_operator(p, RationalFunction(xk, {(1,): QQ(1)}, m))
                rhs = apply_operator(
                    ptilde, RationalFunction(xk, {(1,): QQ(1)}, 0))
                rhs = RationalFunction(rhs.numer, {(1,): QQ(1)},
                                       rhs.k + m + e)
                assert lhs.same_line(rhs) or lhs.add(rhs.scale(-1)).is_zero()


class TestVectorsMatrices:
    def test_right_action_composition(self):
        a = OperatorMatrix(D1, [[D1.d(0)], [D1.x(0)]])
        b = OperatorMatrix(D1, [[D1.one(), D1.d(0)]])
        v = FreeVector(D1, [D1.one(), D1.x(0)])
        assert (a * b).apply(v) == b.apply(a.apply(v))

    def test_tau_shape_and_involution(self):
        a = OperatorMatrix(D1, [[D1.d(0), D1.theta(0)]])
        t = a.tau()
        assert (t.nrows, t.ncols) == (2, 1)
        assert t.tau() == a

    def test_tau_antimultiplicative(self):
        rng = random.Random(37)
        a = OperatorMatrix(D1, [[random_element(D1, rng) for _ in range(2)]
                                for _ in range(2)])
        b = OperatorMatrix(D1, [[random_element(D1, rng)] for _ in range(2)])
        assert (a * b).tau() == b.tau() * a.tau()


class TestTextFormat:
    def test_parse_display_roundtrip(self):
        cases = ["x1*dx1 + 2*x2*dx2 - 5", "dx1^2 - dx2",
                 "3/4*x1^2 - x2*dx2 + 1"]
        for text in cases:
            p = parse_operator(D2, text)
            assert parse_operator(D2, str(p)) == p

    def test_normal_ordering_on_parse(self):
        assert parse_operator(D1, "dx1*x1") == D1.theta(0) + 1

    def test_undeclared_variable(self):
        with pytest.raises(ParseError):
            parse_operator(D2, "x3")

    def test_json_roundtrip(self):
        p = parse_operator(D2, "1/3*x1^2*dx2 - 7*x2 + 2")
        from dmodhom.weyl import WeylElement
        assert WeylElement.from_json(D2, p.to_json()) == p
