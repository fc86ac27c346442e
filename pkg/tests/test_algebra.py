import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transgress.algebra import (
    HALF,
    ONE,
    ZERO,
    Context,
    ContractError,
    Derivation,
    Generator,
    GradedElement,
    Monomial,
    Scalar,
    integrate_unit_interval,
    permutation_sign,
    sort_word_with_sign,
    substitute_t,
    t_derivative,
)


def make_ctx(n_odd=4, n_even=3):
    gens = [Generator(i, 1, f"x{i}") for i in range(n_odd)]
    gens += [Generator(100 + i, 2, f"y{i}") for i in range(n_even)]
    return Context(gens)


def bubble_sign_oracle(word):
    """Sort a word by explicit adjacent transpositions, counting swaps."""
    items = list(word)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(items) - 1):
            if items[i] == items[i + 1]:
                return 0, None
            if items[i] > items[i + 1]:
                items[i], items[i + 1] = items[i + 1], items[i]
                sign = -sign
                changed = True
    return sign, tuple(items)


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

class TestScalar:
    def test_lowest_terms(self):
        s = Scalar(Fraction(2, 4))
        assert s.re == Fraction(1, 2) and s.re.denominator == 2

    def test_zero_normalizes_unit(self):
        assert Scalar(0, 0, two_pi=5) == ZERO

    def test_add_requires_matching_two_pi(self):
        a = Scalar(1, two_pi=1)
        b = Scalar(1, two_pi=2)
        with pytest.raises(ContractError):
            a + b
        assert a + ZERO == a
        assert ZERO + b == b

    def test_mul_adds_two_pi(self):
        a = Scalar(Fraction(1, 2), two_pi=1)
        b = Scalar(3, two_pi=2)
        assert (a * b) == Scalar(Fraction(3, 2), two_pi=3)

    def test_gaussian_product(self):
        i = Scalar(0, 1)
        assert i * i == Scalar(-1)
        assert (Scalar(1, 1) * Scalar(1, -1)) == Scalar(2)

    def test_inverse(self):
        s = Scalar(Fraction(3, 4), Fraction(-1, 2), two_pi=2)
        assert s * s.inverse() == ONE
        with pytest.raises(ZeroDivisionError):
            ZERO.inverse()

    def test_pow(self):
        s = Scalar(Fraction(-1, 2), two_pi=1)
        assert s ** 3 == Scalar(Fraction(-1, 8), two_pi=3)
        assert s ** 0 == ONE

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("3", Scalar(3)),
            ("-1/2", Scalar(Fraction(-1, 2))),
            ("−1/2", Scalar(Fraction(-1, 2))),
            ("i", Scalar(0, 1)),
            ("-i", Scalar(0, -1)),
            ("3/4i", Scalar(0, Fraction(3, 4))),
            ("1/2+3/4i", Scalar(Fraction(1, 2), Fraction(3, 4))),
            ("2-i", Scalar(2, -1)),
        ],
    )
    def test_parse(self, text, expected):
        assert Scalar.parse(text) == expected

    def test_parse_rejects_garbage(self):
        for bad in ("", "1//2", "x", "1/0"):
            with pytest.raises(ContractError):
                Scalar.parse(bad)

    def test_render(self):
        assert Scalar(Fraction(-1, 2), two_pi=2).render() == "-1/2*(2pi)^-2"
        assert Scalar(0, 1).render() == "i"
        assert Scalar(1, 1).render() == "(1+i)"
        assert ZERO.render() == "0"


# ---------------------------------------------------------------------------
# Monomial signs and products
# ---------------------------------------------------------------------------

class TestProducts:
    def test_odd_anticommute(self):
        ctx = make_ctx()
        x, y = ctx.gen(0), ctx.gen(1)
        xy = x * y
        assert xy == ctx.from_word([0, 1])
        assert y * x == -xy

    def test_odd_square_zero(self):
        ctx = make_ctx()
        x = ctx.gen(0)
        assert (x * x).is_zero

    def test_four_factor_sign_against_oracle(self):
        # ids ordered x < u < y < v; product (x y)(u v)
        ctx = make_ctx()
        x, u, y, v = 0, 1, 2, 3
        prod = ctx.from_word([x, y]) * ctx.from_word([u, v])
        sign, sorted_word = bubble_sign_oracle([x, y, u, v])
        assert sorted_word == (0, 1, 2, 3)
        [(mono, coeff)] = prod.terms.items()
        assert mono.odd == sorted_word
        assert coeff == Scalar(sign)

    @given(st.lists(st.integers(0, 5), min_size=0, max_size=6))
    @settings(max_examples=200, deadline=None)
    def test_from_word_matches_bubble_oracle(self, word):
        ctx = make_ctx(n_odd=6)
        elem = ctx.from_word(word)
        sign, sorted_word = bubble_sign_oracle(word)
        if sign == 0:
            assert elem.is_zero
        else:
            [(mono, coeff)] = elem.terms.items()
            assert mono.odd == sorted_word
            assert coeff == Scalar(sign)

    @given(st.permutations(list(range(5))))
    @settings(max_examples=100, deadline=None)
    def test_permutation_sign_matches_bubble_oracle(self, perm):
        assert permutation_sign(perm) == bubble_sign_oracle(perm)[0]

    def test_sort_word_with_sign_duplicate(self):
        assert sort_word_with_sign([2, 1, 2]) == (0, None)

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=60, deadline=None)
    def test_graded_commutativity(self, seed):
        rng = random.Random(seed)
        ctx = make_ctx(6, 4)
        da = rng.randint(0, 4)
        db = rng.randint(0, 4)
        a = ctx.random_homogeneous(rng, da)
        b = ctx.random_homogeneous(rng, db)
        lhs = a * b
        rhs = (b * a).scale(Scalar((-1) ** (da * db)))
        assert lhs == rhs

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=40, deadline=None)
    def test_associativity(self, seed):
        rng = random.Random(seed)
        ctx = make_ctx(5, 3)
        a = ctx.random_element(rng)
        b = ctx.random_element(rng)
        c = ctx.random_element(rng)
        assert (a * b) * c == a * (b * c)

    def test_context_mismatch(self):
        from transgress.algebra import ContextError

        c1, c2 = make_ctx(), make_ctx()
        with pytest.raises(ContextError):
            c1.gen(0) * c2.gen(0)

    def test_canonical_idempotence(self):
        ctx = make_ctx()
        rng = random.Random(7)
        x = ctx.random_element(rng, terms=5)
        rebuilt = GradedElement(ctx, dict(x.terms))
        assert rebuilt == x
        assert all(not c.is_zero for c in rebuilt.terms.values())

    def test_degree_bookkeeping(self):
        ctx = make_ctx()
        e = ctx.from_word([0, 1, 100], t_power=3)
        assert e.degree() == 4  # two odds + one even; t does not count
        mixed = e + ctx.gen(0)
        assert not mixed.is_homogeneous
        with pytest.raises(ContractError):
            mixed.degree()


# ---------------------------------------------------------------------------
# Derivations
# ---------------------------------------------------------------------------

def d_like(ctx):
    """A degree +1 derivation: x_i -> y_(i mod n_even), y_j -> 0 is invalid
    (degree 3 needed), so send y_j to products of odds."""
    images = {}
    odd = ctx.odd_ids
    even = ctx.even_ids
    for i, gid in enumerate(odd):
        images[gid] = ctx.gen(even[i % len(even)])
    for j, gid in enumerate(even):
        a, b, c = odd[j % len(odd)], odd[(j + 1) % len(odd)], odd[(j + 2) % len(odd)]
        images[gid] = ctx.from_word([a, b, c])
    return Derivation(ctx, images, +1)


class TestDerivation:
    def test_kills_constants(self):
        ctx = make_ctx()
        D = d_like(ctx)
        assert D(ctx.one()).is_zero
        assert D(ctx.scalar(Scalar(5, two_pi=2))).is_zero

    def test_leibniz_sign_on_odd_pair(self):
        ctx = make_ctx()
        D = d_like(ctx)
        x, y = ctx.gen(0), ctx.gen(1)
        assert D(x * y) == D(x) * y - x * D(y)

    def test_leibniz_200_random_pairs(self):
        ctx = make_ctx(6, 6)
        D = d_like(ctx)
        rng = random.Random(20240817)
        for _ in range(200):
            deg = rng.randint(0, 3)
            a = ctx.random_homogeneous(rng, deg, terms=2, max_t=1)
            b = ctx.random_element(rng, terms=2, max_t=1)
            lhs = D(a * b)
            rhs = D(a) * b + a.scale(Scalar((-1) ** deg)) * D(b)
            assert lhs == rhs

    def test_degree_minus_one(self):
        ctx = make_ctx()
        images = {0: ctx.one()}
        iota = Derivation(ctx, images, -1)
        assert iota(ctx.gen(0)) == ctx.one()
        assert iota(ctx.gen(1)).is_zero
        # contraction anti-derivation on a two-factor monomial
        assert iota(ctx.from_word([0, 1])) == ctx.gen(1)
        assert iota(ctx.from_word([1, 0])) == -ctx.gen(1)

    def test_rejects_non_homogeneous_image(self):
        ctx = make_ctx()
        bad = ctx.gen(100) + ctx.one()  # degree 2 + degree 0
        with pytest.raises(ContractError):
            Derivation(ctx, {0: bad}, +1)

    def test_rejects_wrong_degree_image(self):
        ctx = make_ctx()
        with pytest.raises(ContractError):
            Derivation(ctx, {0: ctx.gen(1)}, +1)  # needs degree 2, got 1


# ---------------------------------------------------------------------------
# Calculus in t
# ---------------------------------------------------------------------------

def fact(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def double_factorial(n):
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def t_poly(ctx, *coeffs):
    """Element sum_d coeffs[d] * t^d."""
    acc = ctx.zero()
    for d, c in enumerate(coeffs):
        acc = acc + ctx.scalar(c).times_t(d)
    return acc


class TestIntegration:
    def test_constant(self):
        ctx = make_ctx()
        assert integrate_unit_interval(ctx.one()) == ctx.one()

    @pytest.mark.parametrize("k", range(1, 7))
    def test_beta_values(self, k):
        # int_0^1 t^(k-j-1) (1-t)^(i+j) dt == (k-j-1)! (i+j)! / (k+i)!
        ctx = make_ctx()
        t = ctx.one().times_t(1)
        one_minus_t = ctx.one() - t
        for j in range(k):
            for i in range(k - j):
                poly = ctx.one()
                for _ in range(k - j - 1):
                    poly = poly * t
                for _ in range(i + j):
                    poly = poly * one_minus_t
                got = integrate_unit_interval(poly)
                want = Fraction(fact(k - j - 1) * fact(i + j), fact(k + i))
                assert got == ctx.scalar(want)

    @pytest.mark.parametrize("m", range(9))
    def test_even_power_values(self, m):
        # int_0^1 (1-t^2)^m dt == (2m)!! / (2m+1)!!
        ctx = make_ctx()
        base = ctx.one() - ctx.one().times_t(2)
        poly = ctx.one()
        for _ in range(m):
            poly = poly * base
        want = Fraction(double_factorial(2 * m), double_factorial(2 * m + 1))
        assert integrate_unit_interval(poly) == ctx.scalar(want)

    def test_linearity_and_antiderivative_endpoints(self):
        # integration agrees with the power-rule antiderivative evaluated
        # at the endpoints via substitute_t
        ctx = make_ctx(3, 2)
        rng = random.Random(5)
        for _ in range(25):
            x = ctx.random_element(rng, terms=4, max_t=4)
            anti = {}
            for mono, coeff in x.terms.items():
                anti[Monomial(mono.odd, mono.even, mono.t_deg + 1)] = coeff / (
                    mono.t_deg + 1
                )
            F = GradedElement(ctx, anti)
            endpoint = substitute_t(F, ONE) - substitute_t(F, ZERO)
            assert integrate_unit_interval(x) == endpoint

    def test_result_is_t_free(self):
        ctx = make_ctx()
        x = ctx.gen(0).times_t(3) + ctx.gen(100).times_t(1)
        out = integrate_unit_interval(x)
        assert all(m.t_deg == 0 for m in out.terms)


class TestSubstitute:
    def test_noop_on_t_free(self):
        ctx = make_ctx()
        rng = random.Random(11)
        x = ctx.random_element(rng, max_t=0)
        assert substitute_t(x, HALF) == x

    def test_polynomial_evaluation(self):
        ctx = make_ctx()
        # (2 - 3t + t^2) at t = 1/2 -> 2 - 3/2 + 1/4 = 3/4
        p = t_poly(ctx, 2, -3, 1)
        assert substitute_t(p, HALF) == ctx.scalar(Fraction(3, 4))
        assert substitute_t(p, ONE) == ctx.scalar(0)

    def test_t_derivative(self):
        ctx = make_ctx()
        p = t_poly(ctx, 5, 2, -1)  # 5 + 2t - t^2
        assert t_derivative(p) == t_poly(ctx, 2, -2)
        assert t_derivative(ctx.one()).is_zero
