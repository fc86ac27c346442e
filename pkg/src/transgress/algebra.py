"""Exact sparse graded-commutative algebra with a formal deformation parameter.

Generators come in two parities: odd generators (form degree 1) anticommute
and square to zero, even generators (form degree 2) are central.  Every
element may additionally depend polynomially on a commuting degree-0
parameter t, which never contributes to the form degree and can be
integrated away exactly over the unit interval.

Coefficients are Gaussian rationals carrying a formal power of (2*pi)^(-1)
as a unit tag.  All arithmetic is exact; there is no floating point
anywhere in this package.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

__all__ = [
    "AlgebraError",
    "ContextError",
    "ContractError",
    "Scalar",
    "ZERO",
    "ONE",
    "HALF",
    "Generator",
    "Monomial",
    "Context",
    "GradedElement",
    "Derivation",
    "mono_mul",
    "integrate_unit_interval",
    "substitute_t",
    "t_derivative",
    "permutation_sign",
    "sort_word_with_sign",
]


class AlgebraError(Exception):
    """Base error for this package."""


class ContextError(AlgebraError):
    """Operands belong to different generator contexts (or Lie algebras)."""


class ContractError(AlgebraError):
    """An operation precondition was violated."""


RationalLike = Union[int, Fraction]


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

class Scalar:
    """A Gaussian rational times a formal power of (2*pi)^(-1).

    ``two_pi`` is the exponent of the unit (2*pi)^(-1), so a scalar with
    ``two_pi == k`` stands for ``(re + im*i) / (2*pi)**k``.  Addition demands
    equal unit powers (except against exact zero), multiplication adds them.
    Fractions are kept in lowest terms with positive denominators by the
    Fraction type itself.
    """

    __slots__ = ("re", "im", "two_pi")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0, two_pi: int = 0):
        re = re if isinstance(re, Fraction) else Fraction(re)
        im = im if isinstance(im, Fraction) else Fraction(im)
        if not re and not im:
            two_pi = 0
        self.re = re
        self.im = im
        self.two_pi = two_pi

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_one(self) -> bool:
        return self.re == 1 and not self.im and not self.two_pi

    def __bool__(self) -> bool:
        return not self.is_zero

    @staticmethod
    def _coerce(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar(value)
        raise TypeError(f"cannot interpret {value!r} as a scalar")

    def __add__(self, other) -> "Scalar":
        other = self._coerce(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.two_pi != other.two_pi:
            raise ContractError(
                f"cannot add scalars with different (2pi) powers: "
                f"{self.two_pi} vs {other.two_pi}"
            )
        return Scalar(self.re + other.re, self.im + other.im, self.two_pi)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im, self.two_pi)

    def __sub__(self, other) -> "Scalar":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Scalar":
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return ZERO
        if not self.im and not other.im:
            return Scalar(self.re * other.re, 0, self.two_pi + other.two_pi)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.two_pi + other.two_pi,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise ZeroDivisionError("scalar is zero")
        if not self.im:
            return Scalar(1 / self.re, 0, -self.two_pi)
        norm = self.re * self.re + self.im * self.im
        return Scalar(self.re / norm, -self.im / norm, -self.two_pi)

    def __truediv__(self, other) -> "Scalar":
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = Scalar(other)
            else:
                return NotImplemented
        return (
            self.re == other.re
            and self.im == other.im
            and self.two_pi == other.two_pi
        )

    def __hash__(self) -> int:
        return hash((self.re, self.im, self.two_pi))

    @staticmethod
    def parse(text: str) -> "Scalar":
        """Parse an exact rational or Gaussian-rational string.

        Accepts forms like ``"3"``, ``"-1/2"``, ``"i"``, ``"3/4i"``,
        ``"1/2+3/4i"``; a unicode minus is tolerated.
        """
        s = text.strip().replace("−", "-").replace(" ", "")
        if not s:
            raise ContractError("empty scalar string")
        parts = _re.findall(r"[+-]?[^+-]+", s)
        if "".join(parts) != s:
            raise ContractError(f"cannot parse scalar {text!r}")
        re_total = Fraction(0)
        im_total = Fraction(0)
        try:
            for part in parts:
                if part.lower().endswith("i"):
                    body = part[:-1]
                    if body in ("", "+", "-"):
                        body += "1"
                    im_total += Fraction(body)
                else:
                    re_total += Fraction(part)
        except (ValueError, ZeroDivisionError) as exc:
            raise ContractError(f"cannot parse scalar {text!r}: {exc}") from None
        return Scalar(re_total, im_total)

    def render(self) -> str:
        """Exact string form; the (2*pi) unit renders as ``(2pi)^-k``."""
        if self.is_zero:
            return "0"
        if not self.im:
            core = str(self.re)
        elif not self.re:
            core = self._imag_str(self.im)
        else:
            sign = "+" if self.im > 0 else "-"
            core = f"({self.re}{sign}{self._imag_str(abs(self.im))})"
        if self.two_pi:
            core += f"*(2pi)^{-self.two_pi}"
        return core

    @staticmethod
    def _imag_str(q: Fraction) -> str:
        if q == 1:
            return "i"
        if q == -1:
            return "-i"
        return f"{q}i"

    def __repr__(self) -> str:
        return self.render()


ZERO = Scalar(0)
ONE = Scalar(1)
HALF = Scalar(Fraction(1, 2))
I_UNIT = Scalar(0, 1)


# ---------------------------------------------------------------------------
# Generators, monomials, contexts
# ---------------------------------------------------------------------------

class Generator(NamedTuple):
    gid: int
    degree: int  # 1 = odd, 2 = even
    label: str

    @property
    def is_odd(self) -> bool:
        return self.degree == 1


class Monomial(NamedTuple):
    """Canonical product of generators times a power of t.

    ``odd`` is strictly increasing (odd generators square to zero), ``even``
    is a sorted multiset.  ``t_deg`` does not count toward the form degree.
    """

    odd: tuple
    even: tuple
    t_deg: int = 0

    @property
    def degree(self) -> int:
        return len(self.odd) + 2 * len(self.even)


UNIT_MONO = Monomial((), (), 0)


def _merge_odd(o1: tuple, o2: tuple):
    """Merge two ascending odd-id tuples; returns (sign, merged) or (0, None)."""
    if not o1:
        return 1, o2
    if not o2:
        return 1, o1
    i = j = inv = 0
    n1, n2 = len(o1), len(o2)
    out = []
    while i < n1 and j < n2:
        a, b = o1[i], o2[j]
        if a == b:
            return 0, None
        if a < b:
            out.append(a)
            i += 1
        else:
            out.append(b)
            j += 1
            inv += n1 - i
    out.extend(o1[i:])
    out.extend(o2[j:])
    return (-1 if inv & 1 else 1), tuple(out)


def mono_mul(m1: Monomial, m2: Monomial):
    """Product of canonical monomials; returns (sign, Monomial) or (0, None)."""
    sign, odd = _merge_odd(m1.odd, m2.odd)
    if odd is None:
        return 0, None
    if m1.even and m2.even:
        even = tuple(sorted(m1.even + m2.even))
    else:
        even = m1.even or m2.even
    return sign, Monomial(odd, even, m1.t_deg + m2.t_deg)


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence, by inversion count."""
    inv = 0
    n = len(perm)
    for i in range(n):
        pi = perm[i]
        for j in range(i + 1, n):
            if pi > perm[j]:
                inv += 1
    return -1 if inv & 1 else 1


def sort_word_with_sign(word: Sequence[int]):
    """Sort a word of odd generator ids, tracking the transposition parity.

    Returns (sign, sorted tuple), or (0, None) when an id repeats.
    """
    items = list(word)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and items[j - 1] == items[j]:
            return 0, None
    return sign, tuple(items)


class Context:
    """A finite family of graded generators; elements live over one context."""

    def __init__(self, generators: Iterable[Generator]):
        gens = {}
        for g in generators:
            if not isinstance(g, Generator):
                g = Generator(*g)
            if g.degree not in (1, 2):
                raise ContractError(f"generator degree must be 1 or 2, got {g.degree}")
            if g.gid in gens:
                raise ContractError(f"duplicate generator id {g.gid}")
            gens[g.gid] = g
        self._gens = gens
        self._order = tuple(sorted(gens.values(), key=lambda g: (g.degree, g.gid)))

    @property
    def generators(self) -> tuple:
        return self._order

    @property
    def odd_ids(self) -> tuple:
        return tuple(g.gid for g in self._order if g.degree == 1)

    @property
    def even_ids(self) -> tuple:
        return tuple(g.gid for g in self._order if g.degree == 2)

    def generator(self, gid: int) -> Generator:
        return self._gens[gid]

    def zero(self) -> "GradedElement":
        return GradedElement(self, {}, _canonical=True)

    def one(self) -> "GradedElement":
        return GradedElement(self, {UNIT_MONO: ONE}, _canonical=True)

    def scalar(self, value) -> "GradedElement":
        value = Scalar._coerce(value)
        if value.is_zero:
            return self.zero()
        return GradedElement(self, {UNIT_MONO: value}, _canonical=True)

    def gen(self, gid: int) -> "GradedElement":
        g = self._gens[gid]
        mono = Monomial((gid,), (), 0) if g.is_odd else Monomial((), (gid,), 0)
        return GradedElement(self, {mono: ONE}, _canonical=True)

    def from_word(self, word: Sequence[int], coeff=ONE, t_power: int = 0) -> "GradedElement":
        """Element from an arbitrary generator word, recording the odd sign."""
        coeff = Scalar._coerce(coeff)
        odd_word = []
        evens = []
        for gid in word:
            g = self._gens[gid]
            (odd_word if g.is_odd else evens).append(gid)
        sign, odd = sort_word_with_sign(odd_word)
        if odd is None or coeff.is_zero:
            return self.zero()
        if sign < 0:
            coeff = -coeff
        mono = Monomial(odd, tuple(sorted(evens)), t_power)
        return GradedElement(self, {mono: coeff}, _canonical=True)

    # Randomized elements for property tests and self-checks.
    def random_element(self, rng, terms: int = 3, max_odd: int = 2,
                       max_even: int = 1, max_t: int = 1) -> "GradedElement":
        odd_ids, even_ids = self.odd_ids, self.even_ids
        acc = {}
        for _ in range(terms):
            n_odd = rng.randint(0, min(max_odd, len(odd_ids)))
            odd = tuple(sorted(rng.sample(odd_ids, n_odd))) if n_odd else ()
            n_even = rng.randint(0, max_even) if even_ids else 0
            even = tuple(sorted(rng.choices(even_ids, k=n_even))) if n_even else ()
            coeff = Scalar(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)))
            mono = Monomial(odd, even, rng.randint(0, max_t))
            _acc_add(acc, mono, coeff)
        return GradedElement(self, acc)

    def random_homogeneous(self, rng, degree: int, terms: int = 2,
                           max_t: int = 0) -> "GradedElement":
        odd_ids, even_ids = self.odd_ids, self.even_ids
        feasible = [
            n_even for n_even in range(degree // 2 + 1)
            if degree - 2 * n_even <= len(odd_ids) and (n_even == 0 or even_ids)
        ]
        if not feasible:
            raise ContractError(f"no degree-{degree} monomials in this context")
        acc = {}
        for _ in range(terms):
            n_even = rng.choice(feasible)
            n_odd = degree - 2 * n_even
            odd = tuple(sorted(rng.sample(odd_ids, n_odd))) if n_odd else ()
            even = tuple(sorted(rng.choices(even_ids, k=n_even))) if n_even else ()
            coeff = Scalar(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)))
            _acc_add(acc, Monomial(odd, even, rng.randint(0, max_t)), coeff)
        return GradedElement(self, acc)

    def __repr__(self) -> str:
        return f"Context({len(self.odd_ids)} odd, {len(self.even_ids)} even)"


def _acc_add(acc: dict, mono: Monomial, coeff: Scalar) -> None:
    cur = acc.get(mono)
    if cur is None:
        if not coeff.is_zero:
            acc[mono] = coeff
        return
    new = cur + coeff
    if new.is_zero:
        del acc[mono]
    else:
        acc[mono] = new


def _mono_sort_key(m: Monomial):
    return (m.degree, m.t_deg, m.odd, m.even)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

class GradedElement:
    """Sparse sum of signed monomials with Scalar coefficients.

    Values are immutable by convention: no method mutates ``terms`` after
    construction, so elements are safe to share.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Mapping[Monomial, Scalar],
                 _canonical: bool = False):
        if not _canonical:
            terms = {m: c for m, c in terms.items() if not c.is_zero}
        self.ctx = ctx
        self.terms = dict(terms) if not isinstance(terms, dict) else terms

    def _check(self, other: "GradedElement") -> None:
        if self.ctx is not other.ctx:
            raise ContextError("elements belong to different generator contexts")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {m.degree for m in self.terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self):
        """Form degree of a homogeneous element; None for zero."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ContractError(f"element is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def coefficient(self, mono: Monomial) -> Scalar:
        return self.terms.get(mono, ZERO)

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._check(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        acc = dict(self.terms)
        for m, c in other.terms.items():
            _acc_add(acc, m, c)
        return GradedElement(self.ctx, acc, _canonical=True)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def __neg__(self) -> "GradedElement":
        return GradedElement(
            self.ctx, {m: -c for m, c in self.terms.items()}, _canonical=True
        )

    def scale(self, scalar) -> "GradedElement":
        scalar = Scalar._coerce(scalar)
        if scalar.is_zero or self.is_zero:
            return self.ctx.zero()
        if scalar.is_one:
            return self
        return GradedElement(
            self.ctx, {m: c * scalar for m, c in self.terms.items()}, _canonical=True
        )

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        self._check(other)
        if self.is_zero or other.is_zero:
            return self.ctx.zero()
        acc = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, mono = mono_mul(m1, m2)
                if mono is None:
                    continue
                c = c1 * c2
                if sign < 0:
                    c = -c
                _acc_add(acc, mono, c)
        return GradedElement(self.ctx, acc, _canonical=True)

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def times_t(self, power: int = 1) -> "GradedElement":
        """Multiply by t**power (shifts every t-degree)."""
        if power == 0 or self.is_zero:
            return self
        if power < 0:
            raise ContractError("negative t powers are not representable")
        return GradedElement(
            self.ctx,
            {Monomial(m.odd, m.even, m.t_deg + power): c for m, c in self.terms.items()},
            _canonical=True,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.ctx is other.ctx and self.terms == other.terms

    def __hash__(self):
        raise TypeError("GradedElement is not hashable")

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _mono_sort_key(kv[0]))

    def leading_term_str(self) -> str:
        """Render one term, for witnesses in check reports."""
        if self.is_zero:
            return "0"
        mono, coeff = self.sorted_terms()[0]
        return render_term(self.ctx, mono, coeff)

    def render(self) -> str:
        if self.is_zero:
            return "0"
        parts = [render_term(self.ctx, m, c) for m, c in self.sorted_terms()]
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return self.render()


def render_monomial(ctx: Context, mono: Monomial) -> str:
    parts = [ctx.generator(g).label for g in mono.odd]
    parts += [ctx.generator(g).label for g in mono.even]
    if mono.t_deg == 1:
        parts.append("t")
    elif mono.t_deg > 1:
        parts.append(f"t^{mono.t_deg}")
    return "*".join(parts) if parts else "1"


def render_term(ctx: Context, mono: Monomial, coeff: Scalar) -> str:
    mono_str = render_monomial(ctx, mono)
    if mono_str == "1":
        return coeff.render()
    if coeff.is_one:
        return mono_str
    if coeff == Scalar(-1):
        return "-" + mono_str
    return f"{coeff.render()}*{mono_str}"


# ---------------------------------------------------------------------------
# Derivations
# ---------------------------------------------------------------------------

class Derivation:
    """Graded derivation fixed by generator images.

    ``degree`` +1 raises the form degree (exterior-derivative style), -1
    lowers it (interior-product style).  Each image must be zero or
    homogeneous of the generator degree shifted by ``degree``; missing
    generators map to zero.  The graded Leibniz rule
    ``D(ab) = D(a) b + (-1)^(degree*|a|) a D(b)`` fixes the extension.
    """

    __slots__ = ("ctx", "degree", "images")

    def __init__(self, ctx: Context, images: Mapping[int, GradedElement], degree: int):
        if degree not in (1, -1):
            raise ContractError("derivation degree must be +1 or -1")
        checked = {}
        for gid, img in images.items():
            gen = ctx.generator(gid)
            if img.ctx is not ctx:
                raise ContextError("derivation image over a different context")
            if img.is_zero:
                continue
            want = gen.degree + degree
            if not img.is_homogeneous or img.degree() != want:
                raise ContractError(
                    f"image of {gen.label} must be homogeneous of degree {want}"
                )
            checked[gid] = img
        self.ctx = ctx
        self.degree = degree
        self.images = checked

    def __call__(self, x: GradedElement) -> GradedElement:
        if x.ctx is not self.ctx:
            raise ContextError("element over a different context")
        acc = {}
        images = self.images
        for mono, coeff in x.terms.items():
            odd, even, t_deg = mono
            n_odd = len(odd)
            for pos in range(n_odd):
                img = images.get(odd[pos])
                if img is None:
                    continue
                prefix = Monomial(odd[:pos], (), 0)
                suffix = Monomial(odd[pos + 1:], even, t_deg)
                sign0 = -1 if pos & 1 else 1
                self._acc_sandwich(prefix, img, suffix, coeff, sign0, acc)
            sign0 = -1 if n_odd & 1 else 1
            for pos in range(len(even)):
                img = images.get(even[pos])
                if img is None:
                    continue
                prefix = Monomial(odd, even[:pos], 0)
                suffix = Monomial((), even[pos + 1:], t_deg)
                self._acc_sandwich(prefix, img, suffix, coeff, sign0, acc)
        return GradedElement(self.ctx, acc, _canonical=True)

    @staticmethod
    def _acc_sandwich(prefix, img, suffix, coeff, sign0, acc) -> None:
        for m2, c2 in img.terms.items():
            s1, ma = mono_mul(prefix, m2)
            if ma is None:
                continue
            s2, mb = mono_mul(ma, suffix)
            if mb is None:
                continue
            c = coeff * c2
            if sign0 * s1 * s2 < 0:
                c = -c
            _acc_add(acc, mb, c)


# ---------------------------------------------------------------------------
# Calculus in t
# ---------------------------------------------------------------------------

def integrate_unit_interval(x: GradedElement) -> GradedElement:
    """Integrate every coefficient polynomial in t over [0, 1], exactly."""
    acc = {}
    for mono, coeff in x.terms.items():
        _acc_add(acc, Monomial(mono.odd, mono.even, 0), coeff / (mono.t_deg + 1))
    return GradedElement(x.ctx, acc, _canonical=True)


def substitute_t(x: GradedElement, value: Scalar) -> GradedElement:
    """Evaluate every coefficient polynomial at t = value."""
    value = Scalar._coerce(value)
    acc = {}
    for mono, coeff in x.terms.items():
        _acc_add(acc, Monomial(mono.odd, mono.even, 0), coeff * value ** mono.t_deg)
    return GradedElement(x.ctx, acc, _canonical=True)


def t_derivative(x: GradedElement) -> GradedElement:
    """Formal d/dt on coefficient polynomials."""
    acc = {}
    for mono, coeff in x.terms.items():
        if mono.t_deg == 0:
            continue
        _acc_add(acc, Monomial(mono.odd, mono.even, mono.t_deg - 1), coeff * mono.t_deg)
    return GradedElement(x.ctx, acc, _canonical=True)
