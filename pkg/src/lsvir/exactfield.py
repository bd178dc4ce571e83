"""Exact arithmetic in the rational function field Q(e).

Polynomials are plain tuples of Python ints, lowest degree first, with the
zero polynomial being the empty tuple.  A :class:`RatFun` holds a pair of such
tuples in canonical form:

* numerator and denominator are coprime over Q,
* the denominator has a positive leading coefficient,
* the integer content of the pair (all coefficients together) is 1.

Canonical form makes value equality the same as structural equality, so
``RatFun`` instances are hashable and ``==`` is exact.

:class:`GaussianRational` provides exact complex numbers with rational real
and imaginary parts; :func:`rf_eval` specializes a rational function at such a
point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from numbers import Rational
from typing import Callable, Mapping, Tuple, Union

IntPoly = Tuple[int, ...]

__all__ = [
    "IntPoly",
    "RatFun",
    "GaussianRational",
    "PoleError",
    "ParseError",
    "poly_gcd",
    "rf_normalize",
    "rf_add",
    "rf_sub",
    "rf_mul",
    "rf_neg",
    "rf_inv",
    "rf_eval",
    "rf_sqrt",
    "parse_expression",
]


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated at a root of its denominator."""


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.text = text
        self.pos = pos
        if pos >= 0:
            message = f"{message} at position {pos}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------

def _trim(c) -> IntPoly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(a: IntPoly, b: IntPoly) -> IntPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def poly_neg(a: IntPoly) -> IntPoly:
    return tuple(-x for x in a)


def poly_sub(a: IntPoly, b: IntPoly) -> IntPoly:
    return poly_add(a, poly_neg(b))


def poly_mul(a: IntPoly, b: IntPoly) -> IntPoly:
    if not a or not b:
        return ()
    if len(a) == 1:
        k = a[0]
        return tuple(k * x for x in b)
    if len(b) == 1:
        k = b[0]
        return tuple(k * x for x in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def poly_scale(a: IntPoly, k: int) -> IntPoly:
    if k == 0:
        return ()
    return tuple(k * x for x in a)


def poly_content(a: IntPoly) -> int:
    g = 0
    for x in a:
        g = gcd(g, x)
        if g == 1:
            break
    return g


def poly_primitive(a: IntPoly) -> IntPoly:
    """Primitive part with positive leading coefficient."""
    if not a:
        return ()
    g = poly_content(a)
    if a[-1] < 0:
        g = -g
    if g == 1:
        return a
    return tuple(x // g for x in a)


def poly_pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Pseudo-remainder of ``a`` by nonzero ``b``."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        k = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for i, y in enumerate(b):
            r[i + shift] -= k * y
        r = list(_trim(r))
    return tuple(r)


def poly_exact_div(a: IntPoly, b: IntPoly) -> IntPoly:
    """Quotient ``a / b`` in Z[e]; the division must be exact."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return ()
    if len(b) == 1:
        k = b[0]
        if any(x % k for x in a):
            raise ArithmeticError("inexact polynomial division")
        return tuple(x // k for x in a)
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [0] * (len(a) - db) if len(a) > db else []
    while r and len(r) - 1 >= db:
        k, rem = divmod(r[-1], lb)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        shift = len(r) - 1 - db
        q[shift] = k
        for i, y in enumerate(b):
            r[i + shift] -= k * y
        r = list(_trim(r))
    if r:
        raise ArithmeticError("inexact polynomial division")
    return tuple(q)


@lru_cache(maxsize=1 << 16)
def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Greatest common divisor over Q, returned primitive with positive leading coefficient.

    ``poly_gcd((), b)`` is the normalized ``b``; ``poly_gcd((), ())`` is ``()``.
    """
    a = poly_primitive(_trim(a))
    b = poly_primitive(_trim(b))
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return (1,)
        a, b = b, poly_primitive(poly_pseudo_rem(a, b))
    return a


def poly_eval(a: IntPoly, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_isqrt(a: IntPoly) -> IntPoly | None:
    """Integer polynomial square root, or None if ``a`` is not a square in Z[e]."""
    if not a:
        return ()
    if len(a) % 2 == 0 or a[-1] < 0:
        return None
    lead = isqrt(a[-1])
    if lead * lead != a[-1]:
        return None
    n = (len(a) - 1) // 2
    # solve coefficients top-down: a = s^2
    s = [Fraction(0)] * (n + 1)
    s[n] = Fraction(lead)
    for k in range(n - 1, -1, -1):
        acc = Fraction(a[n + k])
        for i in range(k + 1, n):
            j = n + k - i
            if k < j <= n:
                acc -= s[i] * s[j]
        s[k] = acc / (2 * s[n])
    if any(x.denominator != 1 for x in s):
        return None
    root = tuple(int(x) for x in s)
    return root if poly_mul(root, root) == a else None


def _poly_terms(a: IntPoly, var: str):
    """Yield (coefficient, monomial-string) pairs, highest degree first."""
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if c == 0:
            continue
        if k == 0:
            mono = ""
        elif k == 1:
            mono = var
        else:
            mono = f"{var}^{k}"
        yield c, mono


def poly_str(a: IntPoly, var: str = "e") -> str:
    if not a:
        return "0"
    terms = list(_poly_terms(a, var))
    # lead with a positive term when there is one, e.g. "1 - e" rather than "-e + 1"
    if terms[0][0] < 0:
        for i, (c, _) in enumerate(terms):
            if c > 0:
                terms.insert(0, terms.pop(i))
                break
    out = []
    for i, (c, mono) in enumerate(terms):
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if i == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1 << 18)
def _canonical(num: IntPoly, den: IntPoly) -> Tuple[IntPoly, IntPoly]:
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return (), (1,)
    if len(den) > 1 and len(num) > 0:
        g = poly_gcd(num, den)
        if len(g) > 1:
            num = poly_exact_div(num, g)
            den = poly_exact_div(den, g)
    c = gcd(poly_content(num), poly_content(den))
    if den[-1] < 0:
        c = -c
    if c != 1:
        num = tuple(x // c for x in num)
        den = tuple(x // c for x in den)
    return num, den


Scalar = Union[int, Fraction]


class RatFun:
    """An element of Q(e) kept in canonical reduced form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: IntPoly = (), den: IntPoly = (1,), *, _canonical_ok: bool = False):
        num = _trim(num)
        den = _trim(den)
        if not _canonical_ok:
            num, den = _canonical(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def eps(cls) -> "RatFun":
        return _EPS

    @classmethod
    def const(cls, value: Scalar) -> "RatFun":
        value = Fraction(value)
        return cls((value.numerator,), (value.denominator,))

    @classmethod
    def coerce(cls, value) -> "RatFun":
        if isinstance(value, RatFun):
            return value
        if isinstance(value, (int, Fraction)):
            return _const_cached(Fraction(value))
        if isinstance(value, Rational):
            return _const_cached(Fraction(value.numerator, value.denominator))
        raise TypeError(f"cannot convert {type(value).__name__} to RatFun")

    @classmethod
    def parse(cls, text: str) -> "RatFun":
        """Parse strings such as ``"(-2*e^2 - 2*e)/(1 + 3*e)"`` (``e`` is the variable)."""
        value = parse_expression(text, {"e": _EPS}, lift=cls.coerce)
        return cls.coerce(value)

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def as_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(self.num[0] if self.num else 0, self.den[0])

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.as_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.as_fraction())
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return rf_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return rf_sub(self, other)

    def __rsub__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return rf_sub(other, self)

    def __mul__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return rf_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return rf_mul(self, rf_inv(other))

    def __rtruediv__(self, other):
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return rf_mul(other, rf_inv(self))

    def __neg__(self):
        return rf_neg(self)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else rf_inv(self)
        out = _ONE
        for _ in range(abs(k)):
            out = rf_mul(out, base)
        return out

    # -- formatting ---------------------------------------------------------
    def __str__(self) -> str:
        if not self.num:
            return "0"
        num = poly_str(self.num)
        if len(self.num) > 1 and sum(1 for c in self.num if c) > 1:
            num = f"({num})"
        if self.den == (1,):
            return num
        if len(self.den) == 1:
            return f"{num}/{self.den[0]}"
        return f"{num}/({poly_str(self.den)})"

    def __repr__(self) -> str:
        return f"RatFun({str(self)!r})"


_EPS = RatFun((0, 1), (1,), _canonical_ok=True)
_ONE = RatFun((1,), (1,), _canonical_ok=True)
_ZERO = RatFun((), (1,), _canonical_ok=True)


@lru_cache(maxsize=4096)
def _const_cached(value: Fraction) -> RatFun:
    if value == 0:
        return _ZERO
    return RatFun((value.numerator,), (value.denominator,), _canonical_ok=True)


def rf_normalize(num: IntPoly, den: IntPoly) -> RatFun:
    """Canonical reduced form of ``num/den``; raises ZeroDivisionError on a zero denominator."""
    return RatFun(num, den)


@lru_cache(maxsize=1 << 18)
def rf_add(a: RatFun, b: RatFun) -> RatFun:
    if not a.num:
        return b
    if not b.num:
        return a
    if a.den == b.den:
        return RatFun(poly_add(a.num, b.num), a.den)
    if len(a.den) == 1 and len(b.den) == 1:
        da, db = a.den[0], b.den[0]
        return RatFun(poly_add(poly_scale(a.num, db), poly_scale(b.num, da)), (da * db,))
    num = poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den))
    return RatFun(num, poly_mul(a.den, b.den))


def rf_neg(a: RatFun) -> RatFun:
    if not a.num:
        return a
    return RatFun(poly_neg(a.num), a.den, _canonical_ok=True)


def rf_sub(a: RatFun, b: RatFun) -> RatFun:
    return rf_add(a, rf_neg(b))


@lru_cache(maxsize=1 << 18)
def rf_mul(a: RatFun, b: RatFun) -> RatFun:
    if not a.num or not b.num:
        return _ZERO
    if a is _ONE:
        return b
    if b is _ONE:
        return a
    return RatFun(poly_mul(a.num, b.num), poly_mul(a.den, b.den))


def rf_inv(a: RatFun) -> RatFun:
    if not a.num:
        raise ZeroDivisionError("inverse of the zero rational function")
    num, den = a.den, a.num
    if den[-1] < 0:
        num, den = poly_neg(num), poly_neg(den)
    return RatFun(num, den, _canonical_ok=True)


def rf_sqrt(a: RatFun) -> RatFun | None:
    """Exact square root in Q(e), or None when ``a`` is not a square."""
    if not a.num:
        return a
    # sqrt(p/q) = sqrt(p*q)/q; the content of p*q must itself be a square
    pq = poly_mul(a.num, a.den)
    root = poly_isqrt(pq)
    if root is None:
        return None
    return RatFun(root, a.den)


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Scalar = 0, im: Scalar = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, Rational):
            return cls(Fraction(value.numerator, value.denominator))
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``"3/5"``, ``"2/3*i"``, ``"i*2/3"``, ``"1/2 - 3*i"`` and similar."""
        return cls.coerce(parse_expression(text, {"i": cls(0, 1)}, lift=cls.coerce))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of Gaussian zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = GaussianRational(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.im == 1:
            im = "i"
        elif self.im == -1:
            im = "-i"
        else:
            im = f"{self.im}*i"
        if self.re == 0:
            return im
        if im.startswith("-"):
            return f"{self.re} - {im[1:]}"
        return f"{self.re} + {im}"

    def __repr__(self) -> str:
        return f"GaussianRational({str(self)!r})"


def rf_eval(x: RatFun, eps0) -> GaussianRational:
    """Exact value of ``x`` at ``e = eps0``.

    Raises :class:`PoleError` naming the denominator when it vanishes at ``eps0``.
    """
    eps0 = GaussianRational.coerce(eps0)
    den = poly_eval(x.den, eps0)
    if not den:
        raise PoleError(f"denominator {poly_str(x.den)} vanishes at e = {eps0}")
    return GaussianRational.coerce(poly_eval(x.num, eps0)) / den


# ---------------------------------------------------------------------------
# expression parsing
# ---------------------------------------------------------------------------

def _tokenize(text: str):
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield "num", int(text[i:j]), i
            i = j
        elif ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            yield "name", text[i:j], i
            i = j
        elif text.startswith("**", i):
            yield "op", "^", i
            i += 2
        elif ch in "+-*/^()":
            yield "op", ch, i
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", text, i)
    yield "end", None, n


class _ExprParser:
    def __init__(self, text: str, names: Mapping[str, object], lift: Callable):
        self.text = text
        self.names = names
        self.lift = lift
        self.tokens = list(_tokenize(text))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}", self.text, pos)

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", self.text, 0)
        value = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {v!r}", self.text, pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, v, _ = self.peek()
            if kind == "op" and v in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if v == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, v, pos = self.peek()
            if kind == "op" and v in "*/":
                self.take()
                rhs = self.unary()
                if v == "*":
                    value = value * rhs
                else:
                    if not rhs:
                        raise ParseError("division by zero", self.text, pos)
                    value = self._div(value, rhs)
            elif kind == "name" or (kind == "op" and v == "("):
                # implicit product, e.g. "2e" or "2(1+e)"
                value = value * self.unary()
            else:
                return value

    def _div(self, a, b):
        if isinstance(a, int) and isinstance(b, int):
            return Fraction(a, b)
        return a / b

    def unary(self):
        kind, v, _ = self.peek()
        if kind == "op" and v in "+-":
            self.take()
            value = self.unary()
            return -value if v == "-" else value
        return self.power()

    def power(self):
        base = self.atom()
        kind, v, pos = self.peek()
        if kind == "op" and v == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, exp, pos = self.take()
            if kind != "num":
                raise ParseError("integer exponent expected", self.text, pos)
            exp *= sign
            if exp < 0:
                return self._div(1, base ** -exp)
            return base ** exp
        return base

    def atom(self):
        kind, v, pos = self.take()
        if kind == "num":
            return v
        if kind == "name":
            if v not in self.names:
                raise ParseError(f"unknown symbol {v!r}", self.text, pos)
            return self.names[v]
        if kind == "op" and v == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected {v!r}" if v is not None else "unexpected end", self.text, pos)


def parse_expression(text: str, names: Mapping[str, object], lift: Callable = lambda x: x):
    """Evaluate an arithmetic expression over ``+ - * / ^`` and parentheses.

    Integer literals stay ``int``/``Fraction`` until they meet a named value,
    whose own arithmetic then takes over.
    """
    return _ExprParser(text, names, lift).parse()
