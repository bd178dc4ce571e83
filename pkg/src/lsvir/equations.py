"""Scalar constraint families used by the derivation engine.

Centerless families are written for the rescaled unknowns

    G(m,r) = g(m,r) (1+2e(m+r)) / (1+2er)
    H(r,m) = h(r,m) (1+2e(m+r)) / (1+em)
    D(r,s) = d(r,s) (1+e(r+s)) / (1+2es)

with ``f`` fixed to ``-n(1+en)/(1+e(m+n))``; in these variables the solution is
``G = -m/2 - r``, ``H = -m``, ``D = 1``.  The cocycle families constrain the
central components ``sigma, psi, rho`` once ``f, g, h, d, phi`` are fixed.

Each family is a function ``fn(get, ctx, *indices)`` returning the residual
(left side minus right side).  ``get(key)`` supplies unknown values, which may
be exact field elements or :class:`LinearForm` placeholders.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, NamedTuple, Tuple

from .exactfield import RatFun
from .structures import HalfInt, StructureSystem, index_json

__all__ = ["Unknown", "LinearForm", "NonlinearError", "Family", "CENTERLESS", "CENTRAL", "unknown"]


class Unknown(NamedTuple):
    family: str  # "G", "H", "D", "sigma", "psi", "rho"
    a: object
    b: object

    def __str__(self) -> str:
        return f"{self.family}({self.a},{self.b})"

    def sort_key(self):
        return (self.family, _num(self.a), _num(self.b))


def _num(i):
    return i.value if isinstance(i, HalfInt) else Fraction(i)


def unknown(family: str, a, b) -> Unknown:
    return Unknown(family, a, b)


class NonlinearError(ArithmeticError):
    """Two placeholder unknowns were multiplied together."""


class LinearForm:
    """``const + sum(coeff[k] * k)`` over unknown keys, coefficients in Q(e)."""

    __slots__ = ("terms", "const")

    def __init__(self, terms: Dict[Unknown, RatFun] | None = None, const=0):
        self.terms = {k: v for k, v in (terms or {}).items() if v}
        self.const = RatFun.coerce(const)

    @classmethod
    def symbol(cls, key: Unknown) -> "LinearForm":
        return cls({key: RatFun.coerce(1)})

    @classmethod
    def lift(cls, x) -> "LinearForm":
        if isinstance(x, LinearForm):
            return x
        return cls(None, x)

    def is_constant(self) -> bool:
        return not self.terms

    def keys(self):
        return set(self.terms)

    def __add__(self, other):
        other = LinearForm.lift(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return LinearForm(terms, self.const + other.const)

    __radd__ = __add__

    def __neg__(self):
        return LinearForm({k: -v for k, v in self.terms.items()}, -self.const)

    def __sub__(self, other):
        return self + (-LinearForm.lift(other))

    def __rsub__(self, other):
        return LinearForm.lift(other) - self

    def __mul__(self, other):
        other = LinearForm.lift(other)
        if self.terms and other.terms:
            raise NonlinearError("product of two unknowns")
        if not self.terms:
            self, other = other, self
        k = other.const
        return LinearForm({key: v * k for key, v in self.terms.items()}, self.const * k)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = LinearForm.lift(other)
        if other.terms:
            raise NonlinearError("division by an unknown")
        inv = 1 / other.const
        return LinearForm({key: v * inv for key, v in self.terms.items()}, self.const * inv)

    def __rtruediv__(self, other):
        if self.terms:
            raise NonlinearError("division by an unknown")
        return LinearForm(None, LinearForm.lift(other).const / self.const)

    def substitute(self, values: Dict[Unknown, RatFun]) -> "LinearForm":
        terms = {}
        const = self.const
        for k, v in self.terms.items():
            if k in values:
                const = const + v * values[k]
            else:
                terms[k] = v
        return LinearForm(terms, const)

    def __str__(self) -> str:
        parts = [f"({v})*{k}" for k, v in sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())]
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts)


class Family(NamedTuple):
    name: str
    fn: Callable
    params: Tuple[str, ...]  # index names; m, n, l are even, r, s, t odd

    def instance(self, *idx) -> Dict[str, object]:
        return {p: index_json(i) for p, i in zip(self.params, idx)}


class Context(NamedTuple):
    eps: RatFun
    sys: StructureSystem | None = None


def _v(r: HalfInt) -> Fraction:
    return r.value


# -- centerless families, rescaled unknowns ----------------------------------

def _closure_gh(get, ctx, m, r):
    e, rv = ctx.eps, _v(r)
    return (get(Unknown("G", m, r)) * (1 + 2 * e * rv)
            - get(Unknown("H", r, m)) * (1 + e * m)
            - (Fraction(m, 2) - rv) * (1 + 2 * e * (m + rv)))


def _closure_d(get, ctx, r, s):
    e, rv, sv = ctx.eps, _v(r), _v(s)
    return (get(Unknown("D", r, s)) * (1 + 2 * e * sv)
            + get(Unknown("D", s, r)) * (1 + 2 * e * rv)
            - 2 - 2 * e * (rv + sv))


def _lsym_llg(get, ctx, m, n, r):
    return ((m - n) * get(Unknown("G", m + n, r))
            - get(Unknown("G", n, r)) * get(Unknown("G", m, n + r))
            + get(Unknown("G", m, r)) * get(Unknown("G", n, m + r)))


def _lsym_lgl(get, ctx, m, n, r):
    return ((Fraction(m, 2) - _v(r)) * get(Unknown("H", m + r, n))
            - get(Unknown("H", r, n)) * get(Unknown("G", m, n + r))
            - n * get(Unknown("H", r, m + n)))


def _lsym_lgg(get, ctx, m, r, s):
    return ((Fraction(m, 2) - _v(r)) * get(Unknown("D", m + r, s))
            + (_v(r) + _v(s)) * get(Unknown("D", r, s))
            + get(Unknown("G", m, s)) * get(Unknown("D", r, m + s)))


def _lsym_ggl(get, ctx, m, r, s):
    return (2 * m
            + get(Unknown("H", s, m)) * get(Unknown("D", r, m + s))
            + get(Unknown("H", r, m)) * get(Unknown("D", s, m + r)))


def _lsym_ggg(get, ctx, r, s, t):
    return (2 * get(Unknown("G", r + s, t))
            - get(Unknown("D", s, t)) * get(Unknown("H", r, s + t))
            - get(Unknown("D", r, t)) * get(Unknown("H", s, r + t)))


CENTERLESS: Dict[str, Family] = {
    f.name: f
    for f in (
        Family("closure-gh", _closure_gh, ("m", "r")),
        Family("closure-d", _closure_d, ("r", "s")),
        Family("lsym-LLG", _lsym_llg, ("m", "n", "r")),
        Family("lsym-LGL", _lsym_lgl, ("m", "n", "r")),
        Family("lsym-LGG", _lsym_lgg, ("m", "r", "s")),
        Family("lsym-GGL", _lsym_ggl, ("m", "r", "s")),
        Family("lsym-GGG", _lsym_ggg, ("r", "s", "t")),
    )
}


# -- central components --------------------------------------------------------

def _closure_phi(get, ctx, m, n):
    sys = ctx.sys
    delta = Fraction(m ** 3 - m, 12) if m + n == 0 else 0
    return sys.coeff_phi(m, n) - sys.coeff_phi(n, m) - delta


def _closure_sigma(get, ctx, r, s):
    delta = (4 * _v(r) ** 2 - 1) / 12 if r.doubled + s.doubled == 0 else 0
    return get(Unknown("sigma", r, s)) + get(Unknown("sigma", s, r)) - delta


def _closure_psi_rho(get, ctx, m, r):
    return get(Unknown("psi", m, r)) - get(Unknown("rho", r, m))


def _cocycle_lll(get, ctx, m, n, l):
    sys = ctx.sys
    return ((m - n) * sys.coeff_phi(m + n, l)
            - sys.coeff_f(n, l) * sys.coeff_phi(m, n + l)
            + sys.coeff_f(m, l) * sys.coeff_phi(n, m + l))


def _cocycle_llg(get, ctx, m, n, r):
    sys = ctx.sys
    return ((m - n) * get(Unknown("psi", m + n, r))
            - sys.coeff_g(n, r) * get(Unknown("psi", m, n + r))
            + sys.coeff_g(m, r) * get(Unknown("psi", n, m + r)))


def _cocycle_lgl(get, ctx, m, n, r):
    sys = ctx.sys
    return ((Fraction(m, 2) - _v(r)) * get(Unknown("rho", m + r, n))
            - sys.coeff_h(r, n) * get(Unknown("psi", m, n + r))
            + sys.coeff_f(m, n) * get(Unknown("rho", r, m + n)))


def _cocycle_lgg(get, ctx, m, r, s):
    sys = ctx.sys
    return ((Fraction(m, 2) - _v(r)) * get(Unknown("sigma", m + r, s))
            - sys.coeff_d(r, s) * sys.coeff_phi(m, r + s)
            + sys.coeff_g(m, s) * get(Unknown("sigma", r, m + s)))


def _cocycle_ggl(get, ctx, m, r, s):
    sys = ctx.sys
    return (2 * sys.coeff_phi(r + s, m)
            - sys.coeff_h(s, m) * get(Unknown("sigma", r, m + s))
            - sys.coeff_h(r, m) * get(Unknown("sigma", s, m + r)))


def _cocycle_ggg(get, ctx, r, s, t):
    sys = ctx.sys
    return (2 * get(Unknown("psi", r + s, t))
            - sys.coeff_d(s, t) * get(Unknown("rho", r, s + t))
            - sys.coeff_d(r, t) * get(Unknown("rho", s, r + t)))


CENTRAL: Dict[str, Family] = {
    f.name: f
    for f in (
        Family("closure-phi", _closure_phi, ("m", "n")),
        Family("closure-sigma", _closure_sigma, ("r", "s")),
        Family("closure-psi-rho", _closure_psi_rho, ("m", "r")),
        Family("cocycle-LLL", _cocycle_lll, ("m", "n", "l")),
        Family("cocycle-LLG", _cocycle_llg, ("m", "n", "r")),
        Family("cocycle-LGL", _cocycle_lgl, ("m", "n", "r")),
        Family("cocycle-LGG", _cocycle_lgg, ("m", "r", "s")),
        Family("cocycle-GGL", _cocycle_ggl, ("m", "r", "s")),
        Family("cocycle-GGG", _cocycle_ggg, ("r", "s", "t")),
    )
}
