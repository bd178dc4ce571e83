"""Basis indices, elements and structure systems for the super-Virasoro products.

A :class:`StructureSystem` answers the eight coefficient families

    f(m,n), g(m,r), h(r,m), d(r,s)          (centerless products)
    phi(m,n), psi(m,r), rho(r,m), sigma(r,s)  (central c-components)

either from closed forms (at any index, symbolic or at a numeric epsilon) or
from finite tables.  Products of basis vectors are

    L_m G_r = g(m,r) G_{m+r} + psi(m,r) c      L_m L_n = f(m,n) L_{m+n} + phi(m,n) c
    G_r L_m = h(r,m) G_{m+r} + rho(r,m) c      G_r G_s = d(r,s) L_{r+s} + sigma(r,s) c

and ``c`` annihilates everything.
"""
from __future__ import annotations

import enum
import json
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Tuple

from .exactfield import GaussianRational, PoleError, RatFun

__all__ = [
    "Sector",
    "HalfInt",
    "Basis",
    "L",
    "G",
    "C",
    "Element",
    "Mode",
    "StructureSystem",
    "StructureError",
    "SectorError",
    "ModeError",
    "OutOfWindowError",
    "ParityError",
    "FAMILIES",
    "multiply",
    "super_commutator",
    "associator",
    "target_bracket",
    "bracket",
    "omega",
    "b_form",
    "big_omega",
    "parse_basis",
]


class StructureError(ValueError):
    pass


class SectorError(StructureError):
    """An odd index whose parity does not match the sector."""


class ModeError(StructureError):
    """Operation not available in this system's mode."""


class ParityError(StructureError):
    """A super-bracket argument that is not parity-homogeneous."""


class OutOfWindowError(LookupError):
    """A table-backed system was asked for an entry it does not store."""


class Sector(enum.Enum):
    """``theta = 0`` (Ramond) or ``theta = 1/2`` (Neveu-Schwarz); the value is ``2*theta``."""

    RAMOND = 0
    NEVEU_SCHWARZ = 1

    @property
    def theta(self) -> Fraction:
        return Fraction(self.value, 2)

    @classmethod
    def parse(cls, text: str) -> "Sector":
        t = str(text).strip().lower()
        if t in ("0", "r", "ramond"):
            return cls.RAMOND
        if t in ("1/2", "0.5", "ns", "neveu-schwarz", "neveuschwarz"):
            return cls.NEVEU_SCHWARZ
        raise ValueError(f"theta must be 0 or 1/2, got {text!r}")

    def __str__(self) -> str:
        return "0" if self is Sector.RAMOND else "1/2"

    def odd(self, k: int) -> "HalfInt":
        """The odd index ``k + theta``."""
        return HalfInt(2 * k + self.value)

    def check(self, r: "HalfInt") -> None:
        if r.doubled % 2 != self.value:
            raise SectorError(f"odd index {r} does not lie in Z + {self}")


class HalfInt:
    """An element of ``Z + theta`` stored as the integer ``2r``.

    Arithmetic follows the index grading: ``HalfInt + int`` is a ``HalfInt``,
    ``HalfInt + HalfInt`` is an ``int`` (an even index), ``2 * r`` is an ``int``.
    """

    __slots__ = ("doubled",)

    def __init__(self, doubled: int):
        self.doubled = int(doubled)

    @classmethod
    def of(cls, value) -> "HalfInt":
        value = Fraction(value)
        if (2 * value).denominator != 1:
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(2 * value))

    @classmethod
    def parse(cls, text: str) -> "HalfInt":
        return cls.of(Fraction(text.strip()))

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def __add__(self, other):
        if isinstance(other, HalfInt):
            total = self.doubled + other.doubled
            if total % 2:
                raise SectorError("sum of odd indices from different sectors")
            return total // 2
        if isinstance(other, int):
            return HalfInt(self.doubled + 2 * other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (HalfInt, int)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return HalfInt(2 * other - self.doubled)
        return NotImplemented

    def __neg__(self):
        return HalfInt(-self.doubled)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k % 2 == 0:
            return self.doubled * (k // 2)
        return HalfInt(self.doubled * k)

    __rmul__ = __mul__

    def __abs__(self):
        return HalfInt(abs(self.doubled))

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.doubled == other.doubled
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, HalfInt):
            return self.doubled < other.doubled
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, HalfInt):
            return self.doubled <= other.doubled
        return NotImplemented

    def __hash__(self):
        return hash(("h", self.doubled))

    def __str__(self) -> str:
        if self.doubled % 2 == 0:
            return str(self.doubled // 2)
        return f"{self.doubled}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"


def index_json(i):
    """JSON form of an index: ints stay ints, odd indices become strings."""
    return str(i) if isinstance(i, HalfInt) else i


# ---------------------------------------------------------------------------
# basis and elements
# ---------------------------------------------------------------------------

_KIND_ORDER = {"L": 0, "G": 1, "C": 2}


class Basis(NamedTuple):
    kind: str  # "L", "G" or "C"
    index: object = None  # int for L, HalfInt for G, None for C

    @property
    def parity(self) -> int:
        return 1 if self.kind == "G" else 0

    def sort_key(self):
        if self.kind == "C":
            return (2, 0)
        i = self.index.doubled if self.kind == "G" else 2 * self.index
        return (_KIND_ORDER[self.kind], i)

    def __str__(self) -> str:
        if self.kind == "C":
            return "c"
        return f"{self.kind}({self.index})"


def L(m: int) -> Basis:
    return Basis("L", int(m))


def G(r) -> Basis:
    if not isinstance(r, HalfInt):
        r = HalfInt.of(r)
    return Basis("G", r)


C = Basis("C")


def parse_basis(text: str) -> Basis:
    t = text.strip()
    if t == "c":
        return C
    if len(t) >= 4 and t[0] in "LG" and t[1] == "(" and t[-1] == ")":
        inner = t[2:-1].strip()
        try:
            if t[0] == "L":
                return L(int(inner))
            return G(HalfInt.parse(inner))
        except ValueError:
            pass
    raise ValueError(f"not a basis vector: {text!r}")


class Element:
    """A finite linear combination of basis vectors.

    Coefficients are any exact field values (:class:`RatFun`,
    :class:`GaussianRational`, ``Fraction``); zero coefficients are dropped.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Basis, object] | Iterable[Tuple[Basis, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: Dict[Basis, object] = {}
        for b, c in items:
            if b in out:
                c = out[b] + c
            out[b] = c
        self._terms = {b: c for b, c in out.items() if c}

    @classmethod
    def basis(cls, b: Basis, coeff=1) -> "Element":
        return cls({b: coeff})

    @classmethod
    def _raw(cls, terms: Dict[Basis, object]) -> "Element":
        el = cls.__new__(cls)
        el._terms = terms
        return el

    def terms(self) -> Iterator[Tuple[Basis, object]]:
        return iter(sorted(self._terms.items(), key=lambda kv: kv[0].sort_key()))

    def coefficient(self, b: Basis):
        return self._terms.get(b, 0)

    def support(self):
        return sorted(self._terms, key=Basis.sort_key)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def parity(self) -> Optional[int]:
        """0 or 1 for a homogeneous nonzero element, None for zero or mixed."""
        ps = {b.parity for b in self._terms}
        return ps.pop() if len(ps) == 1 else None

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for b, c in other._terms.items():
            if b in out:
                s = out[b] + c
                if s:
                    out[b] = s
                else:
                    del out[b]
            else:
                out[b] = c
        return Element._raw(out)

    def __neg__(self) -> "Element":
        return Element._raw({b: -c for b, c in self._terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def scale(self, k) -> "Element":
        if not k:
            return Element._raw({})
        out = {}
        for b, c in self._terms.items():
            v = c * k
            if v:
                out[b] = v
        return Element._raw(out)

    def __rmul__(self, k) -> "Element":
        if isinstance(k, Element):
            return NotImplemented
        return self.scale(k)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, Element):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset((b, c) for b, c in self._terms.items()))

    def map_coefficients(self, fn: Callable) -> "Element":
        return Element((b, fn(c)) for b, c in self._terms.items())

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for b, c in self.terms():
            s = str(c)
            if s == "1":
                parts.append(str(b))
            elif _is_plain_int(s) or _is_wrapped(s):
                parts.append(f"{s}*{b}")
            else:
                parts.append(f"({s})*{b}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Element({str(self)!r})"

    def to_json(self):
        return [{"basis": str(b), "coeff": str(c)} for b, c in self.terms()]


def _is_plain_int(s: str) -> bool:
    return s.lstrip("-").isdigit()


def _is_wrapped(s: str) -> bool:
    if not (s.startswith("(") and s.endswith(")")):
        return False
    depth = 0
    for i, ch in enumerate(s):
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0 and i < len(s) - 1:
            return False
    return True


# ---------------------------------------------------------------------------
# structure systems
# ---------------------------------------------------------------------------

class Mode(enum.Enum):
    CENTERLESS = "centerless"
    CENTRAL = "central"
    TABLE = "table"


FAMILIES = ("f", "g", "h", "d", "phi", "psi", "rho", "sigma")
CENTRAL_FAMILIES = ("phi", "psi", "rho", "sigma")


def _f(eps, m, n):
    return -n * (1 + eps * n) / (1 + eps * (m + n))


def _g(eps, m, r):
    r = r.value
    return -(Fraction(m, 2) + r) * (1 + 2 * eps * r) / (1 + 2 * eps * (m + r))


def _h(eps, r, m):
    r = r.value
    return -m * (1 + eps * m) / (1 + 2 * eps * (m + r))


def _d(eps, r, s):
    r, s = r.value, s.value
    return (1 + 2 * eps * s) / (1 + eps * (r + s))


def _phi(eps, m, n):
    if m + n != 0:
        return 0
    return (m ** 3 - m + (eps - 1 / eps) * m ** 2) / 24


def _sigma(eps, r, s):
    if r.doubled + s.doubled != 0:
        return 0
    r = r.value
    return (4 * r * r - 1 + 2 * (eps - 1 / eps) * r) / 24


_CLOSED_FORMS = {"f": _f, "g": _g, "h": _h, "d": _d, "phi": _phi, "sigma": _sigma}


class StructureSystem:
    """A candidate product on the (super-)Virasoro basis.

    ``mode`` is one of :class:`Mode`.  Closed-form systems answer every index;
    table-backed systems raise :class:`OutOfWindowError` for entries they do not
    hold.  ``epsilon`` is None for symbolic coefficients in Q(e) or a
    :class:`GaussianRational` for a numeric specialization.  ``even_only``
    restricts the algebra to the Virasoro part (no odd basis vectors).
    """

    def __init__(
        self,
        sector: Sector = Sector.NEVEU_SCHWARZ,
        mode: Mode = Mode.CENTRAL,
        epsilon: GaussianRational | None = None,
        *,
        tables: Mapping[str, Mapping[tuple, object]] | None = None,
        c_products: Mapping[Tuple[Basis, Basis], Element] | None = None,
        central: bool | None = None,
        overrides: Mapping[str, Mapping[tuple, object]] | None = None,
        even_only: bool = False,
    ):
        self.sector = sector
        self.mode = mode
        self.epsilon = None if epsilon is None else GaussianRational.coerce(epsilon)
        self.even_only = even_only
        if mode is Mode.TABLE:
            if tables is None:
                raise ModeError("table-backed system needs tables")
            self.tables = {fam: dict(tables.get(fam, {})) for fam in FAMILIES}
            self.central = bool(central) if central is not None else any(
                self.tables[f] for f in CENTRAL_FAMILIES
            )
            self.c_products = dict(c_products or {})
        else:
            if tables is not None:
                raise ModeError("closed-form systems do not take tables")
            self.tables = None
            self.central = mode is Mode.CENTRAL
            self.c_products = None
        self.overrides = {fam: dict(v) for fam, v in (overrides or {}).items()}
        unknown = set(self.overrides) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown coefficient families {sorted(unknown)}")
        self._eps = RatFun.eps() if self.epsilon is None else self.epsilon
        self._cache: Dict[tuple, object] = {}
        self._products: Dict[Tuple[Basis, Basis], Element] = {}

    # -- construction helpers ------------------------------------------------
    @classmethod
    def centerless(cls, sector=Sector.NEVEU_SCHWARZ, epsilon=None, **kw) -> "StructureSystem":
        return cls(sector, Mode.CENTERLESS, epsilon, **kw)

    @classmethod
    def central_extension(cls, sector=Sector.NEVEU_SCHWARZ, epsilon=None, **kw) -> "StructureSystem":
        return cls(sector, Mode.CENTRAL, epsilon, **kw)

    @classmethod
    def virasoro(cls, epsilon=None, central: bool = True) -> "StructureSystem":
        """The even-sector left-symmetric product on the Virasoro algebra alone."""
        mode = Mode.CENTRAL if central else Mode.CENTERLESS
        return cls(Sector.RAMOND, mode, epsilon, even_only=True)

    def with_override(self, family: str, key: tuple, value) -> "StructureSystem":
        """Copy of this system with one coefficient replaced."""
        overrides = {fam: dict(v) for fam, v in self.overrides.items()}
        overrides.setdefault(family, {})[_norm_key(family, key)] = value
        return self._copy(overrides=overrides)

    def specialize(self, epsilon) -> "StructureSystem":
        """The same closed-form system at a numeric epsilon."""
        if self.mode is Mode.TABLE:
            raise ModeError("only closed-form systems can be specialized")
        return self._copy(epsilon=GaussianRational.coerce(epsilon))

    def _copy(self, **changes) -> "StructureSystem":
        kw = dict(
            sector=self.sector,
            mode=self.mode,
            epsilon=self.epsilon,
            tables=self.tables,
            c_products=self.c_products,
            central=self.central if self.mode is Mode.TABLE else None,
            overrides=self.overrides,
            even_only=self.even_only,
        )
        kw.update(changes)
        sector, mode, epsilon = kw.pop("sector"), kw.pop("mode"), kw.pop("epsilon")
        return type(self)(sector, mode, epsilon, **kw)

    @property
    def symbolic(self) -> bool:
        return self.epsilon is None

    def zero(self):
        return RatFun() if self.epsilon is None else GaussianRational(0)

    def lift(self, value):
        """Coerce an exact scalar into this system's coefficient field."""
        if self.epsilon is None:
            return RatFun.coerce(value)
        return GaussianRational.coerce(value)

    def describe(self) -> str:
        eps = "symbolic" if self.epsilon is None else str(self.epsilon)
        kind = "virasoro" if self.even_only else self.mode.value
        return f"{kind} system, theta={self.sector}, epsilon={eps}"

    # -- coefficients --------------------------------------------------------
    def coeff(self, family: str, *key):
        key = _norm_key(family, key)
        cache_key = (family,) + key
        try:
            return self._cache[cache_key]
        except KeyError:
            pass
        value = self._lookup(family, key)
        self._cache[cache_key] = value
        return value

    def _lookup(self, family, key):
        for idx in key:
            if isinstance(idx, HalfInt):
                if self.even_only:
                    raise ModeError("even-only system has no odd indices")
                self.sector.check(idx)
        if family in CENTRAL_FAMILIES and not self.central:
            raise ModeError(f"{family} is not defined on a centerless system")
        ov = self.overrides.get(family)
        if ov is not None and key in ov:
            return self.lift(ov[key])
        if self.mode is Mode.TABLE:
            try:
                return self.lift(self.tables[family][key])
            except KeyError:
                raise OutOfWindowError(f"{family}{_fmt_key(key)} is outside the stored table") from None
        if family in ("psi", "rho"):
            return self.zero()
        try:
            return self.lift(_CLOSED_FORMS[family](self._eps, *key))
        except ZeroDivisionError as exc:
            raise PoleError(f"{family}{_fmt_key(key)} has a pole at epsilon = {self.epsilon}") from exc

    def coeff_f(self, m: int, n: int):
        return self.coeff("f", m, n)

    def coeff_g(self, m: int, r: HalfInt):
        return self.coeff("g", m, r)

    def coeff_h(self, r: HalfInt, m: int):
        return self.coeff("h", r, m)

    def coeff_d(self, r: HalfInt, s: HalfInt):
        return self.coeff("d", r, s)

    def coeff_phi(self, m: int, n: int):
        return self.coeff("phi", m, n)

    def coeff_psi(self, m: int, r: HalfInt):
        return self.coeff("psi", m, r)

    def coeff_rho(self, r: HalfInt, m: int):
        return self.coeff("rho", r, m)

    def coeff_sigma(self, r: HalfInt, s: HalfInt):
        return self.coeff("sigma", r, s)

    # -- products --------------------------------------------------------------
    def basis_product(self, x: Basis, y: Basis) -> Element:
        key = (x, y)
        prod = self._products.get(key)
        if prod is None:
            prod = self._basis_product(x, y)
            self._products[key] = prod
        return prod

    def _basis_product(self, x: Basis, y: Basis) -> Element:
        if x.kind == "C" or y.kind == "C":
            if not self.central:
                raise ModeError("centerless system has no central basis vector")
            if self.mode is Mode.TABLE:
                try:
                    return self.c_products[(x, y)]
                except KeyError:
                    raise OutOfWindowError(f"product {x}*{y} is outside the stored table") from None
            return Element()
        kinds = x.kind + y.kind
        if kinds == "LL":
            m, n = x.index, y.index
            main, fam_c = (self.coeff("f", m, n), L(m + n)), "phi"
            ckey = (m, n)
        elif kinds == "LG":
            m, r = x.index, y.index
            main, fam_c = (self.coeff("g", m, r), G(m + r)), "psi"
            ckey = (m, r)
        elif kinds == "GL":
            r, m = x.index, y.index
            main, fam_c = (self.coeff("h", r, m), G(r + m)), "rho"
            ckey = (r, m)
        else:
            r, s = x.index, y.index
            main, fam_c = (self.coeff("d", r, s), L(r + s)), "sigma"
            ckey = (r, s)
        terms = {}
        if main[0]:
            terms[main[1]] = main[0]
        if self.central:
            cc = self.coeff(fam_c, *ckey)
            if cc:
                terms[C] = cc
        return Element._raw(terms)


def _norm_key(family: str, key) -> tuple:
    """Coerce a key to (int|HalfInt, ...) following the family's index types."""
    kinds = {
        "f": "LL", "phi": "LL",
        "g": "LG", "psi": "LG",
        "h": "GL", "rho": "GL",
        "d": "GG", "sigma": "GG",
    }[family]
    if len(key) != 2:
        raise ValueError(f"{family} takes two indices")
    out = []
    for k, i in zip(kinds, key):
        if k == "L":
            if isinstance(i, HalfInt):
                raise SectorError(f"{family} expects an integer index, got {i}")
            if isinstance(i, Fraction):
                if i.denominator != 1:
                    raise SectorError(f"{family} expects an integer index, got {i}")
                i = int(i)
            out.append(int(i))
        else:
            out.append(i if isinstance(i, HalfInt) else HalfInt.of(i))
    return tuple(out)


def _fmt_key(key) -> str:
    return "(" + ",".join(str(i) for i in key) + ")"


# ---------------------------------------------------------------------------
# bilinear operations
# ---------------------------------------------------------------------------

def _as_element(x) -> Element:
    if isinstance(x, Basis):
        return Element._raw({x: 1})
    return x


def multiply(sys: StructureSystem, x, y) -> Element:
    """Bilinear product of two elements (or basis vectors)."""
    if isinstance(x, Basis) and isinstance(y, Basis):
        return sys.basis_product(x, y)
    x, y = _as_element(x), _as_element(y)
    acc = Element()
    for bx, cx in x._terms.items():
        for by, cy in y._terms.items():
            p = sys.basis_product(bx, by)
            if p:
                acc = acc + p.scale(cx * cy)
    return acc


def _sign(x, y) -> int:
    px, py = _parity(x), _parity(y)
    return -1 if (px and py) else 1


def _parity(x) -> int:
    if isinstance(x, Basis):
        return x.parity
    if not x:
        return 0
    p = x.parity
    if p is None:
        raise ParityError(f"{x} is not parity-homogeneous")
    return p


def super_commutator(sys: StructureSystem, x, y) -> Element:
    """``x*y - (-1)^(|x||y|) y*x``."""
    s = _sign(x, y)
    xy, yx = multiply(sys, x, y), multiply(sys, y, x)
    return xy - yx if s == 1 else xy + yx


def associator(sys: StructureSystem, x, y, z) -> Element:
    """``(x*y)*z - x*(y*z)``."""
    return multiply(sys, multiply(sys, x, y), z) - multiply(sys, x, multiply(sys, y, z))


def target_bracket(sector: Sector, b1: Basis, b2: Basis, central: bool = True) -> Element:
    """The reference super-Virasoro bracket on basis vectors.

    With ``central=False`` the c-components are dropped (centerless algebra).
    """
    if b1.kind == "C" or b2.kind == "C":
        return Element()
    kinds = b1.kind + b2.kind
    terms = {}
    if kinds == "LL":
        m, n = b1.index, b2.index
        if m != n:
            terms[L(m + n)] = Fraction(m - n)
        if central and m + n == 0:
            cc = Fraction(m ** 3 - m, 12)
            if cc:
                terms[C] = cc
    elif kinds in ("LG", "GL"):
        if kinds == "LG":
            m, r = b1.index, b2.index
            sign = 1
        else:
            r, m = b1.index, b2.index
            sign = -1
        sector.check(r)
        k = Fraction(m, 2) - r.value
        if k:
            terms[G(m + r)] = sign * k
    else:
        r, s = b1.index, b2.index
        sector.check(r)
        sector.check(s)
        terms[L(r + s)] = Fraction(2)
        if central and r.doubled + s.doubled == 0:
            cc = Fraction(4 * r.value * r.value - 1, 12)
            if cc:
                terms[C] = cc
    return Element._raw(terms)


def bracket(bracket_fn: Callable[[Basis, Basis], Element], x, y) -> Element:
    """Bilinear extension of a bracket given on basis vectors."""
    x, y = _as_element(x), _as_element(y)
    acc = Element()
    for bx, cx in x._terms.items():
        for by, cy in y._terms.items():
            p = bracket_fn(bx, by)
            if p:
                acc = acc + p.scale(cx * cy)
    return acc


# ---------------------------------------------------------------------------
# central extension forms
# ---------------------------------------------------------------------------

def _centerless_part(x: Element) -> Element:
    return Element._raw({b: c for b, c in x._terms.items() if b.kind != "C"})


def omega(sys: StructureSystem, x, y):
    """The bilinear form defining the extension: the c-component of ``x*y``."""
    if not sys.central:
        raise ModeError("omega needs a central system")
    return multiply(sys, x, y).coefficient(C)


def b_form(sys: StructureSystem, x, y, z):
    """``omega(x.y, z) - omega(x, y.z)`` with the products taken in the centerless quotient.

    The extension is left-symmetric exactly when
    ``b_form(x, y, z) == (-1)^(|x||y|) b_form(y, x, z)`` for all basis triples.
    """
    xy = _centerless_part(multiply(sys, x, y))
    yz = _centerless_part(multiply(sys, y, z))
    return omega(sys, xy, z) - omega(sys, x, yz)


def big_omega(sys: StructureSystem, x, y):
    """``omega(x,y) - (-1)^(|x||y|) omega(y,x)``: the induced Lie superalgebra cocycle."""
    s = _sign(x, y)
    a, b = omega(sys, x, y), omega(sys, y, x)
    return a - b if s == 1 else a + b
