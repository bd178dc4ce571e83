"""Exhaustive verification of the defining identities over a finite index window.

Every check returns a :class:`ViolationReport`; nothing is ever compared with a
tolerance.  Closed-form systems evaluate intermediate indices (``m+n``,
``m+r``, ``r+s``) directly even when they leave the window, so the
left-symmetry check at window ``N`` covers every triple in the box.
Table-backed systems cannot do that; their instances that need an entry
outside the table are listed as unchecked.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .structures import (
    Basis,
    C,
    Element,
    G,
    HalfInt,
    L,
    ModeError,
    OutOfWindowError,
    Sector,
    StructureSystem,
    associator,
    bracket,
    index_json,
    multiply,
    super_commutator,
    target_bracket,
)

__all__ = [
    "Window",
    "Violation",
    "ViolationReport",
    "check_closure",
    "check_left_symmetry",
    "check_bracket_compatibility",
    "check_super_jacobi",
    "check_annihilator",
    "verify_all",
    "CHECKS",
]


@dataclass(frozen=True)
class Window:
    """Index box: ``m`` in ``[-N, N]`` and odd indices ``k + theta`` for ``k`` in ``[-N, N]``."""

    N: int
    sector: Sector = Sector.NEVEU_SCHWARZ

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("window bound must be non-negative")

    def evens(self) -> List[int]:
        return list(range(-self.N, self.N + 1))

    def odds(self) -> List[HalfInt]:
        return [self.sector.odd(k) for k in range(-self.N, self.N + 1)]

    def basis(self, *, odd: bool = True, central: bool = True) -> List[Basis]:
        out = [L(m) for m in self.evens()]
        if odd:
            out += [G(r) for r in self.odds()]
        if central:
            out.append(C)
        return out

    def basis_for(self, sys: StructureSystem, with_c: Optional[bool] = None) -> List[Basis]:
        return self.basis(odd=not sys.even_only, central=sys.central if with_c is None else with_c)

    def contains(self, b: Basis) -> bool:
        if b.kind == "C":
            return True
        if b.kind == "L":
            return -self.N <= b.index <= self.N
        k = (b.index.doubled - self.sector.value) // 2
        return b.index.doubled % 2 == self.sector.value and -self.N <= k <= self.N


@dataclass(frozen=True)
class Violation:
    identity: str
    indices: Tuple[Tuple[str, object], ...]
    residual: object

    def sort_key(self):
        return (self.identity, tuple(_sortable(v) for _, v in self.indices))

    def to_json(self):
        return {
            "identity": self.identity,
            "indices": {k: index_json(v) for k, v in self.indices},
            "residual": str(self.residual),
        }


def _sortable(v):
    if isinstance(v, HalfInt):
        return v.value
    if v is None:
        return Fraction(0)
    return Fraction(v)


@dataclass
class ViolationReport:
    """Violations found, instances that could not be evaluated, and the number checked."""

    entries: List[Violation] = field(default_factory=list)
    unchecked: List[Tuple[str, Tuple[Tuple[str, object], ...]]] = field(default_factory=list)
    checked: int = 0

    def __bool__(self):
        # truthy when something is wrong
        return bool(self.entries)

    @property
    def ok(self) -> bool:
        return not self.entries

    def add(self, identity: str, indices, residual) -> None:
        self.entries.append(Violation(identity, tuple(indices), residual))

    def skip(self, identity: str, indices) -> None:
        self.unchecked.append((identity, tuple(indices)))

    def finish(self) -> "ViolationReport":
        self.entries.sort(key=Violation.sort_key)
        self.unchecked.sort(key=lambda u: (u[0], tuple(_sortable(v) for _, v in u[1])))
        return self

    def merge(self, other: "ViolationReport") -> "ViolationReport":
        out = ViolationReport(self.entries + other.entries, self.unchecked + other.unchecked,
                              self.checked + other.checked)
        return out.finish()

    def identities(self) -> set:
        return {v.identity for v in self.entries}

    def to_json(self) -> list:
        return [v.to_json() for v in self.entries]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


_NAMES = {"L": ("m", "n", "l"), "G": ("r", "s", "t")}


def _label(bases: Sequence[Basis]) -> Tuple[str, Tuple[Tuple[str, object], ...]]:
    """Identity suffix such as ``LGG`` and named indices ``m, r, s``."""
    used = {"L": 0, "G": 0}
    idx = []
    for b in bases:
        if b.kind == "C":
            continue
        name = _NAMES[b.kind][used[b.kind]]
        used[b.kind] += 1
        idx.append((name, b.index))
    return "".join(b.kind for b in bases), tuple(idx)


# ---------------------------------------------------------------------------
# closure of the super-commutator on coefficient level
# ---------------------------------------------------------------------------

def _closure_families(sys: StructureSystem, window: Window):
    ev, od = window.evens(), window.odds()
    fams = []
    fams.append((
        "closure-f", [(("m", m), ("n", n)) for m in ev for n in ev],
        lambda m, n: sys.coeff_f(m, n) - sys.coeff_f(n, m) - (m - n),
    ))
    if not sys.even_only:
        fams.append((
            "closure-gh", [(("m", m), ("r", r)) for m in ev for r in od],
            lambda m, r: sys.coeff_g(m, r) - sys.coeff_h(r, m) - (Fraction(m, 2) - r.value),
        ))
        fams.append((
            "closure-d", [(("r", r), ("s", s)) for r in od for s in od],
            lambda r, s: sys.coeff_d(r, s) + sys.coeff_d(s, r) - 2,
        ))
    if sys.central:
        fams.append((
            "closure-phi", [(("m", m), ("n", n)) for m in ev for n in ev],
            lambda m, n: sys.coeff_phi(m, n) - sys.coeff_phi(n, m)
            - (Fraction(m ** 3 - m, 12) if m + n == 0 else 0),
        ))
        if not sys.even_only:
            fams.append((
                "closure-sigma", [(("r", r), ("s", s)) for r in od for s in od],
                lambda r, s: sys.coeff_sigma(r, s) + sys.coeff_sigma(s, r)
                - (Fraction(4 * r.doubled ** 2 - 4, 48) if r.doubled + s.doubled == 0 else 0),
            ))
            fams.append((
                "closure-psi-rho", [(("m", m), ("r", r)) for m in ev for r in od],
                lambda m, r: sys.coeff_psi(m, r) - sys.coeff_rho(r, m),
            ))
    return fams


def check_closure(sys: StructureSystem, window: Window) -> ViolationReport:
    """Scalar conditions under which the super-commutator reproduces the target brackets:

    ``f(m,n)-f(n,m) = m-n``, ``g(m,r)-h(r,m) = m/2-r``, ``d(r,s)+d(s,r) = 2`` and, with
    a center, ``phi(m,n)-phi(n,m) = (m^3-m)/12 [m+n=0]``,
    ``sigma(r,s)+sigma(s,r) = (4r^2-1)/12 [r+s=0]``, ``psi(m,r) = rho(r,m)``.
    """
    report = ViolationReport()
    for ident, instances, residual in _closure_families(sys, window):
        for idx in instances:
            try:
                res = residual(*(v for _, v in idx))
            except OutOfWindowError:
                report.skip(ident, idx)
                continue
            report.checked += 1
            if res:
                report.add(ident, idx, res)
    return report.finish()


# ---------------------------------------------------------------------------
# left-symmetry
# ---------------------------------------------------------------------------

def check_left_symmetry(sys: StructureSystem, window: Window) -> ViolationReport:
    """``(x,y,z) = (-1)^(|x||y|) (y,x,z)`` for every basis triple in the window.

    With a center this includes the compatibility of the central components,
    since the c-part of the associator identity is exactly the B-form symmetry.
    """
    basis = window.basis_for(sys)
    report = ViolationReport()
    for z in basis:
        assoc: Dict[Tuple[Basis, Basis], Optional[Element]] = {}
        for x in basis:
            for y in basis:
                try:
                    assoc[x, y] = associator(sys, x, y, z)
                except OutOfWindowError:
                    assoc[x, y] = None
        for x in basis:
            for y in basis:
                kinds, idx = _label((x, y, z))
                ident = "lsym-" + kinds
                a, b = assoc[x, y], assoc[y, x]
                if a is None or b is None:
                    report.skip(ident, idx)
                    continue
                report.checked += 1
                res = a + b if (x.parity and y.parity) else a - b
                if res:
                    report.add(ident, idx, res)
    return report.finish()


# ---------------------------------------------------------------------------
# compatibility with the target brackets
# ---------------------------------------------------------------------------

def check_bracket_compatibility(sys: StructureSystem, window: Window) -> ViolationReport:
    """Super-commutator of the product equals the reference bracket on every basis pair."""
    basis = window.basis_for(sys)
    report = ViolationReport()
    for x in basis:
        for y in basis:
            kinds, idx = _label((x, y))
            ident = "bracket-" + kinds
            try:
                lhs = super_commutator(sys, x, y)
            except OutOfWindowError:
                report.skip(ident, idx)
                continue
            report.checked += 1
            res = lhs - target_bracket(sys.sector, x, y, central=sys.central)
            if res:
                report.add(ident, idx, res)
    return report.finish()


def check_super_jacobi(
    sector: Sector,
    window: Window,
    bracket_fn: Callable[[Basis, Basis], Element] | None = None,
    *,
    central: bool = True,
    even_only: bool = False,
) -> ViolationReport:
    """``[a,[b,c]] = [[a,b],c] + (-1)^(|a||b|) [b,[a,c]]`` on all basis triples.

    ``bracket_fn`` defaults to the reference super-Virasoro bracket; pass another
    basis-level bracket to test it instead.
    """
    if bracket_fn is None:
        def bracket_fn(x, y, _s=sector, _c=central):
            return target_bracket(_s, x, y, central=_c)
    cache: Dict[Tuple[Basis, Basis], Element] = {}

    def br(x: Basis, y: Basis) -> Element:
        v = cache.get((x, y))
        if v is None:
            v = bracket_fn(x, y)
            cache[x, y] = v
        return v

    basis = window.basis(odd=not even_only, central=central)
    report = ViolationReport()
    for a in basis:
        for b in basis:
            ab = br(a, b)
            sign = -1 if (a.parity and b.parity) else 1
            for c in basis:
                lhs = bracket(br, a, br(b, c))
                rhs = bracket(br, ab, c) + bracket(br, b, br(a, c)).scale(sign)
                report.checked += 1
                res = lhs - rhs
                if res:
                    kinds, idx = _label((a, b, c))
                    report.add("jacobi-" + kinds, idx, res)
    return report.finish()


def check_annihilator(sys: StructureSystem, window: Window) -> ViolationReport:
    """``c`` annihilates the algebra from both sides.

    Products a table does not list are reported as violations, not skipped.
    """
    if not sys.central:
        raise ModeError("annihilator check needs a central system")
    report = ViolationReport()
    for x in window.basis_for(sys):
        for left, right in ((C, x), (x, C)) if x != C else ((C, C),):
            kinds, idx = _label((left, right))
            ident = "annihilator-" + kinds
            report.checked += 1
            try:
                p = multiply(sys, left, right)
            except OutOfWindowError:
                # a table that does not state the product cannot certify it vanishes
                report.add(ident, idx, "missing product")
                continue
            if p:
                report.add(ident, idx, p)
    return report.finish()


CHECKS = ("closure", "left_symmetry", "bracket_compatibility", "super_jacobi", "annihilator")


def verify_all(sys: StructureSystem, window: Window) -> Dict[str, ViolationReport]:
    """Run every check that applies to ``sys``; keys follow :data:`CHECKS`."""
    out = {
        "closure": check_closure(sys, window),
        "left_symmetry": check_left_symmetry(sys, window),
        "bracket_compatibility": check_bracket_compatibility(sys, window),
        "super_jacobi": check_super_jacobi(
            sys.sector, window, central=sys.central, even_only=sys.even_only
        ),
    }
    if sys.central:
        out["annihilator"] = check_annihilator(sys, window)
    return out
