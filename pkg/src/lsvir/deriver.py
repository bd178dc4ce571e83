"""Replays the uniqueness arguments for the compatible structures as explicit propagation.

The centerless chain works on the rescaled unknowns ``G, H, D`` (see
:mod:`lsvir.equations`).  Every value that enters a table is justified by one or
more instantiated constraints whose other participants were already known, and
that justification is appended to a :class:`DerivationTrace`.  Values are exact
rational functions of a symbolic ``e``; nothing is guessed.

Two recurrences are linear only in the reciprocals ``E = 1/D``; those are kept
in a small exact linear store, and ``D`` is read off once ``E`` is pinned.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar, Dict, Iterable, List, Optional, Sequence, Tuple

from .checker import ViolationReport
from .equations import CENTERLESS, CENTRAL, Context, Family, LinearForm, NonlinearError, Unknown
from .exactfield import PoleError, RatFun, rf_eval, rf_sqrt
from .structures import HalfInt, OutOfWindowError, Sector, StructureSystem, index_json

__all__ = [
    "DerivationError",
    "InconsistencyError",
    "ReplayError",
    "TraceEntry",
    "DerivationTrace",
    "NormalizedUnknowns",
    "CocycleUnknowns",
    "derive_centerless",
    "derive_central",
    "cross_check",
    "MIN_WINDOW",
]

# smallest window for which both chains complete in both sectors (see tests)
MIN_WINDOW = 4

_KINDS = {
    "G": ("e", "o"), "H": ("o", "e"), "D": ("o", "o"),
    "sigma": ("o", "o"), "psi": ("e", "o"), "rho": ("o", "e"),
}
_EVEN_NAMES = ("m", "n", "l")


class DerivationError(ArithmeticError):
    pass


class InconsistencyError(DerivationError):
    """Two steps force different values on the same unknown (or an identity fails)."""

    def __init__(self, key, first: Optional["TraceEntry"], second: Optional["TraceEntry"], message: str = ""):
        self.key = key
        self.first = first
        self.second = second
        text = message or f"conflicting values for {key}"
        if first is not None:
            text += f"; first: {first.step} {first.equation} {first.instance}"
        if second is not None:
            text += f"; second: {second.step} {second.equation} {second.instance}"
        super().__init__(text)


class ReplayError(DerivationError):
    pass


class _Unavailable(Exception):
    def __init__(self, key):
        self.key = key


class _Underdetermined(Exception):
    pass


class _Contradiction(Exception):
    def __init__(self, residual):
        self.residual = residual


# ---------------------------------------------------------------------------
# trace
# ---------------------------------------------------------------------------

@dataclass
class TraceEntry:
    step: str
    kind: str  # assign | relation | branch | unavailable | undetermined
    equation: Optional[str] = None
    instance: Dict[str, object] = field(default_factory=dict)
    assigned: Dict[Unknown, RatFun] = field(default_factory=dict)
    depends: Tuple[Unknown, ...] = ()
    support: Tuple[Tuple[str, Dict[str, object]], ...] = ()
    relations: Tuple[int, ...] = ()
    relation: Optional[str] = None
    note: str = ""
    # raw indices for replay; not serialized
    raw: Tuple[Tuple[str, tuple], ...] = ()

    def to_json(self) -> dict:
        out = {
            "step": self.step,
            "kind": self.kind,
            "equation": self.equation,
            "instance": self.instance,
            "assigned": {str(k): str(v) for k, v in sorted(self.assigned.items(), key=lambda kv: kv[0].sort_key())},
        }
        if self.depends:
            out["depends"] = [str(k) for k in self.depends]
        if self.support:
            out["support"] = [{"equation": e, "instance": i} for e, i in self.support]
        if self.relations:
            out["relations"] = list(self.relations)
        if self.relation:
            out["relation"] = self.relation
        if self.note:
            out["note"] = self.note
        return out


class DerivationTrace:
    """Ordered justification log; :meth:`replay` rebuilds the tables from it."""

    def __init__(self, families: Dict[str, Family], ctx: Context):
        self.entries: List[TraceEntry] = []
        self.families = families
        self.ctx = ctx

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def append(self, entry: TraceEntry) -> int:
        self.entries.append(entry)
        return len(self.entries) - 1

    def steps(self) -> List[str]:
        return [e.step for e in self.entries]

    def by_step(self, step: str) -> List[TraceEntry]:
        return [e for e in self.entries if e.step == step]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_json()) + "\n" for e in self.entries)

    def replay(self) -> Dict[Unknown, RatFun]:
        """Re-apply every assignment in order, checking that each one only uses earlier
        values and that the cited instances hold once it is made."""
        values: Dict[Unknown, RatFun] = {}
        for pos, entry in enumerate(self.entries):
            for dep in entry.depends:
                if dep not in values:
                    raise ReplayError(f"entry {pos} ({entry.step}) uses {dep} before it is assigned")
            for rel in entry.relations:
                if rel >= pos or self.entries[rel].kind != "relation":
                    raise ReplayError(f"entry {pos} ({entry.step}) cites relation {rel} out of order")
            if entry.kind not in ("assign", "branch"):
                continue
            for k, v in entry.assigned.items():
                if k in values and values[k] != v:
                    raise ReplayError(f"entry {pos} reassigns {k}")
                values[k] = v
            if entry.relations:
                # justified through the reciprocal store; the final sweep covers it
                continue
            for name, idx in entry.raw:
                res = self._residual(name, idx, values)
                if res is None or not res.is_constant() or res.const:
                    raise ReplayError(f"entry {pos} ({entry.step}): {name}{idx} does not hold after replay")
        return values

    def _residual(self, name, idx, values) -> Optional[LinearForm]:
        def get(key):
            v = values.get(key)
            return LinearForm.symbol(key) if v is None else v
        try:
            return LinearForm.lift(self.families[name].fn(get, self.ctx, *idx))
        except NonlinearError:
            return None


# ---------------------------------------------------------------------------
# derived tables
# ---------------------------------------------------------------------------

@dataclass
class _Tables:
    sector: Sector
    N: int
    values: Dict[Unknown, RatFun]
    provenance: Dict[Unknown, str]
    radius: Fraction = Fraction(-1)
    undetermined: List[str] = field(default_factory=list)
    sweep_checked: int = 0

    FAMILIES: ClassVar[Tuple[str, ...]] = ()

    def table(self, family: str) -> Dict[tuple, RatFun]:
        return {(k.a, k.b): v for k, v in self.values.items() if k.family == family}

    def get(self, family: str, a, b):
        return self.values.get(Unknown(family, a, b))

    def keys_in_box(self, radius) -> Iterable[Unknown]:
        radius = Fraction(radius)
        evens = [m for m in range(-self.N, self.N + 1) if abs(m) <= radius]
        odds = [HalfInt(d) for d in range(-2 * self.N, 2 * self.N + 1)
                if d % 2 == self.sector.value and abs(Fraction(d, 2)) <= radius]
        for fam in self.FAMILIES:
            ka, kb = _KINDS[fam]
            for a in (evens if ka == "e" else odds):
                for b in (evens if kb == "e" else odds):
                    yield Unknown(fam, a, b)

    @property
    def complete(self) -> bool:
        return not self.undetermined


@dataclass
class NormalizedUnknowns(_Tables):
    """Rescaled centerless unknowns ``G(m,r)``, ``H(r,m)``, ``D(r,s)``."""

    FAMILIES: ClassVar[Tuple[str, ...]] = ("G", "H", "D")

    @property
    def G(self):
        return self.table("G")

    @property
    def H(self):
        return self.table("H")

    @property
    def D(self):
        return self.table("D")


@dataclass
class CocycleUnknowns(_Tables):
    """Central components ``sigma(r,s)``, ``psi(m,r)``, ``rho(r,m)``."""

    FAMILIES: ClassVar[Tuple[str, ...]] = ("sigma", "psi", "rho")

    @property
    def sigma(self):
        return self.table("sigma")

    @property
    def psi(self):
        return self.table("psi")

    @property
    def rho(self):
        return self.table("rho")


# ---------------------------------------------------------------------------
# linear algebra helpers
# ---------------------------------------------------------------------------

def _gauss(rows: Sequence[LinearForm], unknowns: Sequence[Unknown]) -> Dict[Unknown, RatFun]:
    """Unique solution of ``rows == 0``; raises on contradiction or missing pivots."""
    work = [(dict(r.terms), r.const) for r in rows]
    pivots: Dict[Unknown, Tuple[dict, RatFun]] = {}
    for u in unknowns:
        hit = next((i for i, (t, _) in enumerate(work) if u in t), None)
        if hit is None:
            raise _Underdetermined(u)
        t, c = work.pop(hit)
        a = t.pop(u)
        t = {k: v / a for k, v in t.items()}
        c = c / a
        new = []
        for t2, c2 in work:
            w = t2.pop(u, None)
            if w is not None:
                for k, v in t.items():
                    t2[k] = t2.get(k, 0) + (-w) * v
                    if not t2[k]:
                        del t2[k]
                c2 = c2 - w * c
            new.append((t2, c2))
        work = new
        for p, (pt, pc) in list(pivots.items()):
            w = pt.pop(u, None)
            if w is not None:
                for k, v in t.items():
                    pt[k] = pt.get(k, 0) + (-w) * v
                    if not pt[k]:
                        del pt[k]
                pivots[p] = (pt, pc - w * c)
        pivots[u] = (t, c)
    for t, c in work:
        if t:
            raise _Underdetermined(next(iter(t)))
        if c:
            raise _Contradiction(c)
    return {u: -c for u, (t, c) in pivots.items()}


class _StoreConflict(Exception):
    def __init__(self, residual, sources):
        self.residual = residual
        self.sources = sources


class _ReciprocalStore:
    """Fully reduced linear relations among ``E(r,s) = 1/D(r,s)``.

    A row ``p -> (terms, const, sources)`` reads ``E[p] = const + sum terms[k] E[k]``.
    """

    def __init__(self):
        self.rows: Dict[Unknown, Tuple[Dict[Unknown, RatFun], RatFun, frozenset]] = {}
        self._reported: set = set()

    def reduce(self, terms: Dict[Unknown, RatFun], const, sources=frozenset()):
        out: Dict[Unknown, RatFun] = {}
        c = RatFun.coerce(const)
        src = set(sources)
        for k, v in terms.items():
            if k in self.rows:
                rt, rc, rs = self.rows[k]
                c = c + v * rc
                src |= rs
                for k2, v2 in rt.items():
                    out[k2] = out.get(k2, 0) + v * v2
            else:
                out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}, c, frozenset(src)

    def add(self, terms, const, sources) -> List[Tuple[Unknown, RatFun, frozenset]]:
        """Add ``sum terms[k] E[k] + const = 0``; returns newly pinned ``(key, E, sources)``."""
        t, c, src = self.reduce(terms, const, sources)
        if not t:
            if c:
                raise _StoreConflict(c, src)
            return []
        pivot = min(t, key=Unknown.sort_key)
        a = t.pop(pivot)
        row_t = {k: -v / a for k, v in t.items()}
        row_c = -c / a
        for p, (rt, rc, rs) in list(self.rows.items()):
            w = rt.get(pivot)
            if w is None:
                continue
            nt = {k: v for k, v in rt.items() if k != pivot}
            for k, v in row_t.items():
                nt[k] = nt.get(k, 0) + w * v
            self.rows[p] = ({k: v for k, v in nt.items() if v}, rc + w * row_c, rs | src)
        self.rows[pivot] = (row_t, row_c, src)
        pinned = []
        for p, (rt, rc, rs) in self.rows.items():
            if not rt and p not in self._reported:
                self._reported.add(p)
                pinned.append((p, rc, rs))
        return pinned

    def equal(self, k1: Unknown, k2: Unknown):
        """Sources proving ``E[k1] == E[k2]``, or None if not implied."""
        t, c, src = self.reduce({k1: RatFun.coerce(1), k2: RatFun.coerce(-1)}, 0)
        if t or c:
            return None
        return src


# ---------------------------------------------------------------------------
# engine
# ---------------------------------------------------------------------------

class _Engine:
    def __init__(self, sector: Sector, N: int, families: Dict[str, Family], ctx: Context, store: bool):
        self.sector = sector
        self.N = N
        self.families = families
        self.ctx = ctx
        self.evens = list(range(-N, N + 1))
        self.odds = [HalfInt(d) for d in range(-2 * N, 2 * N + 1) if d % 2 == sector.value]
        self._even_set = set(self.evens)
        self._odd_set = set(self.odds)
        self.values: Dict[Unknown, RatFun] = {}
        self.origin: Dict[Unknown, int] = {}
        self.trace = DerivationTrace(families, ctx)
        self.store = _ReciprocalStore() if store else None
        self._pending: List[Tuple[Unknown, RatFun, frozenset]] = []
        self.undetermined: List[str] = []

    # -- domain ----------------------------------------------------------------
    def in_domain(self, key: Unknown) -> bool:
        for kind, i in zip(_KINDS[key.family], (key.a, key.b)):
            if kind == "e":
                if not isinstance(i, int) or i not in self._even_set:
                    return False
            elif not isinstance(i, HalfInt) or i not in self._odd_set:
                return False
        return True

    def known(self, key: Unknown) -> bool:
        return key in self.values

    def K(self, family, a, b) -> Unknown:
        return Unknown(family, a, b)

    def instance(self, name, idx) -> Dict[str, object]:
        return self.families[name].instance(*idx)

    # -- evaluation ------------------------------------------------------------
    def evaluate(self, name: str, idx: tuple, values=None) -> Tuple[LinearForm, List[Unknown]]:
        values = self.values if values is None else values
        used: List[Unknown] = []

        def get(key):
            if not self.in_domain(key):
                raise _Unavailable(key)
            used.append(key)
            v = values.get(key)
            return LinearForm.symbol(key) if v is None else v

        return LinearForm.lift(self.families[name].fn(get, self.ctx, *idx)), used

    def solve_system(self, instances, targets, values=None):
        rows, used = [], set()
        for name, idx in instances:
            res, keys = self.evaluate(name, idx, values)
            rows.append(res)
            used.update(keys)
        unknown = set()
        for r in rows:
            unknown |= r.keys()
        if not unknown <= set(targets):
            raise _Underdetermined(sorted(unknown - set(targets), key=Unknown.sort_key)[0])
        order = [t for t in dict.fromkeys(targets) if t in unknown]
        return _gauss(rows, order), used

    # -- recording -------------------------------------------------------------
    def record(self, entry: TraceEntry) -> int:
        pos = self.trace.append(entry)
        for k, v in entry.assigned.items():
            if k in self.values:
                if self.values[k] != v:
                    raise InconsistencyError(k, self.trace[self.origin[k]], entry)
                continue
            if k.family == "D" and not v:
                raise InconsistencyError(k, None, entry, f"{k} would vanish")
            self.values[k] = v
            self.origin[k] = pos
            if k.family == "D" and self.store is not None:
                self._store_add({k: RatFun.coerce(1)}, -1 / v, frozenset({pos}), entry)
        return pos

    def _store_add(self, terms, const, sources, entry):
        try:
            self._pending.extend(self.store.add(terms, const, sources))
        except _StoreConflict as exc:
            first = self.trace[min(exc.sources)] if exc.sources else None
            raise InconsistencyError("reciprocal relations", first, entry,
                                     f"relations force 0 = {exc.residual}") from None

    def flush(self) -> bool:
        changed = False
        while self._pending:
            key, e_val, sources = self._pending.pop(0)
            if key in self.values:
                continue
            if not e_val:
                raise InconsistencyError(key, self.trace[min(sources)], None, f"1/{key} forced to 0")
            rel = tuple(sorted(i for i in sources if self.trace[i].kind == "relation"))
            deps = tuple(sorted({k for i in sources if self.trace[i].kind != "relation"
                                 for k in self.trace[i].assigned if k.family == "D"}, key=Unknown.sort_key))
            self.record(TraceEntry("reciprocal-closure", "assign", assigned={key: 1 / e_val},
                                   depends=deps, relations=rel))
            changed = True
        return changed

    def solve(self, step, instances, targets, note="") -> Optional[Dict[Unknown, RatFun]]:
        """Solve the listed instances for ``targets``; None when not applicable yet."""
        try:
            sol, used = self.solve_system(instances, targets)
        except _Unavailable as exc:
            self.unavailable(step, instances, exc.key)
            return None
        except (_Underdetermined, NonlinearError):
            return None
        except _Contradiction as exc:
            name, idx = instances[0]
            raise InconsistencyError(
                targets[0] if targets else name, None,
                TraceEntry(step, "assign", name, self.instance(name, idx)),
                f"{name}{self.instance(name, idx)} fails with residual {exc.residual}",
            ) from None
        if not sol:
            return {}
        (name, idx), rest = instances[0], instances[1:]
        entry = TraceEntry(
            step, "assign", name, self.instance(name, idx), assigned=sol,
            depends=tuple(sorted({k for k in used if k in self.values}, key=Unknown.sort_key)),
            support=tuple((n, self.instance(n, i)) for n, i in rest),
            note=note, raw=tuple(instances),
        )
        self.record(entry)
        return sol

    def single_unknowns(self) -> bool:
        """Solve every in-window instance that is linear in exactly one open unknown."""
        progress = False
        for name, fam in self.families.items():
            pools = [self.evens if p in _EVEN_NAMES else self.odds for p in fam.params]
            for idx in _product(pools):
                try:
                    res, _ = self.evaluate(name, idx)
                except (_Unavailable, NonlinearError):
                    continue
                if len(res.terms) == 1:
                    progress |= bool(self.solve("single-unknown", [(name, idx)], list(res.terms)))
        return progress

    def unavailable(self, step, instances, key):
        name, idx = instances[0]
        self.trace.append(TraceEntry(step, "unavailable", name, self.instance(name, idx),
                                     note=f"{key} lies outside the window"))

    def sweep(self) -> int:
        """Check every instance whose unknowns are all assigned; returns the count."""
        checked = 0
        for name, fam in self.families.items():
            pools = [self.evens if p in _EVEN_NAMES else self.odds for p in fam.params]
            for idx in _product(pools):
                def get(key):
                    v = self.values.get(key)
                    if v is None:
                        raise _Unavailable(key)
                    return v
                try:
                    res = fam.fn(get, self.ctx, *idx)
                except (_Unavailable, OutOfWindowError, PoleError):
                    continue
                checked += 1
                if res:
                    raise InconsistencyError(
                        name, None, TraceEntry("final-sweep", "check", name, fam.instance(*idx)),
                        f"{name}{fam.instance(*idx)} fails with residual {res}",
                    )
        return checked

    def radius(self, tables: _Tables) -> Fraction:
        best = Fraction(-1)
        k = Fraction(0)
        while k <= self.N:
            if all(key in self.values for key in tables.keys_in_box(k)):
                best = k
            else:
                break
            k += Fraction(1, 2)
        return best


def _product(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for tail in _product(pools[1:]):
            yield (head,) + tail


# ---------------------------------------------------------------------------
# centerless chain
# ---------------------------------------------------------------------------

class _Centerless(_Engine):
    def __init__(self, sector, N):
        super().__init__(sector, N, CENTERLESS, Context(RatFun.eps()), store=True)

    def Gk(self, m, r):
        return Unknown("G", m, r)

    def Hk(self, r, m):
        return Unknown("H", r, m)

    def Dk(self, r, s):
        return Unknown("D", r, s)

    def nonzero_odds(self):
        return [s for s in self.odds if s.doubled]

    # 1. D(s,s) = 1
    def seed(self):
        for s in self.odds:
            self.solve("seed-diagonal", [("closure-d", (s, s))], [self.Dk(s, s)])

    # 2. values forced by special substitutions
    def forced(self):
        for s in self.odds:
            self.solve("forced-values", [("lsym-LGG", (0, s, s))], [self.Gk(0, s)])
            self.solve("forced-values", [("closure-gh", (0, s))], [self.Hk(s, 0)])
        for t in self.odds:
            self.solve("forced-values", [("lsym-GGG", (-t, -t, t))], [self.Gk(-(2 * t), t)])
        for s in self.odds:
            m = -(2 * s)
            if self.in_domain(self.Gk(m, s)):
                self.solve("forced-values", [("closure-gh", (m, s))], [self.Hk(s, m)])
        for s in self.nonzero_odds():
            self.solve("forced-values", [("lsym-LGG", (-(2 * s), s, s))], [self.Dk(-s, s)])
            self.solve("forced-values", [("lsym-LGG", (-(2 * s), 3 * s, s))], [self.Dk(3 * s, s)],
                       note="reconstructed instantiation")

    # 3. local propagation
    def propagate(self):
        changed = True
        while changed:
            changed = self.flush()
            for r in self.odds:
                for m in self.evens:
                    h = self.Hk(r, m)
                    d = self.Dk(r, m + r)
                    if self.in_domain(d):
                        if h not in self.values and d in self.values:
                            changed |= bool(self.solve("h-from-d", [("lsym-GGL", (m, r, r))], [h]))
                        elif h in self.values and d not in self.values and m != 0:
                            changed |= bool(self.solve("d-from-h", [("lsym-GGL", (m, r, r))], [d]))
                    g = self.Gk(m, r)
                    if (g in self.values) != (h in self.values):
                        target = h if g in self.values else g
                        changed |= bool(self.solve("closure-gh", [("closure-gh", (m, r))], [target]))
                for s in self.odds:
                    a, b = self.Dk(r, s), self.Dk(s, r)
                    if a in self.values and b not in self.values:
                        changed |= bool(self.solve("closure-d", [("closure-d", (s, r))], [b]))
                changed |= self.flush()

    # 4. recurrences that are linear in 1/D
    def reciprocal_relation(self, step, name, idx, note="", quiet=False):
        used: List[Unknown] = []
        links: List[Tuple[str, tuple]] = []

        def get(key):
            if not self.in_domain(key):
                raise _Unavailable(key)
            v = self.values.get(key)
            if v is not None:
                used.append(key)
                return v
            if key.family == "H":
                r, m = key.a, key.b
                d = self.Dk(r, m + r)
                # the link instance itself forces D(r, m+r) != 0 because m != 0
                if m == 0 or not self.in_domain(d):
                    raise _Underdetermined(key)
                links.append(("lsym-GGL", (m, r, r)))
                return LinearForm({d: RatFun.coerce(-m)})
            if key.family == "D":
                raise NonlinearError(key)
            raise _Underdetermined(key)

        try:
            form = LinearForm.lift(self.families[name].fn(get, self.ctx, *idx))
        except _Unavailable as exc:
            if not quiet:
                self.unavailable(step, [(name, idx)], exc.key)
            return False
        except (_Underdetermined, NonlinearError):
            return False
        if quiet:
            t, c, _ = self.store.reduce(form.terms, form.const)
            if not t and not c:
                return False  # already implied
        if form.is_constant():
            if form.const:
                raise InconsistencyError(name, None, TraceEntry(step, "relation", name, self.instance(name, idx)),
                                         f"{name}{self.instance(name, idx)} fails with residual {form.const}")
            return False
        text = " + ".join(f"({v})/{k}" for k, v in sorted(form.terms.items(), key=lambda kv: kv[0].sort_key()))
        text += f" + ({form.const}) = 0"
        entry = TraceEntry(step, "relation", name, self.instance(name, idx),
                           depends=tuple(sorted(set(used), key=Unknown.sort_key)),
                           support=tuple((n, self.instance(n, i)) for n, i in links),
                           relation=text, note=note)
        pos = self.trace.append(entry)
        self._store_add(form.terms, form.const, frozenset({pos}), entry)
        return True

    def recurrences(self):
        for r in self.odds:
            for s in self.nonzero_odds():
                if r == s or r == -s:
                    continue
                # E(r+2s, s) = E(r, s)
                self.reciprocal_relation("shift-relation", "lsym-LGL", (2 * s, -(r + s), r))
                # E(r, s) + E(-s, -r) = 2
                self.reciprocal_relation("reflection-relation", "lsym-GGL", (s - r, r, -s))
        self.propagate()

    # 5. Ramond: G(2s, t) once E(s,t) = E(s, 2s+t) is established
    def even_shift(self):
        for s in self.nonzero_odds():
            for t in self.odds:
                g = self.Gk(2 * s, t)
                if not self.in_domain(g) or g in self.values:
                    continue
                a, b = self.Dk(s, t), self.Dk(s, 2 * s + t)
                if not (self.in_domain(a) and self.in_domain(b) and self.in_domain(self.Hk(s, s + t))):
                    self.unavailable("even-shift", [("lsym-GGG", (s, s, t))], b if self.in_domain(a) else a)
                    continue
                proof = self.store.equal(a, b)
                if proof is None:
                    continue
                rel = tuple(sorted(i for i in proof if self.trace[i].kind == "relation"))
                deps = tuple(sorted({k for i in proof if self.trace[i].kind != "relation"
                                     for k in self.trace[i].assigned if k.family == "D"}, key=Unknown.sort_key))
                self.record(TraceEntry(
                    "even-shift", "assign", "lsym-GGG", self.instance("lsym-GGG", (s, s, t)),
                    assigned={g: RatFun.coerce(-(s + t))}, depends=deps,
                    support=(("lsym-GGL", self.instance("lsym-GGL", (s + t, s, s))),),
                    relations=rel, note=f"1/{a} = 1/{b}",
                ))
        self.propagate()

    # 6. Ramond branch point at D(0,m)
    def _quadratic_roots(self, base, param, instances, targets, final, clear):
        pts = []
        for x in range(1, 6):
            vals = dict(base)
            vals[param] = RatFun.coerce(x)
            sol, _ = self.solve_system(instances, targets, vals)
            vals.update(sol)
            res, _ = self.evaluate(final[0], final[1], vals)
            if not res.is_constant():
                raise _Underdetermined(final)
            pts.append(RatFun.coerce(x) ** clear * res.const)
        d1, d2 = pts[1] - pts[0], pts[2] - pts[1]
        a = (d2 - d1) / 2
        b = d1 - 3 * a
        c = pts[0] - a - b
        for x, p in zip((4, 5), pts[3:]):
            if a * x * x + b * x + c != p:
                raise DerivationError(f"{final[0]} is not quadratic in {param}")
        if not a:
            if not b:
                raise _Underdetermined(param)
            return [-c / b]
        disc = b * b - 4 * a * c
        root = rf_sqrt(disc)
        if root is None:
            raise DerivationError(f"non-rational roots for {param}")
        roots = [(-b + root) / (2 * a), (-b - root) / (2 * a)]
        out = []
        for r in roots:
            if r not in out:
                out.append(r)
        return out

    def _candidate(self, base, param, x, instances, targets):
        vals = dict(base)
        vals[param] = x
        sol, _ = self.solve_system(instances, targets, vals)
        return {param: x, **sol}

    def _eliminates(self, m, cand) -> Tuple[bool, List[str]]:
        """Run the second substitution for ``cand``; True if every sub-solution breaks the
        reflection identity at ``(m, 0, -m)``."""
        z, mo = HalfInt(0), HalfInt(2 * m)
        y_key, dm0, gm = self.Dk(z, -mo), self.Dk(-mo, z), self.Gk(m, -mo)
        hl = self.Hk(-mo, m)
        base = {k: v for k, v in self.values.items() if k not in (y_key, dm0, gm, hl)}
        base.update(cand)
        inst = [("lsym-LGG", (m, z, -mo)), ("closure-d", (z, -mo))]
        roots = self._quadratic_roots(base, y_key, inst, [gm, dm0], ("lsym-LGG", (m, -mo, -mo)), 0)
        notes, survives = [], False
        for y in roots:
            vals = dict(base)
            vals[y_key] = y
            sol, _ = self.solve_system(inst, [gm, dm0], vals)
            vals.update(sol)
            if not vals[dm0] or not y:
                notes.append(f"{y_key} = {y}: forces a vanishing D")
                continue
            link, _ = self.solve_system([("lsym-GGL", (m, -mo, -mo))], [hl], vals)
            vals.update(link)
            res, _ = self.evaluate("lsym-GGL", (m, z, -mo), vals)
            notes.append(f"{y_key} = {y}, {dm0} = {vals[dm0]}: lsym-GGL residual {res.const}")
            if not res.const:
                survives = True
        return not survives, notes

    def branch(self, final_pass=False):
        z = HalfInt(0)
        for m in self.evens:
            if m == 0 or m in self._branched:
                continue
            mo = HalfInt(2 * m)
            x_key = self.Dk(z, mo)
            targets = [self.Gk(m, mo), self.Hk(mo, m), self.Hk(z, m)]
            inst = [("lsym-LGG", (m, z, mo)), ("lsym-GGL", (m, z, mo)), ("lsym-GGL", (m, z, z))]
            final = ("closure-gh", (m, mo))
            needed = [x_key, self.Dk(z, HalfInt(4 * m)), self.Dk(z, -mo), self.Dk(-mo, z), self.Gk(m, -mo)]
            missing = next((k for k in needed if not self.in_domain(k)), None)
            if missing is not None:
                self._branched.add(m)
                self.unavailable("branch-candidates", [final], missing)
                continue
            base = {k: v for k, v in self.values.items() if k not in (x_key, *targets)}
            try:
                roots = self._quadratic_roots(base, x_key, inst, targets, final, 1)
                cands = [self._candidate(base, x_key, x, inst, targets) for x in roots if x]
            except (_Underdetermined, NonlinearError, _Unavailable):
                if final_pass:
                    self.undetermined.append(f"branch at m={m}: prerequisites not derived")
                continue
            self._branched.add(m)
            self.trace.append(TraceEntry(
                "branch-candidates", "branch-info", final[0], self.instance(*final),
                note="; ".join(", ".join(f"{k} = {v}" for k, v in c.items()) for c in cands),
            ))
            survivors = []
            for cand in cands:
                gone, notes = self._eliminates(m, cand)
                if gone:
                    self.trace.append(TraceEntry(
                        "branch-eliminated", "branch-info", "lsym-GGL", self.instance("lsym-GGL", (m, z, -mo)),
                        support=(("lsym-LGG", self.instance("lsym-LGG", (m, z, -mo))),
                                 ("closure-d", self.instance("closure-d", (z, -mo))),
                                 ("lsym-LGG", self.instance("lsym-LGG", (m, -mo, -mo)))),
                        note="candidate " + ", ".join(f"{k} = {v}" for k, v in cand.items()) + " | " + "; ".join(notes),
                    ))
                else:
                    survivors.append(cand)
            if len(survivors) != 1:
                if survivors:
                    self.undetermined.append(f"window too small: {len(survivors)} branches survive at m={m}")
                    self.trace.append(TraceEntry("branch-undetermined", "undetermined", final[0],
                                                 self.instance(*final), note="window too small"))
                    continue
                raise InconsistencyError(x_key, None, None, f"no branch survives at m={m}")
            chosen = survivors[0]
            depends = sorted({k for k in base if k.family in ("D", "G", "H")} & {
                self.Dk(mo, mo), self.Dk(z, HalfInt(4 * m)), self.Dk(mo, z)}, key=Unknown.sort_key)
            self.record(TraceEntry(
                "branch-select", "branch", final[0], self.instance(*final), assigned=chosen,
                depends=tuple(k for k in depends if k in self.values),
                support=tuple((n, self.instance(n, i)) for n, i in inst),
                raw=(final, *inst),
            ))
        self.propagate()

    # 7. Ramond: remaining integer-indexed entries
    def integer_grid(self):
        z = HalfInt(0)
        for m in self.evens:
            for n in self.evens:
                if m == 0:
                    continue
                mo, no = HalfInt(2 * m), HalfInt(2 * n)
                targets = [self.Gk(m, no), self.Gk(n, mo), self.Hk(mo, n)]
                if all(t in self.values for t in targets):
                    continue
                self.solve("integer-grid",
                           [("lsym-LLG", (m, n, z)), ("lsym-LGL", (m, n, z)), ("closure-gh", (n, mo))],
                           targets)
        self.propagate()

    # 8. whatever single instances still pin down, and any further 1/D relations
    def closing(self):
        before = -1
        while len(self.values) != before:
            before = len(self.values)
            for name in ("lsym-GGL", "lsym-LGL"):
                fam = self.families[name]
                for idx in _product([self.evens if p in _EVEN_NAMES else self.odds for p in fam.params]):
                    self.reciprocal_relation("reciprocal-relation", name, idx, quiet=True)
            self.propagate()
            self.single_unknowns()
            self.propagate()

    def run(self):
        self.seed()
        self.forced()
        self.propagate()
        self.recurrences()
        if self.sector is Sector.RAMOND:
            self._branched = set()
            before = -1
            while len(self.values) != before:
                before = len(self.values)
                self.even_shift()
                self.branch()
                self.integer_grid()
        self.closing()
        if self.sector is Sector.RAMOND:
            before = -1
            while len(self.values) != before:
                before = len(self.values)
                self.even_shift()
                self.branch()
                self.integer_grid()
                self.closing()
            self.branch(final_pass=True)
        self.propagate()


def derive_centerless(sector: Sector, window: int) -> Tuple[NormalizedUnknowns, DerivationTrace]:
    """Derive ``G, H, D`` from the rescaled constraints over ``|m|, |r| <= window``."""
    N = _window(window)
    eng = _Centerless(sector, N)
    eng.run()
    tables = NormalizedUnknowns(sector, N, dict(eng.values),
                                {k: eng.trace[i].step for k, i in eng.origin.items()},
                                undetermined=list(eng.undetermined))
    tables.sweep_checked = eng.sweep()
    tables.radius = eng.radius(tables)
    return tables, eng.trace


# ---------------------------------------------------------------------------
# central components
# ---------------------------------------------------------------------------

class _Central(_Engine):
    def __init__(self, sector, N):
        sys = StructureSystem.central_extension(sector)
        super().__init__(sector, N, CENTRAL, Context(RatFun.eps(), sys), store=False)

    def S(self, r, s):
        return Unknown("sigma", r, s)

    def P(self, m, r):
        return Unknown("psi", m, r)

    def R(self, r, m):
        return Unknown("rho", r, m)

    def sigma(self):
        for r in self.odds:
            for s in self.odds:
                if r.doubled + s.doubled:
                    self.solve("sigma-offdiagonal", [("cocycle-LGG", (0, r, s))], [self.S(r, s)])
        for s in self.odds:
            if s.doubled:
                self.solve("sigma-diagonal", [("cocycle-GGL", (-(2 * s), s, s))], [self.S(s, -s)])
            else:
                self.solve("sigma-diagonal", [("closure-sigma", (s, s))], [self.S(s, s)],
                           note="reconstructed: value at r = s = 0 taken from the closure condition")

    def psi_rho(self):
        z = HalfInt(0)
        if self.sector is Sector.NEVEU_SCHWARZ:
            for r in self.odds:
                self.solve("rho-zero", [("cocycle-LGL", (0, 0, r))], [self.R(r, 0)])
                self.solve("psi-from-rho", [("closure-psi-rho", (0, r))], [self.P(0, r)])
            for m in self.evens:
                for r in self.odds:
                    if m:
                        self.solve("psi-shift", [("cocycle-LLG", (m, 0, r))], [self.P(m, r)])
                        self.solve("rho-from-psi", [("closure-psi-rho", (m, r))], [self.R(r, m)])
            return
        r1 = next(r for r in self.odds if r.doubled > 0)
        self.solve("rho-origin", [("cocycle-LGL", (-r1.value.numerator, 0, r1))], [self.R(z, 0)])
        self.solve("psi-from-rho", [("closure-psi-rho", (0, z))], [self.P(0, z)])
        for r in self.odds:
            if r.doubled:
                self.solve("rho-zero", [("cocycle-LGL", (0, 0, r))], [self.R(r, 0)])
                self.solve("psi-from-rho", [("closure-psi-rho", (0, r))], [self.P(0, r)])
        for n in self.evens:
            if n:
                no = HalfInt(2 * n)
                self.solve("psi-axis", [("cocycle-LLG", (0, n, z))], [self.P(n, z)])
                self.solve("rho-from-psi", [("closure-psi-rho", (n, z))], [self.R(z, n)])
        for m in self.evens:
            for n in self.evens:
                if m and n:
                    mo, no = HalfInt(2 * m), HalfInt(2 * n)
                    targets = [self.P(m, no), self.P(n, mo), self.R(mo, n)]
                    if all(t in self.values for t in targets):
                        continue
                    self.solve("integer-grid",
                               [("cocycle-LLG", (m, n, z)), ("cocycle-LGL", (m, n, z)),
                                ("closure-psi-rho", (n, mo))], targets)

    def propagate(self):
        changed = True
        while changed:
            changed = False
            for r in self.odds:
                for s in self.odds:
                    a, b = self.S(r, s), self.S(s, r)
                    if a in self.values and b not in self.values:
                        changed |= bool(self.solve("closure-sigma", [("closure-sigma", (r, s))], [b]))
                for m in self.evens:
                    p, q = self.P(m, r), self.R(r, m)
                    if (p in self.values) != (q in self.values):
                        changed |= bool(self.solve("closure-psi-rho", [("closure-psi-rho", (m, r))],
                                                   [q if p in self.values else p]))

    def run(self):
        self.sigma()
        self.psi_rho()
        before = -1
        while len(self.values) != before:
            before = len(self.values)
            self.propagate()
            self.single_unknowns()


def derive_central(sector: Sector, window: int) -> Tuple[CocycleUnknowns, DerivationTrace]:
    """Derive ``sigma, psi, rho`` with ``f, g, h, d, phi`` fixed to their closed forms."""
    N = _window(window)
    eng = _Central(sector, N)
    eng.run()
    tables = CocycleUnknowns(sector, N, dict(eng.values),
                             {k: eng.trace[i].step for k, i in eng.origin.items()},
                             undetermined=list(eng.undetermined))
    tables.sweep_checked = eng.sweep()
    tables.radius = eng.radius(tables)
    return tables, eng.trace


def _window(window) -> int:
    N = getattr(window, "N", window)
    if not isinstance(N, int) or N < 0:
        raise ValueError("window bound must be a non-negative integer")
    return N


# ---------------------------------------------------------------------------
# comparison with closed forms
# ---------------------------------------------------------------------------

def _unnormalize(key: Unknown, value: RatFun) -> Tuple[str, RatFun]:
    e = RatFun.eps()
    if key.family == "G":
        m, r = key.a, key.b.value
        return "g", value * (1 + 2 * e * r) / (1 + 2 * e * (m + r))
    if key.family == "H":
        r, m = key.a.value, key.b
        return "h", value * (1 + e * m) / (1 + 2 * e * (m + r))
    if key.family == "D":
        r, s = key.a.value, key.b.value
        return "d", value * (1 + 2 * e * s) / (1 + e * (r + s))
    return key.family, value


_PARAMS = {"g": ("m", "r"), "h": ("r", "m"), "d": ("r", "s"),
           "sigma": ("r", "s"), "psi": ("m", "r"), "rho": ("r", "m")}


def cross_check(derived: _Tables, sys: StructureSystem) -> ViolationReport:
    """Compare derived entries (rescaled back for the centerless case) with ``sys``."""
    report = ViolationReport()
    for key in sorted(derived.values, key=Unknown.sort_key):
        family, value = _unnormalize(key, derived.values[key])
        idx = tuple(zip(_PARAMS[family], (key.a, key.b)))
        try:
            expected = sys.coeff(family, key.a, key.b)
            if not sys.symbolic:
                value = rf_eval(value, sys.epsilon)
        except (OutOfWindowError, PoleError):
            report.skip("cross-check-" + family, idx)
            continue
        report.checked += 1
        res = value - expected
        if res:
            report.add("cross-check-" + family, idx, res)
    return report.finish()
