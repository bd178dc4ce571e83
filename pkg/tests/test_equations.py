"""The scalar families used by the deriver against the raw associator identities.

Random unknowns obeying the closure conditions are pushed through both sides:
the family residual and the matching component of
``(x,y,z) -/+ (y,x,z)`` computed by the structures module.  Their ratio may
depend on e and the indices but never on the random values.
"""
import random
from fractions import Fraction

import pytest

from lsvir.equations import CENTERLESS, CENTRAL, Context, LinearForm, NonlinearError, Unknown
from lsvir.exactfield import RatFun
from lsvir.structures import C, G, HalfInt, L, Mode, Sector, StructureSystem, associator

e = RatFun.eps()
NS, R = Sector.NEVEU_SCHWARZ, Sector.RAMOND


def odds(sector, bound):
    return [HalfInt(d) for d in range(-2 * bound, 2 * bound + 1) if d % 2 == sector.value]


def rand_q(rng):
    return RatFun.coerce(Fraction(rng.randint(-9, 9), rng.randint(1, 5)))


def random_centerless(sector, rng, bound=7):
    ev, od = range(-bound, bound + 1), odds(sector, bound)
    vals = {}
    for m in ev:
        for r in od:
            rv = r.value
            Gv = rand_q(rng)
            vals[Unknown("G", m, r)] = Gv
            vals[Unknown("H", r, m)] = (Gv * (1 + 2 * e * rv) - (Fraction(m, 2) - rv) * (1 + 2 * e * (m + rv))) / (1 + e * m)
    for r in od:
        for s in od:
            if r.doubled < s.doubled:
                Dv = rand_q(rng) or RatFun.coerce(1)
                rv, sv = r.value, s.value
                vals[Unknown("D", r, s)] = Dv
                vals[Unknown("D", s, r)] = (2 + 2 * e * (rv + sv) - Dv * (1 + 2 * e * sv)) / (1 + 2 * e * rv)
            elif r == s:
                vals[Unknown("D", r, r)] = RatFun.coerce(1)
    over = {"g": {}, "h": {}, "d": {}}
    for k, v in vals.items():
        if k.family == "G":
            m, rv = k.a, k.b.value
            over["g"][(m, k.b)] = v * (1 + 2 * e * rv) / (1 + 2 * e * (m + rv))
        elif k.family == "H":
            rv, m = k.a.value, k.b
            over["h"][(k.a, m)] = v * (1 + e * m) / (1 + 2 * e * (m + rv))
        else:
            rv, sv = k.a.value, k.b.value
            over["d"][(k.a, k.b)] = v * (1 + 2 * e * sv) / (1 + e * (rv + sv))
    return vals, StructureSystem(sector, Mode.CENTERLESS, overrides=over)


def random_central(sector, rng, bound=7):
    ev, od = range(-bound, bound + 1), odds(sector, bound)
    over = {"sigma": {}, "psi": {}, "rho": {}}
    vals = {}
    for m in ev:
        for r in od:
            v = rand_q(rng)
            vals[Unknown("psi", m, r)] = vals[Unknown("rho", r, m)] = v
            over["psi"][(m, r)] = over["rho"][(r, m)] = v
    for r in od:
        for s in od:
            delta = (4 * r.value ** 2 - 1) / 12 if r.doubled + s.doubled == 0 else 0
            if r.doubled < s.doubled:
                v = rand_q(rng)
                vals[Unknown("sigma", r, s)], vals[Unknown("sigma", s, r)] = v, delta - v
            elif r == s:
                vals[Unknown("sigma", r, r)] = RatFun.coerce(Fraction(delta) / 2)
    for k, v in vals.items():
        if k.family == "sigma":
            over["sigma"][(k.a, k.b)] = v
    return vals, StructureSystem(sector, Mode.CENTRAL, overrides=over)


TRIPLES = {
    "lsym-LLG": lambda m, n, r: ((L(m), L(n), G(r)), -1, G(m + n + r)),
    "lsym-LGL": lambda m, n, r: ((L(m), G(r), L(n)), -1, G(m + n + r)),
    "lsym-LGG": lambda m, r, s: ((L(m), G(r), G(s)), -1, L(m + r + s)),
    "lsym-GGL": lambda m, r, s: ((G(r), G(s), L(m)), 1, L(m + r + s)),
    "lsym-GGG": lambda r, s, t: ((G(r), G(s), G(t)), 1, G(r + s + t)),
}
CTRIPLES = {
    "cocycle-LLG": lambda m, n, r: ((L(m), L(n), G(r)), -1),
    "cocycle-LGL": lambda m, n, r: ((L(m), G(r), L(n)), -1),
    "cocycle-LGG": lambda m, r, s: ((L(m), G(r), G(s)), -1),
    "cocycle-GGL": lambda m, r, s: ((G(r), G(s), L(m)), 1),
    "cocycle-GGG": lambda r, s, t: ((G(r), G(s), G(t)), 1),
}


def raw_residual(sys, triple, sign):
    x, y, z = triple
    return associator(sys, x, y, z) + associator(sys, y, x, z).scale(sign)


def instances(params, sector, bound=2):
    pools = [range(-bound, bound + 1) if p in "mnl" else odds(sector, bound - 1) for p in params]
    out = [()]
    for pool in pools:
        out = [t + (i,) for t in out for i in pool]
    return out


def family_value(fam, ctx, vals, idx):
    return LinearForm.lift(fam.fn(lambda k: vals[k], ctx, *idx)).const


@pytest.mark.parametrize("sector", [NS, R])
@pytest.mark.parametrize("name", sorted(TRIPLES))
def test_rescaled_families_match_associators(sector, name):
    draws = [random_centerless(sector, random.Random(seed)) for seed in (1, 2)]
    fam = CENTERLESS[name]
    ctx = Context(e)
    compared = 0
    for idx in instances(fam.params, sector):
        (triple, sign, target) = TRIPLES[name](*idx)
        ratios = []
        for vals, sys in draws:
            raw = raw_residual(sys, triple, sign)
            assert set(raw.support()) <= {target}
            norm = family_value(fam, ctx, vals, idx)
            rv = raw.coefficient(target)
            assert bool(rv) == bool(norm)
            if norm:
                ratios.append(rv / norm)
        if len(ratios) == 2:
            assert ratios[0] == ratios[1], idx
            compared += 1
    assert compared > 0


@pytest.mark.parametrize("sector", [NS, R])
def test_rescaled_closure_families(sector):
    vals, sys = random_centerless(sector, random.Random(5))
    ctx = Context(e)
    for m in range(-3, 4):
        for r in odds(sector, 3):
            assert family_value(CENTERLESS["closure-gh"], ctx, vals, (m, r)) == 0
            assert sys.coeff_g(m, r) - sys.coeff_h(r, m) == Fraction(m, 2) - r.value
    for r in odds(sector, 3):
        for s in odds(sector, 3):
            assert family_value(CENTERLESS["closure-d"], ctx, vals, (r, s)) == 0
            assert sys.coeff_d(r, s) + sys.coeff_d(s, r) == 2


@pytest.mark.parametrize("sector", [NS, R])
@pytest.mark.parametrize("name", sorted(CTRIPLES))
def test_cocycle_families_match_central_part(sector, name):
    draws = [random_central(sector, random.Random(seed)) for seed in (3, 4)]
    fam = CENTRAL[name]
    compared = 0
    for idx in instances(fam.params, sector):
        triple, sign = CTRIPLES[name](*idx)
        ratios = []
        for vals, sys in draws:
            raw = raw_residual(sys, triple, sign).coefficient(C)
            val = family_value(fam, Context(e, sys), vals, idx)
            assert bool(raw) == bool(val)
            if val:
                ratios.append(raw / val)
        if len(ratios) == 2:
            assert ratios[0] == ratios[1], idx
            compared += 1
    assert compared > 0


@pytest.mark.parametrize("sector", [NS, R])
def test_closed_form_solves_every_family(sector):
    sys = StructureSystem.central_extension(sector)
    solution = {}
    for m in range(-6, 7):
        for r in odds(sector, 6):
            solution[Unknown("G", m, r)] = RatFun.coerce(Fraction(-m, 2) - r.value)
            solution[Unknown("H", r, m)] = RatFun.coerce(-m)
            solution[Unknown("psi", m, r)] = solution[Unknown("rho", r, m)] = RatFun()
    for r in odds(sector, 6):
        for s in odds(sector, 6):
            solution[Unknown("D", r, s)] = RatFun.coerce(1)
            solution[Unknown("sigma", r, s)] = sys.coeff_sigma(r, s)
    for fams, ctx in ((CENTERLESS, Context(e)), (CENTRAL, Context(e, sys))):
        for name, fam in fams.items():
            for idx in instances(fam.params, sector):
                assert family_value(fam, ctx, solution, idx) == 0, (name, idx)


def test_linear_form_rejects_products():
    a, b = LinearForm.symbol(Unknown("G", 0, HalfInt(1))), LinearForm.symbol(Unknown("D", HalfInt(1), HalfInt(1)))
    with pytest.raises(NonlinearError):
        a * b
    assert (a * 0).is_constant()
    assert (2 * a + 1 - a).terms == a.terms
