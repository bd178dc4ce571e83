from fractions import Fraction

import pytest

from lsvir.checker import (
    Window,
    check_annihilator,
    check_bracket_compatibility,
    check_closure,
    check_left_symmetry,
    check_super_jacobi,
)
from lsvir.exactfield import RatFun
from lsvir.structures import C, Element, G, HalfInt, L, Mode, ModeError, Sector, StructureSystem, target_bracket

NS, R = Sector.NEVEU_SCHWARZ, Sector.RAMOND
h = HalfInt.of


class ShiftedG(StructureSystem):
    """g replaced by g + 1 everywhere."""

    def coeff(self, family, *key):
        v = super().coeff(family, *key)
        return v + 1 if family == "g" else v


class NoPhi(StructureSystem):
    def coeff(self, family, *key):
        if family == "phi":
            return RatFun()
        return super().coeff(family, *key)


@pytest.mark.parametrize("sector", [NS, R])
def test_clean_system_small_window(sector):
    sys = StructureSystem.central_extension(sector)
    w = Window(3, sector)
    assert not check_closure(sys, w)
    assert not check_left_symmetry(sys, w)
    assert not check_bracket_compatibility(sys, w)
    assert not check_annihilator(sys, w)


def test_closure_flags_overridden_d():
    sys = StructureSystem.central_extension(NS).with_override("d", (Fraction(1, 2), Fraction(1, 2)), 2)
    rep = check_closure(sys, Window(2, NS))
    assert len(rep.entries) == 1
    v = rep.entries[0]
    assert v.identity == "closure-d"
    assert dict(v.indices) == {"r": h(Fraction(1, 2)), "s": h(Fraction(1, 2))}
    # d + d - 2 with d = 2
    assert v.residual == 2


def test_closure_ramond_window_zero():
    rep = check_closure(StructureSystem.centerless(R), Window(0, R))
    assert rep.ok and rep.checked == 3


def test_left_symmetry_sees_shifted_g():
    sys = ShiftedG(NS, Mode.CENTERLESS)
    rep = check_left_symmetry(sys, Window(2, NS))
    assert rep
    assert "lsym-LLG" in rep.identities()


def test_left_symmetry_even_sector():
    rep = check_left_symmetry(StructureSystem.virasoro(), Window(4, R))
    assert rep.ok and rep.checked == 10 ** 3  # L(-4)..L(4) and c


def test_bracket_flags_missing_central_charge():
    sys = NoPhi(NS, Mode.CENTRAL)
    rep = check_bracket_compatibility(sys, Window(4, NS))
    bad = {(dict(v.indices)["m"], dict(v.indices)["n"]) for v in rep.entries}
    assert rep.identities() == {"bracket-LL"}
    assert bad == {(m, -m) for m in range(-4, 5) if m not in (-1, 0, 1)}


def test_bracket_centerless_system():
    assert not check_bracket_compatibility(StructureSystem.centerless(R), Window(3, R))


@pytest.mark.parametrize("sector", [NS, R])
def test_super_jacobi_reference(sector):
    assert not check_super_jacobi(sector, Window(3, sector))


def test_super_jacobi_detects_flipped_cocycle():
    def flipped(x, y):
        b = target_bracket(NS, x, y)
        if x.kind == "G" and y.kind == "G" and b.coefficient(C):
            return b - Element({C: 2 * b.coefficient(C)})
        return b

    rep = check_super_jacobi(NS, Window(2, NS), flipped)
    assert rep
    assert all(v.identity.startswith("jacobi-") for v in rep.entries)


def test_annihilator_window_zero():
    rep = check_annihilator(StructureSystem.central_extension(NS), Window(0, NS))
    assert rep.ok and rep.checked == 5


def test_annihilator_needs_center():
    with pytest.raises(ModeError):
        check_annihilator(StructureSystem.centerless(NS), Window(1, NS))


def test_annihilator_reports_missing_table_rules():
    sys = StructureSystem(NS, Mode.TABLE, tables={"f": {(0, 0): RatFun()}, "phi": {(0, 0): RatFun()}}, central=True)
    rep = check_annihilator(sys, Window(0, NS))
    assert rep and rep.identities() >= {"annihilator-CL", "annihilator-LC", "annihilator-CC"}


def test_table_system_skips_instead_of_failing():
    closed = StructureSystem.virasoro(central=False)
    f = {(m, n): closed.coeff_f(m, n) for m in (-1, 0, 1) for n in (-1, 0, 1)}
    sys = StructureSystem(R, Mode.TABLE, tables={"f": f}, central=False, even_only=True)
    rep = check_left_symmetry(sys, Window(1, R))
    assert rep.unchecked
    assert rep.checked + len(rep.unchecked) == 27


def test_window_membership():
    w = Window(1, R)
    assert w.contains(L(1)) and not w.contains(L(2)) and w.contains(G(h(-1)))
    # odd indices are k + theta for k in [-N, N]
    assert Window(1, NS).contains(G(h(Fraction(3, 2))))
    assert not Window(1, NS).contains(G(h(Fraction(-3, 2))))
    assert Window(1, NS).contains(G(h(Fraction(-1, 2))))


def test_report_json_shape():
    sys = StructureSystem.central_extension(NS).with_override("g", (1, Fraction(1, 2)), 0)
    rep = check_closure(sys, Window(1, NS))
    j = rep.to_json()[0]
    assert j == {"identity": "closure-gh", "indices": {"m": 1, "r": "1/2"}, "residual": str(rep.entries[0].residual)}
