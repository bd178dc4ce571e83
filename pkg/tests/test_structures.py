from fractions import Fraction

import pytest

from lsvir.exactfield import GaussianRational, RatFun, rf_eval
from lsvir.structures import (
    C,
    Element,
    G,
    HalfInt,
    L,
    Mode,
    ModeError,
    OutOfWindowError,
    ParityError,
    Sector,
    SectorError,
    StructureSystem,
    associator,
    multiply,
    parse_basis,
    super_commutator,
    target_bracket,
)

e = RatFun.eps()
h = HalfInt.of
NS, R = Sector.NEVEU_SCHWARZ, Sector.RAMOND


@pytest.fixture(scope="module")
def ns():
    return StructureSystem.central_extension(NS)


@pytest.fixture(scope="module")
def ramond():
    return StructureSystem.central_extension(R)


def test_halfint_arithmetic():
    a, b = h(Fraction(1, 2)), h(Fraction(3, 2))
    assert a + b == 2 and isinstance(a + b, int)
    assert isinstance(a + 1, HalfInt) and a + 1 == h(Fraction(3, 2))
    assert isinstance(2 * a, int) and 2 * a == 1
    assert isinstance(3 * a, HalfInt)
    assert str(-a) == "-1/2" and str(h(2)) == "2"
    assert HalfInt.parse("-3/2") == h(Fraction(-3, 2))


def test_sector_parsing():
    assert Sector.parse("1/2") is NS and Sector.parse("0") is R
    assert NS.odd(0) == h(Fraction(1, 2))
    with pytest.raises(SectorError):
        NS.check(h(1))


def test_f_examples(ns):
    assert ns.coeff_f(2, 0) == 0
    for n in range(-4, 5):
        assert ns.coeff_f(0, n) == -n
    assert ns.coeff_f(1, -1) == 1 - e


def test_g_h_d_examples(ns, ramond):
    for s in [Fraction(1, 2), Fraction(-3, 2), Fraction(5, 2)]:
        assert ns.coeff_d(h(s), h(s)) == 1
    for s in range(-3, 4):
        assert ramond.coeff_d(h(s), h(s)) == 1
    assert ns.coeff_g(1, h(Fraction(1, 2))) == -(1 + e) / (1 + 3 * e)
    assert ns.coeff_h(h(Fraction(5, 2)), 0) == 0


def test_sector_mismatch(ns):
    with pytest.raises(SectorError):
        ns.coeff_g(1, h(1))


def test_central_examples(ns, ramond):
    assert ns.coeff_phi(2, 3) == 0
    assert ns.coeff_phi(1, -1) == (e * e - 1) / (24 * e)
    assert ns.coeff_sigma(h(Fraction(1, 2)), h(Fraction(-1, 2))) == (e * e - 1) / (24 * e)
    assert ramond.coeff_sigma(h(0), h(0)) == Fraction(-1, 24)
    assert ns.coeff_psi(3, h(Fraction(1, 2))) == 0
    with pytest.raises(ModeError):
        StructureSystem.centerless(NS).coeff_phi(1, -1)


def test_multiply_examples(ns):
    assert multiply(ns, L(1), L(-1)) == Element({L(0): 1 - e, C: (e * e - 1) / (24 * e)})
    assert multiply(ns, C, L(5)) == 0
    r = h(Fraction(1, 2))
    assert multiply(ns, G(r), G(r)) == Element({L(1): 1})


def test_super_commutator_examples(ns):
    assert super_commutator(ns, L(1), L(-1)) == Element({L(0): 2})
    r, s = h(Fraction(1, 2)), h(Fraction(3, 2))
    assert super_commutator(ns, G(r), G(s)) == Element({L(2): 2})
    assert super_commutator(ns, C, G(r)) == 0
    mixed = Element({L(0): 1, G(r): 1})
    with pytest.raises(ParityError):
        super_commutator(ns, mixed, L(1))


def test_associator_examples(ns):
    assert associator(ns, C, L(1), L(2)) == 0
    assert associator(ns, L(0), L(0), L(0)) == 0
    assert associator(ns, L(1), L(2), L(3)) - associator(ns, L(2), L(1), L(3)) == 0


def test_target_bracket_examples():
    assert target_bracket(NS, L(2), L(-2)) == Element({L(0): 4, C: Fraction(1, 2)})
    a, b = h(Fraction(3, 2)), h(Fraction(-3, 2))
    assert target_bracket(NS, G(a), G(b)) == Element({L(0): 2, C: Fraction(2, 3)})
    assert target_bracket(NS, C, G(a)) == 0


def test_element_strings():
    assert str(Element({L(0): 4, C: Fraction(1, 2)})) == "4*L(0) + (1/2)*c"
    assert str(Element({G(h(Fraction(1, 2))): Fraction(-1, 2)})) == "(-1/2)*G(1/2)"
    assert str(Element({L(0): 1 - e})) == "(1 - e)*L(0)"
    assert str(Element()) == "0"
    assert parse_basis("G(-3/2)") == G(h(Fraction(-3, 2)))
    assert parse_basis("c") == C


def test_specialization_matches_evaluation(ns):
    eps0 = GaussianRational(Fraction(3, 5))
    num = ns.specialize(eps0)
    for x in (L(2), G(h(Fraction(1, 2))), L(-3)):
        for y in (L(-1), G(h(Fraction(-5, 2))), C):
            sym = multiply(ns, x, y)
            assert multiply(num, x, y) == sym.map_coefficients(lambda c: rf_eval(c, eps0))


def test_table_mode_misses_are_loud():
    sys = StructureSystem(NS, Mode.TABLE, tables={"f": {(0, 0): RatFun()}}, central=False)
    assert multiply(sys, L(0), L(0)) == 0
    with pytest.raises(OutOfWindowError):
        sys.coeff_f(1, 1)


def test_override_changes_single_entry(ns):
    sys = ns.with_override("d", (Fraction(1, 2), Fraction(1, 2)), 2)
    assert sys.coeff_d(h(Fraction(1, 2)), h(Fraction(1, 2))) == 2
    assert sys.coeff_d(h(Fraction(3, 2)), h(Fraction(3, 2))) == 1
    assert ns.coeff_d(h(Fraction(1, 2)), h(Fraction(1, 2))) == 1


def test_virasoro_system_is_even_only():
    v = StructureSystem.virasoro()
    assert v.even_only
    with pytest.raises(ModeError):
        v.coeff_g(0, h(0))
