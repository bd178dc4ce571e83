import json
from dataclasses import replace
from fractions import Fraction

import pytest

from lsvir.deriver import (
    DerivationTrace,
    ReplayError,
    cross_check,
    derive_central,
    derive_centerless,
)
from lsvir.equations import Unknown
from lsvir.exactfield import RatFun
from lsvir.structures import HalfInt, Sector, StructureSystem

e = RatFun.eps()
NS, R = Sector.NEVEU_SCHWARZ, Sector.RAMOND
h = HalfInt.of


@pytest.fixture(scope="module", params=[NS, R], ids=["ns", "ramond"])
def centerless(request):
    return request.param, *derive_centerless(request.param, 4)


@pytest.fixture(scope="module", params=[NS, R], ids=["ns", "ramond"])
def central(request):
    return request.param, *derive_central(request.param, 4)


def test_centerless_closed_form(centerless):
    sector, u, trace = centerless
    assert u.complete
    assert u.radius >= 2
    assert u.D and all(v == 1 for v in u.D.values())
    assert all(v == -m for (r, m), v in u.H.items())
    assert all(v == Fraction(-m, 2) - r.value for (m, r), v in u.G.items())


def test_every_box_entry_is_derived(centerless):
    sector, u, _ = centerless
    missing = [k for k in u.keys_in_box(u.radius) if k not in u.values]
    assert not missing


def test_seed_and_forced_values(centerless):
    sector, u, trace = centerless
    seeded = {k for t in trace.by_step("seed-diagonal") for k in t.assigned}
    assert seeded and all(k.family == "D" and k.a == k.b for k in seeded)
    forced = {k: v for t in trace.by_step("forced-values") for k, v in t.assigned.items()}
    assert any(k.family == "H" for k in forced)
    for k, v in forced.items():
        if k.family == "H":
            assert v == -k.b


def test_cross_check_clean_and_sensitive(centerless):
    sector, u, _ = centerless
    sys = StructureSystem.centerless(sector)
    assert not cross_check(u, sys)
    r = sector.odd(0)
    bad = sys.with_override("d", (r.value, r.value), 3)
    rep = cross_check(u, bad)
    assert [(v.identity, dict(v.indices)) for v in rep.entries] == [("cross-check-d", {"r": r, "s": r})]


def test_cross_check_numeric():
    u, _ = derive_centerless(NS, 4)
    sys = StructureSystem.centerless(NS).specialize(Fraction(3, 5))
    rep = cross_check(u, sys)
    assert rep.ok and rep.checked == len(u.values)


def test_replay_rebuilds_tables(centerless):
    _, u, trace = centerless
    assert trace.replay() == u.values


def test_trace_jsonl_shape(centerless):
    _, _, trace = centerless
    lines = trace.to_jsonl().splitlines()
    assert len(lines) == len(trace)
    for line in lines:
        rec = json.loads(line)
        assert {"step", "kind", "equation", "instance", "assigned"} <= rec.keys()
        assert rec["kind"] in {"assign", "relation", "branch", "branch-info", "unavailable", "undetermined"}


def test_ramond_branch_eliminates_spurious_root():
    u, trace = derive_centerless(R, 4)
    cands = trace.by_step("branch-candidates")
    gone = trace.by_step("branch-eliminated")
    chosen = trace.by_step("branch-select")
    assert cands and gone and chosen
    notes = " ".join(t.note for t in gone)
    # the rejected root at m = 1 and m = -1
    assert str(-1 / (1 + e)) in notes
    assert str(1 / (1 - e)) in notes
    for t in chosen:
        m = t.instance["m"]
        assert t.assigned[Unknown("D", h(0), h(m))] == 1
    assert {t.instance["m"] for t in chosen} == {-2, -1, 1, 2}


def test_small_ramond_window_is_undetermined():
    u, trace = derive_centerless(R, 2)
    assert not u.complete
    assert any("branch" in msg for msg in u.undetermined)


def test_small_ns_window_still_solves():
    u, _ = derive_centerless(NS, 2)
    assert u.complete and u.radius >= 1
    assert not cross_check(u, StructureSystem.centerless(NS))


def test_window_validation():
    with pytest.raises(ValueError):
        derive_centerless(NS, -1)


def test_central_values(central):
    sector, c, trace = central
    assert c.complete and c.radius >= 2
    assert all(v == 0 for v in c.psi.values()) and all(v == 0 for v in c.rho.values())
    for (r, s), v in c.sigma.items():
        if r.doubled + s.doubled:
            assert v == 0
    if sector is NS:
        assert c.get("sigma", h(Fraction(1, 2)), h(Fraction(-1, 2))) == (e * e - 1) / (24 * e)
    else:
        assert c.get("sigma", h(0), h(0)) == Fraction(-1, 24)
        assert any("reconstructed" in t.note for t in trace if Unknown("sigma", h(0), h(0)) in t.assigned)


def test_central_cross_check_and_replay(central):
    sector, c, trace = central
    assert not cross_check(c, StructureSystem.central_extension(sector))
    assert trace.replay() == c.values
    rep = cross_check(c, StructureSystem.central_extension(sector).with_override("psi", (1, sector.odd(0).value), 1))
    assert rep.identities() == {"cross-check-psi"}


def test_replay_detects_tampering(centerless):
    _, u, trace = centerless
    forged = DerivationTrace(trace.families, trace.ctx)
    entries = list(trace)
    for t in entries:
        forged.append(t)
    idx = next(i for i, t in enumerate(entries) if t.kind == "assign" and t.equation and t.assigned)
    t = entries[idx]
    key = next(iter(t.assigned))
    forged.entries[idx] = replace(t, assigned={**t.assigned, key: t.assigned[key] + 1})
    with pytest.raises(ReplayError):
        forged.replay()
