"""The classification runner and its targeted sub-scans."""

from __future__ import annotations

import json

import numpy as np
import pytest

import biproj.classify as cl
from biproj.biprojective import BiprojectiveFunction, act, is_apn_projective
from biproj.gf2l import FieldSpec, SubfieldParams, field
from biproj.literals import parse_function, parse_matrix
from biproj.projective import QProjectivePoly


def run(l, k, **kw):
    return cl.classify(field(l), SubfieldParams(k, l), **kw)


def replay_witnesses(rep: cl.ClassificationReport, spec):
    anchors = {name: F for _, name, F in cl.anchor_orbits(spec, SubfieldParams(rep.k, rep.l))}
    for c in rep.classes:
        for o in c.orbits:
            sample = parse_function(o["sample"], spec)
            w = o["witness"]
            got = act(anchors[o["name"]], parse_matrix(w["left"], spec), parse_matrix(w["right"], spec))
            assert got == sample


def test_encode_decode():
    for l in (3, 5):
        for x in (0, 1, 12345 % (1 << 4 * l), (1 << 4 * l) - 1):
            assert cl.encode(cl.decode(x, l), l) == x
    xs = np.arange(100)
    assert [tuple(r) for r in cl.decode_array(xs, 3).tolist()] == [cl.decode(int(x), 3) for x in xs]


def test_l3_k1_classes_and_kappa_condition():
    rep = run(3, 1)
    assert rep.agrees and rep.discrepancies == []
    assert rep.class_names == ["G_q+1", "kappa"]
    kc = rep.extra["kappa_condition"]
    assert kc["holds"] and kc["surviving_ratios"] == ["2", "4", "6"]
    kappa_info = next(c for c in rep.classes if c.anchor == "kappa")
    assert [o["name"] for o in kappa_info.orbits] == ["kappa[0]", "kappa[1]", "kappa[2]"]
    assert all(c.witnessed == c.member_count for c in rep.classes)
    replay_witnesses(rep, field(3))


def test_l3_k2():
    rep = run(3, 2)
    assert rep.agrees and rep.class_names == ["G_q+r", "kappa"]


@pytest.mark.parametrize("k", [1, 3])
def test_l4_gold_classes(k):
    rep = run(4, k)
    assert rep.agrees and rep.class_names == ["G_q+1", "G_q+r"]
    replay_witnesses(rep, field(4))


def test_l4_gcd_two_is_empty():
    rep = run(4, 2)
    assert rep.apn_pairs_found == 0 and rep.agrees
    assert rep.summary_line() == "gcd(k,l)=2 > 1: 0 APN functions"
    assert rep.mode == "orbit-representatives"


def test_orbit_representatives_cover_v():
    # every f in V is equivalent to some orbit representative: orbit sizes add up
    from biproj.projective import apply_action, iter_pgl
    L, p = field(3), SubfieldParams(1, 3)
    reps = cl.orbit_representatives(L, p)
    seen = set()
    for r in reps:
        orbit = {apply_action(r, a, m).coeffs for a in L.nonzero() for m in iter_pgl(L)}
        assert not (orbit & seen)
        seen |= orbit
    assert len(seen) == 1 << 12


def test_full_scan_l3_consistent():
    rep = run(3, 1, full=True)
    info = rep.extra["full_cross_check"]
    assert info["consistent"] and info["unmapped"] == 0
    assert rep.agrees and rep.mode == "full"
    assert rep.apn_pairs_found == sum(info["class_counts"].values())


def test_resource_caps():
    with pytest.raises(cl.ResourceLimitError, match="allow-l6"):
        run(6, 1)
    with pytest.raises(cl.ResourceLimitError):
        run(7, 1, allow_l6=True)
    with pytest.raises(cl.ResourceLimitError):
        run(4, 1, full=True)


def test_checkpoint_resume(tmp_path, monkeypatch):
    path = tmp_path / "ck.json"
    first = run(4, 1, checkpoint=path)
    data = json.loads(path.read_text())
    assert data["version"] == cl.CHECKPOINT_VERSION and data["l"] == 4
    assert len(data["done"]) == len(cl.representative_set(field(4), SubfieldParams(1, 4)))

    # a complete checkpoint: nothing is rescanned
    def boom(*a, **k):
        raise AssertionError("rescanned a finished shard")
    monkeypatch.setattr(cl, "scan_partners", boom)
    again = run(4, 1, checkpoint=path)
    assert again.to_json() == first.to_json()
    monkeypatch.undo()

    # an interrupted run: drop half the shards and resume
    keys = sorted(data["done"])
    for key in keys[::2]:
        del data["done"][key]
    path.write_text(json.dumps(data))
    calls = []
    real = cl.scan_partners
    monkeypatch.setattr(cl, "scan_partners", lambda *a, **k: calls.append(1) or real(*a, **k))
    resumed = run(4, 1, checkpoint=path)
    assert len(calls) == len(keys[::2])
    assert resumed.to_json() == first.to_json()


def test_checkpoint_header_mismatch(tmp_path):
    path = tmp_path / "ck.json"
    run(3, 1, checkpoint=path)
    with pytest.raises(ValueError, match="checkpoint is for"):
        run(3, 2, checkpoint=path)


def test_deterministic_json():
    a = run(3, 1).to_json()
    b = run(3, 1).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert "runtime_seconds" not in a


def test_other_modulus_same_counts():
    L1, L2 = field(4), FieldSpec(4, 0x19)
    r1 = cl.classify(L1, SubfieldParams(1, 4))
    r2 = cl.classify(L2, SubfieldParams(1, 4))
    assert r1.apn_pairs_found == r2.apn_pairs_found
    assert sorted(c.member_count for c in r1.classes) == sorted(c.member_count for c in r2.classes)
    assert r2.class_names == ["G_q+1", "G_q+r"]


def test_survivors_are_apn():
    L, p = field(4), SubfieldParams(1, 4)
    f = cl.representative_set(L, p)[-1]
    surv = cl.scan_partners(L, p, f)
    assert len(surv)
    for g in surv[:50].tolist():
        assert is_apn_projective(BiprojectiveFunction(f, QProjectivePoly.of(cl.decode(g, 4), L, p)))
    # scanning in two halves gives the same survivors
    half = 1 << 15
    parts = np.concatenate([cl.scan_partners(L, p, f, 0, half), cl.scan_partners(L, p, f, half, half)])
    assert np.array_equal(parts, surv)


@pytest.mark.parametrize("l", [4, 5])
def test_s_cases(l):
    for k in (1, 2 if l == 5 else 3):
        rep = cl.verify_s_cases(field(l), SubfieldParams(k, l))
        assert rep.ok and all(c["apn_partners"] == 0 for c in rep.cases)


def test_s_cases_l3_exception():
    rep = cl.verify_s_cases(field(3), SubfieldParams(1, 3))
    assert rep.ok
    xyq = next(c for c in rep.cases if c["case"] == "f = x y^q")
    assert xyq["apn_partners"] > 0 and xyq["expected_exception"]
    zero = next(c for c in rep.cases if c["case"] == "f in {0, y^(q+1)}")
    assert zero["apn_partners"] == 0


@pytest.mark.parametrize("l,k", [(4, 1), (4, 3), (5, 1), (5, 2)])
def test_parity_cases(l, k):
    rep = cl.verify_parity_cases(field(l), SubfieldParams(k, l))
    assert rep.ok
    for c in rep.cases:
        assert c["unmatched"] == 0
    if l == 4:
        c = rep.cases[0]
        assert c["fractional_permutations"] == c["apn_partners"] > 0
    else:
        names = {n for c in rep.cases for n, v in c["matched"].items() if v}
        assert names == ({"G_q+1"} if k % 2 else {"G_q+r"})


def test_set_threads():
    n = cl.set_threads(1)
    assert n == 1
    assert cl.set_threads(10 ** 6) >= 1
    cl.set_threads()
