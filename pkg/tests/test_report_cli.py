import json

import pytest

from genus2glue.cli import main
from genus2glue.errors import InvalidField, NotFound, ReportError
from genus2glue.report import (
    CurveRegistry,
    VerificationReport,
    canonical_json,
    construct,
    curve_from_record,
    curve_record,
    digest,
    parse_element,
    parse_isogeny,
    verify_record,
)
from genus2glue.ff import field_create


@pytest.fixture
def registry(tmp_path):
    return tmp_path / "reg.jsonl"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def constructed(capsys, registry, *extra):
    code, out, _ = run(capsys, "--registry", registry, "construct", "--p", 3, "--q-exp", 4, *extra)
    assert code == 0
    return json.loads(out)["record"]


def test_parsers():
    F = field_create(3, 4)
    assert parse_element(F, "5") == 5
    assert parse_element(F, "2,1") == 5
    assert parse_isogeny("frob:1") == ("frob", 1)
    assert parse_isogeny("velu:3") == ("velu", 3)
    with pytest.raises(ValueError):
        parse_isogeny("sideways:2")


def test_construct_validation():
    with pytest.raises(InvalidField):
        construct(2, 1, "frob:1", lam="3")
    E, iso, C = construct(3, 4, "frob:1", lam="5")
    rec = curve_record(C.field, E, iso, C)
    E2, iso2, C2 = curve_from_record(rec)
    assert C2.h == C.h and E2.lam == E.lam


def test_report_rejects_duplicate_ids():
    rep = VerificationReport({})
    rep.run("a", "x", lambda: (True, {}))
    with pytest.raises(ReportError):
        rep.run("a", "x", lambda: (True, {}))
    rep.run("b", "x", lambda: (False, {}))
    assert rep.status == "fail"


def test_registry_roundtrip_and_tamper_detection(registry):
    E, iso, C = construct(3, 4, "frob:1", lam="5")
    reg = CurveRegistry(registry)
    rec = reg.append(curve_record(C.field, E, iso, C))
    assert rec["digest"] == digest({k: v for k, v in rec.items() if k != "digest"})
    assert reg.append(curve_record(C.field, E, iso, C)) == rec
    assert len(reg.curves()) == 1 and reg.get(rec["id"]) == rec
    assert reg.integrity() == []
    with pytest.raises(NotFound):
        reg.get("g2-000000000000")
    lines = registry.read_text().splitlines()
    doc = json.loads(lines[0])
    doc["lambda"] = [1, 1, 0, 0]
    registry.write_text(canonical_json(doc) + "\n")
    assert reg.integrity() == [1]


def test_registry_env(monkeypatch, tmp_path):
    monkeypatch.setenv("GENUS2GLUE_REGISTRY", str(tmp_path / "env.jsonl"))
    assert CurveRegistry().path == tmp_path / "env.jsonl"


def test_core_suite_passes_and_is_deterministic():
    E, iso, C = construct(3, 4, "frob:1", lam="5")
    rec = curve_record(C.field, E, iso, C)
    a, b = verify_record(rec, "core"), verify_record(rec, "core")
    assert a.status == "pass"
    assert a.dumps() == b.dumps()
    assert "timing" not in a.to_json() and "timing" in a.to_json(include_timing=True)


def test_cli_construct_and_verify(capsys, registry, tmp_path):
    rec = constructed(capsys, registry, "--lambda", "5")
    assert rec["id"].startswith("g2-") and len(rec["id"]) == 15
    again = constructed(capsys, registry, "--lambda", "2,1")
    assert again["id"] == rec["id"]
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "--registry", registry, "verify", "--id", rec["id"], "--suite", "core")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert doc["schema"] == "report_v1" and doc["status"] == "pass"
    figs = tmp_path / "figs"
    code, _, _ = run(capsys, "--registry", registry, "verify", "--id", rec["id"], "--figures", figs)
    assert code == 0
    assert {p.name for p in figs.iterdir()} >= {"report.json", "checks.png", "lpoly.png"}


def test_cli_auto_is_reproducible(capsys, registry):
    a = constructed(capsys, registry, "--auto", "--seed", 3)
    b = constructed(capsys, registry, "--auto", "--seed", 3)
    assert a == b


@pytest.mark.parametrize("argv", [
    ["construct", "--p", 2, "--lambda", 3],
    ["construct", "--p", 3, "--q-exp", 1, "--lambda", 2],
    ["construct", "--p", 3, "--q-exp", 4, "--lambda", 1],
    ["verify", "--id", "g2-ffffffffffff"],
    ["tower", "--p", 3, "--N", 3, "--t", 1, "--r", 5],
    ["example1", "--p", 3, "--q-exp", 2],
])
def test_cli_input_errors(capsys, registry, argv):
    code, _, err = run(capsys, "--registry", registry, *argv)
    assert code == 2


def test_cli_tampered_registry_is_refused(capsys, registry):
    rec = constructed(capsys, registry, "--lambda", "5")
    text = registry.read_text().replace('"frob"', '"velu"')
    registry.write_text(text)
    code, _, err = run(capsys, "--registry", registry, "verify", "--id", rec["id"])
    assert code == 2 and "digest" in err


def test_cli_tower(capsys, tmp_path):
    code, out, _ = run(capsys, "tower", "--p", 3, "--N", 3, "--t", 2, "--r", 4,
                       "--criterion-max-n", 4, "--figures", tmp_path)
    assert code == 0
    doc = json.loads(out)
    assert doc["tower"]["degrees"] == [218, 866]
    assert doc["tower"]["kummer"]["degree"] == 16
    assert (tmp_path / "tower.png").exists()


def test_cli_example1(capsys):
    code, out, _ = run(capsys, "example1", "--p", 3, "--q-exp", 4)
    assert code == 0
    doc = json.loads(out)
    assert {c["id"] for c in doc["checks"]} >= {"example1.pgl2", "example1.lpoly"}
