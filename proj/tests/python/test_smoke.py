import pathlib

import pytest

import devaudit

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def read(name):
    return (DATA / name).read_text()


def test_square_frame():
    frame = devaudit.Frame(read("frames/square.frame"))
    assert len(frame) == 4
    assert frame.agents == 2
    assert devaudit.check_dev_laws(frame) == []
    assert frame.related("{1}", "s00", "s10")
    assert devaudit.factor_closure(frame, ["s00", "s01", "s10", "s11"]) is None
    assert devaudit.factor_closure(frame, ["s01", "s10"]) == ("s01", "{1}", "{2}", "s10")


def test_corner_deletion_violates_laws():
    frame = devaudit.Frame(read("frames/square_minus_corner.frame"))
    assert devaudit.check_dev_laws(frame)


def test_model_check():
    frame = devaudit.Frame(read("frames/square.frame"))
    assert devaudit.model_check(frame, read("frames/square.val"), "<{1}>q") == ["s01", "s11"]


def test_plurality_witness():
    rule = devaudit.Rule(read("rules/plurality.rule"))
    assert rule("a > b > c; b > a > c; c > b > a") == "a"
    w = devaudit.strategy_proofness_witness(rule)
    assert w is not None
    assert w["x"] == "a" and w["y"] == "b"


def test_median_replay():
    sp = "singlepeaked a < b < c < d"
    base = devaudit.Rule(read("rules/median5.rule"))
    ext = devaudit.Rule(read("rules/median5_extended.rule"))
    witness = read("witness/median5.witness")
    assert devaudit.strategy_proofness_witness(base, sp) is None
    assert devaudit.replay(base, witness, sp) == "edge-deleted"
    assert devaudit.replay(ext, witness, sp) == "boundary-witness"
    assert devaudit.replay(ext, witness, sp, read("witness/median5_survivors.txt")) == "unsafe-update"


def test_single_peaked_count():
    for m in range(1, 7):
        orders = devaudit.generate_single_peaked([chr(ord("a") + i) for i in range(m)])
        assert len(orders) == 2 ** (m - 1)
        assert len(set(orders)) == len(orders)


def test_certificates():
    assert devaudit.verify_certificate(read("certs/good.cert")) is None
    assert devaudit.verify_certificate(read("certs/bad_diamond.cert"))[0] == "diamond-row"
    assert devaudit.verify_certificate(read("certs/bad_union.cert"))[0] == "union-row"


def test_search_and_cli():
    sat, text = devaudit.search("non-product-component")
    assert sat and text.startswith("SAT non-product-component")
    code, out, _ = devaudit.run_cli(["verify-cert", str(DATA / "certs/good.cert")])
    assert code == 0 and out.startswith("ACCEPT")


def test_errors():
    with pytest.raises(devaudit.DevauditError):
        devaudit.formula_text("<{3}>p", 2)
    with pytest.raises(ValueError):
        devaudit.Frame("agents: 2\nstates: a\nrel {1}: (a,b)\n")
    assert devaudit.formula_text("(p <-> q)", 1).startswith("(")
