from fractions import Fraction

import pytest

import mpeccq


def test_version():
    assert mpeccq.__version__ == "0.1.0"


def test_extreme_multipliers(problems_dir):
    ext = mpeccq.extreme_multipliers(str(problems_dir / "ex41.toml"))
    assert sorted(ext) == [[0, 1], [1, 0]]
    assert all(isinstance(x, Fraction) for v in ext for x in v)


def test_analyze(problems_dir):
    r = mpeccq.analyze(str(problems_dir / "ex41.toml"))
    assert r["status"] == "OK"
    assert r["result"]["multiplier_set"]["eq"] == [["1", "1"]]
    assert r["result"]["uniqueness"]["unique"] is False


def test_certify(problems_dir):
    v = mpeccq.certify(str(problems_dir / "ex41.toml"))
    assert v["status"] == "HOLDS"
    assert [p["status"] for p in v["prerequisites"]] == ["HOLDS"] * 3
    assert mpeccq.certify(str(problems_dir / "ex41.toml"), threads=4) == v


def test_diagnose(problems_dir):
    r = mpeccq.diagnose(str(problems_dir / "ex41.toml"), ["1/2", "1/2"])
    assert r["exit_code"] == 1
    assert r["result"]["mpcc_licq"]["status"] == "FAILS"
    assert r["result"]["index_sets"]["I_g"] == [1, 2]
    assert r["result"]["index_sets"]["I_0"] == []


def test_probe(problems_dir):
    r = mpeccq.probe(str(problems_dir / "ex41.toml"), "--lambda", "1/2,1/2", "--direction", "3,0,2,0,0,0,0")
    assert r["result"]["kind"] == "numerical evidence"
    assert min(r["result"]["report"]["ratio"]) >= 0.05


def test_errors(problems_dir):
    code, r = mpeccq.run("analyze", str(problems_dir / "missing.toml"))
    assert code == 64 and r["status"] == "ERROR"
    with pytest.raises(mpeccq.MpecCqError):
        mpeccq.extreme_multipliers(str(problems_dir / "missing.toml"))
