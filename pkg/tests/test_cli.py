import io
import json
import subprocess
import sys

import pytest

from conftest import MODELS
from lgcy.cli import EXIT_INVALID, EXIT_OK, EXIT_PARSE, run


def call(*argv):
    out = io.StringIO()
    status = run([str(a) for a in argv], out)
    return status, out.getvalue()


def test_verify_quintic():
    status, text = call("verify", MODELS / "quintic.json")
    assert status == EXIT_OK
    assert "correspondence: PASS" in text and "h^(2,1) = 101" in text


def test_pair_p123_text():
    status, text = call("pair", MODELS / "p123.json", "--format", "text")
    assert status == EXIT_OK
    assert "t = 0: Bx1:0 Bx2:1 Bx3:2 Wd1:1 Wd2:0" in text
    assert "t = 1/2: Wd1:2 Wd2:1 Bx2:1" in text
    assert "t = 3/4: Wd2:2" in text


def test_pair_p123_json():
    status, text = call("pair", MODELS / "p123.json", "--format", "json")
    doc = json.loads(text)
    labels = [d["f"] for d in doc["diagrams"][0]["dots"]]
    assert labels == [0, 1, 2, 2, 2, 2, 1, 1, 2, 2, 1, 0]
    assert doc["certificate"][0] == {"component": 0, "black": {"j": 1, "t": "0"},
                                     "white": {"i": 2, "t": "0"}, "f": 0, "degree": "0"}


def test_validate_bad_cy():
    status, text = call("validate", MODELS / "bad_cy.json")
    assert status == EXIT_INVALID
    assert "[fail] calabi_yau: sum of degrees 3 != sum of weights 2" in text


def test_parse_failure_is_distinct(capsys):
    status, _ = call("validate", MODELS / "bad_syntax.json")
    assert status == EXIT_PARSE
    assert "parse error" in capsys.readouterr().err
    status, text = call("cy", MODELS / "bad_syntax.json", "--format", "json")
    assert status == EXIT_PARSE and "x0" in json.loads(text)["error"]


def test_missing_file():
    assert call("cy", MODELS / "nope.json")[0] == EXIT_PARSE


def test_other_verbs_refuse_invalid():
    status, text = call("cy", MODELS / "bad_cy.json")
    assert status == EXIT_INVALID and "invalid model" in text


def test_verify_refuses_singular():
    status, text = call("verify", MODELS / "singular.json", "--format", "json")
    assert status == EXIT_INVALID
    doc = json.loads(text)
    assert doc["refused"]
    qs = next(c for c in doc["validation"]["checks"] if c["name"] == "quasi_smooth")
    assert qs["status"] == "unverified"


@pytest.mark.parametrize("verb", ["sectors", "cy", "lg", "bundles", "pair", "report", "verify"])
def test_deterministic(verb):
    a = call(verb, MODELS / "p123.json", "--format", "json")
    b = call(verb, MODELS / "p123.json", "--format", "json", "--jobs", "2")
    assert a == b and a[0] == EXIT_OK


def test_text_and_json_agree():
    _, text = call("cy", MODELS / "quintic.json")
    _, js = call("cy", MODELS / "quintic.json", "--format", "json")
    for row in json.loads(js)["table"]:
        assert f"h^({row['p']},{row['q']}) = {row['h']}" in text


def test_options_override():
    status, text = call("cy", MODELS / "quintic.json", "--prime", "1000033",
                        "--verify-prime", "1000037")
    assert status == EXIT_OK and "h^(1,2) = 101" in text
    status, _ = call("cy", MODELS / "quintic.json", "--prime", "1000001")
    assert status == EXIT_INVALID


def test_side_flag():
    _, text = call("sectors", MODELS / "quintic.json", "--side", "lg", "--format", "json")
    assert [s["t"] for s in json.loads(text)["sectors"]] == ["0", "1/5", "2/5", "3/5", "4/5"]
    _, text = call("bundles", MODELS / "quintic.json", "--side", "cy")
    assert "CY bundle" in text and "LG bundle" not in text


def test_report():
    status, text = call("report", MODELS / "quintic.json", "--format", "json")
    doc = json.loads(text)
    assert doc["cy"]["euler_characteristic"] == -200
    assert doc["lg"]["narrow"] == 4 and doc["lg"]["broad"] == 204


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lgcy", "lg", str(MODELS / "p123.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "h^(0,0) = 4" in proc.stdout
