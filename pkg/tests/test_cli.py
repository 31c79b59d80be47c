import io as _io
import json
from pathlib import Path

import pytest

from infometric.cli import main

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def run(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_validate_fix_p2():
    code, out, _ = run("validate", "fix_p2")
    assert code == 0
    assert out.strip() == "monoid OK, length OK (monotone)"


def test_check_fix_bad_reports_witness():
    code, out, _ = run("check", "fix_bad")
    assert code == 0
    assert "delta_holds=false (witness {x}, {y}, {z})" in out
    code, out, _ = run("check", "fix_bad", "--json")
    rep = json.loads(out)
    assert rep["delta_holds"] == {"holds": False, "witness": ["{x}", "{y}", "{z}"]}


def test_fixpoint_fix_bad():
    code, out, _ = run("fixpoint", "fix_bad", "--variant", "d", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["iterations"] == 2
    assert all(rep[f"final_{k}"]["holds"] for k in ("delta", "nabla", "weak_nabla"))
    assert rep["length"]["{x,z}"] == "2"
    assert rep["table"]["rows"][0][1] == "2"


def test_sigma_fixpoint_reports_bounds():
    code, out, _ = run("fixpoint", "fix_bad", "--variant", "sigma")
    assert "sigma bounds hold: true" in out


def test_distances_jobs_are_deterministic():
    a = run("distances", "fix_bad", "--variant", "sigma", "--p", "2", "--json")[1]
    b = run("distances", "fix_bad", "--variant", "sigma", "--p", "2", "--json", "--jobs", "2")[1]
    assert a == b
    # sigma_2({}, {x,z}) = (4^2 + 0^2)^(1/2), a float for p != 1
    assert json.loads(a)["table"]["rows"][0][5] == "4.0"


def test_float_rendering():
    out = run("distances", "fix_p2", "--float", "--json")[1]
    assert json.loads(out)["table"]["rows"][0][3] == "2.0"


def test_zeta_and_oracle():
    code, out, _ = run("zeta", "fix_p2", "--expr", "{1,2} \\ {2}")
    assert code == 0 and out.strip() == "zeta({1,2} \\ {2}) = 1"
    code, out, _ = run("oracle", str(DATA / "weighted_sets.json"), "--expr", "{1,2} & {2,3}", "--jobs", "2")
    assert code == 0 and "true" in out


def test_quotient_and_close():
    code, out, _ = run("quotient", "fix_bad", "--ideal", "--json")
    rep = json.loads(out)
    assert code == 0 and len(rep["classes"]) == 2
    code, out, _ = run("quotient", "fix_bad")
    assert code == 1 and "NotPseudometric" in out
    code, out, _ = run("close", "fix_bad", "--json")
    rep = json.loads(out)
    assert rep["closed_delta"]["holds"] and rep["closed_nabla"]["holds"]


def test_hom_and_banach_mazur():
    path = str(DATA / "three_objects.json")
    code, out, _ = run("banach-mazur", path, "A", "B")
    assert code == 0 and "= inf" in out
    code, out, _ = run("banach-mazur", path, "A", "Z")
    assert code == 2


def test_random_requires_seed_and_is_reproducible(tmp_path):
    code, _, err = run("random")
    assert code == 2 and "--seed" in err
    a = run("random", "--seed", "5")[1]
    assert a == run("random", "--seed", "5")[1]
    for kind in ("set", "nonmonotone", "monotone"):
        code, out, _ = run("random", "--seed", "5", "--kind", kind, "--json")
        path = tmp_path / f"{kind}.json"
        path.write_text(json.dumps(json.loads(out)["instance"]))
        assert run("validate", str(path))[0] == 0


def test_missing_file_is_a_validation_failure():
    assert run("validate", "no/such/file.json")[0] == 1


def test_usage_and_validation_errors(tmp_path):
    assert run()[0] == 2
    assert run("bogus")[0] == 2
    assert run("distances", "fix_p2", "--p", "1/2")[0] == 2
    assert run("distances", "fix_p2", "--jobs", "0")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"elements": ["e", "a"], "neutral": "e", "join": [["e", "a"], ["a", "e"]]}))
    code, out, _ = run("validate", str(bad))
    assert code == 1 and "NotIdempotent" in out
    assert run("zeta", "fix_p2")[0] == 2
    assert run("zeta", "fix_p2", "--expr", "{1} &")[0] == 1


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "infometric", "validate", "fix_p2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "length OK" in r.stdout
