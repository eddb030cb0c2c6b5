import json
import subprocess
import sys

import pytest

from hforge.chm import ComplexHadamardMatrix, fixture, verify_chm
from hforge.cli import CATALOGUE, CommandConfig, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_then_verify(tmp_path, capsys):
    path = tmp_path / "w9a.json"
    code, _, _ = call(capsys, "construct", "theorem2", "--q", "9", "--sign", "+", "-o", str(path))
    assert code == 0
    code, out, _ = call(capsys, "verify", str(path))
    assert code == 0 and json.loads(out)["ok"]


@pytest.mark.parametrize(
    "argv",
    [
        ["theorem1", "--q", "7", "--sign", "-"],
        ["theorem1", "--sylvester", "4"],
        ["theorem2", "--q", "13"],
        ["theorem3", "--sylvester", "3"],
        ["theorem3", "--q", "5", "--sign", "-"],
        ["sylvester", "--t", "3"],
        ["fourier", "--n", "5"],
    ],
)
def test_every_construction_verifies(argv, tmp_path, capsys):
    path = tmp_path / "m.json"
    assert call(capsys, "construct", *argv, "-o", str(path))[0] == 0
    assert call(capsys, "verify", str(path))[0] == 0


def test_induce_from_user_design(tmp_path, capsys):
    from hforge.designs import biplane_16, save_matrix

    save_matrix(biplane_16().incidence, tmp_path / "b.json")
    code, out, _ = call(capsys, "construct", "induce", "--design", str(tmp_path / "b.json"))
    assert code == 0 and verify_chm(ComplexHadamardMatrix.from_json(json.loads(out)))


def test_verify_failure_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rows": [[1, 1], [1, 1]]}))
    code, out, _ = call(capsys, "verify", str(bad))
    assert code == 1 and json.loads(out)["reason"] == "rows not orthogonal"


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as err:
        run(["frobnicate"])
    assert err.value.code == 2
    assert call(capsys, "construct", "theorem2")[0] == 2
    assert call(capsys, "catalogue", "--export", "N9")[0] == 2
    assert call(capsys, "catalogue", "--workers", "0")[0] == 2


def test_infeasible_design_exits_1(tmp_path, capsys):
    from hforge.designs import save_matrix

    # projective plane of order 3 from the difference set {0, 1, 3, 9} mod 13
    inc = [[1 if (j - i) % 13 in (0, 1, 3, 9) else 0 for j in range(13)] for i in range(13)]
    save_matrix(inc, tmp_path / "d.json")
    code, _, err = call(capsys, "construct", "induce", "--design", str(tmp_path / "d.json"))
    assert code == 1 and "infeasible" in err.lower()
    assert call(capsys, "construct", "theorem3", "--q", "7")[0] == 1


def test_fingerprint_text_uses_surds(tmp_path, capsys):
    fixture("P7").save(tmp_path / "p7.json")
    code, out, _ = call(capsys, "invariant", "fingerprint", str(tmp_path / "p7.json"), "--dmax", "3", "--format", "text")
    assert code == 0
    assert out.splitlines()[0] == "d=2: (0, 54), (1, 114), (√3, 177), (2, 96)"
    assert "(2√3, 216)" in out and "(√21, 108)" in out


def test_haagerup_and_compare(tmp_path, capsys):
    fixture("U15").save(tmp_path / "u.json")
    fixture("V15").save(tmp_path / "v.json")
    code, out, _ = call(capsys, "invariant", "haagerup", str(tmp_path / "u.json"))
    assert code == 0 and json.loads(out)["backend"] == "exact"
    code, out, _ = call(capsys, "compare", str(tmp_path / "u.json"), str(tmp_path / "v.json"))
    res = json.loads(out)
    assert code == 0 and res["result"] == "certificate" and res["kind"] == "haagerup"


def test_output_is_worker_independent(tmp_path, capsys):
    fixture("U15").save(tmp_path / "u.json")
    outs = {call(capsys, "invariant", "fingerprint", str(tmp_path / "u.json"), "--dmax", "2", "--workers", str(w))[1] for w in (1, 2)}
    assert len(outs) == 1
    call(capsys, "construct", "sylvester", "--t", "4", "-o", str(tmp_path / "h16.json"))
    outs = {call(capsys, "census", "--matrix", str(tmp_path / "h16.json"), "--d", "8", "--count", "5000", "--seed", "1", "--workers", str(w))[1] for w in (1, 2)}
    assert len(outs) == 1


def test_duality_command(tmp_path, capsys):
    call(capsys, "construct", "sylvester", "--t", "3", "-o", str(tmp_path / "h8.json"))
    code, out, _ = call(capsys, "duality", str(tmp_path / "h8.json"), "--d", "2")
    assert code == 0 and json.loads(out)["ok"]


def test_budget_exhaustion_exits_1(tmp_path, capsys):
    fixture("U15").save(tmp_path / "u.json")
    code, _, err = call(capsys, "invariant", "fingerprint", str(tmp_path / "u.json"), "--budget-minors", "10")
    assert code == 1 and "budget" in err


def test_catalogue(tmp_path, capsys):
    code, out, _ = call(capsys, "catalogue")
    names = [e["name"] for e in json.loads(out)["entries"]]
    assert names == ["F3", "C7A", "C7B", "C11A", "C11B", "U15", "V15", "P7", "W9A", "W9B", "W13A", "W13B"]
    for name in CATALOGUE:
        path = tmp_path / f"{name}.json"
        assert call(capsys, "catalogue", "--export", name, "-o", str(path))[0] == 0
        assert call(capsys, "verify", str(path))[0] == 0


def test_config_validation():
    with pytest.raises(ValueError):
        CommandConfig("verify", workers=0)


def test_console_script(tmp_path):
    r = subprocess.run([sys.executable, "-m", "hforge.cli", "catalogue", "--format", "text"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("F3")
