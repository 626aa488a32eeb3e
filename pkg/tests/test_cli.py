import json
import subprocess
import sys

import pytest

from zerocohom.cli import main
from zerocohom.monoid import BUILTIN_MONOIDS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def test_list_builtins(capsys):
    code, out, _ = run(capsys, "--list-builtins")
    assert code == 0
    for name in BUILTIN_MONOIDS:
        assert name in out
    assert "trivial-Z" in out and "zero-module" in out and "bar:" in out


def test_validate_builtin(capsys):
    code, out, _ = run(capsys, "validate", "--monoid", "example-uvw")
    assert code == 0 and out.startswith("valid")


def test_validate_corrupted_table(capsys, tmp_path):
    doc = {"elements": ["1", "a", "b", "0"], "identity": "1", "zero": "0",
           "table": [["1", "a", "b", "0"], ["a", "b", "a", "0"],
                     ["b", "a", "a", "0"], ["0", "0", "0", "0"]]}
    code, out, _ = run(capsys, "validate", "--monoid", write(tmp_path, "m.json", doc),
                       "--format", "json")
    rep = json.loads(out)
    assert code == 1 and rep["error"] == "NotAssociative" and len(rep["witness"]) == 3


def test_validate_missing_zero_row(capsys, tmp_path):
    doc = {"elements": ["1", "a", "0"], "identity": "1", "zero": "0",
           "table": [["1", "a", "0"], ["a", "a", "0"]]}
    code, _, err = run(capsys, "validate", "--monoid", write(tmp_path, "m.json", doc))
    assert code == 2 and "missing row for '0'" in err


def test_json_syntax_error_has_position(capsys, tmp_path):
    code, _, err = run(capsys, "validate", "--monoid",
                       write(tmp_path, "m.json", '{"elements": [\n  "1", }'))
    assert code == 2 and "line 2, column" in err


def test_cohomology_examples(capsys):
    code, out, _ = run(capsys, "cohomology", "--monoid", "z2-with-zero", "--coeff",
                       "trivial-Z", "--max-degree", "2")
    assert code == 0
    assert "H^0 = Z\nH^1 = 0\nH^2 = Z/2" in out
    code, out, _ = run(capsys, "cohomology", "--monoid", "example-uvw", "--coeff",
                       "zero-module:z2:identity", "--max-degree", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["cohomology"][2] != {"free_rank": 0, "torsion": []}
    code, out, _ = run(capsys, "cohomology", "--monoid", "trivial", "--max-degree", "3")
    assert "H^0 = Z\nH^1 = 0\nH^2 = 0\nH^3 = 0" in out
    assert "|Ner_n|: 1 1 1 1" in out


def test_timing_goes_to_stderr(capsys):
    _, out, err = run(capsys, "cohomology", "--monoid", "m3")
    assert "time:" in err and "time:" not in out


def test_guardrail(capsys):
    code, _, err = run(capsys, "cohomology", "--monoid", "m3", "--max-degree", "5")
    assert code == 2 and "--force" in err
    code, _, _ = run(capsys, "cohomology", "--monoid", "trivial", "--max-degree", "5",
                     "--force")
    assert code == 0


def test_bad_coefficient_name(capsys):
    code, _, err = run(capsys, "cohomology", "--monoid", "m3", "--coeff", "nonsense")
    assert code == 2 and "unknown coefficient" in err


def test_coefficient_files(capsys, tmp_path):
    zm = write(tmp_path, "zm.json", {"kind": "zero-module", "group": [2],
                                     "action": {"u": [[1]], "v": [[1]], "w": [["1"]]}})
    code, out, _ = run(capsys, "cohomology", "--monoid", "example-uvw", "--coeff", zm)
    assert code == 0 and "H^2 = Z/2 + Z/2" in out
    ns = write(tmp_path, "ns.json", {
        "kind": "natural-system", "objects": {"1": {"rank": 1}, "g": {"rank": 1}},
        "left": [{"alpha": "g", "object": "1", "matrix": [[1]]},
                 {"alpha": "g", "object": "g", "matrix": [[1]]}],
        "right": [{"object": "1", "beta": "g", "matrix": [[1]]},
                  {"object": "g", "beta": "g", "matrix": [[1]]}]})
    code, out, _ = run(capsys, "cohomology", "--monoid", "z2-with-zero", "--coeff", ns)
    assert code == 0 and "H^2 = Z/2" in out
    bad = write(tmp_path, "bad.json", {
        "kind": "natural-system", "objects": {"1": {"rank": 1}, "g": {"rank": 1}},
        "left": [{"alpha": "g", "object": "1", "matrix": [[2]]},
                 {"alpha": "g", "object": "g", "matrix": [[1]]}],
        "right": [{"object": "1", "beta": "g", "matrix": [[1]]},
                  {"object": "g", "beta": "g", "matrix": [[1]]}]})
    code, _, err = run(capsys, "cohomology", "--monoid", "z2-with-zero", "--coeff", bad)
    assert code == 2 and "not a natural system" in err
    bar = write(tmp_path, "bar.json", {"kind": "bar", "degree": 1})
    code, out, _ = run(capsys, "cohomology", "--monoid", "m3", "--coeff", bar)
    assert code == 0 and "bar:1" in out


def test_big_integer_strings(capsys, tmp_path):
    big = str(2 ** 70 + 1)   # odd, so it acts as 1 on Z/2
    zm = write(tmp_path, "zm.json", {"kind": "zero-module", "group": [2],
                                     "action": {"g": [[big]]}})
    code, out, _ = run(capsys, "cohomology", "--monoid", "z2-with-zero", "--coeff", zm)
    assert code == 0 and "H^0 = Z/2" in out


def test_cd_probe(capsys):
    code, out, _ = run(capsys, "cd-probe", "--monoid", "m3")
    assert code == 0 and "no nonvanishing H^n for n >= 2 across battery" in out
    assert "evidence only" in out
    code, out, _ = run(capsys, "cd-probe", "--monoid", "example-uvw")
    assert "H^2 nonzero for coefficient zero-module:z2:identity" in out
    code, out, _ = run(capsys, "cd-probe", "--monoid", "trivial", "--format", "json")
    assert json.loads(out)["top_nonvanishing_degree"] == 0


@pytest.mark.parametrize("name", sorted(BUILTIN_MONOIDS))
def test_checks_pass_on_builtins(capsys, name):
    code, out, _ = run(capsys, "resolution-check", "--monoid", name, "--max-degree", "3",
                       "--lift-trials", "4")
    assert code == 0, out
    code, out, _ = run(capsys, "psi-check", "--monoid", name, "--max-degree", "2")
    assert code == 0 and "all checks passed" in out


def test_psi_check_e4_ranks(capsys):
    _, out, _ = run(capsys, "psi-check", "--monoid", "example-uvw", "--format", "json")
    rows = json.loads(out)["degrees"]
    assert [r["hom"]["free_rank"] for r in rows[1:]] == [4, 11]
    assert [r["cochains"]["free_rank"] for r in rows[1:]] == [4, 11]


def test_resolution_check_mutation(capsys, monkeypatch):
    import zerocohom.cli as cli
    from zerocohom import resolution

    def mutated(M, n_max):
        return resolution.check_resolution_exact(M, n_max, sign=lambda i: 1)

    monkeypatch.setattr(cli, "check_resolution_exact", mutated)
    code, out, _ = run(capsys, "resolution-check", "--monoid", "example-uvw")
    assert code == 1 and "NO" in out


def test_zero_cancellative(capsys):
    code, out, _ = run(capsys, "zero-cancellative", "--monoid", "example-uvw")
    assert code == 0 and "u*u = v*u = w != 0 but u != v" in out
    _, out, _ = run(capsys, "zero-cancellative", "--monoid", "m3", "--format", "json")
    assert json.loads(out)["zero_cancellative"] is True


def test_nerve(capsys):
    code, out, _ = run(capsys, "nerve", "--monoid", "example-uvw", "--max-degree", "2")
    assert code == 0 and "|Ner_2| = 11" in out


def test_reports_are_byte_identical():
    cmd = [sys.executable, "-m", "zerocohom", "cd-probe", "--monoid", "example-uvw",
           "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
