import json

import pytest

from malcev import corpus
from malcev.braid_kz import generator_path, kz_system
from malcev.cli import run
from malcev.interchange import dump_dga, dump_forms, dump_path, dump_presentation
from malcev.transport import PiecewisePath, PolynomialSegment


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_bar_h0_on_a_file(tmp_path, capsys):
    path = write(tmp_path, "circle.json", dump_dga(corpus.circle()))
    code, out, _ = invoke(capsys, "bar-h0", "--dga", path, "--cap", "5", "--json")
    assert code == 0
    assert json.loads(out)["new_dims"] == [1] * 6


def test_bar_h0_with_coefficients(capsys):
    code, out, _ = invoke(capsys, "bar-h0", "--dga", "builtin:circle-sigma2", "--cap", "3", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["trivial_coefficients"] == [1, 1, 1, 1]
    assert doc["tensor_decomposition"] is True


def test_validate_dga_exit_codes(tmp_path, capsys):
    assert invoke(capsys, "validate-dga", "--dga", "builtin:heisenberg")[0] == 0
    doc = dump_dga(corpus.circle())
    doc["d"] = {"w": [{"coeff": "1", "label": "w"}]}
    code, out, _ = invoke(capsys, "validate-dga", "--dga", write(tmp_path, "bad.json", doc))
    assert code == 1 and "violation" in out


def test_malformed_inputs_exit_3(tmp_path, capsys):
    assert invoke(capsys, "braid", "--n", "3", "--word", "s7")[0] == 3
    assert invoke(capsys, "verify", "--suite", "nope")[0] == 3
    assert invoke(capsys, "bar-h0", "--dga", str(tmp_path / "missing.json"))[0] == 3
    p = tmp_path / "broken.json"
    p.write_text("{")
    code, _, err = invoke(capsys, "bar-h0", "--dga", str(p))
    assert code == 3 and "broken.json" in err
    assert invoke(capsys, "frobnicate")[0] == 3


def test_lie_quotient(tmp_path, capsys):
    path = write(tmp_path, "p3.json", dump_presentation(kz_system(3, 4).lie.presentation))
    code, out, _ = invoke(capsys, "lie-quotient", "--lie", path, "--json")
    doc = json.loads(out)
    assert code == 0 and doc["dims"] == [3, 1, 2, 3] and doc["valid"]
    code, out, _ = invoke(capsys, "lie-quotient", "--lie", path, "--trunc", "2", "--json")
    assert json.loads(out)["dims"] == [3, 1]


def kz_files(tmp_path, path):
    S = kz_system(3, 2)
    return [
        "--lie", write(tmp_path, "lie.json", dump_presentation(S.lie.presentation)),
        "--form", write(tmp_path, "form.json", dump_forms(S.omega)),
        "--path", write(tmp_path, "path.json", dump_path(path)),
    ]


def test_transport_subcommand(tmp_path, capsys):
    code, out, _ = invoke(capsys, "transport", *kz_files(tmp_path, generator_path(1, 3)), "--json")
    doc = json.loads(out)
    assert code == 0 and doc["integrable"] and doc["grouplike"]


def test_transport_through_the_diagonal_exits_2(tmp_path, capsys):
    # straight line swapping two points collides them halfway
    path = PiecewisePath([PolynomialSegment([[0, 1], [1, -1], [2]])])
    code, out, _ = invoke(capsys, "transport", *kz_files(tmp_path, path))
    assert code == 2 and "failed" in out


def test_braid_relation_through_cli(capsys):
    code, a, _ = invoke(capsys, "braid", "--n", "3", "--word", "s1 s2 s1", "--json")
    assert code == 0
    code, b, _ = invoke(capsys, "braid", "--n", "3", "--word", "s2 s1 s2", "--json")
    assert code == 0
    da, db = json.loads(a), json.loads(b)
    assert da["permutation"] == db["permutation"] == [3, 2, 1]
    va = {tuple(t["word"]): complex(*t["value"]) for t in da["series"]}
    vb = {tuple(t["word"]): complex(*t["value"]) for t in db["series"]}
    assert max(abs(va.get(k, 0) - vb.get(k, 0)) for k in set(va) | set(vb)) < 1e-7


def test_output_is_deterministic(capsys):
    first = invoke(capsys, "braid", "--n", "3", "--word", "s1 s2^-1", "--json")
    second = invoke(capsys, "braid", "--n", "3", "--word", "s1 s2^-1", "--json")
    assert first == second


@pytest.mark.parametrize("suite", ["shuffle", "witt", "peter-weyl"])
def test_verify_suites_pass(capsys, suite):
    code, out, _ = invoke(capsys, "verify", "--suite", suite, "--seed", "7")
    assert code == 0
    assert "FAIL" not in out
