import json

import pytest
from click.testing import CliRunner

from app.cli.main import cli
from app.core.config import settings
from app.core.logging import setup_logging
from tests.conftest import BUNDLES

CANCER = BUNDLES / "cancer"
CHEMO = BUNDLES / "chemotherapy"


@pytest.fixture(autouse=True)
def restore_logging():
    yield
    # the runner's stderr is gone once a command returns
    setup_logging()


def run(*args):
    return CliRunner(mix_stderr=False).invoke(cli, [str(a) for a in args])


def bundle_args(bundle):
    return ["--kb", bundle / "kb.txt", "--data", bundle / "data.csv", "--query", bundle / "query.txt"]


def expected(bundle):
    return json.loads((bundle / "expected.json").read_text())


@pytest.mark.parametrize("bundle", [CANCER, CHEMO], ids=["cancer", "chemotherapy"])
def test_answer_matches_the_bundle(bundle):
    result = run("answer", *bundle_args(bundle))
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.output) == expected(bundle)


@pytest.mark.parametrize(
    "options",
    [["--engine", "oracle"], ["--comparator", "bits"]],
    ids=["oracle", "bits"],
)
def test_temporal_engines_agree(options):
    result = run("answer", *bundle_args(CHEMO), *options)
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.output) == expected(CHEMO)


def test_cancer_oracle_engine():
    result = run("answer", *bundle_args(CANCER), "--engine", "oracle")
    assert json.loads(result.output) == expected(CANCER)


def test_only_tem_keeps_data_time_points():
    result = run("answer", *bundle_args(CHEMO), "--only-tem")
    assert json.loads(result.output) == {"answers": [{"tuple": ["p1"], "intervals": [[258, 258]]}]}


def test_csv_answers():
    assert run("answer", *bundle_args(CANCER), "--format", "csv").output == "arg1\np1\np2\n"
    assert run("answer", *bundle_args(CHEMO), "--format", "csv").output == "arg1,from,to\np1,257,258\n"


def test_check():
    result = run("check", "--kb", CANCER / "kb.txt", "--data", CANCER / "data.csv")
    assert result.exit_code == 0
    assert result.output == "consistent\n"


def test_inconsistent_kb_exits_2(tmp_path):
    kb = tmp_path / "kb.txt"
    kb.write_text("A SUB bot\nA(a)\n")
    result = run("check", "--kb", kb)
    assert result.exit_code == 2
    assert result.output == ""
    assert "error:" in result.stderr


def test_parse_error_exits_1(tmp_path):
    query = tmp_path / "query.txt"
    query.write_text("q(x) := {A(x)\n")
    result = run("answer", "--kb", CANCER / "kb.txt", "--query", query)
    assert result.exit_code == 1
    assert "query.txt:" in result.stderr


def test_refusal_exits_3(tmp_path):
    kb, query = tmp_path / "kb.txt", tmp_path / "query.txt"
    kb.write_text("A SUB some r . B\nB SUB some r . A\nA(a)\n")
    query.write_text("q() := {B(x)}\n")
    result = run("answer", "--kb", kb, "--query", query, "--engine", "oracle")
    assert result.exit_code == 3


def test_missing_file_is_a_usage_error():
    assert run("check", "--kb", "no-such-kb.txt").exit_code == 1


def test_classify():
    lines = run("classify", "--kb", CANCER / "kb.txt").output.splitlines()
    assert "SkinCancer SUB Cancer" in lines
    assert "SkinOfBreastStructure SUB BreastStructure" in lines
    assert "BreastCancerPatient SUB CancerPatient" in lines
    assert not any(line.startswith("_N") or "SUB _N" in line for line in lines)


def test_saturate():
    result = run("saturate", "--kb", CHEMO / "kb.txt", "--data", CHEMO / "data.csv")
    dumped = json.loads(result.output)
    assert dumped["individuals"]["p1"]["ChemotherapyPatient"] == [[0, 0], [167, 258]]
    assert dumped["individuals"]["p1"]["CancerPatient"] == [[0, 258]]
    assert dumped["representatives"] == [-1, 0, 1, 166, 167, 168, 257, 258, 259]


def test_saturate_needs_time_stamps():
    assert run("saturate", "--kb", CANCER / "kb.txt", "--data", CANCER / "data.csv").exit_code == 1


def test_expand():
    result = run("expand", "--kb", CANCER / "kb.txt", "--data", CANCER / "data.csv", "--depth", "1")
    elements = json.loads(result.output)["elements"]
    assert [e["id"] for e in elements if e["named"]] == ["c3", "p1", "p2", "p3"]
    assert len(elements) == 8
    assert all(e["depth"] == 1 for e in elements if not e["named"])


def test_expand_at_a_time_point():
    args = ["expand", "--kb", CHEMO / "kb.txt", "--data", CHEMO / "data.csv", "--depth", "0"]
    (element,) = json.loads(run(*args, "--at", "5").output)["elements"]
    assert element["concepts"] == ["CancerPatient"]
    (element,) = json.loads(run(*args, "--at", "200").output)["elements"]
    assert element["concepts"] == ["CancerPatient", "ChemotherapyPatient"]
    assert run("expand", "--kb", CANCER / "kb.txt", "--depth", "0", "--at", "5").exit_code == 1


def test_rewrite_text_and_json():
    args = ["rewrite", "--kb", CANCER / "kb.txt", "--query", CANCER / "query.txt"]
    text = run(*args).output.splitlines()
    assert [line.split(" := ")[0] for line in text] == ["q0(x)", "q1(x)", "q2(x)"]
    dumped = json.loads(run(*args, "--emit", "json").output)
    assert len(dumped["rewritings"]) == 3


def test_rewrite_temporal_skeleton():
    result = run("rewrite", "--kb", CHEMO / "kb.txt", "--query", CHEMO / "query.txt", "--temporal")
    assert result.exit_code == 0, result.stderr
    assert result.output.splitlines()[-1] == "N = 270"


def test_comparator():
    result = run("comparator", "--relation", "<", "--offset", "3", "--bits", "4")
    assert result.exit_code == 0
    assert result.output.strip()


def test_fuzz(tmp_path):
    result = run("fuzz", "--seeds", "3", "--repro-dir", tmp_path)
    report = json.loads(result.output)
    assert report["mode"] == "atemporal"
    assert report["trials"] == 3
    assert report["agreed"] + report["refused"] == 3


def test_version():
    result = run("--version")
    assert result.exit_code == 0
    assert settings.VERSION in result.output
