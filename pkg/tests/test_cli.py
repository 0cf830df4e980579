# tests/test_cli.py

import os

import pytest

from conformext.crud.reports import read_table
from conformext.main import build_parser, main
from conformext.services.counterexample import verify_counterexample


def _run(tmp_path, *args, out="run"):
    target = str(tmp_path / out)
    return main(list(args) + ["--out", target]), target


def test_parser_defaults():
    args = build_parser().parse_args(["integrability"])
    assert args.domain == "square"
    assert args.phi == "alpha:1"
    assert args.p == pytest.approx(1.5)


@pytest.mark.parametrize(
    "argv",
    [
        ["counterexample", "--groups", "0"],
        ["extension", "--p", "2"],
        ["integrability", "--domain", "no_such_domain.json"],
        ["integrability", "--phi", "gamma:1"],
        ["integrability", "--basepoint", "1"],
        ["unknown"],
    ],
)
def test_usage_errors_exit_1(tmp_path, argv):
    code, target = _run(tmp_path, *argv)
    assert code == 1
    assert not os.path.exists(os.path.join(target, "report.json"))


def test_convergent_tail_exits_5(tmp_path):
    code, target = _run(tmp_path, "counterexample", "--phi", "alpha:2")
    assert code == 5
    assert not os.path.exists(target)


def test_integrability_run_writes_outputs(tmp_path):
    code, target = _run(tmp_path, "integrability", "--domain", "disk")
    assert code == 0
    assert os.path.isfile(os.path.join(target, "report.json"))
    assert os.path.isfile(os.path.join(target, "figures", "domain.svg"))
    rows = read_table(os.path.join(target, "tables", "annuli.csv"))
    assert len(rows) > 2
    samples = read_table(os.path.join(target, "tables", "metric_samples.csv"))
    assert samples[0] == ["x1", "y1", "x2", "y2", "h", "k", "geodesic_length", "pitch"]
    assert len(samples) > 1


def test_runs_are_deterministic(tmp_path):
    _, first = _run(tmp_path, "integrability", "--domain", "disk", out="first")
    _, second = _run(tmp_path, "integrability", "--domain", "disk", out="second")
    for name in [os.path.join("tables", "annuli.csv"), os.path.join("figures", "domain.svg"), "report.json"]:
        with open(os.path.join(first, name), "rb") as a, open(os.path.join(second, name), "rb") as b:
            assert a.read() == b.read()
    with open(os.path.join(first, "report.json")) as handle:
        assert '"out"' not in handle.read()


@pytest.mark.slow
def test_counterexample_run(tmp_path):
    code, target = _run(tmp_path, "counterexample", "--groups", "4", "--depth", "4")
    assert code == 0
    for name in ["report.json", "plan.json"]:
        assert os.path.isfile(os.path.join(target, name))
    for name in ["sequences", "groups", "probe"]:
        assert os.path.isfile(os.path.join(target, "tables", f"{name}.csv"))
    for name in ["unfolded_chain", "folded_layout", "bad_parametrization"]:
        assert os.path.isfile(os.path.join(target, "figures", f"{name}.svg"))
    groups = read_table(os.path.join(target, "tables", "groups.csv"))
    assert len(groups) == 6


@pytest.mark.slow
def test_failed_verification_exits_3(tmp_path, monkeypatch):
    def unbounded(*args, **kwargs):
        return verify_counterexample(*args, **kwargs).copy(update={"integral_bound": 0.0})

    monkeypatch.setattr("conformext.main.verify_counterexample", unbounded)
    code, target = _run(tmp_path, "counterexample", "--groups", "4", "--depth", "4")
    assert code == 3
    assert os.path.isfile(os.path.join(target, "report.json"))


@pytest.mark.slow
def test_square_extension_run(tmp_path):
    code, target = _run(tmp_path, "extension", "--domain", "square", "--p", "1.5")
    assert code == 0
    assert os.path.isfile(os.path.join(target, "report.json"))
    rows = read_table(os.path.join(target, "tables", "generations.csv"))
    assert rows[0] == ["n", "term", "partial"]


def test_shallow_extension_exits_3(tmp_path):
    code, target = _run(tmp_path, "extension", "--domain", "disk", "--depth", "3")
    assert code == 3
    assert not os.path.exists(os.path.join(target, "report.json"))
