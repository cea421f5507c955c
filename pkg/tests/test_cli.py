import json
import math

import pytest

from hcangular.cli import main


def run_cli(args, capsys):
    status = main(args)
    out = capsys.readouterr().out
    return status, json.loads(out)


def test_partition_command(capsys):
    status, doc = run_cli([
        "partition", "--family", "o-even", "--m", "1",
        "--x-eigs", "1.0", "--y-eigs", "1.0", "--gamma", "0.3",
        "--samples", "100000", "--seed", "3",
    ], capsys)
    assert status == 0
    rec = doc["records"][0]
    assert float(rec["closed_form"]) == pytest.approx(math.cosh(0.6), rel=1e-12)
    assert float(rec["z_score"]) < 4.0
    assert doc["config"]["samples"] == 100000


def test_bijection_command(capsys):
    status, doc = run_cli(["bijection", "--rank", "1"], capsys)
    assert status == 0
    assert doc["class_count"] == 2
    assert doc["records"][0]["pi"] == "1,2"
    assert doc["records"][1]["t"] == "-"


def test_crosscheck_trivial_triangular(capsys):
    # J at n=2 has a trivial integration domain: exact agreement, z = 0
    status, doc = run_cli([
        "crosscheck", "--family", "j", "--n", "2",
        "--x-pts", "2", "--y-pts", "3", "--x-eigs", "0.9", "--y-eigs", "1.3",
        "--samples", "64", "--seed", "5",
    ], capsys)
    assert status == 0
    # the domain is a single point, so agreement is exact up to rounding noise
    assert float(doc["max_z_score"]) < 1e-6
    rec = doc["records"][0]
    assert complex(rec["mc_mean"].replace("i", "j")) == pytest.approx(
        complex(rec["closed_form"].replace("i", "j")), abs=1e-12)


def test_crosscheck_exit_status(capsys):
    status, doc = run_cli([
        "crosscheck", "--family", "o-even", "--m", "1",
        "--x-eigs", "1.0", "--y-eigs", "1.0", "--gamma", "0.3",
        "--samples", "20000", "--seed", "3", "--z-threshold", "1e-9",
    ], capsys)
    assert status == 1  # an impossible threshold must flag disagreement


def test_reports_byte_identical(capsys):
    args = ["correlator", "--family", "o-even", "--m", "1",
            "--x-eigs", "1.0", "--y-eigs", "1.0",
            "--x-pts", "2", "--y-pts", "3",
            "--samples", "20000", "--seed", "17"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert len(doc["records"]) == 2  # both R=1 classes by default


def test_out_file_and_complex_parsing(tmp_path, capsys):
    out = tmp_path / "report.json"
    status = main(["triangular", "--family", "jtilde", "--n", "2",
                   "--x-eigs", "0.9", "--y-eigs", "1.4",
                   "--x-pts", "2+0.5i", "--y-pts", "3-0.25i",
                   "--class", "1,2", "--out", str(out)])
    assert status == 0
    doc = json.loads(out.read_text())
    assert len(doc["records"]) == 1
    assert doc["records"][0]["class_pi"] == "1,2"
    val = doc["records"][0]["closed_form"]
    assert val.endswith("i") and "+" in val or "-" in val


def test_config_errors_exit_2(capsys):
    status = main(["partition", "--family", "o-even", "--m", "2",
                   "--x-eigs", "1.0,1.0", "--y-eigs", "1.0,2.0"])
    assert status == 2
    assert "coincident" in capsys.readouterr().err


def test_seed_env_default(monkeypatch, capsys):
    monkeypatch.setenv("HCANGULAR_SEED", "913")
    from hcangular.cli import build_parser

    args = build_parser().parse_args(
        ["partition", "--family", "o-even", "--m", "1",
         "--x-eigs", "1.0", "--y-eigs", "1.0"])
    assert args.seed == 913


def test_correlator_general_gamma_rescales(capsys):
    status, doc = run_cli([
        "correlator", "--family", "o-even", "--m", "1",
        "--x-eigs", "1.0", "--y-eigs", "1.0", "--gamma", "0.3",
        "--x-pts", "2", "--y-pts", "3",
        "--samples", "30000", "--seed", "8",
    ], capsys)
    assert status == 0
    for rec in doc["records"]:
        assert rec["rescaled_to_half_coupling"] is True
        assert float(rec["z_score"]) < 4.0
