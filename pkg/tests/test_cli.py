import json

import pandas as pd
import pytest

from fibrature import cli
from fibrature.command import bounds, catalog, check, construct, lift, table, verify


def read(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_verify_catalog_entry(tmp_path):
    out = tmp_path / "report.json"
    assert verify.main(["catalog:stroud-delta5-16", "--degree", "3", "-o", str(out)]) == 0
    report = read(out)
    assert report["passed"] is True and report["points"] == 16
    assert verify.main(["catalog:stroud-delta5-16", "--degree", "4", "-o", str(out)]) == 1
    assert read(out)["passed"] is False


def test_verify_input_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert verify.main([str(broken)]) == 2
    assert verify.main([str(tmp_path / "missing.json")]) == 2
    assert verify.main(["catalog:no-such-formula"]) == 2
    assert verify.main(["catalog:rains-leech-498"]) == 2
    assert verify.main(["catalog:platonic-octa", "--precision", "8"]) == 2


def test_construct_then_verify(tmp_path):
    design = tmp_path / "noskov.json"
    assert construct.main(["-o", str(design), "noskov", "--s", "2"]) == 0
    payload = read(design)
    assert len(payload["points"]) == 8 and "lattice" in payload
    assert verify.main([str(design)]) == 0

    family = tmp_path / "s3.json"
    assert construct.main(["-o", str(family), "s3", "--s", "1"]) == 0
    assert len(read(family)["points"]) == 8
    assert verify.main([str(family)]) == 2
    assert verify.main([str(family), "--mode", "float"]) == 0
    assert verify.main([str(family), "--mode", "float", "--fast"]) == 0


def test_construct_rejects_bad_parameters(tmp_path):
    assert construct.main(["-o", str(tmp_path / "mub.json"), "mub", "--q", "4"]) == 2
    assert construct.main(["-o", str(tmp_path / "hex.json"), "hex", "--d", "0"]) == 2
    with pytest.raises(SystemExit):
        construct.main(["noskov"])


def test_catalog_commands(tmp_path):
    listing = tmp_path / "catalog.tsv"
    assert catalog.main(["list", "--no-build", "-o", str(listing)]) == 0
    frame = pd.read_csv(listing, sep="\t")
    assert "rains-leech-498" in set(frame["id"])
    emitted = tmp_path / "octa.json"
    assert catalog.main(["emit", "platonic-octa", "-o", str(emitted)]) == 0
    assert read(emitted)["claimed_degree"] == 3
    lines = tmp_path / "mub.json"
    assert catalog.main(["emit", "lines:mub:3", "-o", str(lines)]) == 0
    assert read(lines)["ring"] == "eisenstein"
    assert catalog.main(["emit", "rains-leech-498"]) == 2
    assert catalog.main(["emit", "lines:leech"]) == 2


def test_bounds_command(tmp_path):
    out = tmp_path / "bounds.tsv"
    assert bounds.main(["--space", "cp", "--dim", "3", "--degree", "3", "-o", str(out)]) == 0
    frame = pd.read_csv(out, sep="\t")
    assert frame.loc[0, "bound"] == "cpn" and frame.loc[0, "value"] == 40
    assert bounds.main(["--formula", "catalog:platonic-octa", "-o", str(out)]) == 0
    assert bounds.main(["--formula", "catalog:platonic-octa", "--degree", "5", "-o", str(out)]) == 1
    assert bounds.main(["--space", "sphere", "--dim", "3"]) == 2


def test_check_command(tmp_path):
    out = tmp_path / "christoffel.tsv"
    assert check.main(["-o", str(out), "christoffel", "--n", "2", "--t", "8", "16"]) == 0
    assert list(pd.read_csv(out, sep="\t")["t"]) == [8, 16]
    net = tmp_path / "net.json"
    assert check.main(["-o", str(net), "epsnet", "--formula", "catalog:as-tetra-8", "--degree", "3", "--samples", "256"]) == 0
    assert read(net)["covered"] is True
    assert check.main(["sharp", "--formula", "catalog:platonic-octa", "--degree", "3"]) == 2
    assert check.main(["epsnet", "--formula", "catalog:as-tetra-8", "--degree", "5"]) == 1


def test_lift_command(tmp_path):
    out = tmp_path / "lift.json"
    assert lift.main(["hopf", "--t", "2", "--lines", "lines:mub:3", "-o", str(out)]) == 0
    payload = read(out)
    assert len(payload["points"]) == 72 and payload["claimed_degree"] == 5
    assert verify.main([str(out), "--mode", "float"]) == 0
    assert lift.main(["hopf", "--t", "1", "--in", "lines:e8-eisenstein", "--dedup", "-o", str(out)]) == 0
    assert len(read(out)["points"]) == 160
    assert lift.main(["hopf", "--t", "1", "--lines", "lines:leech"]) == 2


def test_table_command(tmp_path):
    out = tmp_path / "table.tsv"
    assert table.main(["--only", "noskov even s=1", "hex d=2", "--output", str(out)]) == 0
    frame = pd.read_csv(out, sep="\t")
    assert list(frame["construction"]) == ["noskov even s=1", "hex d=2"]
    assert frame["passed"].all()
    assert table.main(["--only", "nothing"]) == 2


def test_dispatcher(capsys):
    assert cli.main(["--version"]) == 0
    assert capsys.readouterr().out.startswith("fibrature ")
    assert cli.main([]) == 2
    assert cli.main(["bogus"]) == 2
    assert cli.main(["verify", "catalog:platonic-octa"]) == 0
