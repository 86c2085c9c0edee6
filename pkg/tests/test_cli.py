from __future__ import annotations

import json
import subprocess
import sys

import pytest

from flatcover.cli import main
from flatcover.core import parse_bases


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def doc_of(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_compute_kappa_mk5(capsys):
    code, doc = doc_of(capsys, "--no-meta", "compute", "kappa", "--input", "catalog:MK5")
    assert code == 0
    assert doc["tool_version"] and doc["command"] == "compute kappa"
    assert doc["results"]["value"] == 15
    assert len(doc["results"]["cover"]) == 15
    assert len(doc["results"]["certificate"]) == 15
    assert "meta" not in doc


def test_compute_kappa_uniform(capsys):
    code, doc = doc_of(capsys, "--no-meta", "compute", "kappa", "--input", "catalog:U(3,6)")
    assert code == 0 and doc["results"]["value"] == 0


def test_compute_minor_golden(capsys):
    code, doc = doc_of(capsys, "--no-meta", "compute", "minor", "--host", "catalog:V8", "--pattern", "catalog:MK4")
    assert code == 0
    assert doc["results"] == {"present": False, "witness": None}
    code, doc = doc_of(capsys, "--no-meta", "compute", "minor", "--host", "catalog:MK4", "--pattern", "catalog:U(2,3)")
    assert doc["results"]["present"] is True
    assert doc["results"]["witness"]["contract"] == [1]


def test_compute_kappa_star_and_mu(capsys):
    _, doc = doc_of(capsys, "--no-meta", "compute", "kappa-star", "--input", "catalog:W3")
    assert doc["results"]["value"] == ["3", "1"]
    _, doc = doc_of(capsys, "--no-meta", "compute", "mu", "--input", "catalog:MK4")
    assert doc["results"]["value"] == 4


def test_compute_from_file(capsys, tmp_path):
    path = tmp_path / "p6.bases"
    code, doc = doc_of(capsys, "--no-meta", "generate", "johnson", "--n", "6", "--r", "3", "--k", "0", "--out", str(path))
    assert code == 0
    code, doc = doc_of(capsys, "--no-meta", "compute", "kappa", "--input", str(path))
    M = parse_bases(path.read_text())
    assert doc["results"]["value"] == len(M.nonbases)


def test_generate_johnson_7_3_0(capsys, tmp_path):
    path = tmp_path / "j.bases"
    code, doc = doc_of(capsys, "--no-meta", "generate", "johnson", "--n", "7", "--r", "3", "--k", "0", "--out", str(path))
    assert code == 0 and len(doc["results"]["nonbases"]) == 5
    text = path.read_text()
    header = [line for line in text.splitlines() if line.startswith("#")]
    assert any("non-bases: " in h and h.count(";") == 4 for h in header)
    assert len(parse_bases(text).nonbases) == 5


def test_generate_johnson_best(capsys):
    code, doc = doc_of(capsys, "--no-meta", "generate", "johnson", "--n", "9", "--r", "4", "--k", "best")
    assert code == 0 and doc["results"]["class_size"] >= 14
    assert parse_bases(doc["results"]["bases_text"]).n == 9


def test_generate_johnson_sampled_is_reproducible(capsys):
    argv = ["--no-meta", "generate", "johnson", "--n", "9", "--r", "4", "--k", "2", "--p", "0.5", "--seed", "7"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_generate_spike(capsys, tmp_path):
    path = tmp_path / "s.bases"
    code, doc = doc_of(capsys, "--no-meta", "generate", "spike", "--n", "4", "--d", "all-2-subsets", "--out", str(path))
    assert code == 0 and doc["results"]["bases"] == 58
    assert len(parse_bases(path.read_text()).bases) == 58


def test_generate_spike_from_file(capsys, tmp_path):
    fam = tmp_path / "d.txt"
    fam.write_text("# two subsets\n1 2\n3 4\nempty\n")
    code, doc = doc_of(capsys, "--no-meta", "generate", "spike", "--n", "4", "--d", str(fam))
    assert code == 0 and doc["results"]["family_size"] == 3
    fam.write_text("1 2\n1 2 3\n")
    code, doc = doc_of(capsys, "--no-meta", "generate", "spike", "--n", "4", "--d", str(fam))
    assert code == 1 and doc["error"]["type"] == "BadSystem"


def test_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "compute", "kappa", "--input", "catalog:NOPE")
    assert code == 2 and "NOPE" in err
    bad = tmp_path / "bad.bases"
    bad.write_text("3 1\n1\n1\n")
    assert run(capsys, "compute", "kappa", "--input", str(bad))[0] == 2
    assert run(capsys, "compute", "kappa", "--input", str(tmp_path / "missing"))[0] == 2
    bad.write_text("4 2\n1 2\n3 4\n")
    assert run(capsys, "compute", "kappa", "--input", str(bad))[0] == 1
    assert run(capsys, "generate", "johnson", "--n", "6", "--r", "3", "--k", "0", "--p", "0.5")[0] == 0
    assert run(capsys, "compute", "minor", "--host", "catalog:P6")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["compute", "nonsense"])
    assert info.value.code == 2


def test_verify_bounds(capsys):
    code, doc = doc_of(capsys, "--no-meta", "verify", "--suite", "bounds")
    assert code == 0
    assert doc["suite"] == "bounds" and doc["seed"] == 0
    names = [c["name"] for c in doc["checks"]]
    assert names == sorted(names)
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_verify_cover_seed_42(capsys):
    code, doc = doc_of(capsys, "--no-meta", "verify", "--suite", "cover", "--seed", "42")
    assert code == 0
    names = {c["name"] for c in doc["checks"]}
    assert {"cover.cc1_self_duality", "cover.cc2_deletion_contraction", "cover.cc3_minor_monotone", "cover.cc4_relaxation"} <= names
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_verify_johnson_max_n_9(capsys):
    code, doc = doc_of(capsys, "--no-meta", "verify", "--suite", "johnson", "--seed", "1", "--max-n", "9")
    assert code == 0
    mk4 = next(c for c in doc["checks"] if c["name"] == "johnson.mk4_free")
    assert mk4["status"] == "pass" and set(mk4["details"]["failures"].values()) == {0}


def test_no_meta_output_is_byte_identical(capsys):
    argv = ["--no-meta", "verify", "--suite", "core", "--seed", "3", "--max-n", "8"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_meta_present_by_default(capsys):
    _, doc = doc_of(capsys, "compute", "kappa", "--input", "catalog:P6")
    assert "timestamp" in doc["meta"]


def test_bounds_command(capsys):
    code, doc = doc_of(capsys, "--no-meta", "bounds", "--n-min", "8", "--n-max", "8")
    row = doc["results"][0]
    assert code == 0 and row["knuth_lower"] == ["35", "4"] and row["kmax"] == 32
    assert all(row["checks"].values())


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "flatcover", "--no-meta", "compute", "kappa", "--input", "catalog:P6"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["results"]["value"] == 1
