"""CLI contract: golden outputs, exit codes, parse rejects.

Regenerate the golden files with UPDATE_GOLDEN=1 pytest tests/test_cli.py
(only after checking the new outputs by hand).
"""
import json
import os
import pathlib
import subprocess
import sys

import pytest

from eqcartan import chains as ch, cli
from eqcartan.sparse import Matrix

HERE = pathlib.Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

X, Z2 = "builtin:exterior", "builtin:z2_neg"

# (name, argv, expected exit code); stdout must match golden/<name>.out byte for byte
GOLDEN_CASES = [
    ("validate_exterior_z2", ["validate", X, Z2, "--format", "json"], 0),
    ("validate_bad_degree", ["validate", "tests/data/bad_degree.json", "--format", "json"], 2),
    ("validate_nonassociative", ["validate", "tests/data/nonassociative.json"], 2),
    ("resolve_signs_builtin", ["resolve-signs", "--format", "json"], 0),
    ("resolve_signs_restricted", ["resolve-signs", "--restrict", "b_cyclic=R1", "--format", "json"], 1),
    ("verify_exterior_z2", ["verify", X, Z2, "--identity", "all", "--max-n", "3", "--format", "json"], 0),
    ("verify_exterior_z2_text", ["verify", X, Z2, "--identity", "all", "--max-n", "3"], 0),
    ("verify_dual_sample", ["verify", "builtin:dual", Z2, "--sample", "5", "--seed", "7",
                            "--format", "json"], 0),
    ("verify_cochain_file", ["verify", X, Z2, "--cochain", "tests/data/cochain_2x.json",
                             "--identity", "1", "--format", "json"], 0),
    ("verify_m2_twisted", ["verify", X, Z2, "--cochain", "builtin:m2", "--identity", "2",
                           "--twist", "s", "--format", "json"], 1),
    ("verify_structural", ["verify", X, Z2, "--identity", "structural", "--format", "json"], 1),
    ("homology_field", ["homology", "builtin:field", "--format", "json"], 0),
    ("homology_exterior_s_invariants", ["homology", X, Z2, "--twist", "s", "--invariants",
                                        "--max-n", "4", "--format", "json"], 0),
    ("homology_field_cyclic", ["homology", "builtin:field", "--coefficients", "cyclic",
                               "--u-window", "3", "--format", "json"], 0),
    ("homology_dual_periodic", ["homology", "builtin:dual", "--coefficients", "periodic",
                                "--u-window", "1", "--format", "json"], 0),
    ("homology_twisted_not_mixed", ["homology", X, Z2, "--twist", "s", "--coefficients", "cyclic",
                                    "--format", "json"], 1),
    ("decompose_trivial", ["decompose", "builtin:dual", "builtin:trivial", "--format", "json"], 0),
    ("decompose_exterior_z2", ["decompose", X, Z2, "--max-n", "4"], 0),
    ("decompose_dual_z2", ["decompose", "builtin:dual", Z2, "--max-n", "4", "--format", "json"], 0),
]

# (name, argv, expected exit code); malformed inputs
REJECT_CASES = [
    ("nonprime", ["validate", "tests/data/nonprime.json"], 3),
    ("float", ["validate", "tests/data/float_coeff.json"], 3),
    ("malformed", ["validate", "tests/data/malformed.json"], 3),
    ("missing_product", ["validate", "tests/data/missing_product.json"], 3),
    ("missing_file", ["validate", "tests/data/no_such_file.json"], 3),
    ("unknown_builtin", ["validate", "builtin:nothing"], 3),
    ("cochain_degree", ["verify", X, Z2, "--cochain", "tests/data/cochain_bad_degree.json"], 3),
    ("periodic_no_window", ["homology", "builtin:field", "--coefficients", "periodic"], 3),
    ("bad_twist", ["homology", X, Z2, "--twist", "q"], 3),
    ("bad_flag", ["homology", X, "--no-such-flag"], 3),
    ("group_mismatch", ["validate", "builtin:dual", "builtin:z2_neg_xy"], 3),
]


def run_cli(argv):
    return subprocess.run([sys.executable, "-m", "eqcartan"] + argv, capture_output=True,
                          text=True, cwd=HERE.parent)


def golden_path(name):
    return GOLDEN / f"{name}.out"


@pytest.mark.parametrize("name,argv,code", GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES])
def test_golden(name, argv, code):
    r = run_cli(argv)
    assert r.returncode == code, r.stderr
    path = golden_path(name)
    if os.environ.get("UPDATE_GOLDEN"):
        path.write_text(r.stdout)
    assert r.stdout == path.read_text()


@pytest.mark.parametrize("name,argv,code", REJECT_CASES, ids=[c[0] for c in REJECT_CASES])
def test_rejects(name, argv, code):
    r = run_cli(argv)
    assert r.returncode == code
    assert r.stderr.strip() and not r.stdout.strip() or code != 3


def test_resolve_signs_rerun_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli(["resolve-signs", "--output", str(a)]).returncode == 0
    assert run_cli(["resolve-signs", "--output", str(b)]).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    shipped = HERE.parent / "src" / "eqcartan" / "data" / "convention.json"
    assert a.read_bytes() == shipped.read_bytes()


def test_convention_flag_pins_certificate(tmp_path):
    cert = tmp_path / "c.json"
    assert run_cli(["resolve-signs", "--output", str(cert)]).returncode == 0
    r = run_cli(["homology", "builtin:dual", "--convention", str(cert), "--format", "json"])
    assert r.returncode == 0
    assert json.loads(r.stdout)["convention_hash"] == ch.default_convention().digest()


def test_tampered_certificate_rejected(tmp_path):
    obj = json.loads((HERE.parent / "src" / "eqcartan" / "data" / "convention.json").read_text())
    obj["convention"]["b_cyclic"] = "R1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    r = run_cli(["homology", "builtin:dual", "--convention", str(bad)])
    assert r.returncode != 0


def test_sample_seed_deterministic():
    argv = ["verify", "builtin:dual", Z2, "--sample", "5", "--seed", "7", "--format", "json"]
    assert run_cli(argv).stdout == run_cli(argv).stdout


def test_homology_output_file(tmp_path):
    out = tmp_path / "t.json"
    r = run_cli(["homology", "builtin:field", "--output", str(out)])
    assert r.returncode == 0
    t = json.loads(out.read_text())
    assert t["dims"][0] == {"degree": 0, "dim": 1, "valid": True}
    assert set(t) >= {"sector", "coefficients", "u_window", "valid_degrees", "dims",
                      "convention_hash"}


def test_fault_injection_names_the_failure(monkeypatch, capsys):
    """A corrupted b^g makes verify fail with a witness naming identity, sector, n, tuple."""
    original = ch.op_b_g
    ch.clear_cache()

    def corrupted(A, act=None, g=0, n=1, convention=None):
        op = original(A, act, g, n, convention)
        if n == 2 and op.matrix.ncols:
            m = op.matrix
            cols = [dict(c) for c in m.cols]
            j = next(i for i, c in enumerate(cols) if c)
            r = next(iter(cols[j]))
            cols[j][r] = 2 * cols[j][r]
            op = ch.SparseOperator(op.source, op.target, Matrix(m.nrows, m.ncols, cols, m.field),
                                   op.degree)
        return op
    monkeypatch.setattr(ch, "op_b_g", corrupted)
    code = cli.main(["verify", "builtin:triangular", "builtin:s3_sign", "--identity", "1",
                     "--twist", "s12", "--sample", "2", "--seed", "3", "--format", "json"])
    ch.clear_cache()
    assert code == 1
    out = json.loads(capsys.readouterr().out)
    fails = [r for r in out["reports"] if r["status"] == "fail"]
    assert fails
    f = fails[0]
    assert f["identity"] == "1" and f["sector"] == "s12" and f["n"] in (1, 2, 3)
    assert f["witness"] and f["lhs_column"] != f["rhs_column"]
