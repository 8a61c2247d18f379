import json
import subprocess
import sys
from pathlib import Path

import pytest

PKG_SRC = str(Path(__file__).resolve().parent.parent / "src")


def run_cli(args, env_extra=None, stdin=None):
    import os

    env = dict(os.environ)
    env["PYTHONPATH"] = PKG_SRC + os.pathsep + env.get("PYTHONPATH", "")
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "tame3.cli", *args],
        capture_output=True, text=True, env=env, input=stdin,
    )


@pytest.fixture(scope="module")
def nagata_file(tmp_path_factory):
    out = run_cli(["nagata"])
    path = tmp_path_factory.mktemp("cli") / "nagata.txt"
    path.write_text(out.stdout)
    return str(path)


@pytest.fixture(scope="module")
def nagata_inverse_file(tmp_path_factory):
    out = run_cli(["nagata", "--inverse"])
    blocks = out.stdout.strip().split("\n\n")
    path = tmp_path_factory.mktemp("cli") / "nagata_inv.txt"
    path.write_text(blocks[1] + "\n")
    return str(path)


def test_deg_nagata_table(nagata_file):
    out = run_cli(["deg", nagata_file, "--weight", "nagata-lex", "--json"])
    assert out.returncode == 0
    payload = json.loads(out.stdout)
    assert payload["degrees"] == [[2, 0, 3], [1, 0, 2], [0, 0, 1]]
    assert payload["deg_F"] == [3, 0, 6]
    assert payload["floor"] == [1, 1, 1]
    assert payload["rank"] == 3


def test_deg_identity_total(tmp_path):
    path = tmp_path / "id.txt"
    path.write_text("x1\nx2\nx3\n")
    out = run_cli(["deg", str(path), "--json"])
    payload = json.loads(out.stdout)
    assert payload["degrees"] == [[1], [1], [1]]
    assert payload["deg_F"] == [3]


def test_parse_error_exit_code(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("x1 +\nx2\nx3\n")
    out = run_cli(["deg", str(path)])
    assert out.returncode == 3
    assert "error" in out.stderr


def test_reduce_nagata_stuck(nagata_file, nagata_inverse_file):
    out = run_cli([
        "reduce", nagata_file, "--weight", "nagata-lex",
        "--inverse", nagata_inverse_file, "--json",
    ])
    assert out.returncode == 2
    payload = json.loads(out.stdout)
    assert payload["result"] == "stuck"
    assert payload["automorphism_status"] == "verified"
    assert payload["verdict"].startswith("stuck with rigorous obstructions")


def test_reduce_unverified_downgrades(nagata_file):
    out = run_cli(["reduce", nagata_file, "--weight", "nagata-lex", "--json"])
    assert out.returncode == 2
    payload = json.loads(out.stdout)
    assert payload["verdict"] == "no reduction found"


def test_reduce_rejects_bad_inverse(nagata_file, tmp_path):
    path = tmp_path / "id.txt"
    path.write_text("x1\nx2\nx3\n")
    out = run_cli(["reduce", nagata_file, "--inverse", str(path)])
    assert out.returncode == 3


def test_factor_roundtrip(tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("x1 + x2^2\nx2\nx3 - 2*x1 - 2*x2^2\n")
    out = run_cli(["factor", str(path), "--json"])
    assert out.returncode == 0
    payload = json.loads(out.stdout)
    assert payload["result"] == "floor"
    assert payload["factors"]


def test_certify_nagata_stable_and_green():
    a = run_cli(["certify-nagata", "--json"])
    b = run_cli(["certify-nagata", "--json"])
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout
    payload = json.loads(a.stdout)
    assert payload["degrees"] == [[2, 0, 3], [1, 0, 2], [0, 0, 1]]
    assert payload["total"] == [3, 0, 6]
    assert payload["floor"] == [1, 1, 1]
    checks = payload["checks"]
    assert checks["pairwise_z_independent"] is True
    assert all(v["absent"] for v in checks["elementary_obstruction"].values())
    assert all(v["no_half"] for v in checks["su_obstruction_half"].values())
    assert all(v["dominates_all_multiples"]
               for v in checks["su_obstruction_order"].values())


def test_check_pair_su_fail_for_identity_pair(tmp_path):
    path = tmp_path / "pair.txt"
    path.write_text("x1 + x2^2\nx2\nx3\n\nx1 + x2^2\nx2\nx3\n")
    out = run_cli(["check", str(path), "su", "--json"])
    assert out.returncode == 1
    payload = json.loads(out.stdout)
    assert payload["SU5"]["holds"] is False


def test_check_type_scan(tmp_path):
    path = tmp_path / "pair.txt"
    path.write_text("x1 + x2^2\nx2\nx3\n\nx1\nx2\nx3\n")
    out = run_cli(["check", str(path), "type:IV", "--json"])
    assert out.returncode == 1
    assert json.loads(out.stdout)["typeIV"] is None


def test_check_inequality(tmp_path):
    path = tmp_path / "ineq.txt"
    path.write_text("x1\n\n0: x1\n1: 1\n\nx2\n")
    out = run_cli(["check-inequality", str(path), "--json"])
    assert out.returncode == 0
    payload = json.loads(out.stdout)
    assert payload["holds"] is True


def test_gen_deterministic():
    a = run_cli(["gen", "--seed", "3", "--count", "2", "--factors", "3", "--json"])
    b = run_cli(["gen", "--seed", "3", "--count", "2", "--factors", "3", "--json"])
    assert a.returncode == 0
    assert a.stdout == b.stdout
    payload = json.loads(a.stdout)
    assert len(payload["corpus"]) == 2
    assert payload["corpus"][0]["factors"]


def test_limits_env_and_flag_precedence(tmp_path, nagata_file):
    # env applies, flag overrides; bogus env is an input error
    out = run_cli(["reduce", nagata_file, "--weight", "nagata-lex", "--json"],
                  env_extra={"TAME3_LIMITS": "bidegree=4,rounds=2"})
    assert out.returncode == 2
    out = run_cli(["reduce", nagata_file, "--weight", "nagata-lex",
                   "--limits-bidegree", "6", "--json"],
                  env_extra={"TAME3_LIMITS": "bidegree=4"})
    assert out.returncode == 2
    out = run_cli(["deg", nagata_file])
    assert out.returncode == 0  # deg ignores limits entirely
    out = run_cli(["reduce", nagata_file], env_extra={"TAME3_LIMITS": "bogus=1"})
    assert out.returncode == 3


def test_custom_weight_vector(tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("x1\nx2\nx3\n")
    out = run_cli(["deg", str(path), "--weight", "2,0;0,1;0,1", "--json"])
    assert out.returncode == 0
    payload = json.loads(out.stdout)
    assert payload["degrees"] == [[2, 0], [0, 1], [0, 1]]
    out = run_cli(["deg", str(path), "--weight", "0,0;0,1;0,1"])
    assert out.returncode == 3
