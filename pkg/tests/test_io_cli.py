from __future__ import annotations

import json

import numpy as np
import pytest

from dezacodes import io
from dezacodes.cli import main
from dezacodes.codes import SubspaceCode
from dezacodes.deza import build_family
from dezacodes.designs import sylvester_hadamard
from dezacodes.exactmat import FqMatrix, IntMatrix, all_ones, identity, row_space
from dezacodes.gf import make_field
from dezacodes.partitions import EquitablePartition, block_partition


def run(capsys, *argv: str) -> tuple[int, str, str]:
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def checks(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line.startswith("CHECK "):
            _, name, status, *_ = line.split(" ", 3) + [""]
            out[name] = status
    return out


# -- file formats --------------------------------------------------------------


def test_matrix_round_trip(tmp_path):
    m = IntMatrix([[1, -2, 0], [3, 4, 5]])
    path = tmp_path / "m.mat"
    io.write_matrix(path, m, make_field(3))
    assert io.read_matrix(path) == m
    parsed, field = io.parse_matrix(path.read_text())
    assert parsed == m and field == make_field(3)
    assert io.parse_matrix("1 1\n7\n")[1] is None


@pytest.mark.parametrize(
    "text,line",
    [("2 2\n1 0\n", None), ("2 2\n1 0\n0 x\n", 3), ("2 2\n1 0 0\n0 1\n", 2), ("a b\n", 1), ("1 1\n1\n2\n", 3)],
)
def test_matrix_format_errors(text, line):
    with pytest.raises(io.FormatError) as err:
        io.parse_matrix(text, "f.mat")
    assert str(err.value).startswith("f.mat" if line is None else f"f.mat:{line}")


def test_manifest_and_family(tmp_path):
    io.write_manifest(tmp_path / "manifest.txt", {"kind": "matrix-family", "field": "2^1"})
    assert io.read_manifest(tmp_path / "manifest.txt") == {"kind": "matrix-family", "field": "2^1"}
    for k in (10, 2, 1):
        io.write_matrix(tmp_path / f"M_{k}.mat", k * identity(2))
    mats, manifest, names = io.read_family(tmp_path)
    assert names == ["M_1.mat", "M_2.mat", "M_10.mat"]
    assert [int(m.array[0, 0]) for m in mats] == [1, 2, 10]
    io.write_manifest(tmp_path / "manifest.txt", {"files": "M_10.mat,M_1.mat"})
    assert io.read_family(tmp_path)[2] == ["M_10.mat", "M_1.mat"]
    io.write_manifest(tmp_path / "manifest.txt", {"files": "missing.mat"})
    with pytest.raises(io.FormatError):
        io.read_family(tmp_path)
    (tmp_path / "manifest.txt").write_text("no equals sign\n")
    with pytest.raises(io.FormatError):
        io.read_manifest(tmp_path / "manifest.txt")
    with pytest.raises(io.FormatError):
        io.read_family(tmp_path / "absent")


def test_code_round_trip(tmp_path):
    f = make_field(2, 2)
    rng = np.random.default_rng(1)
    members = [row_space(FqMatrix(f, rng.integers(0, 4, (2, 5)).astype(np.uint8))) for _ in range(4)]
    code = SubspaceCode.from_subspaces(members)
    io.write_code(tmp_path / "c.code", code)
    back = io.read_code(tmp_path / "c.code")
    assert back.members == code.members and back.field == f
    (tmp_path / "bad.code").write_text("ambient 5, field 2^1\n")
    with pytest.raises(io.FormatError):
        io.read_code(tmp_path / "bad.code")


def test_partition_and_permutation_files(tmp_path):
    part = EquitablePartition(5, ((0, 3), (1, 2, 4)))
    io.write_partition(tmp_path / "p.txt", part)
    assert io.read_partition(tmp_path / "p.txt") == part
    (tmp_path / "bad.txt").write_text("0 1\n1 2\n")
    with pytest.raises(io.FormatError):
        io.read_partition(tmp_path / "bad.txt")
    (tmp_path / "g.txt").write_text("1 0 2 3\n0 1 3 2\n")
    assert io.orbit_partition_from_file(tmp_path / "g.txt", 4).cells == ((0, 1), (2, 3))


# -- command line ---------------------------------------------------------------


@pytest.fixture(scope="module")
def deza2(tmp_path_factory):
    out = tmp_path_factory.mktemp("q2")
    assert main(["deza", "build", "--field", "2^1", "--out", str(out)]) == 0
    return out


def test_deza_build_writes_family(deza2):
    manifest = io.read_manifest(deza2 / "manifest.txt")
    assert manifest["kind"] == "deza-family" and manifest["params"] == "28,12,6,4"
    mats, _, _ = io.read_family(deza2)
    fam = build_family(make_field(2))
    assert mats == list(fam.members)


def test_deza_verify(capsys):
    status, out, _ = run(capsys, "deza", "verify", "--field", "2^1")
    assert status == 0 and "(28, 12, 6, 4)" in out
    assert set(checks(out).values()) == {"PASS"}
    names = [line.split()[1] for line in out.splitlines()]
    assert names == sorted(names)
    status, out, _ = run(capsys, "deza", "verify", "--field", "3^1")
    assert status == 0 and "commutative=false" in out


def test_deza_bad_field(capsys, tmp_path):
    status, out, err = run(capsys, "deza", "build", "--field", "9^x", "--out", str(tmp_path))
    assert status == 2 and out == "" and err.startswith("error:")


def test_codes_build_so_check_and_mindist(capsys, deza2, tmp_path):
    code_path = tmp_path / "so.code"
    status, out, _ = run(capsys, "codes", "build-so", "--family", str(deza2), "--out", str(code_path))
    assert status == 0 and checks(out) == {"build": "PASS", "precheck": "PASS", "self_orthogonal": "PASS"}
    status, out, _ = run(capsys, "codes", "check", "--code", str(code_path), "--property", "so")
    assert status == 0 and checks(out) == {"self_orthogonal": "PASS"}
    status, out, _ = run(capsys, "codes", "check", "--code", str(code_path))
    assert status == 1 and checks(out) == {"lcd": "FAIL", "self_orthogonal": "PASS"}
    status, out, _ = run(capsys, "codes", "mindist", "--code", str(code_path))
    assert status == 0 and "d=6 pair=(0,1)" in out


def test_codes_build_lcd_q3(capsys, tmp_path):
    fam_dir = tmp_path / "q3"
    assert main(["deza", "build", "--field", "3^1", "--out", str(fam_dir)]) == 0
    capsys.readouterr()
    status, out, _ = run(capsys, "codes", "build-lcd", "--family", str(fam_dir), "--json")
    doc = json.loads(out)
    assert status == 0 and doc["ok"] is True
    assert {c["name"]: c["status"] for c in doc["checks"]}["lcd"] == "PASS"


def test_codes_precheck_failure_and_errors(capsys, tmp_path):
    io.write_matrix(tmp_path / "I.mat", identity(3))
    status, out, _ = run(capsys, "codes", "build-so", "--family", str(tmp_path), "--field", "2^1")
    assert status == 1 and "witness=(0, 0, 0, 0, 1)" in out
    status, _, err = run(capsys, "codes", "build-so", "--family", str(tmp_path))
    assert status == 2 and "field" in err
    single = SubspaceCode.from_subspaces([row_space(FqMatrix(make_field(2), np.array([[1, 0]], dtype=np.uint8)))])
    io.write_code(tmp_path / "one.code", single)
    status, _, err = run(capsys, "codes", "mindist", "--code", str(tmp_path / "one.code"))
    assert status == 2 and err


def test_determinism(capsys, deza2, tmp_path):
    outputs = []
    for k in range(2):
        path = tmp_path / f"c{k}.code"
        run(capsys, "codes", "build-so", "--family", str(deza2), "--out", str(path), "--sample", "2", "--seed", "5")
        status, out, _ = run(capsys, "codes", "build-so", "--family", str(deza2), "--sample", "2", "--seed", "5")
        outputs.append((path.read_bytes(), out))
    assert outputs[0] == outputs[1]


def test_designs_commands(capsys, tmp_path):
    io.write_matrix(tmp_path / "h4.mat", sylvester_hadamard(4))
    status, out, _ = run(capsys, "designs", "verify", "--kind", "weighing", "--matrix", str(tmp_path / "h4.mat"))
    assert status == 0 and "k=4" in out
    status, out, _ = run(capsys, "designs", "verify", "--kind", "weighing", "--matrix", str(tmp_path / "h4.mat"), "--k", "3")
    assert status == 1
    status, _, err = run(capsys, "designs", "verify", "--kind", "symmetric")
    assert status == 2 and "--matrix" in err

    a = np.zeros((7, 7), dtype=np.int64)
    for i in range(7):
        a[i, [(i + d) % 7 for d in (1, 2, 4)]] = 1
    io.write_matrix(tmp_path / "fano.mat", a)
    status, _, _ = run(capsys, "designs", "verify", "--kind", "symmetric", "--matrix", str(tmp_path / "fano.mat"), "--params", "7,3,1")
    assert status == 0

    g = np.kron(np.ones((3, 3), dtype=np.int64) - np.eye(3, dtype=np.int64), np.ones((2, 2), dtype=np.int64))
    io.write_matrix(tmp_path / "sgdd.mat", g)
    status, out, _ = run(capsys, "designs", "verify", "--kind", "sgdd", "--matrix", str(tmp_path / "sgdd.mat"), "--params", "6,4,3,2,4,2")
    assert status == 0 and checks(out) == {"sgdd": "PASS", "sgdd_quotient": "PASS"}


def test_designs_linked_system(capsys, tmp_path):
    s = np.roll(np.eye(4, dtype=np.int64), 1, axis=1)
    p = [np.linalg.matrix_power(s, i) for i in range(3)]
    for i in range(3):
        for j in range(3):
            if i != j:
                a = np.kron(np.ones((4, 4), dtype=np.int64) - p[i] @ p[j].T, np.ones((2, 2), dtype=np.int64))
                io.write_matrix(tmp_path / f"A_{i}_{j}.mat", a)
    io.write_manifest(tmp_path / "manifest.txt", {"kind": "linked-system", "f": 3, "type": "sgdd", "params": "8,6,4,2,6,4"})
    status, out, _ = run(capsys, "designs", "verify", "--kind", "linked", "--family", str(tmp_path), "--prime", "2")
    assert status == 0 and checks(out) == {"linked_system": "PASS", "precheck": "PASS"}
    assert "sigma=4 tau=6" in out


def _write_scheme(directory, mats):
    directory.mkdir()
    for k, m in enumerate(mats):
        io.write_matrix(directory / f"A_{k}.mat", m)
    return directory


def test_scheme_commands(capsys, tmp_path):
    k4 = _write_scheme(tmp_path / "k4", [identity(4), all_ones(4) - identity(4)])
    status, out, _ = run(capsys, "scheme", "verify", "--scheme", str(k4))
    assert status == 0 and "scheme.B1" in out
    status, out, _ = run(capsys, "scheme", "gate", "--scheme", str(k4), "--set", "1", "--prime", "2")
    assert status == 1 and "witness=(1, 1, 0, 3)" in out

    e, j = identity(3), all_ones(3)
    mats = [identity(6), IntMatrix(np.kron(e.array, (all_ones(2) - identity(2)).array)), IntMatrix(np.kron((j - e).array, all_ones(2).array))]
    good = _write_scheme(tmp_path / "good", mats)
    out_code = tmp_path / "s.code"
    status, out, _ = run(capsys, "scheme", "code", "--scheme", str(good), "--set", "2", "--prime", "2", "--out", str(out_code))
    assert status == 0 and checks(out)["self_orthogonal"] == "PASS"
    assert len(io.read_code(out_code)) == 1

    bad = _write_scheme(tmp_path / "bad", [identity(3), all_ones(3)])
    status, out, _ = run(capsys, "scheme", "verify", "--scheme", str(bad))
    assert status == 1 and "axiom 2" in out


def test_partition_quotient_of_deza_q3(capsys, tmp_path):
    fam = build_family(make_field(3))
    io.write_matrix(tmp_path / "n0.mat", fam[0])
    io.write_partition(tmp_path / "cells.txt", block_partition(fam.n, 9))
    out_path = tmp_path / "q.mat"
    status, out, _ = run(
        capsys, "partition", "quotient", "--matrix", str(tmp_path / "n0.mat"), "--partition", str(tmp_path / "cells.txt"), "--out", str(out_path)
    )
    assert status == 0
    assert io.read_matrix(out_path) == 3 * (all_ones(9) - identity(9))
    status, out, _ = run(capsys, "partition", "quotient", "--matrix", str(tmp_path / "n0.mat"), "--partition", str(tmp_path / "cells.txt"))
    assert out.startswith("9 9\n")


def test_partition_verify_with_perms(capsys, tmp_path):
    io.write_matrix(tmp_path / "c.mat", np.array([[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]]))
    (tmp_path / "g.txt").write_text("2 3 0 1\n")
    status, out, _ = run(capsys, "partition", "verify", "--matrix", str(tmp_path / "c.mat"), "--perms", str(tmp_path / "g.txt"))
    assert status == 0
    (tmp_path / "cells.txt").write_text("0 1\n2\n3\n")
    status, out, _ = run(capsys, "partition", "verify", "--matrix", str(tmp_path / "c.mat"), "--partition", str(tmp_path / "cells.txt"))
    assert status == 1 and "witness" in out
    status, _, err = run(capsys, "partition", "verify", "--matrix", str(tmp_path / "c.mat"))
    assert status == 2


@pytest.mark.parametrize("group", ["deza", "codes", "designs", "scheme", "partition"])
def test_help(group, capsys):
    with pytest.raises(SystemExit) as exc:
        main([group, "--help"])
    assert exc.value.code == 0
    assert "usage" in capsys.readouterr().out
