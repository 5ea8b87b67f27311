import json
import subprocess
import sys

import pytest

from chamberfold.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_solve_spherical(capsys):
    code, out, _ = run(capsys, "solve", "--spec", "a2.json", "--variant", "spherical", "--u", "1,2")
    assert code == 0
    assert out["w_word"] == [2, 1] and out["witness"] == ["1", "1"] and out["unique"] is True
    code, out, _ = run(capsys, "solve", "--spec", "a2", "--variant", "spherical", "--u", "0,0")
    assert out["w_word"] == [] and out["tile_dim"] == 0


def test_solve_hyperbolic_minus(capsys):
    from chamberfold.specfile import load_group

    x = load_group("t246").interior_point
    u = ",".join(repr(-2 * c) for c in x)
    code, out, _ = run(capsys, "solve", "--spec", "t246", "--variant", "hyperbolic-minus", f"--u={u}")
    assert code == 0 and out["w_word"] == []


def test_solve_affine_with_h(capsys):
    code, out, _ = run(capsys, "solve", "--spec", "a1t", "--variant", "affine", "--u", "3")
    assert out["w_word"] == [1, 0, 1] and out["w_translation"] == ["-2"] and out["witness"] == ["1/2"]
    h = json.dumps({"linear": [["1/2"]], "translation": ["1/3"]})
    code, out, _ = run(capsys, "solve", "--spec", "a1t", "--variant", "affine", "--u", "7/5", "--h", h)
    assert code == 0


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "solve", "--spec", "a2", "--variant", "spherical", "--u", "1,x")[0] == 1
    assert run(capsys, "solve", "--spec", "a2", "--variant", "spherical", "--u", "1,2,3")[0] == 1
    assert run(capsys, "solve", "--spec", "missing", "--variant", "spherical", "--u", "1,2")[0] == 1
    assert run(capsys, "solve", "--spec", "a2", "--variant", "affine", "--u", "1,2")[0] == 1
    assert run(capsys, "solve", "--spec", "a2", "--variant", "spherical", "--u=1,-1")[0] == 2
    assert run(capsys, "solve", "--spec", "t246", "--variant", "hyperbolic-plus", "--u=0.5,-2,0.1")[0] == 2
    far = "--u=3.1,0.2,7.5"
    assert run(capsys, "solve", "--spec", "t246", "--variant", "hyperbolic-plus", far, "--budget", "1")[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"geometry": "spherical", "cartan": [[2, -1], [-1, 2]], "gram": [[1]]}')
    assert run(capsys, "info", "--spec", str(bad))[0] == 1
    assert run(capsys, "verify", "--spec", "t246", "--suite", "kostant")[0] == 1
    assert run(capsys, "render-section", "--spec", "a2t", "--out", str(tmp_path / "x.svg"))[0] == 1


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--spec", "b3.json", "--suite", "detsum")
    assert code == 0 and out["checked"] == 48 and out["value"] == "48" and out["violations"] == []
    code, out, _ = run(capsys, "verify", "--spec", "a3.json", "--suite", "kostant")
    assert code == 0 and out["checked"] == 24
    code, out, _ = run(capsys, "verify", "--spec", "a2.json", "--suite", "partition", "--samples", "1000", "--seed", "7")
    assert code == 0 and out["checked"] == 1000 and out["violations"] == []


def test_info(capsys):
    _, out, _ = run(capsys, "info", "--spec", "a2")
    assert out["order"] == 6 and out["roots"] == 3 and out["regular_elements"] == 2
    _, out, _ = run(capsys, "info", "--spec", "a1xa1")
    assert out["order"] == 4
    _, out, _ = run(capsys, "info", "--spec", "t246")
    assert out["order"] == "infinite" and out["signature"] == [2, 1]
    _, out, _ = run(capsys, "info", "--spec", "a2t")
    assert out["highest_root"] == ["1", "1"]


@pytest.mark.parametrize("name", ["a2", "a1xa1", "b2", "g2", "a3", "b3", "a1t", "a2t", "t237", "t246", "t334"])
def test_catalog_loads(capsys, name):
    code, out, _ = run(capsys, "info", "--spec", name)
    assert code == 0 and out["simple_normals"] >= 1


def test_render(capsys, tmp_path):
    path = tmp_path / "a3.svg"
    code, out, _ = run(capsys, "render-section", "--spec", "a3", "--out", str(path))
    assert code == 0 and out["polygons"] == 6 and path.exists()


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "chamberfold.cli", "info", "--spec", "a2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["order"] == 6


def test_byte_stable_reports():
    cmd = [sys.executable, "-m", "chamberfold.cli", "verify", "--spec", "a2", "--suite", "partition",
           "--samples", "40", "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b
