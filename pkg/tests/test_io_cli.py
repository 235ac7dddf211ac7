import json
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from relstate import io
from relstate.channels import sweep, werner_state, xi_state
from relstate.cli import main, parse_grid
from relstate.discord import MeasurementBasis
from relstate.errors import DimensionError, ValidationError
from relstate.operators import PureBipartiteState, maximally_entangled, random_density, random_pure_state


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pure_state_roundtrip_is_exact(tmp_path):
    psi = random_pure_state(2, 3, seed=0)
    io.write_state(tmp_path / "s.json", psi, metadata={"note": "x"})
    back = io.read_state(tmp_path / "s.json")
    assert isinstance(back, PureBipartiteState)
    assert np.array_equal(back.amplitudes, psi.amplitudes)


def test_density_roundtrip_is_exact(tmp_path):
    rho = random_density(6, seed=1, dims=(3, 2))
    io.write_state(tmp_path / "r.json", rho)
    back = io.read_state(tmp_path / "r.json")
    assert back.dims == (3, 2)
    assert np.array_equal(back.matrix, rho.matrix)


def test_state_file_layout():
    obj = io.state_to_dict(maximally_entangled(2))
    assert obj["schemaVersion"] == 1 and obj["kind"] == "pure"
    assert obj["dimA"] == 2 and obj["dimB"] == 2
    assert_allclose(np.array(obj["data"])[:, 0], [2 ** -0.5, 0, 0, 2 ** -0.5])


@pytest.mark.parametrize("mutate, match", [
    (lambda o: o.update(schemaVersion=2), "schemaVersion"),
    (lambda o: o.update(kind="mixed"), "kind"),
    (lambda o: o.update(dimA=0), "dimA"),
    (lambda o: o["data"].pop(), "pairs"),
    (lambda o: o["data"].__setitem__(0, [1.0, 0.0]), "alpha"),
])
def test_invalid_state_files(mutate, match):
    obj = io.state_to_dict(maximally_entangled(2))
    mutate(obj)
    with pytest.raises(ValidationError, match=match):
        io.state_from_dict(obj)


def test_basis_file_roundtrip(tmp_path):
    b = MeasurementBasis.fourier(3)
    io.write_basis(tmp_path / "b.json", b)
    assert np.array_equal(io.read_basis(tmp_path / "b.json").vectors, b.vectors)
    (tmp_path / "bad.json").write_text(json.dumps({"kind": "measurement-basis", "dim": 2, "vectors": []}))
    with pytest.raises(DimensionError):
        io.read_basis(tmp_path / "bad.json")


def test_sweep_csv():
    text = io.sweep_to_csv(sweep("dephase", 2, [0.0, 1.0], [2, 4]))
    lines = text.strip().split("\n")
    assert lines[0] == "p,upsilon_2_numeric,upsilon_2_closed,diff_2,upsilon_4_numeric,upsilon_4_closed,diff_4"
    assert len(lines) == 3


def test_parse_grid():
    assert parse_grid("0:1:0.1") == [round(0.1 * i, 12) for i in range(11)]
    assert parse_grid("0.5:0.5:0.1") == [0.5]


def test_cli_measures_bell(tmp_path, capsys):
    io.write_state(tmp_path / "bell.json", maximally_entangled(2))
    code, out, _ = _run(capsys, "measures", str(tmp_path / "bell.json"))
    assert code == 0
    obj = json.loads(out)
    assert obj["values"]["2"] == pytest.approx(1.0)
    assert obj["concurrence"] == pytest.approx(1.0)


def test_cli_measures_product_density(tmp_path, capsys):
    rho = PureBipartiteState(np.kron([1, 0], [0, 1]).reshape(2, 2)).density()
    io.write_state(tmp_path / "prod.json", rho)
    code, out, _ = _run(capsys, "measures", str(tmp_path / "prod.json"), "--csv", "--path", "wedge")
    assert code == 0
    rows = dict(line.split(",") for line in out.strip().split("\n")[1:])
    assert all(float(v) == 0.0 for v in rows.values())


def test_cli_measures_schmidt_state(tmp_path, capsys):
    path = str(tmp_path / "s.json")
    assert main(["make-state", "schmidt", "--d", "3", "--schmidt", "3,2,1", "-o", path]) == 0
    code, out, _ = _run(capsys, "measures", path, "--k-list", "2,3")
    values = json.loads(out)["values"]
    assert values["2"] == pytest.approx(0.957427107756338, abs=1e-12)
    assert values["3"] == pytest.approx(0.8660254037844386, abs=1e-12)


def test_cli_measures_schmidt_projector_basis(tmp_path, capsys):
    io.write_state(tmp_path / "w.json", werner_state(3, 0.5))
    _, a, _ = _run(capsys, "measures", str(tmp_path / "w.json"))
    _, b, _ = _run(capsys, "measures", str(tmp_path / "w.json"), "--basis", "schmidt-projector")
    va, vb = json.loads(a)["values"], json.loads(b)["values"]
    assert_allclose([vb[k] for k in va], list(va.values()), atol=1e-12)


def test_cli_exit_codes(tmp_path, capsys):
    io.write_state(tmp_path / "bell.json", maximally_entangled(2))
    bell = str(tmp_path / "bell.json")
    assert _run(capsys, "measures", bell, "--json", "--csv")[0] == 64
    assert _run(capsys, "measures", bell, "--k-list", "7")[0] == 64
    assert _run(capsys, "sweep", "--channel", "dephase", "--p-grid", "0:2:0.5")[0] == 64
    assert _run(capsys, "sweep", "--channel", "dephase", "--d", "5")[0] == 64
    assert _run(capsys, "discord", bell)[0] == 64
    assert _run(capsys, "frobnicate")[0] == 64
    (tmp_path / "bad.json").write_text('{"schemaVersion": 1, "kind": "pure", "dimA": 2, "dimB": 2, "data": []}')
    code, _, err = _run(capsys, "measures", str(tmp_path / "bad.json"))
    assert code == 2 and "pairs" in err
    (tmp_path / "junk.json").write_text("not json")
    assert _run(capsys, "measures", str(tmp_path / "junk.json"))[0] == 2
    assert _run(capsys, "measures", str(tmp_path / "missing.json"))[0] == 2


def test_cli_sweep(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--channel", "depolarize", "--d", "3", "--out", str(out)]) == 0
    rows = out.read_text().strip().split("\n")
    header = rows[0].split(",")
    last = dict(zip(header, rows[-1].split(",")))
    assert float(last["p"]) == 1.0
    assert all(float(last[f"upsilon_{k}_numeric"]) == pytest.approx(1.0) for k in (2, 3, 4, 9))
    code, text, _ = _run(capsys, "sweep", "--channel", "dephase", "--d", "3", "--p-grid", "0:0:1")
    first = dict(zip(text.split("\n")[0].split(","), text.split("\n")[1].split(",")))
    assert float(first["upsilon_2_numeric"]) == pytest.approx(0.288675, abs=1e-6)
    assert float(first["upsilon_4_numeric"]) < 1e-12 and float(first["upsilon_9_numeric"]) < 1e-12


def test_cli_verify(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "invariance", "--trials", "200", "--seed", "7")
    assert code == 0 and out.count("PASS") == 2
    code, out, _ = _run(capsys, "verify", "--suite", "oracle", "--trials", "50")
    assert code == 0 and "FAIL" not in out


def test_cli_discord(tmp_path, capsys):
    xi = str(tmp_path / "xi.json")
    io.write_state(xi, xi_state(2))
    io.write_basis(tmp_path / "comp.json", MeasurementBasis.computational(2))
    code, out, _ = _run(capsys, "discord", xi, "--basis-file", str(tmp_path / "comp.json"))
    assert code == 0 and out.strip() == "discord: 0.000000"
    io.write_state(tmp_path / "w.json", werner_state(2, 0.5))
    code, out, _ = _run(capsys, "discord", str(tmp_path / "w.json"), "--minimize", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["discord"] > 0.01 and obj["upper_bound"]
    io.write_state(tmp_path / "prod.json", PureBipartiteState(np.diag([1.0, 0.0])))
    code, out, _ = _run(capsys, "discord", str(tmp_path / "prod.json"), "--minimize", "--json")
    assert json.loads(out)["discord"] <= 1e-6
    io.write_state(tmp_path / "big.json", maximally_entangled(4))
    assert _run(capsys, "discord", str(tmp_path / "big.json"), "--minimize")[0] == 64


def test_module_entry_point(tmp_path):
    path = tmp_path / "bell.json"
    res = subprocess.run([sys.executable, "-m", "relstate", "make-state", "bell", "-o", str(path)])
    assert res.returncode == 0 and path.exists()
