import asyncio
import json
from pathlib import Path

import pandas as pd
import pytest

from src.cli import main
from src.cli.outputs import long_format
from src.cli.sweep import SweepSpec, evaluate_chain, grid_points, sweep, warm_start_chains
from src.config import SweepAxis, parse_config
from src.errors import ConfigError
from src.solvers import SolverKind

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SMALL_CHAIN = (
    "GEOMETRY=chain\nN_X=6\nBOUNDARY=open\nT=1\n"
    "GS_OVER_T=0.8\nHZS_OVER_T=-0.4\nV0=0\nSOLVER=hf\nRESTARTS=1\n"
)


def _write(tmp_path: Path, text: str) -> str:
    path = tmp_path / "run.env"
    path.write_text(text)
    return str(path)


def _manifest(out: Path) -> dict:
    return json.loads((out / "manifest.json").read_text())


def test_regime_preset(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["regime", "--config", str(CONFIGS / "regime.env"), "--out", str(out)])
    assert code == 0
    assert "gS/t = 3.2e-05" in capsys.readouterr().out
    table = pd.read_csv(out / "regime.csv")
    assert table.loc[0, "gS_over_t"] == pytest.approx(3.2e-5)
    manifest = _manifest(out)
    assert manifest["subcommand"] == "regime"
    assert manifest["exit_code"] == 0
    assert "regime.csv" in manifest["outputs"]
    assert manifest["resolved"]["model"]["t"] == 7.5


def test_pipeline_returns_message_without_printing(tmp_path, capsys):
    from src.pipeline import run_pipeline

    final = asyncio.run(run_pipeline("regime", str(CONFIGS / "regime.env"), tmp_path / "out"))
    assert final["exit_code"] == 0
    assert "gS/t = 3.2e-05" in final["message"]
    assert capsys.readouterr().out == ""


def test_unknown_config_key_exits_with_one(tmp_path):
    config = _write(tmp_path, "BOGUS=1\n")
    assert main(["regime", "--config", config, "--out", str(tmp_path / "out")]) == 1
    assert not (tmp_path / "out" / "manifest.json").exists()


def test_conflicting_keys_exit_with_one(tmp_path):
    config = _write(tmp_path, "G=0.48\nGS_OVER_T=0.1\n")
    assert main(["regime", "--config", config, "--out", str(tmp_path / "out")]) == 1


def test_invalid_lattice_exits_with_one(tmp_path):
    config = _write(tmp_path, "GEOMETRY=chain\nN_X=1\n")
    assert main(["regime", "--config", config, "--out", str(tmp_path / "out")]) == 1


def test_missing_config_file_exits_with_one(tmp_path):
    assert main(["regime", "--config", str(tmp_path / "absent.env"), "--out", str(tmp_path / "out")]) == 1


def test_phase_diagram_without_axes_is_a_single_point(tmp_path):
    out = tmp_path / "out"
    assert main(["phase-diagram", "--config", _write(tmp_path, SMALL_CHAIN), "--out", str(out)]) == 0
    table = pd.read_csv(out / "phase_diagram.csv")
    assert set(table["observable"]) == {"n_z", "abs_n_z", "total_n", "energy"}
    assert table["index"].unique().tolist() == [0]
    n_z = table.loc[table["observable"] == "n_z", "value"].iloc[0]
    assert n_z < -0.9
    sidecar = json.loads((out / "phase_diagram.json").read_text())
    assert sidecar["solver"] == "hf"
    assert "phase_diagram.json" in _manifest(out)["outputs"]


def test_strict_mode_flags_non_convergence(tmp_path):
    config = _write(tmp_path, SMALL_CHAIN + "MAX_ITERATIONS=1\n")
    assert main(["phase-diagram", "--config", config, "--out", str(tmp_path / "lenient")]) == 0
    assert main(["phase-diagram", "--config", config, "--out", str(tmp_path / "strict"), "--strict"]) == 2
    assert _manifest(tmp_path / "strict")["exit_code"] == 2


def test_seed_flag_overrides_config(tmp_path):
    out = tmp_path / "out"
    assert main(["regime", "--config", _write(tmp_path, SMALL_CHAIN + "SEED=3\n"), "--out", str(out), "--seed", "11"]) == 0
    assert _manifest(out)["seed"] == 11


def test_bands_square_writes_gap_and_nesting(tmp_path):
    config = _write(tmp_path, "GEOMETRY=square\nN_X=4\nN_Y=4\nGS_OVER_T=0.3\nBANDS_RESOLUTION=16\n")
    out = tmp_path / "out"
    assert main(["bands", "--config", config, "--out", str(out)]) == 0
    sidecar = json.loads((out / "bands.json").read_text())
    # gS/t = 0.3 with t = 7.5 meV gives 2gSφ₀ = 4.5 meV
    assert sidecar["gap"] == pytest.approx(4.5)
    assert sidecar["gap_numeric"] == pytest.approx(4.5, rel=1e-9)
    assert sidecar["nesting"] is True
    assert len(pd.read_csv(out / "bands.csv")) == 16 * 16
    assert len(pd.read_csv(out / "fermi_surface.csv")) == 200


def test_bands_honeycomb_reports_fermi_velocity(tmp_path):
    config = _write(tmp_path, "GEOMETRY=honeycomb\nN_X=2\nN_Y=2\nBANDS_RESOLUTION=12\n")
    out = tmp_path / "out"
    assert main(["bands", "--config", config, "--out", str(out)]) == 0
    sidecar = json.loads((out / "bands.json").read_text())
    assert sidecar["v_F"] == pytest.approx(sidecar["v_F_expected"], rel=1e-3)


def test_conductance_preset(tmp_path):
    out = tmp_path / "out"
    assert main(["conductance", "--config", str(CONFIGS / "conductance.env"), "--out", str(out)]) == 0
    table = pd.read_csv(out / "conductance.csv")
    assert set(table["reservoir_temperature_mk"]) == {10.0, 30.0, 100.0}
    assert table["G_raw"].min() >= 0
    assert table.groupby(["h_z", "reservoir_temperature_mk"])["G_normalized"].max().eq(1.0).all()
    sidecar = json.loads((out / "conductance.json").read_text())
    assert len(sidecar["curves"]) == 9
    assert all(curve["peak_mu"] for curve in sidecar["curves"])


def test_ed_spectrum_dump(tmp_path):
    config = _write(tmp_path, "GEOMETRY=chain\nN_X=3\nBOUNDARY=open\nT=1\nV0=0\n")
    out = tmp_path / "out"
    assert main(["ed-spectrum", "--config", config, "--out", str(out)]) == 0
    assert (out / "spectrum.npz").exists() and (out / "spectrum.json").exists()
    additions = pd.read_csv(out / "addition_energies.csv")
    assert additions["n"].tolist() == [1, 2, 3]


def test_grid_points_first_axis_slowest():
    axes = [SweepAxis.parse("gs_over_t:0.1:0.2:2"), SweepAxis.parse("hzs_over_t:-1:0:3")]
    points = grid_points(axes)
    assert [i for i, _ in points] == list(range(6))
    assert [p["gs_over_t"] for _, p in points] == [0.1, 0.1, 0.1, 0.2, 0.2, 0.2]
    assert [p["hzs_over_t"] for _, p in points[:3]] == [-1.0, -0.5, 0.0]
    assert grid_points([]) == [(0, {})]


def test_warm_start_chains_step_along_first_axis():
    axes = [SweepAxis.parse("gs_over_t:0.1:0.3:3"), SweepAxis.parse("hzs_over_t:-1:0:2")]
    chains = warm_start_chains(grid_points(axes), axes)
    assert [[i for i, _ in chain] for chain in chains] == [[0, 2, 4], [1, 3, 5]]
    for chain in chains:
        assert len({p["hzs_over_t"] for _, p in chain}) == 1


def test_failed_point_is_recorded_in_row():
    config = parse_config({"geometry": "chain", "n_x": "4", "boundary": "open", "solver": "ed", "ed_cap": "10"})
    rows = evaluate_chain(config, [(0, {})])
    assert rows[0]["converged"] is False
    assert "cap" in rows[0]["error"]


def test_warm_started_chain_matches_cold_points(tmp_path):
    config = parse_config({
        "geometry": "chain", "n_x": "6", "boundary": "open", "t": "1", "v0": "0",
        "hzs_over_t": "-0.4", "n_electrons": "3", "restarts": "2",
    })
    chain = [(0, {"gs_over_t": 0.8}), (1, {"gs_over_t": 0.9})]
    warm = evaluate_chain(config, chain, warm_start=True)
    cold = evaluate_chain(config, chain, warm_start=False)
    assert [r["error"] for r in warm] == [None, None]
    for w, c in zip(warm, cold):
        assert w["energy"] == pytest.approx(c["energy"], abs=1e-8)


def test_sweep_is_independent_of_worker_count():
    config = parse_config({
        "geometry": "chain", "n_x": "6", "boundary": "open", "t": "1", "v0": "0", "restarts": "1",
        "sweep_axes": "gs_over_t:0.2:0.8:3;hzs_over_t:-0.6:-0.2:3",
    })
    serial = sweep(config, SweepSpec.from_config(config, workers=1))
    parallel = sweep(config, SweepSpec.from_config(config, workers=2))
    assert len(serial) == 9
    pd.testing.assert_frame_equal(serial, parallel)


def test_sweep_spec_from_config():
    config = parse_config({"solver": "ed", "seed": "4", "warm_start": "true", "sweep_axes": "g:1:2:2"})
    spec = SweepSpec.from_config(config, workers=3)
    assert spec.solver is SolverKind.ED
    assert (spec.seed, spec.workers, spec.warm_start) == (4, 3, True)


def test_long_format_rejects_unknown_observables():
    frame = pd.DataFrame({"index": [0, 1], "g": [1.0, 2.0], "n_z": [-1.0, 0.0]})
    long = long_format(frame, ["index", "g"], ["n_z"])
    assert list(long.columns) == ["index", "g", "observable", "value"]
    with pytest.raises(ConfigError) as excinfo:
        long_format(frame, ["index"], ["n_z", "nonsense"])
    assert excinfo.value.key == "observables"
