import math

import pandas as pd
import pytest

from entanglement_transfer.errors import SweepSpecError
from entanglement_transfer.quantum.entanglement import tmsv_entanglement
from entanglement_transfer.reproduction.helper import GridAxis, SweepSpec, parse_assignment
from entanglement_transfer.reproduction.output import ResultTable, emit_csv, emit_plotscript
from entanglement_transfer.reproduction.presets import PRESETS
from entanglement_transfer.reproduction.sweep import (
    COLUMNS,
    build_spec,
    main,
    parse_args,
    run_sweep,
)


def estimate_spec(**kwargs):
    axes = [GridAxis.parse("q_sq=0:0.5:2"), GridAxis.parse("l_over_lA=0,1")]
    return SweepSpec("fiber-estimate", axes, **kwargs)


def read_data(path):
    return pd.read_csv(path, comment="#")


def test_grid_axis_parsing():
    assert GridAxis.parse("q=0:1:3").values == (0.0, 0.5, 1.0)
    assert GridAxis.parse("nbar=1,10,100").values == (1.0, 10.0, 100.0)
    assert GridAxis.parse(" l = 0:0.1:2 ").name == "l"


@pytest.mark.parametrize(
    "text", ["q", "q=", "=1,2", "q=0:1", "q=0:1:1", "q=0:1:x", "q=1", "q=a,b", "q=0:inf:3"]
)
def test_grid_axis_rejects_malformed_input(text):
    with pytest.raises(SweepSpecError):
        GridAxis.parse(text)


def test_parse_assignment():
    assert parse_assignment("n_th = 0.5") == ("n_th", "0.5")
    with pytest.raises(SweepSpecError):
        parse_assignment("n_th")


def test_sweep_spec_validation():
    with pytest.raises(SweepSpecError):
        SweepSpec("no-such-quantity")
    with pytest.raises(SweepSpecError):
        estimate_spec(units="furlongs")
    with pytest.raises(SweepSpecError):
        estimate_spec(jobs=0)
    with pytest.raises(SweepSpecError):
        SweepSpec("fiber-estimate", [GridAxis.parse("q_sq=0,1")], fixed={"q_sq": 0.5})


def test_points_are_in_grid_order():
    spec = SweepSpec(
        "fiber-estimate",
        [GridAxis.parse("a=1,2"), GridAxis.parse("b=3,4")],
        fixed={"c": 5.0},
    )
    points = [(p["a"], p["b"], p["c"]) for p in spec.points()]
    assert points == [(1, 3, 5), (1, 4, 5), (2, 3, 5), (2, 4, 5)]


def test_run_sweep_fiber_estimate():
    table = run_sweep(estimate_spec())
    assert list(table.frame.columns) == COLUMNS["fiber-estimate"] + ["error"]
    assert len(table.frame) == 4
    assert (table.frame["error"] == "").all()
    at_origin = table.frame[(table.frame.q_sq == 0.5) & (table.frame.l_over_lA == 0.0)]
    assert at_origin.E_estimate.iloc[0] == pytest.approx(tmsv_entanglement(math.sqrt(0.5)))
    assert table.metadata["errors"] == "0"
    assert table.metadata["quantity"] == "fiber-estimate"


def test_run_sweep_in_bits():
    nats = run_sweep(estimate_spec()).frame
    bits = run_sweep(estimate_spec(units="bits")).frame
    assert (bits.E_estimate * math.log(2.0)).tolist() == pytest.approx(nats.E_estimate.tolist())
    assert bits.q_sq.tolist() == nats.q_sq.tolist()


def test_run_sweep_with_threads_keeps_grid_order():
    serial = run_sweep(estimate_spec()).frame
    threaded = run_sweep(estimate_spec(jobs=3)).frame
    pd.testing.assert_frame_equal(serial, threaded)


def test_failed_points_become_nan_rows():
    spec = SweepSpec(
        "fiber-estimate", [GridAxis.parse("q_sq=0.5,1.0")], fixed={"l_over_lA": 0.1}
    )
    table = run_sweep(spec)
    assert math.isnan(table.frame.E_estimate.iloc[1])
    assert table.frame.error.iloc[1].startswith("DomainError")
    assert table.frame.error.iloc[0] == ""
    assert table.metadata["errors"] == "1"


def test_bs_entangle_phase_conditions():
    axes = [GridAxis.parse("q1_abs=0.3,0.5")]
    pi_table = run_sweep(
        SweepSpec("bs-entangle", axes, fixed={"q2_abs": 0.3, "phase": math.pi}, cutoff=30)
    )
    zero_table = run_sweep(
        SweepSpec("bs-entangle", axes, fixed={"q2_abs": 0.3, "phase": 0.0}, cutoff=30)
    )
    assert pi_table.frame.E_pure.iloc[0] == pytest.approx(tmsv_entanglement(0.3), abs=1e-10)
    assert pi_table.frame.xi12_abs.iloc[0] == pytest.approx(0.3)
    assert zero_table.frame.E_pure.iloc[0] == pytest.approx(0.0, abs=1e-10)
    assert zero_table.frame.E_pure.iloc[1] > 0.0


def test_fiber_bound_follows_the_amplitude_floor():
    spec = SweepSpec(
        "fiber-bound",
        [GridAxis.parse("l_over_lA=0,0.5")],
        fixed={"q_abs": 0.1, "amplitude_floor": 0.02, "budget": 0.05},
    )
    table = run_sweep(spec)
    assert (table.frame.error == "").all()
    assert table.frame.E_bound.iloc[0] > table.frame.E_bound.iloc[1] > 0.0


def test_emit_csv(tmp_path):
    table = run_sweep(estimate_spec())
    path = tmp_path / "estimate.csv"
    emit_csv(table, str(path))
    lines = path.read_text().splitlines()
    preamble = [line for line in lines if line.startswith("#")]
    assert len(preamble) == len(table.metadata)
    assert lines[len(preamble)] == ",".join(table.frame.columns)
    assert len(lines) == len(preamble) + 1 + 4
    assert len(read_data(path)) == 4


def test_emit_csv_of_empty_table(tmp_path):
    table = ResultTable(pd.DataFrame(columns=["l_over_lA", "E_distance"]), {"quantity": "x"})
    path = tmp_path / "empty.csv"
    emit_csv(table, str(path))
    assert path.read_text().splitlines() == ["# quantity: x", "l_over_lA,E_distance"]


def test_reruns_are_byte_identical(tmp_path):
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    emit_csv(run_sweep(estimate_spec()), str(first), skip=("wall_time",))
    emit_csv(run_sweep(estimate_spec()), str(second), skip=("wall_time",))
    assert first.read_bytes() == second.read_bytes()


def test_emit_plotscript_curves_and_surface(tmp_path):
    table = run_sweep(estimate_spec())
    csv_path = tmp_path / "estimate.csv"
    emit_csv(table, str(csv_path))
    script = tmp_path / "estimate.gp"
    emit_plotscript(table, str(script), str(csv_path))
    text = script.read_text()
    assert "'estimate.csv'" in text
    assert "plot " in text
    assert "q_sq=0.5" in text

    many = SweepSpec("fiber-estimate", [GridAxis.parse("q_sq=0:0.5:10"), GridAxis.parse("l_over_lA=0,1")])
    emit_plotscript(run_sweep(many), str(script), str(csv_path))
    assert "splot " in script.read_text()


def test_every_data_figure_has_a_valid_preset():
    assert sorted(PRESETS) == sorted(
        ["fig2", "fig3", "fig4", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"]
    )
    for name in PRESETS:
        spec = build_spec(parse_args(["--preset", name]))
        assert spec.quantity == PRESETS[name]["quantity"]
        assert len(list(spec.points())) >= 2


def test_flags_override_the_preset():
    args = parse_args(
        ["--preset", "fig9", "--cutoff", "12", "--set", "n_th=0.5", "--grid", "nbar=1,10"]
    )
    spec = build_spec(args)
    assert spec.cutoff == 12
    assert spec.fixed["n_th"] == 0.5
    assert spec.axis_names == ["nbar"]


def test_unknown_preset_is_a_spec_error():
    with pytest.raises(SweepSpecError):
        build_spec(parse_args(["--preset", "fig5"]))


def test_main_exit_codes(tmp_path):
    out = tmp_path / "out" / "estimate.csv"
    argv = ["--quantity", "fiber-estimate", "--grid", "q_sq=0:0.5:2", "--out", str(out)]
    assert main(argv + ["--grid", "l_over_lA=0,1"]) == 0
    assert out.exists()
    assert out.with_suffix(".gp").exists()

    assert main(argv + ["--grid", "l_over_lA=0:1:1"]) == 2
    assert main(["--grid", "q_sq=0,1"]) == 2

    failing = ["--quantity", "fiber-estimate", "--grid", "q_sq=0.5,1.0", "--out", str(out)]
    assert main(failing + ["--set", "l_over_lA=0.1"]) == 1
