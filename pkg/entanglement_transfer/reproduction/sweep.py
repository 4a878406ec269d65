"""Command-line driver that evaluates one entanglement quantity over a
parameter grid and writes the result as CSV plus a gnuplot script."""

import argparse
import cmath
import logging
import math
import os
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor

import pandas as pd
from dotenv import load_dotenv

from entanglement_transfer import __version__
from entanglement_transfer.config import Config
from entanglement_transfer.errors import (
    DomainError,
    EntanglementTransferError,
    OutputError,
    SweepSpecError,
)
from entanglement_transfer.quantum.channels import (
    FiberChannelSpec,
    SqueezedInputPair,
    fiber_output,
    gaussian_fiber_variance,
    lossless_bs_output,
    lossy_bs_output,
)
from entanglement_transfer.quantum.devices import (
    BeamSplitterTR,
    PlateSpec,
    bs_matrix,
    plate_matrices,
    xi12,
)
from entanglement_transfer.quantum.entanglement import (
    convexity_bound,
    distance_to_separable_gaussians,
    extraction_estimate,
    spectral_bound,
    tmsv_entanglement,
)
from entanglement_transfer.quantum.fock import block_decompose, pure_entanglement
from entanglement_transfer.reproduction.helper import (
    QUANTITIES,
    GridAxis,
    SweepSpec,
    Timer,
    parse_assignment,
)
from entanglement_transfer.reproduction.output import ResultTable, emit_csv, emit_plotscript
from entanglement_transfer.reproduction.presets import PRESETS

COLUMNS = {
    "bs-entangle": ["q1_abs", "q2_abs", "phase", "xi12_abs", "E_pure"],
    "bs-lossy-bound": [
        "thickness",
        "n_real",
        "n_imag",
        "E_lossless",
        "E_bound",
        "E_ladder_bound",
        "off_block_weight",
        "trace_deficit",
    ],
    "fiber-estimate": ["q_sq", "l_over_lA", "E_estimate"],
    "fiber-bound": ["q_abs", "l_over_lA", "E_bound", "trace_deficit"],
    "fiber-distance": [
        "l_over_lA",
        "nbar",
        "E_distance",
        "E_normalized",
        "minimizer_restarts_used",
    ],
    "compare": ["l_over_lA", "nbar", "E_bound", "E_estimate", "E_distance"],
    "available-entanglement": ["xi", "l_over_lA", "E_distance", "E_tmsv"],
}

# ratios stay dimensionless under a change of units
UNITLESS = ["E_normalized"]


def _require(point, name, default=None):
    value = point.get(name, default)
    if value is None:
        raise DomainError(f"parameter {name} is neither swept nor fixed")
    return value


def _squeezed_pair(point):
    q1 = _require(point, "q1_abs")
    q2 = _require(point, "q2_abs") * cmath.exp(1j * _require(point, "phase", math.pi))
    return SqueezedInputPair(q1, q2)


def _q_from_nbar(nbar):
    if nbar <= 0:
        raise DomainError(f"mean photon number must be positive, got {nbar}")
    return math.sqrt(nbar / (1.0 + nbar))


def _distance(xi, point, seed):
    chan = FiberChannelSpec.from_length(_require(point, "l_over_lA"), point.get("n_th", 0.0))
    distance, _, diagnostics = distance_to_separable_gaussians(
        gaussian_fiber_variance(xi, chan), seed=seed
    )
    return distance, diagnostics


def bs_entangle(point, spec):
    inputs = _squeezed_pair(point)
    bs = BeamSplitterTR.from_phases(point.get("transmittance", 0.5))
    psi = lossless_bs_output(inputs, bs_matrix(bs), spec.cutoff)
    row = {
        "phase": _require(point, "phase", math.pi),
        "xi12_abs": abs(xi12(inputs.q1, inputs.q2, bs)),
        "E_pure": pure_entanglement(psi),
    }
    return row, psi.truncation_deficit, 0


def bs_lossy_bound(point, spec):
    inputs = _squeezed_pair(point)
    thickness = _require(point, "thickness")
    n_real = _require(point, "n_real")
    n_imag = _require(point, "n_imag")
    lossless = plate_matrices(PlateSpec(n_real, thickness))
    psi = lossless_bs_output(inputs, lossless.Tmat, spec.cutoff)
    device = plate_matrices(PlateSpec(complex(n_real, n_imag), thickness))
    state = lossy_bs_output(
        inputs, device, spec.cutoff, budget=point.get("budget", Config.TRUNCATION_BUDGET)
    )
    decomposition = block_decompose(state, discard_off_block=True)
    row = {
        "E_lossless": pure_entanglement(psi),
        "E_bound": spectral_bound(state),
        "E_ladder_bound": convexity_bound(state, discard_off_block=True),
        "off_block_weight": decomposition.off_block_weight,
        "trace_deficit": state.truncation_deficit,
    }
    return row, max(psi.truncation_deficit, state.truncation_deficit), 0


def fiber_estimate(point, spec):
    q = math.sqrt(_require(point, "q_sq"))
    T = math.exp(-_require(point, "l_over_lA"))
    return {"E_estimate": extraction_estimate(q, T, T)}, 0.0, 0


def _bound_cutoff(q, point, cutoff):
    floor = point.get("amplitude_floor")
    if floor is None or q == 0.0:
        return cutoff
    return max(1, math.ceil(math.log(floor) / math.log(q)))


def fiber_bound(point, spec):
    q = _require(point, "q_abs")
    chan = FiberChannelSpec.from_length(_require(point, "l_over_lA"))
    cutoff = _bound_cutoff(q, point, spec.cutoff)
    state = fiber_output(
        q, chan, cutoff, budget=point.get("budget", Config.TRUNCATION_BUDGET)
    )
    row = {"E_bound": convexity_bound(state), "trace_deficit": state.truncation_deficit}
    return row, state.truncation_deficit, 0


def fiber_distance(point, spec):
    nbar = _require(point, "nbar")
    q = _q_from_nbar(nbar)
    distance, diagnostics = _distance(math.asinh(math.sqrt(nbar)), point, spec.seed)
    row = {
        "E_distance": distance,
        "E_normalized": distance / tmsv_entanglement(q),
        "minimizer_restarts_used": diagnostics.restarts,
    }
    return row, 0.0, diagnostics.restarts


def compare(point, spec):
    nbar = _require(point, "nbar")
    q = _q_from_nbar(nbar)
    l_over_lA = _require(point, "l_over_lA")
    T = math.exp(-l_over_lA)
    state = fiber_output(
        q,
        FiberChannelSpec.from_length(l_over_lA),
        spec.cutoff,
        budget=point.get("budget", Config.TRUNCATION_BUDGET),
    )
    distance, diagnostics = _distance(math.asinh(math.sqrt(nbar)), point, spec.seed)
    row = {
        "E_bound": convexity_bound(state),
        "E_estimate": extraction_estimate(q, T, T),
        "E_distance": distance,
    }
    return row, state.truncation_deficit, diagnostics.restarts


def available_entanglement(point, spec):
    xi = _require(point, "xi")
    distance, diagnostics = _distance(xi, point, spec.seed)
    row = {"E_distance": distance, "E_tmsv": tmsv_entanglement(math.tanh(xi))}
    return row, 0.0, diagnostics.restarts


EVALUATORS = {
    "bs-entangle": bs_entangle,
    "bs-lossy-bound": bs_lossy_bound,
    "fiber-estimate": fiber_estimate,
    "fiber-bound": fiber_bound,
    "fiber-distance": fiber_distance,
    "compare": compare,
    "available-entanglement": available_entanglement,
}


def evaluate_point(spec, point):
    """
    Evaluate one grid point. Errors of the numerics turn into a row of NaN
    with the error message, so that a sweep always runs to completion.

    :return: (row dict, truncation deficit, minimizer restarts used)
    """
    columns = COLUMNS[spec.quantity]
    row = {name: point.get(name, math.nan) for name in columns}
    row["error"] = ""
    try:
        values, deficit, restarts = EVALUATORS[spec.quantity](point, spec)
    except EntanglementTransferError as error:
        logging.warning("%s failed at %s: %s", spec.quantity, point, error)
        row["error"] = f"{type(error).__name__}: {error}"
        return row, math.nan, 0
    row.update(values)
    return row, deficit, restarts


def _version():
    try:
        described = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True,
            text=True,
            check=True,
            cwd=os.path.dirname(os.path.abspath(__file__)),
        )
        return described.stdout.strip()
    except (OSError, subprocess.CalledProcessError):
        return __version__


def run_sweep(spec):
    """
    Evaluate the quantity of `spec` at every grid point, in grid order.
    Points run on a thread pool when spec.jobs > 1.

    :return: ResultTable.
    """
    points = list(spec.points())
    logging.info("evaluating %s at %s points", spec.quantity, len(points))
    timer = Timer()
    with timer.measure():
        if spec.jobs > 1:
            with ThreadPoolExecutor(max_workers=spec.jobs) as executor:
                results = list(executor.map(lambda point: evaluate_point(spec, point), points))
        else:
            results = [evaluate_point(spec, point) for point in points]

    columns = COLUMNS[spec.quantity] + ["error"]
    frame = pd.DataFrame([row for row, _, _ in results], columns=columns)
    if spec.units == "bits":
        for name in frame.columns:
            if name.startswith("E_") and name not in UNITLESS:
                frame[name] = frame[name] / math.log(2.0)

    deficits = [deficit for _, deficit, _ in results if not math.isnan(deficit)]
    errors = int((frame["error"] != "").sum())
    metadata = {
        "version": _version(),
        "quantity": spec.quantity,
        "cutoff": str(spec.cutoff),
        "seed": str(spec.seed),
        "units": spec.units,
        "grid": "; ".join(
            f"{axis.name}=" + ",".join(f"{v:.12g}" for v in axis.values) for axis in spec.axes
        ),
        "fixed": "; ".join(f"{key}={value!r}" for key, value in sorted(spec.fixed.items())),
        "max_truncation_deficit": f"{max(deficits, default=0.0):.3e}",
        "minimizer_restarts": f"{Config.MINIMIZER_RESTARTS} per point, "
        f"{sum(restarts for _, _, restarts in results)} used",
        "errors": str(errors),
        "wall_time": f"{timer.duration.total_seconds():.3f} s",
    }
    logging.info(
        "%s finished in %s with %s failed points", spec.quantity, timer.duration, errors
    )
    return ResultTable(frame, metadata, spec.axis_names, spec.quantity)


def _parse_value(key, text):
    try:
        return float(text)
    except ValueError as error:
        raise SweepSpecError(f"{key}: {text!r} is not a number") from error


def build_spec(args):
    "Merge a preset with explicit command-line flags, the flags taking precedence."
    preset = {}
    if args.preset:
        if args.preset not in PRESETS:
            raise SweepSpecError(
                f"unknown preset {args.preset!r}, expected one of {sorted(PRESETS)}"
            )
        preset = PRESETS[args.preset]
    quantity = args.quantity or preset.get("quantity")
    if quantity is None:
        raise SweepSpecError("either --quantity or --preset is required")

    grid = args.grid or preset.get("grid", [])
    axes = [GridAxis.parse(text) for text in grid]
    fixed = dict(preset.get("fixed", {}))
    for text in args.set or []:
        key, value = parse_assignment(text)
        fixed[key] = _parse_value(key, value)
    for axis in axes:
        fixed.pop(axis.name, None)

    return SweepSpec(
        quantity=quantity,
        axes=axes,
        fixed=fixed,
        cutoff=args.cutoff if args.cutoff is not None else preset.get("cutoff", Config.CUTOFF),
        seed=args.seed,
        units=args.units,
        jobs=args.jobs,
    )


def parse_args(argv):
    parser = argparse.ArgumentParser(
        prog="entanglement-sweep",
        description="Evaluate an entanglement quantity over a parameter grid.",
    )
    parser.add_argument("--quantity", choices=QUANTITIES)
    parser.add_argument("--preset", help=f"one of {', '.join(PRESETS)}")
    parser.add_argument(
        "--grid",
        action="append",
        help="swept axis as name=min:max:steps or name=v1,v2,... (repeatable)",
    )
    parser.add_argument(
        "--set", action="append", help="fixed parameter as key=value (repeatable)"
    )
    parser.add_argument("--cutoff", type=int, help="photon-number cutoff per mode")
    parser.add_argument("--seed", type=int, default=Config.SEED)
    parser.add_argument(
        "--out", help="CSV path; the plot script is written next to it as .gp"
    )
    parser.add_argument("--units", choices=Config.VALID_UNITS, default=Config.UNITS)
    parser.add_argument("--jobs", type=int, default=Config.JOBS)
    parser.add_argument("--log-level", default=Config.LOG_LEVEL)
    return parser.parse_args(argv)


def main(argv=None):
    load_dotenv()
    args = parse_args(argv)
    logging.basicConfig(
        stream=sys.stdout,
        level=args.log_level.upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        spec = build_spec(args)
    except SweepSpecError as error:
        logging.error("invalid sweep: %s", error)
        return 2

    table = run_sweep(spec)
    name = args.preset or spec.quantity
    csv_path = args.out or os.path.join(Config.OUTPUT_DIR, f"{name}.csv")
    try:
        emit_csv(table, csv_path)
        emit_plotscript(table, os.path.splitext(csv_path)[0] + ".gp", csv_path)
    except OutputError as error:
        logging.error("%s", error)
        return 1

    errors = int(table.metadata["errors"])
    if errors:
        logging.error("%s of %s points failed", errors, len(table.frame))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
