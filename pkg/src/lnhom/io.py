"""CSV and report serialization.

One dialect everywhere: comma separator, ``.`` decimal point, mandatory
header row, UTF-8, LF line endings.  Formats:

  * field / index maps:   x_nm,y_nm,value
  * splitting curves:     wavelength_nm,eta
  * delay scans:          delay_ps,stage_um,coincidences
  * power-ratio series:   length_um,ratio
  * fit reports:          flat ``key = value`` text

The stage_um column is left empty when a scan never had stage positions;
fabricating them would bake in a pass-geometry guess.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .fitting import PowerRatioSeries
from .hom import DelayScan


def _open_write(path):
    return open(path, "w", encoding="utf-8", newline="\n")


def write_field_csv(path, x_nm, y_nm, values):
    """Write a 2D field or index map sampled on the (y, x) grid."""
    values = np.asarray(values)
    if values.shape != (len(y_nm), len(x_nm)):
        raise ValueError("values shape must be (len(y_nm), len(x_nm))")
    with _open_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["x_nm", "y_nm", "value"])
        for iy, y in enumerate(y_nm):
            for ix, x in enumerate(x_nm):
                writer.writerow([repr(float(x)), repr(float(y)),
                                 repr(float(values[iy, ix]))])


def write_mode_field_csv(path, mode):
    write_field_csv(path, mode.x_nm, mode.y_nm, mode.field)


def write_index_map_csv(path, index_map):
    write_field_csv(path, index_map.x_nm, index_map.y_nm, index_map.index)


def write_splitting_curve_csv(path, curve):
    with _open_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["wavelength_nm", "eta"])
        for wl, eta in zip(curve.wavelength_nm, curve.eta):
            writer.writerow([repr(float(wl)), repr(float(eta))])


def read_splitting_curve_csv(path):
    from .coupler import SplittingCurve

    wl, eta = _read_columns(path, ["wavelength_nm", "eta"])
    return SplittingCurve(wavelength_nm=wl, eta=eta)


def write_delay_scan_csv(path, scan):
    counts = np.asarray(scan.values)
    integer_counts = np.issubdtype(counts.dtype, np.integer)
    with _open_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["delay_ps", "stage_um", "coincidences"])
        for i, delay in enumerate(scan.delay_ps):
            stage = "" if scan.stage_um is None else repr(float(scan.stage_um[i]))
            value = int(counts[i]) if integer_counts else repr(float(counts[i]))
            writer.writerow([repr(float(delay)), stage, value])


def read_delay_scan_csv(path):
    """Read a delay scan; integer coincidence columns are treated as raw
    counts, anything else as (unnormalized) probabilities."""
    rows = _read_rows(path, ["delay_ps", "stage_um", "coincidences"])
    delays = np.array([float(r[0]) for r in rows])
    stages = [r[1] for r in rows]
    raw = [r[2] for r in rows]
    integer_counts = all(_is_integer_literal(v) for v in raw)
    values = np.array([int(v) for v in raw], dtype=np.int64) if integer_counts \
        else np.array([float(v) for v in raw])
    stage_um = None
    if all(s != "" for s in stages):
        stage_um = np.array([float(s) for s in stages])
    return DelayScan(delay_ps=delays, values=values, normalized=False,
                     stage_um=stage_um)


def write_power_ratio_csv(path, series):
    with _open_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["length_um", "ratio"])
        for length, ratio in zip(series.interaction_length_um, series.ratio):
            writer.writerow([repr(float(length)), repr(float(ratio))])


def read_power_ratio_csv(path, input_port="a"):
    lengths, ratios = _read_columns(path, ["length_um", "ratio"])
    return PowerRatioSeries(interaction_length_um=lengths, ratio=ratios,
                            input_port=input_port)


def write_fit_report(path, result, extra=None):
    """Flat key = value report of a fit: estimates, 1-sigma uncertainties,
    residual RMS and convergence status."""
    sigmas = result.uncertainties
    with _open_write(path) as handle:
        for name, value in result.parameters.items():
            handle.write(f"{name} = {value!r}\n")
            handle.write(f"{name}_sigma = {sigmas[name]!r}\n")
        handle.write(f"residual_rms = {result.residual_rms!r}\n")
        handle.write(f"converged = {str(result.converged).lower()}\n")
        for key, value in (extra or {}).items():
            handle.write(f"{key} = {value}\n")


def write_residuals_csv(path, axis_name, axis_values, residuals):
    with _open_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([axis_name, "residual"])
        for x, r in zip(axis_values, residuals):
            writer.writerow([repr(float(x)), repr(float(r))])


def _is_integer_literal(text):
    try:
        int(text)
        return True
    except ValueError:
        return False


def _read_rows(path, expected_header):
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty CSV, header row is mandatory") from None
        if header != expected_header:
            raise ValueError(
                f"{Path(path).name}: expected header {','.join(expected_header)}, "
                f"got {','.join(header)}"
            )
        return [row for row in reader if row]


def _read_columns(path, expected_header):
    rows = _read_rows(path, expected_header)
    columns = list(zip(*rows))
    return tuple(np.array([float(v) for v in col]) for col in columns)
