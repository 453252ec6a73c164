"""Scenario-driven command line: one scenario per invocation.

Configs are flat ``key = value`` text (``#`` comments, blank lines allowed)
validated against a per-scenario schema; unknown keys are rejected and all
physical quantities carry their unit in the key name.  Exit codes: 0 on
success (and all checks passing), 1 on runtime or check failure, 2 on
config errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as lio
from . import reference as ref
from .coupler import (CouplerDevice, bandwidth_scan, length_for_ratio,
                      splitting_ratio, with_interaction_length)
from .counting import DetectorModel, SourceModel, simulate_counts
from .errors import ConfigError
from .fitting import (PowerRatioSeries, fabry_perot_loss,
                      fit_coupling_sinusoid, fit_gaussian_dip,
                      fresnel_reflectivity, normalized_scan)
from .geometry import WaveguideGeometry, build_cross_section
from .hom import (STAGE_DOUBLE_PASS_PS_PER_UM, STAGE_SINGLE_PASS_PS_PER_UM,
                  TwoPhotonState, coincidence_curve, hom_visibility_max)
from .modes import solve_modes
from .reproduce import format_report, run_reproduction

log = logging.getLogger("lnhom")

_REQUIRED = object()


@dataclass(frozen=True)
class ConfigKey:
    name: str
    kind: str  # float | int | str | bool
    default: object = _REQUIRED
    help: str = ""
    choices: tuple = None

    @property
    def required(self):
        return self.default is _REQUIRED


def _schema(*keys):
    return {key.name: key for key in keys}


_GEOMETRY_KEYS = (
    ConfigKey("film_thickness_nm", "float", 600.0, "LN film thickness"),
    ConfigKey("etch_depth_nm", "float", 150.0, "rib etch depth"),
    ConfigKey("top_width_um", "float", 1.0, "rib top width"),
    ConfigKey("sidewall_angle_deg", "float", 60.0, "sidewall angle"),
    ConfigKey("cladding_thickness_nm", "float", 700.0, "SiO2 top cladding"),
    ConfigKey("gap_um", "float", None, "rib gap; omit for a single guide"),
)

_DEVICE_KEYS = (
    ConfigKey("coupling_length_um", "float", ref.COUPLING_LENGTH_UM,
              "beat length at the reference wavelength"),
    ConfigKey("reference_wavelength_nm", "float",
              ref.CHARACTERIZATION_WAVELENGTH_NM, "calibration wavelength"),
    ConfigKey("delta_n_slope_per_nm", "float", 0.0,
              "linear slope of the supermode index splitting"),
    ConfigKey("bend_offset_um", "float", 0.0, "effective bend length"),
)

SCENARIO_SCHEMAS = {
    "modes": _schema(
        *_GEOMETRY_KEYS,
        ConfigKey("wavelength_nm", "float", 1550.0, "vacuum wavelength"),
        ConfigKey("grid_pitch_nm", "float", 10.0, "cell size"),
        ConfigKey("padding_um", "float", 2.0, "cladding padding on each side"),
        ConfigKey("polarization", "str", "te", "mode family", ("te", "tm")),
        ConfigKey("n_modes", "int", 2, "guided modes requested"),
        ConfigKey("write_fields", "bool", True, "dump mode fields as CSV"),
        ConfigKey("write_index_map", "bool", False, "dump the index map"),
    ),
    "coupler-sweep": _schema(
        *_DEVICE_KEYS,
        ConfigKey("wavelength_nm", "float", ref.CHARACTERIZATION_WAVELENGTH_NM,
                  "evaluation wavelength"),
        ConfigKey("length_min_um", "float", 30.0, "first interaction length"),
        ConfigKey("length_max_um", "float", 580.0, "last interaction length"),
        ConfigKey("length_step_um", "float", 10.0, "length step"),
    ),
    "bandwidth": _schema(
        *_DEVICE_KEYS,
        ConfigKey("interaction_length_um", "float", None,
                  "fixed interaction length; omit to use a 50:50 design"),
        ConfigKey("design_order", "int", 0,
                  "half-period branch of the 50:50 design"),
        ConfigKey("wavelength_min_nm", "float", 1540.0, "scan start"),
        ConfigKey("wavelength_max_nm", "float", 1560.0, "scan end"),
        ConfigKey("step_nm", "float", 0.25, "scan step"),
    ),
    "hom-dip": _schema(
        ConfigKey("center_wavelength_nm", "float", ref.PHOTON_WAVELENGTH_NM),
        ConfigKey("bandwidth_fwhm_nm", "float", ref.PHOTON_BANDWIDTH_FWHM_NM),
        ConfigKey("mode_overlap", "float", 1.0, "indistinguishability factor M"),
        ConfigKey("eta", "float", 0.5, "splitter cross fraction"),
        ConfigKey("delay_min_ps", "float", -8.0),
        ConfigKey("delay_max_ps", "float", 8.0),
        ConfigKey("delay_points", "int", 81),
        ConfigKey("normalized", "bool", True, "divide by the far-delay baseline"),
    ),
    "simulate-counts": _schema(
        ConfigKey("center_wavelength_nm", "float", ref.PHOTON_WAVELENGTH_NM),
        ConfigKey("bandwidth_fwhm_nm", "float", ref.PHOTON_BANDWIDTH_FWHM_NM),
        ConfigKey("source_visibility", "float", ref.SOURCE_VISIBILITY,
                  "zero-delay overlap; sets the mode overlap"),
        ConfigKey("eta", "float", ref.SPLITTING_RATIO),
        ConfigKey("mean_pairs_per_pulse", "float",
                  ref.REPRODUCTION_MEAN_PAIRS_PER_PULSE),
        ConfigKey("statistics", "str", "poissonian-pairs", "pair statistics",
                  ("poissonian-pairs", "thermal-pairs")),
        ConfigKey("repetition_period_ns", "float", 13.1),
        ConfigKey("efficiency", "float", ref.DETECTOR_EFFICIENCY),
        ConfigKey("dead_time_ns", "float", ref.DETECTOR_DEAD_TIME_NS),
        ConfigKey("dark_count_probability", "float", 0.0),
        ConfigKey("delay_min_ps", "float", -8.0),
        ConfigKey("delay_max_ps", "float", 8.0),
        ConfigKey("delay_points", "int", 50),
        ConfigKey("pulses_per_point", "int", 1_000_000),
        ConfigKey("stage_conversion", "str", "double-pass",
                  "stage position to delay conversion",
                  ("single-pass", "double-pass")),
        ConfigKey("seed", "int", 12345, "random seed"),
    ),
    "fit-coupling": _schema(
        ConfigKey("input_csv", "str", help="CSV with header length_um,ratio"),
        ConfigKey("input_port", "str", "a", "port label", ("a", "b")),
    ),
    "fit-dip": _schema(
        ConfigKey("input_csv", "str",
                  help="CSV with header delay_ps,stage_um,coincidences"),
        ConfigKey("write_normalized", "bool", True,
                  "also write the baseline-normalized scan"),
    ),
    "fp-loss": _schema(
        ConfigKey("contrast", "float", help="fringe contrast (Imax-Imin)/(Imax+Imin)"),
        ConfigKey("length_cm", "float", help="waveguide length"),
        ConfigKey("facet_reflectivity", "float", None,
                  "facet power reflectivity; omit to derive from n_eff"),
        ConfigKey("n_eff", "float", None,
                  "effective index for the Fresnel facet reflectivity"),
    ),
    "reproduce-paper": _schema(
        ConfigKey("seed", "int", 12345, "seed for the counting simulation"),
        ConfigKey("pulses_per_point", "int", 1_000_000),
        ConfigKey("delay_points", "int", 50),
        ConfigKey("grid_pitch_nm", "float", 20.0, "solver pitch for the checks"),
    ),
}


def parse_config_text(text, schema, source="<config>"):
    """Parse flat key = value text and validate against the schema."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'",
                              line=lineno)
        name, _, literal = (part.strip() for part in line.partition("="))
        if name not in schema:
            raise ConfigError(f"{source}:{lineno}: unknown key {name!r}",
                              line=lineno, key=name)
        if name in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {name!r}",
                              line=lineno, key=name)
        values[name] = _convert(literal, schema[name], lineno, source)
    for key in schema.values():
        if key.name not in values:
            if key.required:
                raise ConfigError(f"{source}: missing required key {key.name!r}",
                                  key=key.name)
            values[key.name] = key.default
    return values


def _convert(literal, key, lineno, source):
    try:
        if key.kind == "float":
            value = float(literal)
        elif key.kind == "int":
            value = int(literal)
        elif key.kind == "bool":
            if literal.lower() not in ("true", "false"):
                raise ValueError
            value = literal.lower() == "true"
        else:
            value = literal
    except ValueError:
        raise ConfigError(
            f"{source}:{lineno}: key {key.name!r} expects {key.kind}, "
            f"got {literal!r}", line=lineno, key=key.name) from None
    if key.choices is not None and value not in key.choices:
        raise ConfigError(
            f"{source}:{lineno}: key {key.name!r} must be one of "
            f"{', '.join(key.choices)}", line=lineno, key=key.name)
    return value


def format_schema(scenario):
    schema = SCENARIO_SCHEMAS[scenario]
    lines = [f"# {scenario} configuration keys"]
    for key in schema.values():
        if key.required:
            default = "required"
        elif key.default is None:
            default = "optional"
        elif key.kind == "bool":
            default = f"default {'true' if key.default else 'false'}"
        else:
            default = f"default {key.default!r}"
        choice = f" one of {', '.join(key.choices)};" if key.choices else ""
        help_text = f"  # {key.help}" if key.help else ""
        lines.append(f"{key.name}  ({key.kind}; {default};{choice}){help_text}")
    return "\n".join(lines)


def _as_config(builder, *args, **kwargs):
    """Build a domain object from config values; failures are config errors."""
    try:
        return builder(*args, **kwargs)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _geometry_from(params):
    return _as_config(
        WaveguideGeometry,
        film_thickness_nm=params["film_thickness_nm"],
        etch_depth_nm=params["etch_depth_nm"],
        top_width_um=params["top_width_um"],
        sidewall_angle_deg=params["sidewall_angle_deg"],
        cladding_thickness_nm=params["cladding_thickness_nm"],
        gap_um=params["gap_um"],
    )


def _device_from(params, **lengths):
    return _as_config(
        CouplerDevice.from_delta_n_slope,
        params["coupling_length_um"],
        delta_n_slope_per_nm=params["delta_n_slope_per_nm"],
        reference_wavelength_nm=params["reference_wavelength_nm"],
        bend_offset_um=params["bend_offset_um"],
        **lengths,
    )


def _delay_axis(params):
    if params["delay_points"] < 2:
        raise ConfigError("delay_points must be at least 2")
    if not params["delay_min_ps"] < params["delay_max_ps"]:
        raise ConfigError("delay_min_ps must be below delay_max_ps")
    return np.linspace(params["delay_min_ps"], params["delay_max_ps"],
                       params["delay_points"])


def _run_modes(params, out):
    geometry = _geometry_from(params)
    index_map = build_cross_section(geometry, params["wavelength_nm"],
                                    grid_pitch_nm=params["grid_pitch_nm"],
                                    padding_um=params["padding_um"],
                                    polarization=params["polarization"])
    modes = solve_modes(index_map, params["n_modes"])
    report = [f"guided_modes = {len(modes)}"]
    for i, mode in enumerate(modes):
        report.append(f"mode_{i}_n_eff = {mode.n_eff!r}")
        report.append(f"mode_{i}_parity = {mode.parity}")
        if params["write_fields"]:
            lio.write_mode_field_csv(out / f"mode_{i}_field.csv", mode)
    if params["write_index_map"]:
        lio.write_index_map_csv(out / "index_map.csv", index_map)
    return report


def _run_coupler_sweep(params, out):
    if params["length_min_um"] < 0 or params["length_step_um"] <= 0:
        raise ConfigError("length sweep needs non-negative start and a "
                          "positive step")
    lengths = np.arange(params["length_min_um"],
                        params["length_max_um"] + 0.5 * params["length_step_um"],
                        params["length_step_um"])
    if lengths.size < 2:
        raise ConfigError("length sweep needs at least two points")
    device = _device_from(params)
    ratios = [splitting_ratio(with_interaction_length(device, L),
                              params["wavelength_nm"]) for L in lengths]
    series = PowerRatioSeries(lengths, ratios)
    lio.write_power_ratio_csv(out / "power_ratio.csv", series)
    return [f"points = {lengths.size}",
            f"wavelength_nm = {params['wavelength_nm']!r}"]


def _run_bandwidth(params, out):
    if params["interaction_length_um"] is None:
        template = _device_from(params)
        length = _as_config(length_for_ratio, template, 0.5,
                            params["design_order"])
    else:
        length = params["interaction_length_um"]
    device = _device_from(params, interaction_length_um=length)
    curve = _as_config(bandwidth_scan, device, params["wavelength_min_nm"],
                       params["wavelength_max_nm"], params["step_nm"])
    lio.write_splitting_curve_csv(out / "splitting_curve.csv", curve)
    deviation = float(np.max(np.abs(curve.eta - 0.5)))
    return [f"interaction_length_um = {length!r}",
            f"max_deviation_from_balanced = {deviation!r}"]


def _run_hom_dip(params, out):
    state = _as_config(TwoPhotonState.degenerate,
                       params["center_wavelength_nm"],
                       params["bandwidth_fwhm_nm"], params["mode_overlap"])
    if not 0.0 <= params["eta"] <= 1.0:
        raise ConfigError("eta must lie in [0, 1]")
    delays = _delay_axis(params)
    scan = coincidence_curve(state, params["eta"], delays,
                             normalized=params["normalized"])
    lio.write_delay_scan_csv(out / "dip_curve.csv", scan)
    vmax = hom_visibility_max(params["eta"])
    return [f"splitter_limited_visibility = {vmax!r}",
            f"dip_minimum = {float(scan.values.min())!r}"]


def _run_simulate_counts(params, out):
    state = _as_config(TwoPhotonState.from_source_visibility,
                       params["source_visibility"],
                       params["center_wavelength_nm"],
                       params["bandwidth_fwhm_nm"])
    source = _as_config(SourceModel, params["mean_pairs_per_pulse"],
                        pulses_per_run=params["pulses_per_point"],
                        statistics=params["statistics"],
                        repetition_period_ns=params["repetition_period_ns"])
    detectors = _as_config(DetectorModel, params["efficiency"],
                           params["dead_time_ns"],
                           params["dark_count_probability"])
    if not 0.0 <= params["eta"] <= 1.0:
        raise ConfigError("eta must lie in [0, 1]")
    delays = _delay_axis(params)
    scan = simulate_counts(state, params["eta"], source, detectors, delays,
                           seed=params["seed"])
    factor = STAGE_DOUBLE_PASS_PS_PER_UM \
        if params["stage_conversion"] == "double-pass" \
        else STAGE_SINGLE_PASS_PS_PER_UM
    scan.stage_um = scan.delay_ps / factor
    scan.stage_conversion_ps_per_um = factor
    lio.write_delay_scan_csv(out / "counts.csv", scan)
    report = [f"seed = {params['seed']}",
              f"total_coincidences = {int(scan.values.sum())}"]
    fit = fit_gaussian_dip(scan)
    lio.write_fit_report(out / "fit_report.txt", fit)
    report.append(f"fitted_visibility = {fit.parameters['visibility']!r}")
    report.append(f"fitted_visibility_sigma = {fit.uncertainties['visibility']!r}")
    return report


def _input_path(params):
    path = Path(params["input_csv"])
    if not path.is_file():
        raise ConfigError(f"input_csv does not exist: {path}")
    return path


def _run_fit_coupling(params, out):
    series = lio.read_power_ratio_csv(_input_path(params),
                                      params["input_port"])
    fit = fit_coupling_sinusoid(series)
    lio.write_fit_report(out / "fit_report.txt", fit)
    lio.write_residuals_csv(out / "residuals.csv", "length_um",
                            series.interaction_length_um, fit.residuals)
    return [f"{name} = {value!r}" for name, value in fit.parameters.items()]


def _run_fit_dip(params, out):
    scan = lio.read_delay_scan_csv(_input_path(params))
    fit = fit_gaussian_dip(scan)
    lio.write_fit_report(out / "fit_report.txt", fit)
    lio.write_residuals_csv(out / "residuals.csv", "delay_ps", scan.delay_ps,
                            fit.residuals)
    if params["write_normalized"]:
        lio.write_delay_scan_csv(out / "normalized.csv",
                                 normalized_scan(scan, fit))
    return [f"visibility = {fit.parameters['visibility']!r}",
            f"visibility_sigma = {fit.uncertainties['visibility']!r}"]


def _run_fp_loss(params, out):
    if (params["facet_reflectivity"] is None) == (params["n_eff"] is None):
        raise ConfigError(
            "give exactly one of facet_reflectivity or n_eff")
    reflectivity = params["facet_reflectivity"]
    if reflectivity is None:
        reflectivity = _as_config(fresnel_reflectivity, params["n_eff"])
    alpha = _as_config(fabry_perot_loss, params["contrast"], reflectivity,
                       params["length_cm"])
    return [f"facet_reflectivity = {reflectivity!r}",
            f"loss_db_per_cm = {alpha!r}"]


def _run_reproduce(params, out):
    results = run_reproduction(seed=params["seed"],
                               pulses_per_point=params["pulses_per_point"],
                               delay_points=params["delay_points"],
                               grid_pitch_nm=params["grid_pitch_nm"])
    report = format_report(results)
    print(report)
    if not all(r.passed for r in results):
        raise RuntimeError("reproduction checks failed")
    return report.splitlines()


_RUNNERS = {
    "modes": _run_modes,
    "coupler-sweep": _run_coupler_sweep,
    "bandwidth": _run_bandwidth,
    "hom-dip": _run_hom_dip,
    "simulate-counts": _run_simulate_counts,
    "fit-coupling": _run_fit_coupling,
    "fit-dip": _run_fit_dip,
    "fp-loss": _run_fp_loss,
    "reproduce-paper": _run_reproduce,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="lnhom",
        description="Simulation scenarios for two-photon interference in a "
                    "thin-film lithium niobate directional coupler.")
    parser.add_argument("scenario", choices=sorted(SCENARIO_SCHEMAS))
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--out", default="lnhom-out", help="output directory")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--print-schema", action="store_true",
                        help="print the scenario's config schema and exit")
    parser.add_argument("--verbose", action="store_true")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    if args.print_schema:
        print(format_schema(args.scenario))
        return 0

    schema = SCENARIO_SCHEMAS[args.scenario]
    try:
        text = ""
        if args.config is not None:
            text = Path(args.config).read_text(encoding="utf-8")
        params = parse_config_text(text, schema, source=args.config or "<defaults>")
        if args.seed is not None:
            if "seed" not in schema:
                raise ConfigError(
                    f"scenario {args.scenario!r} does not take a seed")
            params["seed"] = args.seed
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        log.info("running %s -> %s", args.scenario, out)
        report = _RUNNERS[args.scenario](params, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure inside a module
        print(f"error: {exc}", file=sys.stderr)
        return 1

    report_path = out / "report.txt"
    with lio._open_write(report_path) as handle:
        handle.write("\n".join(report) + "\n")
    if args.scenario != "reproduce-paper":
        for line in report:
            print(line)
    log.info("report written to %s", report_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
