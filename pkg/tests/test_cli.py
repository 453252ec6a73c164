"""Command line scenarios: exit codes, config validation, artifacts, and
seed handling, all exercised in-process."""

import numpy as np
import pytest

from lnhom.cli import SCENARIO_SCHEMAS, format_schema, main, parse_config_text
from lnhom.errors import ConfigError


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _report(out):
    text = (out / "report.txt").read_text(encoding="utf-8")
    entries = {}
    for line in text.splitlines():
        if " = " in line:
            key, _, value = line.partition(" = ")
            entries[key.strip()] = value.strip()
    return entries


# --- schema printing -------------------------------------------------------

@pytest.mark.parametrize("scenario", sorted(SCENARIO_SCHEMAS))
def test_print_schema_succeeds_for_every_scenario(scenario, capsys):
    assert main([scenario, "--print-schema"]) == 0
    shown = capsys.readouterr().out
    for key in SCENARIO_SCHEMAS[scenario]:
        assert key in shown


def test_schema_marks_required_and_optional_keys():
    text = format_schema("fp-loss")
    assert "contrast  (float; required;)" in text
    assert "facet_reflectivity  (float; optional;)" in text


# --- config parsing --------------------------------------------------------

def test_unknown_key_is_rejected_with_its_line(tmp_path, capsys):
    config = _write(tmp_path, "c.cfg",
                    "# comment\neta = 0.5\nbogus_key = 1\n")
    assert main(["hom-dip", "--config", config,
                 "--out", str(tmp_path / "out")]) == 2
    err = capsys.readouterr().err
    assert ":3:" in err and "bogus_key" in err


def test_malformed_line_is_rejected(tmp_path, capsys):
    config = _write(tmp_path, "c.cfg", "eta 0.5\n")
    assert main(["hom-dip", "--config", config,
                 "--out", str(tmp_path / "out")]) == 2
    assert ":1:" in capsys.readouterr().err


def test_wrong_type_is_rejected(tmp_path, capsys):
    config = _write(tmp_path, "c.cfg", "delay_points = 3.5\n")
    assert main(["hom-dip", "--config", config,
                 "--out", str(tmp_path / "out")]) == 2
    assert "expects int" in capsys.readouterr().err


def test_duplicate_key_is_rejected(tmp_path, capsys):
    config = _write(tmp_path, "c.cfg", "eta = 0.5\neta = 0.6\n")
    assert main(["hom-dip", "--config", config,
                 "--out", str(tmp_path / "out")]) == 2
    assert "duplicate" in capsys.readouterr().err


def test_choice_keys_are_validated(tmp_path, capsys):
    config = _write(tmp_path, "c.cfg", "polarization = xy\n")
    assert main(["modes", "--config", config,
                 "--out", str(tmp_path / "out")]) == 2
    assert "one of" in capsys.readouterr().err


def test_missing_required_key_is_rejected(tmp_path, capsys):
    assert main(["fit-coupling", "--out", str(tmp_path / "out")]) == 2
    assert "input_csv" in capsys.readouterr().err


def test_missing_config_file_is_a_config_error(tmp_path, capsys):
    assert main(["hom-dip", "--config", str(tmp_path / "absent.cfg"),
                 "--out", str(tmp_path / "out")]) == 2


def test_comments_and_blank_lines_are_allowed():
    params = parse_config_text("\n# note\n  \neta = 0.4\n",
                               SCENARIO_SCHEMAS["hom-dip"])
    assert params["eta"] == 0.4
    assert params["delay_points"] == 81  # default fills in


def test_config_error_carries_line_and_key():
    with pytest.raises(ConfigError) as info:
        parse_config_text("eta = oops\n", SCENARIO_SCHEMAS["hom-dip"])
    assert info.value.line == 1
    assert info.value.key == "eta"


# --- scenario runs ---------------------------------------------------------

def test_hom_dip_writes_curve_and_report(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["hom-dip", "--out", str(out)]) == 0
    assert (out / "dip_curve.csv").is_file()
    entries = _report(out)
    assert float(entries["splitter_limited_visibility"]) == 1.0
    assert float(entries["dip_minimum"]) == pytest.approx(0.0, abs=1e-12)
    assert "splitter_limited_visibility" in capsys.readouterr().out


def test_invalid_geometry_is_a_config_error(tmp_path, capsys):
    config = _write(tmp_path, "c.cfg", "gap_um = 0.5\n")
    assert main(["modes", "--config", config,
                 "--out", str(tmp_path / "out")]) == 2
    assert "gap" in capsys.readouterr().err


def test_coupler_sweep_then_fit_recovers_the_coupling_length(tmp_path):
    sweep_out = tmp_path / "sweep"
    assert main(["coupler-sweep", "--out", str(sweep_out)]) == 0
    ratio_csv = sweep_out / "power_ratio.csv"
    assert ratio_csv.is_file()

    fit_out = tmp_path / "fit"
    config = _write(tmp_path, "fit.cfg", f"input_csv = {ratio_csv}\n")
    assert main(["fit-coupling", "--config", config, "--out", str(fit_out)]) == 0
    entries = _report(fit_out)
    assert float(entries["coupling_length_um"]) == pytest.approx(112.86, abs=0.01)
    assert (fit_out / "fit_report.txt").is_file()
    assert (fit_out / "residuals.csv").is_file()


def test_bandwidth_design_stays_balanced_across_the_scan(tmp_path):
    out = tmp_path / "out"
    assert main(["bandwidth", "--out", str(out)]) == 0
    assert (out / "splitting_curve.csv").is_file()
    entries = _report(out)
    assert float(entries["max_deviation_from_balanced"]) < 0.01


def test_simulate_counts_is_seed_deterministic(tmp_path):
    config = _write(tmp_path, "c.cfg",
                    "mean_pairs_per_pulse = 0.01\n"
                    "delay_points = 11\npulses_per_point = 20000\n")
    out_a, out_b, out_c = (tmp_path / n for n in ("a", "b", "c"))
    assert main(["simulate-counts", "--config", config, "--out", str(out_a),
                 "--seed", "99"]) == 0
    assert main(["simulate-counts", "--config", config, "--out", str(out_b),
                 "--seed", "99"]) == 0
    assert main(["simulate-counts", "--config", config, "--out", str(out_c),
                 "--seed", "100"]) == 0
    counts_a = (out_a / "counts.csv").read_bytes()
    assert counts_a == (out_b / "counts.csv").read_bytes()
    assert counts_a != (out_c / "counts.csv").read_bytes()


def test_simulate_counts_writes_stage_positions(tmp_path):
    config = _write(tmp_path, "c.cfg",
                    "mean_pairs_per_pulse = 0.01\n"
                    "delay_points = 11\npulses_per_point = 20000\n")
    out = tmp_path / "out"
    assert main(["simulate-counts", "--config", config, "--out", str(out)]) == 0
    header, first = (out / "counts.csv").read_text().splitlines()[:2]
    assert header == "delay_ps,stage_um,coincidences"
    assert first.split(",")[1] != ""
    assert "fitted_visibility" in _report(out)


def test_seed_flag_is_rejected_where_meaningless(tmp_path, capsys):
    assert main(["hom-dip", "--seed", "4", "--out", str(tmp_path / "out")]) == 2
    assert "seed" in capsys.readouterr().err


def test_fp_loss_happy_path_from_n_eff(tmp_path):
    config = _write(tmp_path, "c.cfg",
                    "contrast = 0.06299231261080374\nlength_cm = 1.0\n"
                    "n_eff = 1.9\n")
    out = tmp_path / "out"
    assert main(["fp-loss", "--config", config, "--out", str(out)]) == 0
    entries = _report(out)
    assert float(entries["loss_db_per_cm"]) == pytest.approx(4.85, abs=1e-6)


def test_fp_loss_demands_exactly_one_reflectivity_source(tmp_path, capsys):
    both = _write(tmp_path, "both.cfg",
                  "contrast = 0.06\nlength_cm = 1.0\n"
                  "n_eff = 1.9\nfacet_reflectivity = 0.13\n")
    neither = _write(tmp_path, "neither.cfg",
                     "contrast = 0.06\nlength_cm = 1.0\n")
    assert main(["fp-loss", "--config", both, "--out", str(tmp_path / "o1")]) == 2
    assert main(["fp-loss", "--config", neither,
                 "--out", str(tmp_path / "o2")]) == 2


def test_runtime_fit_failure_exits_one(tmp_path, capsys):
    csv = tmp_path / "flat.csv"
    lengths = np.linspace(0.0, 100.0, 11)
    rows = "\n".join(f"{float(length)!r},0.5" for length in lengths)
    csv.write_text(f"length_um,ratio\n{rows}\n", encoding="utf-8")
    config = _write(tmp_path, "c.cfg", f"input_csv = {csv}\n")
    assert main(["fit-coupling", "--config", config,
                 "--out", str(tmp_path / "out")]) == 1
    assert "error" in capsys.readouterr().err


def test_fit_dip_writes_normalized_scan(tmp_path):
    delays = np.linspace(-6.0, 6.0, 31)
    dip = 400.0 * (1.0 - 0.9 * np.exp(-(delays**2) / 2.0))
    rows = "\n".join(f"{float(d)!r},,{int(round(v))}"
                     for d, v in zip(delays, dip))
    csv = tmp_path / "dip.csv"
    csv.write_text(f"delay_ps,stage_um,coincidences\n{rows}\n", encoding="utf-8")
    config = _write(tmp_path, "c.cfg", f"input_csv = {csv}\n")
    out = tmp_path / "out"
    assert main(["fit-dip", "--config", config, "--out", str(out)]) == 0
    assert (out / "normalized.csv").is_file()
    assert float(_report(out)["visibility"]) == pytest.approx(0.9, abs=0.01)


def test_nested_output_directory_is_created(tmp_path):
    out = tmp_path / "a" / "b" / "c"
    assert main(["hom-dip", "--out", str(out)]) == 0
    assert (out / "report.txt").is_file()


def test_modes_scenario_writes_fields_and_report(tmp_path):
    config = _write(tmp_path, "c.cfg",
                    "grid_pitch_nm = 40.0\nn_modes = 1\n"
                    "write_index_map = true\n")
    out = tmp_path / "out"
    assert main(["modes", "--config", config, "--out", str(out)]) == 0
    entries = _report(out)
    assert entries["guided_modes"] == "1"
    assert 1.8 < float(entries["mode_0_n_eff"]) < 2.0
    assert (out / "mode_0_field.csv").is_file()
    assert (out / "index_map.csv").is_file()


def test_failed_reproduction_exits_one(tmp_path, capsys):
    config = _write(tmp_path, "c.cfg",
                    "pulses_per_point = 200\ngrid_pitch_nm = 40.0\n")
    out = tmp_path / "out"
    assert main(["reproduce-paper", "--config", config, "--out", str(out)]) == 1
    shown = capsys.readouterr()
    assert "FAIL" in shown.out
