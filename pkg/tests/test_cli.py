"""End-to-end command-line behavior via main(argv)."""

import json
import math

import pytest

import reference_values as ref
from tsvkit.cli import main
from tsvkit.touchstone import read_s3p


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestExtract:
    def test_default_run(self, tmp_path, capsys):
        s3p = tmp_path / "pair.s3p"
        csv = tmp_path / "pair.csv"
        code, out, err = run(capsys, "extract", "--out", str(s3p), "--csv", str(csv))
        assert code == 0
        text = s3p.read_text()
        assert "# Hz S RI R 50" in text.splitlines()
        doc = read_s3p(str(s3p))
        assert len(doc.records) == 201
        assert doc.records[0][0] == pytest.approx(1e6)
        assert doc.records[-1][0] == pytest.approx(100e9)
        lines = csv.read_text().strip().splitlines()
        assert lines[0] == "frequency_hz,s21_db,s31_db"
        assert len(lines) == 202
        assert "r_dc" in out and "c_ox" in out

    def test_points_flag(self, tmp_path, capsys):
        s3p = tmp_path / "p.s3p"
        code, _, _ = run(capsys, "extract", "--points", "11",
                         "--out", str(s3p), "--csv", str(tmp_path / "p.csv"))
        assert code == 0
        assert len(read_s3p(str(s3p)).records) == 11

    def test_element_summary_golden(self, tmp_path, capsys):
        code, out, _ = run(capsys, "extract", "--json",
                           "--out", str(tmp_path / "p.s3p"),
                           "--csv", str(tmp_path / "p.csv"))
        assert code == 0
        summary = json.loads(out)
        el = summary["elements"]
        assert el["r_dc_ohm"] == pytest.approx(ref.R_DC, rel=1e-9)
        assert el["l_tsv_h"] == pytest.approx(ref.L_TSV, rel=1e-9)
        assert el["c_ox_f"] == pytest.approx(ref.C_OX, rel=1e-9)
        assert el["c_d_f"] == pytest.approx(ref.C_D, rel=1e-9)
        assert el["c_si_f"] == pytest.approx(ref.C_SI, rel=1e-9)
        assert el["g_si_s"] == pytest.approx(ref.G_SI, rel=1e-9)

    def test_byte_identical_reruns(self, tmp_path, capsys):
        a, b = tmp_path / "a.s3p", tmp_path / "b.s3p"
        run(capsys, "extract", "--out", str(a), "--csv", str(tmp_path / "a.csv"))
        run(capsys, "extract", "--out", str(b), "--csv", str(tmp_path / "b.csv"))
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_validation_failure_writes_nothing(self, tmp_path, capsys):
        s3p = tmp_path / "never.s3p"
        code, _, err = run(capsys, "extract", "--radius=-1e-6",
                           "--out", str(s3p), "--csv", str(tmp_path / "never.csv"))
        assert code != 0
        assert "error" in err.lower()
        assert not s3p.exists()
        assert not (tmp_path / "never.csv").exists()

    def test_z_csv_export(self, tmp_path, capsys):
        zcsv = tmp_path / "z.csv"
        code, _, _ = run(capsys, "extract", "--points", "5",
                         "--out", str(tmp_path / "p.s3p"),
                         "--csv", str(tmp_path / "p.csv"), "--z-csv", str(zcsv))
        assert code == 0
        lines = zcsv.read_text().strip().splitlines()
        assert len(lines) == 6
        assert lines[0].startswith("frequency_hz,re_z11")


class TestConfigPrecedence:
    def test_config_file_overrides_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("height = 100e-6\npoints = 7\n")
        code, out, _ = run(capsys, "extract", "--config", str(cfg), "--json",
                           "--out", str(tmp_path / "p.s3p"),
                           "--csv", str(tmp_path / "p.csv"))
        assert code == 0
        summary = json.loads(out)
        assert summary["records"] == 7
        # c_ox is linear in height: doubled height doubles it
        assert summary["elements"]["c_ox_f"] == pytest.approx(2 * ref.C_OX, rel=1e-9)

    def test_flag_overrides_config(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("height = 100e-6\n")
        code, out, _ = run(capsys, "extract", "--config", str(cfg),
                           "--height", "50e-6", "--json",
                           "--out", str(tmp_path / "p.s3p"),
                           "--csv", str(tmp_path / "p.csv"))
        assert json.loads(out)["elements"]["c_ox_f"] == pytest.approx(ref.C_OX, rel=1e-9)

    def test_seed_params_pins_reference_values(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("height = 100e-6\nrho_cu = 3e-8\n")
        code, out, _ = run(capsys, "extract", "--config", str(cfg),
                           "--seed-params", "reference", "--json",
                           "--out", str(tmp_path / "p.s3p"),
                           "--csv", str(tmp_path / "p.csv"))
        el = json.loads(out)["elements"]
        assert el["c_ox_f"] == pytest.approx(ref.C_OX, rel=1e-9)
        assert el["r_dc_ohm"] == pytest.approx(ref.R_DC, rel=1e-9)

    def test_unknown_config_key_fails(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("hight = 100e-6\n")
        code, _, err = run(capsys, "extract", "--config", str(cfg),
                           "--out", str(tmp_path / "p.s3p"),
                           "--csv", str(tmp_path / "p.csv"))
        assert code != 0
        assert not (tmp_path / "p.s3p").exists()


class TestSweep:
    def test_radius_sweep_shape(self, tmp_path, capsys):
        out_csv = tmp_path / "r.csv"
        code, _, _ = run(capsys, "sweep", "--param", "radius", "--start", "1e-6",
                         "--stop", "5e-6", "--steps", "5", "--metric", "c_ox",
                         "--out", str(out_csv))
        assert code == 0
        lines = out_csv.read_text().strip().splitlines()
        assert lines[0] == "radius,c_ox"
        assert len(lines) == 6

    def test_c_ox_increases_with_radius(self, capsys):
        code, out, _ = run(capsys, "sweep", "--param", "radius", "--start", "1e-6",
                           "--stop", "5e-6", "--steps", "5", "--metric", "c_ox", "--json")
        rows = json.loads(out)["rows"]
        values = [v for _, v in rows]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_c_ox_decreases_with_liner(self, capsys):
        code, out, _ = run(capsys, "sweep", "--param", "liner_thickness",
                           "--start", "0.1e-6", "--stop", "1e-6", "--steps", "5",
                           "--metric", "c_ox", "--json")
        values = [v for _, v in json.loads(out)["rows"]]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_c_ox_linear_in_height(self, capsys):
        code, out, _ = run(capsys, "sweep", "--param", "height", "--start", "50e-6",
                           "--stop", "100e-6", "--steps", "2", "--metric", "c_ox", "--json")
        values = [v for _, v in json.loads(out)["rows"]]
        assert values[1] == pytest.approx(2 * values[0], rel=1e-12)

    def test_multi_param_rejected(self, capsys):
        code, _, err = run(capsys, "sweep", "--param", "radius", "--param", "height",
                           "--start", "1e-6", "--stop", "5e-6", "--metric", "c_ox")
        assert code == 2
        assert "exactly one" in err

    def test_s21_metric_at_probe(self, capsys):
        code, out, _ = run(capsys, "sweep", "--param", "pitch", "--start", "20e-6",
                           "--stop", "80e-6", "--steps", "3", "--metric", "s21_db",
                           "--probe-frequency", "10e9", "--json")
        rows = json.loads(out)["rows"]
        assert rows[1][0] == pytest.approx(50e-6)
        # wider pitch weakens the lateral coupling
        values = [v for _, v in rows]
        assert values[-1] < values[0]


class TestSpur:
    def test_amplitude_mode_replica(self, tmp_path, capsys):
        out_csv = tmp_path / "amp.csv"
        code, out, _ = run(capsys, "spur", "--mode", "amplitude", "--json",
                           "--out", str(out_csv))
        assert code == 0
        summary = json.loads(out)
        assert summary["first"]["spur_dbc"] == pytest.approx(-36.1, abs=1e-9)
        assert summary["last"]["spur_dbc"] == pytest.approx(ref.SPUR_700MV_DBC, abs=1e-6)
        assert summary["total_change_db"] == pytest.approx(20 * math.log10(7), abs=1e-9)
        assert summary["slope_db_per_octave"] == pytest.approx(6.0206, abs=1e-3)
        lines = out_csv.read_text().strip().splitlines()
        assert lines[0] == "amplitude_v,spur_dbc"
        assert len(lines) == 8

    def test_frequency_mode_replica(self, capsys):
        code, out, _ = run(capsys, "spur", "--mode", "frequency", "--json")
        assert code == 0
        summary = json.loads(out)
        assert -summary["total_change_db"] == pytest.approx(ref.ROLLOFF_DB, abs=1e-6)
        assert summary["first"]["spur_dbc"] == pytest.approx(
            ref.SPUR_300MVPP_HALF_GHZ_DBC, abs=1e-6)

    def test_custom_calibration_point(self, capsys):
        code, out, _ = run(capsys, "spur", "--mode", "amplitude",
                           "--cal-point", "0.1:1e9:-30.0", "--json")
        summary = json.loads(out)
        assert summary["first"]["spur_dbc"] == pytest.approx(-30.0, abs=1e-9)

    def test_zero_amplitude_sentinel(self, capsys):
        code, out, _ = run(capsys, "spur", "--mode", "amplitude",
                           "--start", "0", "--stop", "0.2", "--steps", "2")
        assert code == 0
        assert "-inf" in out

    def test_bad_cal_point_rejected(self, capsys):
        code, _, err = run(capsys, "spur", "--mode", "amplitude",
                           "--cal-point", "0.1:1e9")
        assert code == 2

    def test_bad_substrate_load_rejected(self, capsys):
        code, _, err = run(capsys, "spur", "--mode", "amplitude",
                           "--substrate-load", "fifty")
        assert code == 2

    def test_open_substrate_load_changes_rolloff(self, capsys):
        code, out, _ = run(capsys, "spur", "--mode", "frequency",
                           "--substrate-load", "open", "--json")
        assert code == 0
        # floating substrate node: transfer falls with frequency, steepening
        # the roll-off well past the loaded-port value
        assert -json.loads(out)["total_change_db"] > 14.0

    def test_spur_settings_from_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "spur.cfg"
        cfg.write_text("k_sub = 2.7069e10\nf_osc = 11e9\n")
        code, out, _ = run(capsys, "spur", "--mode", "amplitude",
                           "--config", str(cfg), "--json")
        summary = json.loads(out)
        assert summary["k_sub_hz_per_v"] == pytest.approx(2.7069e10)
        assert summary["sideband_hz"] == pytest.approx(12e9)
        assert summary["calibration_residuals_db"] is None


class TestValidate:
    def test_all_checks_pass(self, capsys):
        code, out, _ = run(capsys, "validate", "--points", "41")
        assert code == 0
        assert "FAIL" not in out
        assert out.count("PASS") >= 5

    def test_json_mode(self, capsys):
        code, out, _ = run(capsys, "validate", "--points", "21", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        names = {c["name"] for c in payload["checks"]}
        assert {"dual_route_z", "reciprocity", "passivity",
                "z_s_roundtrip", "touchstone_roundtrip"} <= names
