import io
import math
from dataclasses import replace

import pytest

from darkres import (
    Axis,
    ConfigError,
    Output,
    Spacing,
    SweepSpec,
    SweepTable,
    parse_config,
    run_sweep,
    write_csv,
)
from darkres.sweep import read_csv_rows


@pytest.fixture
def spectrum_spec(spike_config, mercury_medium):
    return SweepSpec(
        params=spike_config,
        medium=mercury_medium,
        axis=Axis.DELTA_P,
        start=-1.0,
        stop=1.0,
        points=21,
    )


class TestGrid:
    def test_linear_grid_exact(self, spectrum_spec):
        spec = replace(spectrum_spec, start=-10.0, stop=10.0, points=7)
        expected = [-10.0 + k * 20.0 / 6 for k in range(7)]
        assert spec.grid() == expected

    def test_log_grid_exact(self, spectrum_spec):
        spec = replace(
            spectrum_spec, start=1e-7, stop=1e-3, points=9, spacing=Spacing.LOG
        )
        la, lb = math.log10(1e-7), math.log10(1e-3)
        expected = [10.0 ** (la + k * (lb - la) / 8) for k in range(9)]
        assert spec.grid() == expected

    def test_endpoints(self, spectrum_spec):
        g = spectrum_spec.grid()
        assert g[0] == spectrum_spec.start and g[-1] == spectrum_spec.stop


class TestValidation:
    def test_single_point_rejected(self, spectrum_spec):
        with pytest.raises(ConfigError) as exc:
            replace(spectrum_spec, points=1).validate()
        assert exc.value.code == "RANGE_ERROR"

    def test_reversed_range_rejected(self, spectrum_spec):
        with pytest.raises(ConfigError):
            replace(spectrum_spec, start=2.0, stop=1.0).validate()

    def test_log_needs_positive_start(self, spectrum_spec):
        with pytest.raises(ConfigError):
            replace(spectrum_spec, start=0.0, spacing=Spacing.LOG).validate()

    def test_group_index_output_needs_reference_rate(self, spectrum_spec):
        with pytest.raises(ConfigError):
            replace(spectrum_spec, outputs=(Output.NG,)).validate()


class TestRunSweep:
    def test_two_point_degenerate_sweep(self, spectrum_spec):
        table = run_sweep(replace(spectrum_spec, points=2))
        assert len(table.rows) == 2
        assert table.columns == ["delta_p", "chi_re", "chi_im"]

    def test_rows_sorted_by_axis(self, spectrum_spec):
        table = run_sweep(spectrum_spec)
        axis = [row[0] for row in table.rows]
        assert axis == sorted(axis)

    def test_deterministic_across_runs_and_parallelism(self, spectrum_spec):
        a = run_sweep(spectrum_spec, jobs=1)
        b = run_sweep(spectrum_spec, jobs=1)
        c = run_sweep(spectrum_spec, jobs=4)
        assert a.rows == b.rows == c.rows

    def test_populations_output(self, spectrum_spec):
        spec = replace(spectrum_spec, points=3, outputs=(Output.POPULATIONS,))
        table = run_sweep(spec)
        assert table.columns == ["delta_p", "rho11", "rho22", "rho33", "rho44"]
        for row in table.rows:
            assert sum(row[1:]) == pytest.approx(1.0, abs=1e-9)

    def test_zero_crossing_sweep_logs_subthreshold_failures(
        self, spike_config, mercury_medium
    ):
        # below the gain onset there is no zero crossing: those grid
        # points must be logged, not fatal
        spec = SweepSpec(
            params=spike_config,
            medium=mercury_medium,
            axis=Axis.LAMBDA,
            start=1e-6,
            stop=1e-4,
            points=7,
            spacing=Spacing.LOG,
            outputs=(Output.DELTA0,),
        )
        table = run_sweep(spec)
        assert len(table.rows) + len(table.failures) == 7
        assert len(table.failures) >= 1
        assert all(code == "NO_SIGN_CHANGE" for _, code in table.failures)
        assert all(x < 1.7e-5 for x, _ in table.failures)  # only below onset

    def test_pump_axis_crosses_gain(self, spike_config, mercury_medium):
        spec = SweepSpec(
            params=spike_config,
            medium=mercury_medium,
            axis=Axis.LAMBDA,
            start=1e-6,
            stop=1e-3,
            points=13,
            spacing=Spacing.LOG,
            outputs=(Output.CHI_IM,),
        )
        table = run_sweep(spec)
        ims = [row[1] for row in table.rows]
        assert ims[0] > 0 and ims[-1] < 0


class TestParseConfig:
    def test_minimal_config_fills_mercury_defaults(self):
        spec = parse_config("axis=DELTA_P\nstart=-2\nstop=2\npoints=5\n")
        assert spec.params.gamma41 == 1.0
        assert spec.params.gamma42 == 0.79
        assert spec.params.gamma23 == 0.14
        assert spec.params.gamma13 == 0.01
        assert spec.medium.number_density == pytest.approx(1e18)
        assert spec.medium.probe_wavelength == pytest.approx(253.7e-9)
        assert spec.points == 5

    def test_comments_and_blank_lines(self):
        text = "# full line comment\n\naxis = LAMBDA  # inline\nstart=1e-7\nstop=1e-3\npoints=4\nspacing=LOG\n"
        spec = parse_config(text)
        assert spec.axis is Axis.LAMBDA
        assert spec.spacing is Spacing.LOG

    def test_single_point_rejected(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("points=1\n")
        assert exc.value.code == "RANGE_ERROR"

    def test_log_from_zero_rejected(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("axis=LAMBDA\nspacing=LOG\nstart=0\nstop=1e-3\npoints=5\n")
        assert exc.value.code == "RANGE_ERROR"

    def test_unknown_key_rejected_with_line_number(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("g41=0.04\nbogus=1\n")
        assert exc.value.code == "UNKNOWN_KEY"
        assert "line 2" in str(exc.value)

    def test_malformed_line(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("g41 0.04\n")
        assert exc.value.code == "PARSE_ERROR"
        assert "line 1" in str(exc.value)

    def test_unparseable_value(self):
        with pytest.raises(ConfigError) as exc:
            parse_config("g41=fast\n")
        assert exc.value.code == "PARSE_ERROR"

    def test_overrides_take_precedence(self):
        spec = parse_config("g41=0.04\n", overrides={"g41": "0.08"})
        assert spec.params.g41 == 0.08

    def test_method_spellings(self):
        for raw in ("analytic-full", "ANALYTIC_FULL", "Analytic_Full"):
            spec = parse_config(f"method={raw}\n")
            assert spec.method.value == "ANALYTIC_FULL"

    def test_outputs_list(self):
        spec = parse_config("outputs=CHI_IM, SLOPE\ngamma_SI=1e7\n")
        assert spec.outputs == (Output.CHI_IM, Output.SLOPE)


class TestWriteCsv:
    def test_empty_rows_header_and_metadata_only(self, spectrum_spec):
        table = SweepTable(
            columns=["delta_p", "chi_re"],
            rows=[],
            metadata={"g41": "0.04", "version": "0.1.0"},
            failures=[],
        )
        buf = io.StringIO()
        write_csv(table, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "# g41 = 0.04"
        assert lines[-1] == "delta_p,chi_re"

    def test_round_trip_bitwise(self, spectrum_spec):
        table = run_sweep(replace(spectrum_spec, points=5))
        buf = io.StringIO()
        write_csv(table, buf)
        cols, rows = read_csv_rows(io.StringIO(buf.getvalue()))
        assert cols == table.columns
        assert rows == table.rows

    def test_spectrum_columns(self, spectrum_spec):
        table = run_sweep(replace(spectrum_spec, points=3))
        buf = io.StringIO()
        write_csv(table, buf)
        header = [l for l in buf.getvalue().splitlines() if not l.startswith("#")][0]
        assert header == "delta_p,chi_re,chi_im"

    def test_failures_logged_as_comments(self, spike_config, mercury_medium):
        spec = SweepSpec(
            params=spike_config,
            medium=mercury_medium,
            axis=Axis.LAMBDA,
            start=1e-6,
            stop=4e-6,
            points=2,
            outputs=(Output.DELTA0,),
        )
        buf = io.StringIO()
        write_csv(run_sweep(spec), buf)
        assert "code=NO_SIGN_CHANGE" in buf.getvalue()

    def test_io_error(self, spectrum_spec):
        table = run_sweep(replace(spectrum_spec, points=2))
        with pytest.raises(ConfigError) as exc:
            write_csv(table, "/nonexistent-dir/x.csv")
        assert exc.value.code == "IO_ERROR"

    def test_metadata_is_config_compatible(self, spectrum_spec):
        table = run_sweep(replace(spectrum_spec, points=2))
        buf = io.StringIO()
        write_csv(table, buf)
        config_lines = [
            line[2:]
            for line in buf.getvalue().splitlines()
            if line.startswith("# ") and " = " in line
            and not line.startswith(("# version", "# timestamp"))
        ]
        spec2 = parse_config("\n".join(config_lines))
        assert spec2.params == spectrum_spec.params
