import csv
import io
import math
from pathlib import Path

import pytest

from pplv.cli import (
    EXIT_INCONCLUSIVE,
    EXIT_NO_COEXISTENCE,
    EXIT_STABLE,
    ParseError,
    RunConfig,
    ValidationError,
    format_config,
    main,
    parse_config,
    parse_p_list,
    run_command,
)
from pplv.coeffs import PeriodicCoefficient, SystemSpec
from pplv.jfunc import INF
from pplv.region import boundary_residual, region_spec

EQ30_CFG = """\
[system]
T = 1
[a]
kind = const
value = 2.0102
[b]
kind = const
value = 1
[c]
kind = const
value = 0.0051
[d]
kind = const
value = 2.0203
[e]
kind = const
value = 0.9898
[f]
kind = const
value = 2
"""


def write_cfg(tmp_path: Path, text: str = EQ30_CFG, name: str = "sys.cfg") -> Path:
    path = tmp_path / name
    path.write_text(text)
    return path


def make_cfg(command, system_file=None, p_list=(1.0, 2.0, INF),
             output_dir=None, emit_csv=False):
    return RunConfig(command=command, system_file=system_file,
                     p_list=None if p_list is None else tuple(p_list),
                     output_dir=output_dir, emit_csv=emit_csv)


class TestParseConfig:
    def test_demo_constants(self):
        spec = parse_config(EQ30_CFG)
        assert spec.T == 1.0
        assert spec.a.value == 2.0102
        assert spec.f.value == 2.0

    def test_trig_coefficient(self):
        text = EQ30_CFG.replace(
            "[a]\nkind = const\nvalue = 2.0102",
            "[a]\nkind = trig\nc0 = 2.0102\nharmonic = 1, 0, 0.01")
        spec = parse_config(text)
        assert spec.a.kind == "trigonometric"
        assert spec.a.harmonics == ((1, 0.0, 0.01),)

    def test_negative_c_rejected(self):
        text = EQ30_CFG.replace("[c]\nkind = const\nvalue = 0.0051",
                                "[c]\nkind = const\nvalue = -0.1")
        with pytest.raises(ValidationError, match="strictly positive"):
            parse_config(text)

    def test_parse_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse_config("[system]\nT == 1\n")
        assert err.value.line == 2

    def test_unknown_section(self):
        with pytest.raises(ParseError, match="unknown section"):
            parse_config("[g]\nkind = const\n")

    def test_bad_number(self):
        with pytest.raises(ParseError, match="expected a number"):
            parse_config("[system]\nT = abc\n")

    def test_bad_kind(self):
        with pytest.raises(ParseError, match="kind must be"):
            parse_config("[a]\nkind = quadratic\n")

    def test_missing_sections(self):
        with pytest.raises(ValidationError, match="missing sections"):
            parse_config("[system]\nT = 1\n")

    def test_comments_and_blank_lines(self):
        text = "# header\n\n" + EQ30_CFG.replace("value = 2.0102",
                                                 "value = 2.0102  # prey growth")
        spec = parse_config(text)
        assert spec.a.value == 2.0102


class TestRoundTrip:
    def test_constants_exact(self):
        spec = parse_config(EQ30_CFG)
        assert parse_config(format_config(spec)) == spec

    def test_trig_exact_17_digits(self):
        coef = PeriodicCoefficient.trig(
            0.12345678901234567, [(1, -0.9876543210987654, 1e-17), (3, 0.0, 2.5)])
        spec = SystemSpec(T=0.7300000000000001, a=coef,
                          b=PeriodicCoefficient.constant(1.0),
                          c=PeriodicCoefficient.constant(math.pi),
                          d=PeriodicCoefficient.constant(-0.1),
                          e=PeriodicCoefficient.constant(2.718281828459045),
                          f=PeriodicCoefficient.constant(3.0))
        assert parse_config(format_config(spec)) == spec


class TestParsePList:
    def test_tokens(self):
        assert parse_p_list("1, 2.5 ,inf") == (1.0, 2.5, INF)

    def test_below_one_rejected(self):
        with pytest.raises(ValidationError):
            parse_p_list("0.5")

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            parse_p_list(" , ")


class TestCommands:
    def test_analyze_demo_exit_stable(self, tmp_path):
        cfg_path = write_cfg(tmp_path)
        out = io.StringIO()
        code = run_command(make_cfg("analyze", cfg_path, output_dir=tmp_path / "o"), out)
        assert code == EXIT_STABLE
        text = out.getvalue()
        assert "globally_stable_via_18_19" in text
        assert "condition18" in text and "intertwined" in text

    def test_analyze_no_coexistence_exit_3(self, tmp_path):
        text = EQ30_CFG.replace("[d]\nkind = const\nvalue = 2.0203",
                                "[d]\nkind = const\nvalue = -10")
        cfg_path = write_cfg(tmp_path, text)
        out = io.StringIO()
        code = run_command(make_cfg("analyze", cfg_path, output_dir=tmp_path / "o"), out)
        assert code == EXIT_NO_COEXISTENCE
        assert "no_coexistence" in out.getvalue()

    def test_analyze_inconclusive_exit_2(self, tmp_path):
        text = EQ30_CFG.replace("[a]\nkind = const\nvalue = 2.0102",
                                "[a]\nkind = const\nvalue = 1")
        text = text.replace("[c]\nkind = const\nvalue = 0.0051",
                            "[c]\nkind = const\nvalue = 1")
        text = text.replace("[e]\nkind = const\nvalue = 0.9898",
                            "[e]\nkind = const\nvalue = 1")
        text = text.replace("[f]\nkind = const\nvalue = 2",
                            "[f]\nkind = const\nvalue = 1")
        text = text.replace("[d]\nkind = const\nvalue = 2.0203",
                            "[d]\nkind = const\nvalue = 0.5")
        text = text.replace("T = 1", "T = 5")
        cfg_path = write_cfg(tmp_path, text)
        out = io.StringIO()
        code = run_command(make_cfg("analyze", cfg_path, output_dir=tmp_path / "o"), out)
        assert code == EXIT_INCONCLUSIVE

    def test_region_csv_schema_and_residuals(self, tmp_path):
        cfg_path = write_cfg(tmp_path)
        outdir = tmp_path / "artifacts"
        out = io.StringIO()
        code = run_command(make_cfg("region", cfg_path, p_list=(2.0, INF),
                                    output_dir=outdir), out)
        assert code == EXIT_STABLE
        spec = parse_config(EQ30_CFG)
        for p, fname in ((2.0, "region_p2.csv"), (INF, "region_pinf.csv")):
            path = outdir / fname
            assert path.exists()
            with path.open() as fh:
                rows = list(csv.reader(fh))
            assert rows[0] == ["curve_label", "x", "y"]
            reg = region_spec(spec, p)
            for label, xs, ys in rows[1:]:
                assert boundary_residual(reg, label, float(xs), float(ys)) <= 1e-9

    def test_region_corner_present_at_inf(self, tmp_path):
        cfg_path = write_cfg(tmp_path)
        outdir = tmp_path / "artifacts"
        run_command(make_cfg("region", cfg_path, p_list=(INF,), output_dir=outdir),
                    io.StringIO())
        with (outdir / "region_pinf.csv").open() as fh:
            rows = list(csv.reader(fh))[1:]
        pts = {(x, y) for _, x, y in rows}
        corner = ("2.0102000000000002", "2.0049979800000002")
        assert corner in pts

    def test_jfunc_table_bounds(self, tmp_path):
        outdir = tmp_path / "artifacts"
        out = io.StringIO()
        code = run_command(make_cfg("jfunc", None, p_list=None,
                                    output_dir=outdir), out)
        assert code == EXIT_STABLE
        with (outdir / "jfunc.csv").open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["p", "scriptF"]
        ps = [r[0] for r in rows[1:]]
        assert "inf" in ps
        vals = [float(r[1]) for r in rows[1:]]
        assert all(2.0 - 1e-9 <= v <= math.pi + 1e-9 for v in vals)
        assert len(vals) > 40  # default dense grid

    def test_jfunc_explicit_p_list(self, tmp_path):
        outdir = tmp_path / "explicit"
        run_command(make_cfg("jfunc", None, p_list=(1.0, 2.0, INF),
                             output_dir=outdir), io.StringIO())
        with (outdir / "jfunc.csv").open() as fh:
            rows = list(csv.reader(fh))[1:]
        assert [r[0] for r in rows] == ["1", "2", "inf"]

    def test_scan_compact_output(self, tmp_path):
        cfg_path = write_cfg(tmp_path)
        out = io.StringIO()
        code = run_command(make_cfg("scan", cfg_path, p_list=(2.0,),
                                    output_dir=tmp_path / "o"), out)
        assert code == EXIT_STABLE
        lines = out.getvalue().splitlines()
        assert lines[0] == "name,p,lhs,rhs,margin,passed"
        assert any(line.startswith("intertwined,2,") for line in lines)

    def test_simulate_demo(self, tmp_path):
        cfg_path = write_cfg(tmp_path)
        out = io.StringIO()
        code = run_command(make_cfg("simulate", cfg_path,
                                    output_dir=tmp_path / "o"), out)
        assert code == EXIT_STABLE
        text = out.getvalue()
        assert "asymptotically_stable" in text
        assert "region membership p = inf" in text

    def test_simulate_no_coexistence_exit_3(self, tmp_path):
        text = EQ30_CFG.replace("[d]\nkind = const\nvalue = 2.0203",
                                "[d]\nkind = const\nvalue = -10")
        cfg_path = write_cfg(tmp_path, text)
        code = run_command(make_cfg("simulate", cfg_path,
                                    output_dir=tmp_path / "o"), io.StringIO())
        assert code == EXIT_NO_COEXISTENCE

    def test_example1_report(self, tmp_path):
        out = io.StringIO()
        code = run_command(make_cfg("example1", None, output_dir=tmp_path / "o",
                                    emit_csv=True), out)
        assert code == EXIT_STABLE  # conditions 18+19 hold for the demo constants
        text = out.getvalue()
        assert "(True, True, True)" in text
        assert "sign_ok false at p=1" in text
        assert "sign_ok=false" in text and "authoritative" in text
        with (tmp_path / "o" / "example1.csv").open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["p", "h", "sign_ok", "G", "delta"]
        gs = {r[0]: float(r[3]) for r in rows[1:]}
        assert gs["1"] > 0 and gs["2"] < 0 and gs["200"] > 0

    def test_missing_config_is_error(self, tmp_path):
        with pytest.raises(ValidationError):
            run_command(make_cfg("analyze", None, output_dir=tmp_path), io.StringIO())


class TestDeterminism:
    def test_example1_byte_identical(self, tmp_path):
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            run_command(make_cfg("example1", None, output_dir=tmp_path / "o"), buf)
            outs.append(buf.getvalue())
        assert outs[0] == outs[1]

    def test_region_csv_byte_identical(self, tmp_path):
        cfg_path = write_cfg(tmp_path)
        blobs = []
        for sub in ("o1", "o2"):
            outdir = tmp_path / sub
            run_command(make_cfg("region", cfg_path, p_list=(2.0,),
                                 output_dir=outdir), io.StringIO())
            blobs.append((outdir / "region_p2.csv").read_bytes())
        assert blobs[0] == blobs[1]


class TestMain:
    def test_main_example1(self, tmp_path, capsys):
        code = main(["--command", "example1", "--out", str(tmp_path / "o")])
        assert code == EXIT_STABLE
        assert "sign pattern" in capsys.readouterr().out

    def test_main_bad_p(self, tmp_path, capsys):
        code = main(["--command", "jfunc", "--p", "0.2",
                     "--out", str(tmp_path / "o")])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_main_missing_config(self, tmp_path, capsys):
        code = main(["--command", "analyze", "--out", str(tmp_path / "o")])
        assert code == 1

    def test_main_analyze(self, tmp_path, capsys):
        cfg_path = write_cfg(tmp_path)
        code = main(["--command", "analyze", "--config", str(cfg_path),
                     "--p", "2,inf", "--out", str(tmp_path / "o")])
        assert code == EXIT_STABLE
