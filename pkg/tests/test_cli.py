import json
import math

import pytest

from warplab.cli import COMMANDS, build_parser, run


def files(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


def test_band_check_csv(tmp_path, capsys):
    assert run(["band-check", "--n", "3", "--out", str(tmp_path)]) == 0
    out = tmp_path / "band-check-3-samples200.csv"
    assert capsys.readouterr().out.strip() == str(out)
    header, row = out.read_text().splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert float(rec["target"]) == 6.0
    assert float(rec["max_abs_residual"]) < 1e-9
    assert float(rec["band_bound"]) == 2 * math.pi / 3


def test_json_format_and_exact_dbar_node(tmp_path):
    assert run(["dbar", "--samples", "4", "--format", "json", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "dbar-4-samples4.json").read_text())
    assert [set(d) for d in data] == [{"r", "dbar"}] * 3
    assert data[1]["dbar"] == pytest.approx(25 * math.pi / 9, abs=1e-12)


def test_plot_writes_csv_and_script(tmp_path):
    assert run(["dbar", "--samples", "6", "--format", "json", "--plot", "--out", str(tmp_path)]) == 0
    names = set(files(tmp_path))
    assert names == {"dbar-4-samples6.csv", "dbar-4-samples6.json", "dbar-4-samples6.gp"}
    script = (tmp_path / "dbar-4-samples6.gp").read_text()
    assert "'dbar-4-samples6.csv'" in script and script.startswith("set datafile separator ','")


def test_plot_without_spec_writes_data_only(tmp_path):
    assert run(["table1", "--plot", "--out", str(tmp_path)]) == 0
    assert set(files(tmp_path)) == {"table1-4-rows.csv"}


def test_table1_flags_row(tmp_path):
    assert run(["table1", "--n", "4", "--format", "json", "--out", str(tmp_path)]) == 0
    rows = {r["name"]: r for r in json.loads((tmp_path / "table1-4-rows.json").read_text())}
    assert rows["S^(n-2) x S^2"]["consistent_flag"] is False
    assert all(r["consistent_flag"] for k, r in rows.items() if k != "S^(n-2) x S^2")


@pytest.mark.parametrize("argv", [
    ["region-scan", "--alpha-min", "-0.5"],
    ["region-scan", "--resolution", "8"],
    ["scal-profile", "--s", "0.5", "--alpha", "0.1"],
    ["scal-profile", "--alpha", "-0.4"],
    ["band-check", "--n", "1"],
    ["table1", "--n", "2"],
    ["certify", "--s", "0"],
    ["geodesic", "--r", "4"],
])
def test_validation_exit_code(tmp_path, argv, capsys):
    assert run(argv + ["--out", str(tmp_path)]) == 2
    assert capsys.readouterr().err.startswith("error:")
    assert not any(tmp_path.iterdir())


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert run(["table1", "--out", str(blocker / "sub")]) == 2


def test_lf_line_endings_and_repr_floats(tmp_path):
    run(["corner-roots", "--n", "5", "--out", str(tmp_path)])
    raw = (tmp_path / "corner-roots-5-lattice5.csv").read_bytes()
    assert b"\r" not in raw
    last = raw.decode().splitlines()[-1].split(",")
    assert float(last[0]) == pytest.approx(1 / 13, abs=1e-9)
    assert float(last[1]) == pytest.approx(1 / 8, abs=1e-9)


def test_repeat_runs_identical(tmp_path):
    argv = ["bounds", "--n", "4", "--samples", "20", "--seed", "3"]
    run(argv + ["--out", str(tmp_path / "a")])
    run(argv + ["--out", str(tmp_path / "b")])
    assert files(tmp_path / "a") == files(tmp_path / "b")


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_help_per_subcommand(name, capsys):
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args([name, "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    assert COMMANDS[name][1].split()[0] in text and "--format" in text
