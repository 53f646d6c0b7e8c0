import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wiretap_lattice import cli
from wiretap_lattice.config import load_lattice_file, parse_lattice_text
from wiretap_lattice.errors import ConfigError
from wiretap_lattice.lattice import volume


def test_generator_rows():
    spec = parse_lattice_text("generator = [[1, 0], [0.5, 2]]\nscale = 2\n", "g.toml")
    np.testing.assert_allclose(spec.lattice.generator, [[2, 1], [0, 4]])
    assert spec.lattice.label == "g"


def test_catalog_and_fields():
    assert volume(parse_lattice_text('catalog = "Dn"\ndim = 4').lattice) == pytest.approx(2)
    q5 = parse_lattice_text('[field]\ncatalog = "Qsqrt"\nd = 5\n')
    assert volume(q5.lattice) == pytest.approx(np.sqrt(5))
    custom = parse_lattice_text('[field]\nmin_poly = [-5, 0, 1]\nbasis = [[1, 0], ["1/2", "1/2"]]\n')
    np.testing.assert_allclose(custom.lattice.generator, q5.lattice.generator)
    block = parse_lattice_text('L = 2\n[field]\ncatalog = "cyclotomic_real"\np = 7\n')
    assert block.lattice.dim == 6 and block.n_rows == 3


@pytest.mark.parametrize("text, key, line", [
    ('name = "x"\ngenerator = [[1, 2], [2, 4]]\n', "generator", 2),
    ('generator = [[1, 2, 3], [2, 4]]\n', "generator", 1),
    ('catalog = "Zn"\ndim = 2\ncolour = 3\n', "colour", 3),
    ('catalog = "Zn"\ndim = 2\nscale = -1\n', "scale", 3),
    ('catalog = "Zn"\ndim = 3\nL = 2\n', "L", 3),
    ('[field]\nmin_poly = [1, 0, 1]\n', "field", 1),
    ('[field]\ncatalog = "Qsqrt"\n', "field.d", 1),
    ('generator = [[1]]\ncatalog = "Zn"\n', "generator|catalog|field", None),
])
def test_config_errors_name_path_and_key(text, key, line):
    with pytest.raises(ConfigError) as exc:
        parse_lattice_text(text, "bad.toml")
    assert exc.value.key == key and exc.value.line == line
    assert str(exc.value).startswith("bad.toml")


def test_missing_file():
    with pytest.raises(ConfigError):
        load_lattice_file("/nonexistent/lattice.toml")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-30, 30, allow_nan=False), min_size=1, max_size=6))
def test_gamma_grid_parsing(values):
    assert cli.parse_gamma_grid([",".join(repr(v) for v in values)]) == values


def test_gamma_grid_ranges_and_errors():
    assert cli.parse_gamma_grid(["0:10:3"]) == [0.0, 5.0, 10.0]
    assert cli.parse_gamma_grid(None) is None
    for bad in ([], [""], ["abc"], ["1:2"]):
        with pytest.raises(cli.UsageError):
            cli.parse_gamma_grid(bad)


@pytest.fixture
def files(tmp_path):
    z1 = tmp_path / "z1.toml"
    z1.write_text('catalog = "Zn"\ndim = 1\n')
    z2 = tmp_path / "z2.toml"
    z2.write_text('catalog = "Zn"\ndim = 2\n')
    q5 = tmp_path / "q5.toml"
    q5.write_text('[field]\ncatalog = "Qsqrt"\nd = 5\n')
    return z1, z2, q5


def test_criterion_command(files, capsys):
    z1, _, _ = files
    rc = cli.main(["criterion", "--lattice", str(z1), "--coarse", "2", "--tags", "pce_fast",
                   "theta", "--gamma-db", "0"])
    assert rc == 0
    out = capsys.readouterr().out
    lines = out.split("\n")
    assert lines[0] == "criterion,gamma_e_db,value,terms,radius,tail_bound"
    assert "\r" not in out
    crit, g, value = lines[1].split(",")[:3]
    assert crit == "pce_fast" and float(g) == 0.0
    assert float(value) == pytest.approx(0.6130831224, rel=1e-9)
    assert float(lines[2].split(",")[2]) == pytest.approx(1.2713415221890152, rel=1e-12)


def test_criterion_sigma2_and_pcb(files, capsys):
    z1, _, _ = files
    assert cli.main(["criterion", "--lattice", str(z1), "--tags", "pcb_gauss",
                     "--sigma2", "1"]) == 0
    row = capsys.readouterr().out.split("\n")[1].split(",")
    assert row[0] == "pcb_gauss" and row[4] == ""
    assert abs(float(row[2]) - 0.38292492254802624) <= 4 * float(row[5])


def test_norm_sum_needs_field(files, capsys):
    z1, _, q5 = files
    assert cli.main(["criterion", "--lattice", str(z1), "--tags", "norm_sum_fast",
                     "--gamma-db", "10"]) == 2
    assert cli.main(["criterion", "--lattice", str(q5), "--tags", "norm_sum_fast",
                     "--gamma-db", "10", "--radius", "6"]) == 0


def test_usage_errors(files):
    z1, _, _ = files
    assert cli.main(["criterion", "--lattice", str(z1), "--tags", "theta", "--gamma-db"]) == 2
    assert cli.main(["criterion", "--lattice", str(z1), "--tags", "bogus", "--gamma-db", "0"]) == 2
    assert cli.main(["criterion", "--lattice", str(z1), "--tags", "theta", "--gamma-db", "0",
                     "--sigma2", "1"]) == 2
    assert cli.main(["simulate", "--lattice", str(z1), "--gamma-db", "0", "10"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["criterion"])
    assert exc.value.code == 2


def test_runtime_errors_exit_1(files):
    z1, z2, _ = files
    # coarse 1.5 Z is not nested in Z
    assert cli.main(["sweep", "--lattice", str(z1), "--coarse", "1.5", "--gamma-db", "0"]) == 1
    assert cli.main(["criterion", "--lattice", str(z2), "--coarse", "2", "--tags",
                     "pce_fast_asym", "--gamma-db", "10"]) == 1


def test_rank_orders_and_flags(files, tmp_path):
    _, z2, q5 = files
    out = tmp_path / "rank.csv"
    rc = cli.main(["rank", "--lattice", str(z2), "--candidates", str(z2), str(q5), "--tags",
                   "pce_fast_asym", "pce_fast", "--gamma-db", "20", "--target-volume", "4",
                   "--radius", "6", "--fixed-radius", "--out", str(out)])
    assert rc == 0
    rows = [ln.split(",") for ln in out.read_text().strip().split("\n")]
    assert rows[0] == ["gamma_e_db", "criterion", "rank", "candidate", "value",
                       "value_normalized", "scale", "flag"]
    asym = [r for r in rows[1:] if r[1] == "pce_fast_asym"]
    assert [r[3].endswith("q5.toml") for r in asym] == [True, False]
    assert asym[1][7] == "NotFullDiversity"
    fast = [r for r in rows[1:] if r[1] == "pce_fast"]
    assert [r[2] for r in fast] == ["1", "2"]
    assert float(fast[0][5]) <= float(fast[1][5])


def test_rank_volume_mismatch(files):
    _, z2, q5 = files
    assert cli.main(["rank", "--lattice", str(z2), "--candidates", str(z2), str(q5), "--tags",
                     "pce_fast", "--gamma-db", "10", "--no-normalize"]) == 1


def test_check_command(capsys):
    assert cli.main(["check"]) == 0
    assert "FAIL" not in capsys.readouterr().out
