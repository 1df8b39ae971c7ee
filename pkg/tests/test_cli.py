import json
import subprocess
import sys

import pytest

from rtslip.cli import ConfigError, RunConfig, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_mu_c_both(capsys):
    code, out, _ = run(["mu-c", "--k", "1", "--xi-plus", "1", "--xi-minus", "1", "--both"], capsys)
    assert code == 0
    header, row = out.strip().split("\n")
    assert header == "k,mu_c_closed,mu_c_numeric,relative_gap,small_k,high_k_bound"
    vals = row.split(",")
    assert float(vals[1]) == pytest.approx(0.5907842487848955, rel=1e-15)
    assert float(vals[3]) <= 1e-7


def test_mu_c_zero_slip_and_range(capsys):
    code, out, _ = run(["mu-c", "--k", "1"], capsys)
    assert code == 0 and out.strip().split("\n")[1].split(",")[1] == "0"
    code, out, _ = run(["mu-c", "--k-range", "0.5", "2", "4", "--xi-plus", "1"], capsys)
    assert code == 0 and len(out.strip().split("\n")) == 5


def test_negative_k_is_config_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["mu-c", "--k", "-1"])
    assert info.value.code == 2
    assert "k > 0" in capsys.readouterr().err


def test_growth_table_is_deterministic(capsys, tmp_path):
    code, first, _ = run(["growth", "--n-modes-out", "8"], capsys)
    assert code == 0
    _, second, _ = run(["growth", "--n-modes-out", "8"], capsys)
    assert first == second
    rows = [r.split(",") for r in first.strip().split("\n")[1:]]
    lams = [float(r[1]) for r in rows]
    assert all(a > b for a, b in zip(lams, lams[1:]))
    assert all(float(x) <= 1e-6 for r in rows for x in r[2:])
    code, _, _ = run(["growth", "--n-modes-out", "2", "--profiles-dir", str(tmp_path)], capsys)
    assert (tmp_path / "mode_2.csv").read_text().startswith("x2,phi,dphi,omega,theta,q\n")


def test_growth_subcritical(capsys):
    code, _, err = run(["growth", "--xi-plus", "1", "--xi-minus", "1", "--mu", "0.55"], capsys)
    assert code == 4 and "0.5907842487" in err


def test_dispersion_shape(capsys, tmp_path):
    code, out, _ = run(["dispersion", "--lattice", "8", "--m-modes", "2"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 9 and lines[0] == "k,mu_c,lambda_1,lambda_2,skipped"
    target = tmp_path / "d.json"
    code, _, _ = run(["dispersion", "--lattice", "2", "--m-modes", "1", "--format", "json",
                      "--workers", "2", "-o", str(target)], capsys)
    assert json.loads(target.read_text())["k"] == [1.0, 2.0]


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("RTSLIP_OUTPUT_DIR", str(tmp_path))
    code, _, _ = run(["mu-c", "--k", "2", "-o", "table.csv"], capsys)
    assert code == 0 and (tmp_path / "table.csv").exists()


def test_constants(capsys):
    code, _, err = run(["constants", "--xi-plus", "1", "--xi-minus", "1"], capsys)
    assert code == 5
    code, out, _ = run(["constants", "--xi-plus", "0.3", "--xi-minus", "0.3",
                        "--lattice", "4", "--m-modes", "3"], capsys)
    assert code == 0
    c = json.loads(out)["constants"]
    assert 1 < c["nu0"] < 1.5


def test_verify(capsys):
    code, out, _ = run(["verify", "--m-modes", "3", "--lattice", "3"], capsys)
    assert code == 0
    assert all(line.startswith("PASS") for line in out.strip().split("\n"))


def test_config_file_and_overrides(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"xi_plus": 1.0, "xi_minus": 1.0, "mu": 0.55}))
    code, _, _ = run(["growth", "--config", str(cfg)], capsys)
    assert code == 4
    code, _, _ = run(["growth", "--config", str(cfg), "--mu", "2", "--n-modes-out", "1"], capsys)
    assert code == 0


@pytest.mark.parametrize("content", [
    '{"unknown_key": 1}', '{"mu": -1}', '[1, 2]', 'not json',
    '{"profile_kind": "linear", "profile_params": [0.5, 1.0]}', '{"n_modes": 4.5}',
])
def test_bad_configs_exit_2(capsys, tmp_path, content):
    cfg = tmp_path / "c.json"
    cfg.write_text(content)
    code, _, err = run(["mu-c", "--config", str(cfg)], capsys)
    assert code == 2 and "configuration error" in err


def test_numeric_failure_exit_3(capsys, monkeypatch):
    import rtslip.growth as growth
    from rtslip.errors import NoRootError

    def boom(*a, **k):
        raise NoRootError("no bracket")
    monkeypatch.setattr(growth, "growth_sequence", boom)
    code, _, err = run(["growth"], capsys)
    assert code == 3 and "numerical failure" in err


def test_config_roundtrip():
    cfg = RunConfig(profile_kind="exponential", profile_params=(1.0, 0.5), xi_plus=0.2,
                    k_grid=(0.5, 1.5), output="x.csv")
    again = RunConfig.from_json(cfg.to_json())
    assert again == cfg and again.to_json() == cfg.to_json()
    with pytest.raises(ConfigError):
        RunConfig(m_modes=100)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rtslip", "mu-c", "--k", "1", "--xi-plus", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("k,")
