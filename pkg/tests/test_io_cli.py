import json
from pathlib import Path

import numpy as np
import pytest

from divfree import cli
from divfree.corpus import corpus_tensor
from divfree.tensor_field import GridSpec, SymTensorField
from divfree.tensor_io import (load_arrays_binary, load_field_binary,
                               load_field_csv, save_arrays_binary,
                               save_field_binary, save_field_csv)


@pytest.fixture
def awkward_field(rng):
    # values exercising exact round trips: tiny, huge, non-representable
    g = GridSpec(2, (0.0, 1.0), ((-1.0, 1.0), (0.0, 3.0)), 3, (4, 5))
    vals = rng.normal(size=(*g.shape, 3, 3))
    vals = vals + np.swapaxes(vals, -1, -2)
    vals[0, 0, 0] *= 1e-300
    vals[1, 1, 1] *= 1e300
    vals[2, 2, 2, 0, 0] = 0.1 + 0.2  # classic non-exact decimal
    return SymTensorField(g, vals)


class TestSerialization:
    def test_csv_roundtrip_bitexact(self, tmp_path, awkward_field):
        path = tmp_path / "field.csv"
        save_field_csv(path, awkward_field)
        back = load_field_csv(path)
        assert back.grid == awkward_field.grid
        assert np.array_equal(back.values, awkward_field.values)

    def test_binary_roundtrip_bitexact(self, tmp_path, awkward_field):
        path = tmp_path / "field.bin"
        save_field_binary(path, awkward_field)
        back = load_field_binary(path)
        assert back.grid == awkward_field.grid
        assert np.array_equal(back.values, awkward_field.values)

    def test_csv_binary_agree(self, tmp_path):
        S = corpus_tensor("cofactor", 16)
        save_field_csv(tmp_path / "a.csv", S)
        save_field_binary(tmp_path / "a.bin", S)
        assert np.array_equal(load_field_csv(tmp_path / "a.csv").values,
                              load_field_binary(tmp_path / "a.bin").values)

    def test_generic_container(self, tmp_path, rng):
        arrays = {"x": rng.normal(size=(7, 2)), "w": rng.uniform(size=7)}
        save_arrays_binary(tmp_path / "c.bin", {"kind": "particles", "d": 2},
                           arrays)
        header, back = load_arrays_binary(tmp_path / "c.bin")
        assert header["kind"] == "particles"
        for k in arrays:
            assert np.array_equal(back[k], arrays[k])

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"garbage")
        with pytest.raises(ValueError):
            load_arrays_binary(path)


def write_config(path, body):
    Path(path).write_text(json.dumps(body))
    return str(path)


SMALL_CAMPAIGN = {
    "seed": 3,
    "experiments": [
        {"name": "solve-a", "kind": "solve", "flow": "bump-d1-monoatomic",
         "n": 64},
        {"name": "verify-a", "kind": "verify",
         "checks": ["pf-worked-value", "uncert-closed-form"],
         "depends_on": ["solve-a"]},
    ],
}


class TestCli:
    def test_empty_campaign(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {"experiments": []})
        assert cli.main(["run", "--config", cfg,
                         "--out", str(tmp_path / "out")]) == 0
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["records"] == []

    def test_campaign_passes_and_reports(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", SMALL_CAMPAIGN)
        assert cli.main(["run", "--config", cfg,
                         "--out", str(tmp_path / "out")]) == 0
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        names = [r["name"] for r in report["records"]]
        assert "pf-worked-value" in names
        assert (tmp_path / "out" / "summary.csv").read_text().startswith("check,")

    def test_determinism_bit_identical(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", SMALL_CAMPAIGN)
        cli.main(["run", "--config", cfg, "--out", str(tmp_path / "o1")])
        cli.main(["run", "--config", cfg, "--out", str(tmp_path / "o2")])
        assert (tmp_path / "o1" / "report.json").read_bytes() \
            == (tmp_path / "o2" / "report.json").read_bytes()

    def test_cached_solve_reused(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", SMALL_CAMPAIGN)
        out = str(tmp_path / "out")
        cli.main(["run", "--config", cfg, "--out", out])
        first = json.loads((tmp_path / "out" / "report.json").read_text())
        cli.main(["run", "--config", cfg, "--out", out])
        second = json.loads((tmp_path / "out" / "report.json").read_text())
        rec = [r for r in second["records"] if r["name"] == "solve-a"][0]
        assert rec["data"]["cached"] is True
        verify1 = [r for r in first["records"] if r["name"] == "verify-a"][0]
        verify2 = [r for r in second["records"] if r["name"] == "verify-a"][0]
        assert verify1 == verify2

    def test_schema_violation_exit_2(self, tmp_path):
        cfg = write_config(tmp_path / "c.json",
                           {"experiments": [{"name": "x", "kind": "nope"}]})
        assert cli.main(["run", "--config", cfg,
                         "--out", str(tmp_path / "out")]) == 2

    def test_syntax_error_exit_2_with_location(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "experiments": [\n')
        assert cli.main(["run", "--config", str(path),
                         "--out", str(tmp_path / "out")]) == 2
        err = capsys.readouterr().err
        assert "broken.json:3" in err

    def test_cycle_detected(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {"experiments": [
            {"name": "a", "kind": "verify", "checks": ["pf-worked-value"],
             "depends_on": ["b"]},
            {"name": "b", "kind": "verify", "checks": ["pf-worked-value"],
             "depends_on": ["a"]},
        ]})
        assert cli.main(["run", "--config", cfg,
                         "--out", str(tmp_path / "out")]) == 2

    def test_failing_check_exit_1(self, tmp_path):
        # an impossibly small constant budget fails the dispersive suite
        cfg = write_config(tmp_path / "c.json", {"experiments": [
            {"name": "sweep", "kind": "sweep", "check": "dispersive-suite",
             "parameter": "budget", "values": [1e-9]},
        ]})
        assert cli.main(["run", "--config", cfg,
                         "--out", str(tmp_path / "out")]) == 1

    def test_only_filter(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", SMALL_CAMPAIGN)
        out = str(tmp_path / "out")
        assert cli.main(["run", "--config", cfg, "--out", out,
                         "--only", "verify-a"]) == 0
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        top = [r["name"] for r in report["records"] if r.get("group") == "verify"]
        assert top == ["verify-a"]

    def test_only_bare_check_name(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", SMALL_CAMPAIGN)
        assert cli.main(["run", "--config", cfg, "--out", str(tmp_path / "o"),
                         "--only", "pf-worked-value"]) == 0

    def test_list_contains_catalog(self, capsys):
        assert cli.main(["list"]) == 0
        out = capsys.readouterr().out
        for needle in ("quadratic", "gaussian-bump", "two-beam"):
            assert needle in out

    def test_list_json(self, capsys):
        assert cli.main(["list", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert "potentials" in data and "checks" in data

    def test_list_merges_user_catalog(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json", {
            "experiments": [],
            "catalog": {"potentials": {"user-poly": {"params": {"coeffs": "matrix"}}}},
        })
        assert cli.main(["list", "--config", cfg]) == 0
        assert "user-poly" in capsys.readouterr().out

    def test_dump_tensor_roundtrip(self, tmp_path):
        out = tmp_path / "dump.csv"
        assert cli.main(["dump", "tensor", "constant", "--n", "16",
                         "--out", str(out)]) == 0
        back = load_field_csv(out)
        assert np.allclose(back.values, np.eye(2))

    def test_dump_ode_csv(self, tmp_path):
        out = tmp_path / "ode.csv"
        assert cli.main(["dump", "ode", "calogero-moser",
                         "--out", str(out)]) == 0
        header = out.read_text().splitlines()[0]
        assert header.startswith("t,s,")
        assert "deviation" in header

    def test_transform_experiment_dumps_tensor(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {"experiments": [
            {"name": "tr", "kind": "transform", "tensor": "constant",
             "n": 16, "alphas": [1.0]},
        ]})
        out = tmp_path / "out"
        assert cli.main(["run", "--config", cfg, "--out", str(out)]) == 0
        dumped = load_field_csv(out / "tr_alpha1.csv")
        assert dumped.values.shape[-1] == 2

    def test_workers_parallel_same_result(self, tmp_path):
        cfg_body = {"seed": 5, "experiments": [
            {"name": "v1", "kind": "verify", "checks": ["pf-worked-value"]},
            {"name": "v2", "kind": "verify", "checks": ["dm-scale-arithmetic"]},
            {"name": "v3", "kind": "verify", "checks": ["precis-constant-arithmetic"]},
        ]}
        cfg = write_config(tmp_path / "c.json", cfg_body)
        cli.main(["run", "--config", cfg, "--out", str(tmp_path / "serial")])
        cli.main(["run", "--config", cfg, "--out", str(tmp_path / "par"),
                  "--workers", "3"])
        assert (tmp_path / "serial" / "report.json").read_bytes() \
            == (tmp_path / "par" / "report.json").read_bytes()


class TestKineticIO:
    def test_particles_csv_roundtrip(self, tmp_path, rng):
        from divfree.kinetic import ParticleState
        from divfree.tensor_io import load_particles_csv, save_particles_csv
        st = ParticleState(rng.normal(size=(9, 2)), rng.normal(size=(9, 2)),
                           rng.uniform(size=9))
        save_particles_csv(tmp_path / "p.csv", st)
        back = load_particles_csv(tmp_path / "p.csv")
        assert np.array_equal(back.x, st.x)
        assert np.array_equal(back.xi, st.xi)
        assert np.array_equal(back.w, st.w)

    def test_grid_state_roundtrip(self, tmp_path):
        from divfree.catalog import maxwellian_grid_state
        from divfree.tensor_io import load_grid_state, save_grid_state
        st = maxwellian_grid_state(n_x=8, n_xi=10)
        save_grid_state(tmp_path / "g.bin", st)
        back = load_grid_state(tmp_path / "g.bin")
        assert np.array_equal(back.f, st.f)
        assert np.array_equal(back.x_axes[0], st.x_axes[0])

    def test_flow_roundtrip(self, tmp_path):
        from divfree.corpus import corpus_flow
        from divfree.tensor_io import load_flow, save_flow
        fl = corpus_flow("bump-d1-monoatomic-short", 64)
        save_flow(tmp_path / "f.bin", fl)
        back = load_flow(tmp_path / "f.bin")
        assert np.array_equal(back.rho, fl.rho)
        assert np.array_equal(back.u, fl.u)
        assert np.array_equal(back.e, fl.e)
        assert back.gamma == fl.gamma
        assert np.array_equal(back.functionals.pi, fl.functionals.pi)
