import json
import math

import numpy as np
import pytest

from oracles import binary_entropy, bisect_root, entropy_bits
from steerclone.cloning import make_family
from steerclone.explorer.cli import main
from steerclone.explorer.io import CSV_COLUMNS, load_lambda, render, render_csv, render_json, save_lambda
from steerclone.explorer.optimize import run_optimize, softmax_table
from steerclone.explorer.runs import RunConfig, parse_grid, run_sample, run_sweep, run_verify
from steerclone.explorer.sampling import sample_lambda
from steerclone.explorer.threshold import NotMonotoneError, run_threshold, sum_ab_at
from steerclone.steering import no_cloning_report


class TestSampling:
    def test_deterministic(self):
        a = sample_lambda(2, seed=7, index=0)
        b = sample_lambda(2, seed=7, index=0)
        np.testing.assert_array_equal(a.lam, b.lam)
        assert not np.array_equal(a.lam, sample_lambda(2, seed=7, index=1).lam)
        assert not np.array_equal(a.lam, sample_lambda(2, seed=8, index=0).lam)

    def test_large_concentration_is_uniform(self):
        draws = np.array([sample_lambda(3, 1, i, concentration=1e4).lam for i in range(1000)])
        np.testing.assert_allclose(draws.mean(axis=0), 1 / 9, atol=0.01)
        assert np.abs(draws - 1 / 9).max() < 0.05

    def test_valid_tables(self):
        for i in range(50):
            t = sample_lambda(4, 3, i, concentration=0.05)
            assert t.lam.min() >= 0 and abs(t.lam.sum() - 1) < 1e-10

    def test_uniform_simplex_mean(self):
        # Dirichlet(1) on 4 cells: each coordinate has mean 1/4, variance 3/80
        draws = np.array([sample_lambda(2, 5, i).lam.ravel() for i in range(4000)])
        np.testing.assert_allclose(draws.mean(axis=0), 0.25, atol=0.01)
        np.testing.assert_allclose(draws.var(axis=0), 3 / 80, atol=0.005)

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            sample_lambda(2, 0, 0, concentration=0)
        with pytest.raises(ValueError):
            sample_lambda(2, -1, 0)


class TestSweep:
    def cfg(self, **kw):
        base = dict(d=2, mode="sweep", family="depolarizing", grid="0:1:5")
        base.update(kw)
        return RunConfig(**base).validate()

    def test_depolarizing_sweep(self):
        recs = run_sweep(self.cfg())
        assert [r.param for r in recs] == [0, 0.25, 0.5, 0.75, 1]
        assert recs[0].sum_ab == pytest.approx(2) and recs[0].steerable_ab
        assert all(a.sum_ab >= b.sum_ab - 1e-12 for a, b in zip(recs, recs[1:]))
        assert max(recs[-1].i_ab) <= 1e-9

    def test_product_sweep(self):
        recs = run_sweep(self.cfg(family="product", d=3))
        for r in recs:
            assert r.lam.entropy() == pytest.approx(entropy_bits(r.q1) + entropy_bits(r.q2), abs=1e-9)

    def test_ss_sweep_matches_epr(self):
        epr = run_sweep(self.cfg())
        ss = run_sweep(self.cfg(scenario="ss"))
        for a, b in zip(epr, ss):
            assert a.total == pytest.approx(b.total, abs=1e-9)

    def test_bad_grid(self):
        for grid in (None, "0:1", "0:2:5", "a:b:c", "0:1:0"):
            with pytest.raises(ValueError):
                parse_grid(grid)
        with pytest.raises(ValueError):
            RunConfig(mode="sweep", family="delta", grid="0:1:3").validate()


class TestThreshold:
    def test_qubit_against_scalar_root(self):
        q_star = bisect_root(lambda q: 2 - 2 * binary_entropy(q) - 1, 0.5, 1.0)
        res = run_threshold(RunConfig(d=2, mode="threshold", family="depolarizing").validate())
        assert res["q1"][0] == pytest.approx(q_star, abs=1e-7)
        assert res["p_star"] == pytest.approx(2 * (1 - q_star), abs=1e-7)
        assert sum_ab_at(2, res["p_star"] + 1e-6) <= 1 <= sum_ab_at(2, res["p_star"] - 1e-6)

    def test_qutrit(self):
        def excess(p):
            q = [1 - p + p / 3, p / 3, p / 3]
            return math.log2(3) - 2 * entropy_bits(q)

        res = run_threshold(RunConfig(d=3, mode="threshold", family="depolarizing").validate())
        assert res["p_star"] == pytest.approx(bisect_root(excess, 0, 1), abs=1e-7)
        assert res["sum_ab"] > math.log2(3)

    def test_large_dimension_closed_form(self):
        res = run_threshold(RunConfig(d=32, mode="threshold", family="depolarizing").validate())
        assert 0 < res["p_star"] < 1

    def test_not_monotone(self, monkeypatch):
        import steerclone.explorer.threshold as th

        monkeypatch.setattr(th, "sum_ab_at", lambda d, p: 2 * math.cos(6 * p) ** 2)
        with pytest.raises(NotMonotoneError):
            run_threshold(RunConfig(d=2, mode="threshold", family="depolarizing").validate())


class TestIO:
    def test_byte_stable(self, tmp_path):
        r = no_cloning_report(make_family("depolarizing", 3, p=0.3))
        assert render_json(r) == render_json(no_cloning_report(make_family("depolarizing", 3, p=0.3)))
        assert render_json(r).endswith("\n") and render_csv(r).endswith("\n")

    def test_twelve_significant_digits(self):
        r = no_cloning_report(make_family("depolarizing", 2, p=0.5))
        row = render_csv(r).splitlines()[1].split(",")
        assert row[CSV_COLUMNS.index("i_ab_1")] == "0.188721875541"

    def test_csv_header(self):
        recs = run_sweep(RunConfig(mode="sweep", family="depolarizing", grid="0:1:3").validate())
        header = render_csv(recs).splitlines()[0]
        assert header == (
            "d,scenario,family,param,sum_ab,sum_ac,total,bound,i_ab_1,i_ab_2,i_ac_1,i_ac_2,"
            "holevo_ac_1,holevo_ac_2,steerable_ab,steerable_ac"
        )
        assert len(render_csv(recs).splitlines()) == 4

    def test_report_round_trips_through_loader(self, tmp_path):
        t = sample_lambda(3, 11, 4)
        path = tmp_path / "report.json"
        path.write_text(render_json(no_cloning_report(t)))
        np.testing.assert_allclose(load_lambda(path).lam, t.lam, atol=1e-12, rtol=0)
        save_lambda(t, tmp_path / "lam.json")
        np.testing.assert_allclose(load_lambda(tmp_path / "lam.json").lam, t.lam, atol=1e-12, rtol=0)

    def test_loader_tolerance(self, tmp_path):
        p = tmp_path / "l.json"
        p.write_text(json.dumps({"d": 2, "lambda": [[0.5, 0.5 + 5e-10], [0, 0]]}))
        assert load_lambda(p).lam.sum() == pytest.approx(1, abs=1e-15)
        p.write_text(json.dumps({"d": 2, "lambda": [[0.5, 0.5 + 1e-6], [0, 0]]}))
        with pytest.raises(ValueError):
            load_lambda(p)
        p.write_text(json.dumps({"d": 2, "lambda": [[1.5, -0.5], [0, 0]]}))
        with pytest.raises(ValueError):
            load_lambda(p)
        p.write_text(json.dumps({"d": 3, "lambda": [[1, 0], [0, 0]]}))
        with pytest.raises(ValueError):
            load_lambda(p)

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render({}, "xml")


class TestSample:
    def test_summary(self):
        res = run_sample(RunConfig(d=2, mode="sample", samples=200, seed=3).validate())
        s = res["summary"]
        assert s["samples"] == 200 and s["violations"] == 0 and s["dual_steerable"] == 0
        assert s["max_total"] <= 2 + 1e-9

    def test_parallel_identical(self):
        cfg = dict(d=3, mode="sample", samples=40, seed=9, scenario="ss")
        serial = run_sample(RunConfig(**cfg, workers=1).validate())
        parallel = run_sample(RunConfig(**cfg, workers=3).validate())
        assert render_json(serial) == render_json(parallel)
        assert render_csv(serial) == render_csv(parallel)


class TestOptimize:
    def test_softmax_gauge(self):
        t = softmax_table(np.zeros(3), 2)
        np.testing.assert_allclose(t.lam, 0.25)
        t = softmax_table([-800.0, -800.0, -800.0], 2)
        assert t.lam[0, 0] == pytest.approx(1)

    def test_small_run(self):
        cfg = RunConfig(d=2, mode="optimize", restarts=3, max_evals=300, seed=1).validate()
        res = run_optimize(cfg)
        assert res.restarts == 3 and len(res.runs) == 3
        assert res.gap >= -1e-6
        assert res.best_value == max(r.value for r in res.runs)
        assert res.iterations == sum(r.evaluations for r in res.runs)


class TestCLI:
    def test_verify_json(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert main(["verify", "--d", "3", "--family", "delta", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["steerable_ab"] is True and data["d"] == 3

    def test_verify_custom_file(self, tmp_path):
        lam = tmp_path / "lam.json"
        lam.write_text(json.dumps({"d": 2, "lambda": [[0.625, 0.125], [0.125, 0.125]]}))
        out = tmp_path / "r.csv"
        assert main(["verify", "--d", "2", "--lambda-file", str(lam), "--format", "csv", "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0].startswith("d,scenario,family,param")

    def test_sweep_and_threshold(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--family", "depolarizing", "--grid", "0:1:5", "--format", "csv", "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 6
        out = tmp_path / "t.json"
        assert main(["threshold", "--d", "2", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["p_star"] == pytest.approx(0.22006, abs=1e-4)

    def test_product_flags(self, tmp_path):
        out = tmp_path / "p.json"
        assert main(["verify", "--family", "product", "--q1", "0.9,0.1", "--q2", "0.7,0.3", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["family"] == "product"

    def test_exit_codes(self, tmp_path):
        assert main(["verify", "--d", "1"]) == 2
        assert main(["verify", "--family", "depolarizing", "--param", "2"]) == 2
        assert main(["sweep", "--family", "delta", "--grid", "0:1:3"]) == 2
        assert main(["verify", "--lambda-file", str(tmp_path / "missing.json"), "--family", "custom"]) == 4
        assert main(["verify", "--out", str(tmp_path / "no" / "dir" / "r.json")]) == 4
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--scenario", "bogus"])
        assert exc.value.code == 2

    def test_violation_exit_code(self, monkeypatch):
        import steerclone.explorer.cli as cli
        from steerclone.steering import TheoremViolation

        def boom(cfg):
            raise TheoremViolation("forced", {"d": 2})

        monkeypatch.setattr(cli, "execute", boom)
        assert main(["verify"]) == 3

    def test_repeat_runs_byte_identical(self, tmp_path):
        paths = [tmp_path / f"o{i}.json" for i in range(2)]
        for p in paths:
            assert main(["sample", "--d", "2", "--samples", "20", "--seed", "5", "--out", str(p)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


def test_verify_run_ss():
    r = run_verify(RunConfig(d=2, family="depolarizing", param=0.5, scenario="ss").validate())
    assert r.scenario == "ss" and r.param == 0.5
