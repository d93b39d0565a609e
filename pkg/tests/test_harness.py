import json
from pathlib import Path

import numpy as np
import pytest

import quasar_opt.harness as harness
from quasar_opt import ExperimentPlan, SummaryTable, derive_seed, emit_summary, run_plan
from quasar_opt.cli import main as cli_main
from quasar_opt.harness import CSV_HEADER, load_records

TINY = dict(dims=[5], pop_sizes=[20], g_max=5, trials=3,
            master_seed=7, suite_seed=1, functions=["sphere"])


def read_rows(path):
    lines = Path(path).read_text().strip().splitlines()
    return lines[0], [line.split(",") for line in lines[1:]]


class TestDeriveSeed:
    def test_stable(self):
        a = derive_seed(1, "quasar", "sphere", 10, 100, 0)
        b = derive_seed(1, "quasar", "sphere", 10, 100, 0)
        assert a == b

    def test_sensitive_to_every_coordinate(self):
        base = derive_seed(1, "quasar", "sphere", 10, 100, 0)
        assert base != derive_seed(2, "quasar", "sphere", 10, 100, 0)
        assert base != derive_seed(1, "de", "sphere", 10, 100, 0)
        assert base != derive_seed(1, "quasar", "ackley", 10, 100, 0)
        assert base != derive_seed(1, "quasar", "sphere", 30, 100, 0)
        assert base != derive_seed(1, "quasar", "sphere", 10, 300, 0)
        assert base != derive_seed(1, "quasar", "sphere", 10, 100, 1)

    def test_64_bit_range(self):
        s = derive_seed(0, "de", "levy", 50, 1000, 29)
        assert 0 <= s < 2 ** 64


class TestPlan:
    def test_cells_by_mode(self):
        plan = ExperimentPlan(mode="dim", dims=[10, 30], pop_sizes=[100, 300])
        assert plan.cells() == [(10, 100), (30, 100)]
        plan = ExperimentPlan(mode="sample", dims=[10, 30], pop_sizes=[100, 300])
        assert plan.cells() == [(10, 100), (10, 300)]
        plan = ExperimentPlan(mode="custom", dims=[10, 30], pop_sizes=[100, 300])
        assert len(plan.cells()) == 4

    def test_validation(self):
        with pytest.raises(ValueError):
            ExperimentPlan(mode="bogus")
        with pytest.raises(ValueError):
            ExperimentPlan(trials=0)
        with pytest.raises(ValueError):
            ExperimentPlan(algorithms=["simulated-annealing"])


class TestRunPlan:
    def test_row_cardinality(self, tmp_path):
        plan = ExperimentPlan(algorithms=["quasar", "de"], **TINY)
        run_plan(plan, tmp_path)
        header, rows = read_rows(tmp_path / "records.csv")
        assert header == CSV_HEADER
        assert len(rows) == 1 * 1 * 2 * 3  # functions * cells * algos * trials

    def test_resume_is_idempotent(self, tmp_path, monkeypatch):
        plan = ExperimentPlan(algorithms=["quasar"], **TINY)
        run_plan(plan, tmp_path)
        calls = {"n": 0}
        real = harness.run_trial

        def counting(*args, **kwargs):
            calls["n"] += 1
            return real(*args, **kwargs)

        monkeypatch.setattr(harness, "run_trial", counting)
        run_plan(plan, tmp_path)
        assert calls["n"] == 0
        _, rows = read_rows(tmp_path / "records.csv")
        assert len(rows) == 3

    def test_partial_resume_completes_missing_rows(self, tmp_path):
        plan = ExperimentPlan(algorithms=["quasar"], **TINY)
        run_plan(plan, tmp_path)
        records = (tmp_path / "records.csv").read_text().strip().splitlines()
        (tmp_path / "records.csv").write_text("\n".join(records[:-1]) + "\n")
        run_plan(plan, tmp_path)
        _, rows = read_rows(tmp_path / "records.csv")
        assert len(rows) == 3

    def test_deterministic_across_directories(self, tmp_path):
        plan = ExperimentPlan(algorithms=["quasar", "de"], **TINY)
        run_plan(plan, tmp_path / "a")
        run_plan(plan, tmp_path / "b")
        _, rows_a = read_rows(tmp_path / "a" / "records.csv")
        _, rows_b = read_rows(tmp_path / "b" / "records.csv")
        strip = lambda rows: [r[:8] + r[9:] for r in rows]  # drop runtime col
        assert strip(rows_a) == strip(rows_b)

    def test_worker_pool_matches_serial(self, tmp_path, monkeypatch):
        plan = ExperimentPlan(algorithms=["quasar"], **TINY)
        run_plan(plan, tmp_path / "serial")
        monkeypatch.setenv(harness.WORKERS_ENV, "2")
        run_plan(plan, tmp_path / "parallel")
        _, rows_s = read_rows(tmp_path / "serial" / "records.csv")
        _, rows_p = read_rows(tmp_path / "parallel" / "records.csv")
        errors = lambda rows: [r[7] for r in rows]
        assert errors(rows_s) == errors(rows_p)

    def test_save_traces(self, tmp_path):
        plan = ExperimentPlan(algorithms=["quasar"], save_traces=True, **TINY)
        run_plan(plan, tmp_path)
        traces = sorted((tmp_path / "traces").glob("*.csv"))
        assert len(traces) == 3
        trace = np.loadtxt(traces[0])
        assert trace.shape == (TINY["g_max"] + 1,)
        assert np.all(np.diff(trace) <= 0)


def write_records(path, rows):
    path.write_text(CSV_HEADER + "\n" + "\n".join(rows) + "\n")


def synthetic_rows(errors_by_algo, functions=("f1", "f2"), dim=10, pop=50):
    rows = []
    for fi, fn in enumerate(functions):
        for algo, errs in errors_by_algo.items():
            for t, e in enumerate(errs[fi]):
                rows.append(f"{algo},{fn},{dim},{pop},5,{t},1,{e!r},0.5,100")
    return rows


class TestEmitSummary:
    def test_dominant_algorithm_friedman(self, tmp_path):
        # quasar strictly best in every scenario: rank sum = #scenarios.
        rows = synthetic_rows({
            "quasar": [[0.1] * 6, [0.2] * 6],
            "de": [[1.0] * 6, [2.0] * 6],
        })
        write_records(tmp_path / "records.csv", rows)
        table = emit_summary(tmp_path / "records.csv")
        assert table.rank_sums["quasar"] == 2.0
        assert table.rank_sums["de"] == 4.0

    def test_two_algorithm_equality(self, tmp_path):
        errs = [[0.5, 0.4, 0.3, 0.7, 0.6, 0.2]] * 2
        rows = synthetic_rows({"quasar": errs, "de": errs})
        write_records(tmp_path / "records.csv", rows)
        table = emit_summary(tmp_path / "records.csv")
        for sc in table.scenarios:
            assert sc.gmerf["de"] == pytest.approx(1.0)
            assert sc.p_error["de"] > 0.9
        assert table.gmerf_overall["de"] == pytest.approx(1.0)

    def test_hand_built_2x2_matches_stats_oracles(self, tmp_path):
        from quasar_opt import gmerf as gmerf_fn
        q1, d1 = [1.0, 2.0, 4.0, 1.0, 2.0], [2.0, 4.0, 8.0, 2.0, 4.0]
        q2, d2 = [0.1, 0.2, 0.4, 0.1, 0.2], [0.4, 0.8, 1.6, 0.4, 0.8]
        rows = synthetic_rows({"quasar": [q1, q2], "de": [d1, d2]})
        write_records(tmp_path / "records.csv", rows)
        table = emit_summary(tmp_path / "records.csv")
        assert table.scenarios[0].gmerf["de"] == pytest.approx(gmerf_fn(d1, q1))
        assert table.scenarios[1].gmerf["de"] == pytest.approx(gmerf_fn(d2, q2))
        assert table.gmerf_overall["de"] == pytest.approx(
            np.sqrt(gmerf_fn(d1, q1) * gmerf_fn(d2, q2)))

    def test_summary_json_round_trip(self, tmp_path):
        rows = synthetic_rows({
            "quasar": [[0.1, 0.3, 0.2, 0.15, 0.25, 0.1]] * 2,
            "de": [[0.4, 0.5, 0.45, 0.35, 0.55, 0.6]] * 2,
        })
        write_records(tmp_path / "records.csv", rows)
        table = emit_summary(tmp_path / "records.csv", tmp_path)
        parsed = SummaryTable.from_dict(
            json.loads((tmp_path / "summary.json").read_text()))
        assert parsed == table

    def test_plot_data_csv(self, tmp_path):
        rows = synthetic_rows({
            "quasar": [[0.1] * 5, [0.2] * 5],
            "de": [[1.0] * 5, [2.0] * 5],
        })
        write_records(tmp_path / "records.csv", rows)
        emit_summary(tmp_path / "records.csv", tmp_path)
        lines = (tmp_path / "plot_data.csv").read_text().strip().splitlines()
        assert lines[0] == "algo,function,dim,pop,gm_error,mean_runtime_sec"
        assert len(lines) == 1 + 2 * 2  # scenarios * algorithms

    def test_failed_rows_skipped_and_counted(self, tmp_path):
        rows = synthetic_rows({
            "quasar": [[0.1] * 5, [0.2] * 5],
            "de": [[1.0] * 5, [2.0] * 5],
        })
        rows.append("quasar,f1,10,50,5,9,1,nan,nan,0")
        write_records(tmp_path / "records.csv", rows)
        table = emit_summary(tmp_path / "records.csv")
        assert table.n_failed_trials == 1
        assert all(sc.n_trials == 5 for sc in table.scenarios)

    def test_malformed_row_reports_line_number(self, tmp_path):
        write_records(tmp_path / "records.csv",
                      ["quasar,f1,10,50,5,0,1,0.5,0.5,100",
                       "quasar,f1,10,50,5,badtrial,1,0.5,0.5,100"])
        with pytest.raises(ValueError, match="line 3"):
            load_records(tmp_path / "records.csv")

    def test_bad_header_rejected(self, tmp_path):
        (tmp_path / "records.csv").write_text("a,b,c\n")
        with pytest.raises(ValueError, match="line 1"):
            load_records(tmp_path / "records.csv")


class TestCli:
    def test_run_and_summarize(self, tmp_path, capsys):
        out = tmp_path / "exp"
        code = cli_main([
            "run", "--mode", "custom", "--dims", "5", "--pops", "20",
            "--gmax", "5", "--trials", "2", "--seed", "3",
            "--algos", "quasar,de", "--functions", "sphere,rastrigin",
            "--out", str(out),
        ])
        assert code == 0
        assert (out / "records.csv").exists()
        assert (out / "summary.json").exists()
        capsys.readouterr()
        assert cli_main(["summarize", "--in", str(out)]) == 0
        captured = capsys.readouterr()
        assert "friedman rank sums" in captured.out

    def test_suite_manifest(self, capsys):
        assert cli_main(["suite", "--dim", "6", "--seed", "4"]) == 0
        entries = json.loads(capsys.readouterr().out)
        assert len(entries) == 10
        assert entries[0]["dim"] == 6

    def test_contract_violation_exit_code(self, tmp_path, capsys):
        code = cli_main(["run", "--trials", "0", "--out", str(tmp_path / "x")])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_function_rejected(self, tmp_path, capsys):
        code = cli_main(["run", "--functions", "made_up",
                         "--dims", "5", "--pops", "20", "--trials", "1",
                         "--gmax", "2", "--out", str(tmp_path / "y")])
        assert code == 2
