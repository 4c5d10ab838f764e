import json

import pytest

from sockopt.app import MANIFEST_NAME, EstimationConfig, GridConfig, PolicyConfig, TradeoffConfig
from sockopt.app.service import PARTIAL_NAME, SockService
from sockopt.app.simulate import TRACE_HEADER
from sockopt.blob.local_fs import read_csv_table, sha256_file
from sockopt.errors import DataError, GuardExceededError, RunCancelledError
from sockopt.workflow import WorkflowStep

PIPELINES = (
    "gen_catalogue",
    "simulate",
    "sweep",
    "tradeoff",
    "estimate_chi",
    "estimate_delta",
    "estimate_synthetic",
    "oracle_verify",
    "oracle_coverage",
    "oracle_solve",
)


@pytest.fixture(autouse=True)
def _serial_jobs(monkeypatch):
    monkeypatch.delenv("SOCKOPT_JOBS", raising=False)


def _service(out_dir, small_config, **configs):
    return SockService(
        run_settings={"seed": 7, "out_dir": str(out_dir), "reps": 2},
        simulation_config=small_config.model_copy(update={"T": 20}),
        **configs,
    )


@pytest.fixture
def service(tmp_path, small_config):
    return _service(tmp_path, small_config)


def _manifest(service):
    return json.loads(service.fs.path(MANIFEST_NAME).read_text())


def _read_csv(path):
    frame = read_csv_table(path.read_text(encoding="utf-8"))
    return [list(frame.columns), *frame.to_numpy().tolist()]


class TestPipelines:
    @pytest.mark.parametrize("name", PIPELINES)
    def test_every_pipeline_writes_its_manifest_last(self, service, name):
        assert service.describe_pipeline(name)[-1] == "write_manifest"

    def test_master_seed_wins(self, service):
        assert service.simulation_config.seed == 7

    async def test_inserted_step_runs_and_bumps_the_revision(self, service):
        seen = []

        def peek(state, context):
            seen.append(len(state["table"].rows))
            return state

        step = WorkflowStep(step_id="peek", role="inspect", handler=peek, requires={"table"})
        assert service.insert_step_after(target_step_id="replicate", new_step=step, pipeline="simulate") == 2
        response = await service.run_simulation()
        assert seen == [1]
        assert response["manifest"].pipeline.startswith("simulate:v2:")


class TestSimulate:
    async def test_outputs_and_manifest(self, service):
        response = await service.run_simulation([PolicyConfig(kind="purist"), PolicyConfig(kind="greedy")])
        assert response["outputs"] == ["metrics.csv", "summary.csv"]
        manifest = _manifest(service)
        assert manifest["command"] == "simulate"
        assert manifest["seed"] == 7
        assert manifest["config"]["policies"] == ["purist[tau_eta=0]", "greedy"]
        for name, digest in manifest["outputs"].items():
            assert sha256_file(service.fs.path(name)) == digest
        assert manifest["finished_at"] is not None

    async def test_metrics_have_one_row_per_replication(self, service):
        await service.run_simulation([PolicyConfig(kind="greedy")], reps=3)
        rows = _read_csv(service.fs.path("metrics.csv"))
        assert len(rows) == 1 + 3
        assert [row[1] for row in rows[1:]] == ["0", "1", "2"]

    async def test_trace(self, service):
        response = await service.run_simulation(trace=True)
        assert "trace.csv" in response["outputs"]
        rows = _read_csv(service.fs.path("trace.csv"))
        assert rows[0] == TRACE_HEADER
        assert len(rows) == 1 + 2 * 20

    async def test_reruns_are_byte_identical(self, tmp_path, small_config):
        first = _service(tmp_path / "a", small_config)
        second = _service(tmp_path / "b", small_config)
        one = await first.run_simulation(trace=True)
        two = await second.run_simulation(trace=True)
        for name in one["outputs"]:
            assert first.fs.path(name).read_bytes() == second.fs.path(name).read_bytes()
        assert one["manifest"].reproducible_view() == two["manifest"].reproducible_view()


class TestCancel:
    async def test_cancel_marks_written_files_partial(self, service):
        def stop(state, context):
            service.cancel()
            return state

        step = WorkflowStep(step_id="stop", role="control", handler=stop)
        service.insert_step_after(target_step_id="write_metrics", new_step=step, pipeline="simulate")
        with pytest.raises(RunCancelledError, match="before step 'write_manifest'"):
            await service.run_simulation()
        assert not service.fs.path(MANIFEST_NAME).exists()
        marker = json.loads(service.fs.path(PARTIAL_NAME).read_text())
        assert marker["pipeline"] == "simulate"
        assert marker["outputs"] == ["metrics.csv", "summary.csv"]
        assert marker["error"].startswith("RunCancelledError")

        service.remove_step(target_step_id="stop", pipeline="simulate")
        response = await service.run_simulation()
        assert response["outputs"] == ["metrics.csv", "summary.csv"]
        assert not service.fs.path(PARTIAL_NAME).exists()

    async def test_cancel_before_start_writes_nothing(self, service):
        def stop(state, context):
            service.cancel()
            return state

        step = WorkflowStep(step_id="stop", role="control", handler=stop)
        service.insert_step_before(target_step_id="replicate", new_step=step, pipeline="simulate")
        with pytest.raises(RunCancelledError, match="before step 'replicate'"):
            await service.run_simulation()
        assert list(service.fs.base.iterdir()) == []

    def test_inserting_after_the_manifest_is_rejected(self, service):
        step = WorkflowStep(step_id="late", role="x", handler=lambda s, c: s)
        with pytest.raises(ValueError, match="must end with step 'write_manifest'"):
            service.insert_step_after(target_step_id="write_manifest", new_step=step, pipeline="simulate")


class TestCatalogue:
    async def test_generated_catalogue_file(self, service, small_catalogue_config):
        response = await service.gen_catalogue(small_catalogue_config.model_copy(update={"seed": None}))
        assert len(response["catalogue"]) == small_catalogue_config.n_designs
        rows = _read_csv(service.fs.path("catalogue.csv"))
        assert len(rows) == 1 + small_catalogue_config.n_designs


class TestExperiments:
    async def test_sweep_files(self, tmp_path, small_config):
        grid = GridConfig(
            d_values=(0.0, 0.1),
            theta_values=(5,),
            replications=2,
            policies=(PolicyConfig(kind="purist"), PolicyConfig(kind="greedy")),
        )
        service = _service(tmp_path, small_config, grid_config=grid)
        response = await service.run_sweep()
        assert set(response["outputs"]) == {
            "grid.csv",
            "panel_socks_theta5.csv",
            "panel_infeasible_theta5.csv",
            "panel_stranded_theta5.csv",
        }
        assert len(_read_csv(service.fs.path("grid.csv"))) == 1 + 2 * 2
        # the grid runs around the service's simulation config
        assert response["grid"].cell(5, 0.1, "greedy").max_money <= small_config.agent.b

    async def test_tradeoff_files(self, tmp_path, small_config):
        sweep = TradeoffConfig(tau_xi_values=(1.0, 0.5), replications=2)
        service = _service(tmp_path, small_config, tradeoff_config=sweep)
        response = await service.run_tradeoff()
        assert response["outputs"] == ["tradeoff.csv", "tradeoff.json"]
        sidecar = json.loads(service.fs.path("tradeoff.json").read_text())
        assert sidecar["n_reps"] == 2


class TestEstimate:
    async def test_chi_from_file(self, service, tmp_path):
        trials = tmp_path / "trials.csv"
        trials.write_text("respondent_id,m_a,m_b,choice\nr1,0,1,1\nr1,1,0,0\nr1,0,1,0\nr2,0,1,1\n")
        response = await service.estimate_chi(trials)
        assert [f.respondent_id for f in response["fits"]] == ["r1", "r2"]
        manifest = _manifest(service)
        assert manifest["inputs"] == {str(trials): sha256_file(trials)}
        assert manifest["outputs"].keys() == {"results.csv"}

    async def test_empty_trials_file(self, service, tmp_path):
        trials = tmp_path / "empty.csv"
        trials.write_text("")
        with pytest.raises(DataError):
            await service.estimate_chi(trials)
        assert not service.fs.path(MANIFEST_NAME).exists()

    async def test_delta_from_file(self, service, tmp_path):
        bundles = tmp_path / "bundles.csv"
        bundles.write_text(
            "respondent_id,set_id,bundle_id,diversity,c_soc_hat,c_rep_hat,chosen\n"
            "r1,0,0,0.0,0.0,0.0,0\n"
            "r1,0,1,1.1,0.2,0.0,1\n"
        )
        response = await service.estimate_delta(bundles)
        (fit,) = response["fits"]
        assert fit.chi is None
        assert fit.delta.estimate > 0

    async def test_synthetic_study(self, tmp_path, small_config):
        study = EstimationConfig(respondents=3, n_trials=20, n_sets=4, n_sims=2, pool_size=8, bundles_per_level=2)
        service = _service(tmp_path, small_config, estimation_config=study)
        response = await service.estimate_synthetic()
        assert set(response["outputs"]) == {"trials.csv", "bundles.csv", "truth.csv", "results.csv", "summary.json"}
        summary = json.loads(service.fs.path("summary.json").read_text())
        assert summary["respondents"] == 3
        assert summary["chi_mae"] is not None
        assert len(_read_csv(service.fs.path("truth.csv"))) == 1 + 3


class TestOracle:
    async def test_verify_sweep(self, service):
        response = await service.oracle_verify(n_items=3, trials=5)
        assert response["summary"] == "5/5 equivalent"
        payload = json.loads(service.fs.path("verify.json").read_text())
        assert payload["ok"] is True
        assert payload["seed"] == 7

    async def test_coverage_sweep(self, service):
        response = await service.oracle_coverage(trials=5)
        assert response["report"].ok
        assert response["outputs"] == ["coverage.json"]

    async def test_solve_knapsack(self, service, tmp_path):
        path = tmp_path / "k.json"
        path.write_text(json.dumps({"knapsack": {"items": [[2, 3], [3, 4]], "capacity": 5, "target": 7}}))
        response = await service.oracle_solve(path)
        solution = response["solution"]
        assert solution["optimum"] == 7
        assert solution["yes_instance"] is True
        assert solution["equivalent"] is True

    async def test_solve_guard(self, service, tmp_path):
        path = tmp_path / "long.json"
        body = {"prices": [1, 1], "xi": [[0, 1], [1, 0]], "T": 9, "kappa": 2, "budget": 2}
        path.write_text(json.dumps({"sockplan": body}))
        with pytest.raises(GuardExceededError):
            await service.oracle_solve(path)
