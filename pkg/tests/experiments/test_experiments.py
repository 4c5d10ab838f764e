import math
import threading

import numpy as np
import pytest
from pydantic import ValidationError

from sockopt.app.settings import GridConfig, PolicyConfig, TradeoffConfig
from sockopt.environment.simulator import run
from sockopt.errors import InvalidInputError, RunCancelledError
from sockopt.experiments import (
    GRID_HEADER,
    CancellableExecutor,
    ProcessExecutor,
    SerialExecutor,
    experiment_grid,
    experiment_reference,
    experiment_tradeoff,
    register_executor,
    resolve_executor,
    run_replications,
    tradeoff_point,
)

POLICIES = (
    PolicyConfig(kind="purist"),
    PolicyConfig(kind="greedy"),
    PolicyConfig(kind="threshold_mix", tau_xi=0.7),
    PolicyConfig(kind="orphan_rescue", tau_xi=0.7),
    PolicyConfig(kind="exposure_aware"),
)


class TestReference:
    def test_summary_table(self, small_config, small_catalogue):
        table = experiment_reference(small_config, POLICIES, 4, catalogue=small_catalogue)
        assert [r.policy for r in table.rows] == [p.label for p in POLICIES]
        purist = table.row("purist")
        assert purist.summaries["social"].mean == 0.0
        assert purist.summaries["social"].half_width == 0.0
        for row in table.rows:
            assert max(m.money for m in row.replications) <= small_config.agent.b
            assert len(row.replications) == 4

    def test_rows_are_paired_on_seeds(self, small_config, small_catalogue):
        table = experiment_reference(small_config, POLICIES[:2], 3, catalogue=small_catalogue)
        for r in range(3):
            alone = run(
                small_config.model_copy(update={"policy": POLICIES[1]}), catalogue=small_catalogue, replication=r
            )
            assert table.row("greedy").replications[r] == alone
        # identical initial purchases under every policy
        first = [m.diversity_initial for m in table.row("purist").replications]
        second = [m.diversity_initial for m in table.row("greedy").replications]
        assert first == second

    def test_single_replication(self, small_config, small_catalogue):
        table = experiment_reference(small_config, POLICIES[1:2], 1, catalogue=small_catalogue)
        (record,) = table.table_rows()
        single = run(small_config, catalogue=small_catalogue)
        assert record["cost_money"] == single.money
        assert record["cost_money_ci"] is None

    def test_header_matches_rows(self, small_config, small_catalogue):
        table = experiment_reference(small_config, POLICIES[:1], 2, catalogue=small_catalogue)
        assert list(table.table_rows()[0]) == table.header()


class TestGrid:
    @pytest.fixture
    def grid(self, small_config):
        return GridConfig(
            d_values=(0.0, 0.2),
            theta_values=(40, 6),
            replications=3,
            policies=(PolicyConfig(kind="purist"), PolicyConfig(kind="greedy")),
            base=small_config,
        )

    def test_one_row_per_cell(self, grid, small_catalogue):
        result = experiment_grid(grid, catalogue=small_catalogue)
        rows = result.rows()
        assert len(rows) == 2 * 2 * 2
        assert all(list(row) == GRID_HEADER for row in rows)

    def test_no_infeasible_days_without_loss_or_wear_out(self, grid, small_catalogue):
        result = experiment_grid(grid, catalogue=small_catalogue)
        for policy in ("purist", "greedy"):
            assert result.cell(40, 0.0, policy).mean("infeasible_days") == 0.0

    def test_panel_series(self, grid, small_catalogue):
        result = experiment_grid(grid, catalogue=small_catalogue)
        header, rows = result.panel("stranded", 6)
        assert header == ["d", "purist[tau_eta=0]", "greedy"]
        assert [row[0] for row in rows] == [0.0, 0.2]
        assert rows[1][2] == result.cell(6, 0.2, "greedy").mean("stranded")

    def test_degenerate_grid(self, small_config, small_catalogue):
        grid = GridConfig(
            d_values=(0.0,), theta_values=(40,), replications=2, policies=(PolicyConfig(),), base=small_config
        )
        result = experiment_grid(grid, catalogue=small_catalogue)
        assert len(result.cells) == 1
        assert math.isnan(result.trend("greedy", 40))

    def test_spend_limit_holds_in_every_cell(self, grid, small_catalogue):
        result = experiment_grid(grid, catalogue=small_catalogue)
        assert all(cell.max_money <= grid.base.agent.b for cell in result.cells)

    @pytest.mark.parametrize(
        "fields",
        [{"d_values": ()}, {"theta_values": (0,)}, {"replications": 1}, {"d_values": (1.5,)}],
    )
    def test_invalid_grids(self, fields):
        with pytest.raises(ValidationError):
            GridConfig(**fields)


class TestTradeoff:
    @pytest.fixture
    def sweep(self):
        return TradeoffConfig(tau_xi_values=(1.0, 0.7, 0.0), replications=3)

    def test_points_per_family(self, sweep, small_config, small_catalogue):
        result = experiment_tradeoff(sweep, small_config, catalogue=small_catalogue)
        assert set(result.points) == {"threshold_mix", "orphan_rescue"}
        assert [p.tau_xi for p in result.points["threshold_mix"]] == [1.0, 0.7, 0.0]
        assert len(result.rows()) == 6
        assert result.baseline == "purist[tau_eta=0]"

    def test_eco_tracks_money(self, sweep, small_config, small_catalogue):
        # alpha = 1 in the fixture catalogue
        result = experiment_tradeoff(sweep, small_config, catalogue=small_catalogue)
        for point in result.all_points():
            assert point.delta_eco == pytest.approx(point.delta_money)

    def test_self_baseline_is_zero(self, small_config, small_catalogue):
        runs = run_replications(small_config, 3, catalogue=small_catalogue)
        point = tradeoff_point("greedy", 0.0, runs, runs)
        assert (point.delta_soc, point.delta_money, point.delta_eco) == (0.0, 0.0, 0.0)

    def test_unmatched_replications(self, small_config, small_catalogue):
        runs = run_replications(small_config, 2, catalogue=small_catalogue)
        with pytest.raises(InvalidInputError):
            tradeoff_point("greedy", 0.0, runs, runs[:1])

    def test_same_seed_same_tradeoff(self, sweep, small_config, small_catalogue):
        one = experiment_tradeoff(sweep, small_config, catalogue=small_catalogue)
        two = experiment_tradeoff(sweep, small_config, catalogue=small_catalogue)
        assert one.rows() == two.rows()
        assert one == two

    def test_sidecar_states_the_sign_convention(self, sweep, small_config, small_catalogue):
        result = experiment_tradeoff(sweep, small_config, 2, catalogue=small_catalogue)
        sidecar = result.sidecar()
        assert sidecar["n_reps"] == 2
        assert "Purist" in sidecar["sign_convention"]
        assert set(sidecar["families"]) == {"threshold_mix", "orphan_rescue"}

    def test_pairing_shrinks_difference_variance(self, small_config, small_catalogue):
        greedy = run_replications(small_config, 20, catalogue=small_catalogue)
        purist_config = small_config.model_copy(update={"policy": PolicyConfig(kind="purist")})
        purist = run_replications(purist_config, 20, catalogue=small_catalogue)
        shifted = purist[1:] + purist[:1]
        paired = np.var([g.money - p.money for g, p in zip(greedy, purist, strict=True)])
        unpaired = np.var([g.money - p.money for g, p in zip(greedy, shifted, strict=True)])
        assert paired < unpaired


class TestExecutors:
    def test_resolution_by_jobs(self):
        assert isinstance(resolve_executor(None, jobs=1), SerialExecutor)
        assert isinstance(resolve_executor(None, jobs=3), ProcessExecutor)

    def test_instance_passes_through(self):
        executor = SerialExecutor()
        assert resolve_executor(executor, jobs=8) is executor

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="Unknown executor"):
            resolve_executor("cluster")

    def test_custom_executor_keeps_task_order(self, small_config, small_catalogue):
        class Reversed(SerialExecutor):
            name = "reversed"

            def map(self, fn, tasks):
                return [fn(t) for t in reversed(tasks)][::-1]

        register_executor("reversed", lambda jobs: Reversed())
        serial = run_replications(small_config, 3, catalogue=small_catalogue)
        assert run_replications(small_config, 3, catalogue=small_catalogue, executor="reversed") == serial

    def test_process_pool_matches_serial(self, small_config, small_catalogue):
        serial = run_replications(small_config, 4, catalogue=small_catalogue)
        pooled = run_replications(small_config, 4, catalogue=small_catalogue, executor="process", jobs=2)
        assert pooled == serial


def _square(x):
    return x * x


class TestCancellableExecutor:
    @pytest.mark.parametrize("batch", [1, 3, 7, 50])
    def test_batches_keep_task_order(self, batch):
        executor = CancellableExecutor(SerialExecutor(), threading.Event(), batch=batch)
        assert executor.map(_square, list(range(10))) == [x * x for x in range(10)]
        assert executor.name == "serial"

    def test_stops_between_batches(self):
        cancel = threading.Event()
        seen = []

        def work(x):
            seen.append(x)
            if x == 4:
                cancel.set()
            return x

        executor = CancellableExecutor(SerialExecutor(), cancel, batch=3)
        with pytest.raises(RunCancelledError, match="after 6 of 10 tasks"):
            executor.map(work, list(range(10)))
        assert seen == [0, 1, 2, 3, 4, 5]

    def test_default_batch_scales_with_jobs(self):
        assert CancellableExecutor(ProcessExecutor(jobs=2), threading.Event()).batch == 16

    def test_batch_must_be_positive(self):
        with pytest.raises(ValueError, match="batch must be >= 1"):
            CancellableExecutor(SerialExecutor(), threading.Event(), batch=0)

    def test_replications_match_the_plain_executor(self, small_config, small_catalogue):
        serial = run_replications(small_config, 4, catalogue=small_catalogue)
        wrapped = CancellableExecutor(SerialExecutor(), threading.Event(), batch=1)
        assert run_replications(small_config, 4, catalogue=small_catalogue, executor=wrapped) == serial
