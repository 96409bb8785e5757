"""Game-loop tests: regret accounting, determinism, bookkeeping, aggregation."""

import dataclasses

import numpy as np
import pytest

from incentive_bandits import (
    DomainError,
    aggregate,
    default_checkpoints,
    oracle_incentives,
    regret_increment,
    run_game,
    run_replications,
    truthful_agent,
)
from incentive_bandits.config import table1_n5
from incentive_bandits.harness import Phase, RunResult
from incentive_bandits.worked_examples import example_three_action


class TestRegretIncrement:
    def test_oracle_is_zero(self):
        inst = table1_n5()
        oracle = oracle_incentives(inst)
        assert regret_increment(inst, oracle.pi, oracle.j_star) == pytest.approx(0.0)

    def test_forced_arm_three(self):
        inst = example_three_action()
        pi = np.array([0.0, 0.0, 60.0])
        assert regret_increment(inst, pi, 3) == pytest.approx(66.0 - inst.varsigma)

    def test_benchmark_init_round(self):
        inst = table1_n5()
        pi = np.array([60.0, 0.0, 0.0, 0.0, 0.0])
        assert regret_increment(inst, pi, 1) == pytest.approx(47.0 - inst.varsigma)


class TestRunGame:
    def test_horizon_equals_n(self):
        inst = table1_n5()
        result = run_game(inst, truthful_agent(inst), T=inst.n, seed=1, keep_records=True)
        assert len(result.records) == inst.n
        assert all(rec.phase is Phase.INIT for rec in result.records)
        assert sorted(rec.chosen for rec in result.records) == list(range(1, inst.n + 1))

    def test_same_seed_bit_identical(self):
        inst = table1_n5()
        a = run_game(inst, truthful_agent(inst), T=600, seed=9, keep_records=True)
        b = run_game(inst, truthful_agent(inst), T=600, seed=9, keep_records=True)
        assert a.regret_at == b.regret_at
        assert a.l1_final == b.l1_final
        assert a.rows == b.rows

        def key(rec):
            diam = None if np.isnan(rec.diameter) else rec.diameter
            return (rec.t, rec.phase, rec.pi, rec.chosen, rec.reward, rec.regret_inc, diam, rec.clamped)

        assert [key(r) for r in a.records] == [key(r) for r in b.records]

    def test_different_seeds_differ(self):
        inst = table1_n5()
        a = run_game(inst, truthful_agent(inst), T=600, seed=1)
        b = run_game(inst, truthful_agent(inst), T=600, seed=2)
        assert a.regret_at != b.regret_at

    def test_regret_sum_consistency(self):
        """Cumulative regret equals T*V_oracle minus the summed net rewards."""
        inst = table1_n5()
        result = run_game(inst, truthful_agent(inst), T=1500, seed=4, keep_records=True)
        oracle = oracle_incentives(inst)
        nets = [inst.theta0[rec.chosen - 1] - sum(rec.pi) for rec in result.records]
        expected = result.T * oracle.value - sum(nets)
        assert result.total_regret == pytest.approx(expected, abs=1e-6)
        assert result.regret_at[-1] == pytest.approx(result.total_regret)

    def test_exploration_bookkeeping(self):
        inst = table1_n5()
        result = run_game(inst, truthful_agent(inst), T=1500, seed=4, keep_records=True)
        explore_count = sum(rec.phase is Phase.EXPLORE for rec in result.records)
        assert explore_count == result.eta_final == result.explore_rounds

    def test_diameter_non_increasing_in_exploit_rounds(self):
        inst = table1_n5()
        result = run_game(inst, truthful_agent(inst), T=2000, seed=8, keep_records=True)
        diams = [rec.diameter for rec in result.records if rec.phase is Phase.EXPLOIT]
        assert len(diams) > 100
        assert all(d2 <= d1 + 1e-9 for d1, d2 in zip(diams, diams[1:]))

    def test_oracle_informed_policy_has_zero_exploit_regret(self):
        """With exact knowledge, no noise, and no margin, exploitation is free."""
        inst = dataclasses.replace(table1_n5(), reward_noise_sd=0.0, varsigma=0.0)
        result = run_game(
            inst, truthful_agent(inst), T=1000, seed=2, keep_records=True, informed=True
        )
        exploit = [rec for rec in result.records if rec.phase is Phase.EXPLOIT]
        assert len(exploit) > 400
        assert all(rec.regret_inc == pytest.approx(0.0, abs=1e-12) for rec in exploit)

    def test_checkpoint_validation(self):
        inst = table1_n5()
        with pytest.raises(DomainError):
            run_game(inst, truthful_agent(inst), T=100, seed=1, checkpoints=[500])
        with pytest.raises(DomainError):
            run_game(inst, truthful_agent(inst), T=3, seed=1)

    def test_default_checkpoints(self):
        assert default_checkpoints(16_000) == (100, 1_000, 10_000, 16_000)
        assert default_checkpoints(40_000) == (100, 1_000, 10_000, 20_000, 40_000)
        assert default_checkpoints(50) == (50,)


class TestReplications:
    def test_results_in_seed_order(self):
        inst = table1_n5()
        results = run_replications(inst, "truthful", T=300, seeds=[3, 1, 2])
        assert [r.seed for r in results] == [3, 1, 2]

    def test_parallel_matches_sequential(self):
        inst = table1_n5()
        seq = run_replications(inst, "truthful", T=300, seeds=[1, 2], workers=1)
        par = run_replications(inst, "truthful", T=300, seeds=[1, 2], workers=2)
        for a, b in zip(seq, par):
            assert a.regret_at == b.regret_at

    def test_strategic_benchmark_run_completes(self):
        inst = table1_n5()
        results = run_replications(inst, "strategic", T=400, seeds=[1])
        assert results[0].total_regret > 0


class TestAggregate:
    def synthetic(self, seed, regrets, l1):
        marks = tuple(range(1, len(regrets) + 1))
        return RunResult(
            seed=seed,
            T=len(regrets),
            agent_mode="truthful",
            checkpoints=marks,
            regret_at=tuple(regrets),
            rows=(),
            total_regret=regrets[-1],
            l1_final=l1,
            final_target=1,
            eta_final=0,
            explore_rounds=0,
            clamp_rounds=0,
        )

    def test_single_run(self):
        summary = aggregate([self.synthetic(1, [5.0, 7.0], 0.4)])
        assert summary.mean_regret == (5.0, 7.0)
        assert summary.sd_regret == (0.0, 0.0)
        assert summary.l1_median == pytest.approx(0.4)

    def test_population_sd_convention(self):
        summary = aggregate([self.synthetic(1, [10.0], 0.2), self.synthetic(2, [14.0], 0.6)])
        assert summary.mean_regret == (12.0,)
        assert summary.sd_regret == (2.0,)
        assert summary.l1_mean == pytest.approx(0.4)

    def test_checkpoint_mismatch(self):
        with pytest.raises(DomainError):
            aggregate([self.synthetic(1, [1.0], 0.1), self.synthetic(2, [1.0, 2.0], 0.1)])

    def test_empty(self):
        with pytest.raises(DomainError):
            aggregate([])
