import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feasbo.acquisition import (
    BRANCH_HFI,
    BRANCH_LOW_CONFIDENCE,
    BRANCH_NO_FEASIBLE,
    SCORES_CSV_HEADER,
    AcquisitionScores,
    CandidateSet,
    ConstraintSpec,
    Incumbent,
    ObjectiveTable,
    alpha_eic,
    alpha_fip,
    alpha_hfi,
    export_scores_csv,
    feasibility_probability,
    feasibility_probability_rows,
    find_incumbent,
    improvement,
    satisfies_all,
    score_candidates,
    select_candidate,
)
from feasbo.gp import ConstraintGP, KernelParams, PosteriorPrediction

from oracles import mc_feasibility_probability, normal_cdf


def make_scores(fp, impr, pi, costs=None):
    """AcquisitionScores assembled from raw FP / improvement arrays."""
    fp = np.asarray(fp, dtype=float)
    impr = np.asarray(impr, dtype=float)
    if costs is None:
        costs = np.zeros_like(fp)
    return AcquisitionScores(
        candidate_ids=np.arange(fp.shape[0]),
        objective=costs,
        improvement=impr,
        feasibility_probability=fp,
        alpha_fip=alpha_fip(fp, impr),
        alpha_hfi=alpha_hfi(fp, impr, pi),
        alpha_eic=alpha_eic(fp, impr),
        pi=pi,
    )


# -- constraint specs ------------------------------------------------------

class TestConstraintSpec:
    def test_one_sided_kind(self):
        spec = ConstraintSpec(upper=2.0)
        assert spec.kind == "one-sided-upper"
        assert spec.lower is None

    def test_interval_kind(self):
        spec = ConstraintSpec(upper=1.0, lower=-1.0)
        assert spec.kind == "interval"

    def test_interval_requires_lower_below_upper(self):
        with pytest.raises(ValueError):
            ConstraintSpec(upper=1.0, lower=1.0)
        with pytest.raises(ValueError):
            ConstraintSpec(upper=1.0, lower=2.0)

    def test_bounds_must_be_finite(self):
        with pytest.raises(ValueError):
            ConstraintSpec(upper=np.inf)
        with pytest.raises(ValueError):
            ConstraintSpec(upper=1.0, lower=-np.inf)

    def test_satisfies_inclusive(self):
        # boundary values count as feasible
        spec = ConstraintSpec(upper=1.0, lower=-1.0)
        assert spec.satisfies(1.0)
        assert spec.satisfies(-1.0)
        assert not spec.satisfies(1.0000001)
        assert not spec.satisfies(-1.0000001)

    def test_satisfies_vectorized(self):
        spec = ConstraintSpec(upper=0.0)
        out = spec.satisfies(np.array([-1.0, 0.0, 1.0]))
        assert out.dtype == bool
        np.testing.assert_array_equal(out, [True, True, False])

    def test_dict_round_trip(self):
        spec = ConstraintSpec(upper=8.2, lower=6.0, name="porosity")
        again = ConstraintSpec.from_dict(spec.to_dict())
        assert again == spec
        one_sided = ConstraintSpec(upper=10.0, name="roughness")
        assert ConstraintSpec.from_dict(one_sided.to_dict()) == one_sided

    def test_satisfies_all_rows(self):
        specs = [ConstraintSpec(upper=1.0), ConstraintSpec(upper=0.0, lower=-2.0)]
        obs = np.array([[0.5, -1.0], [0.5, 1.0], [2.0, -1.0]])
        np.testing.assert_array_equal(satisfies_all(specs, obs), [True, False, False])

    def test_satisfies_all_column_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            satisfies_all([ConstraintSpec(upper=1.0)], np.zeros((3, 2)))


# -- improvement and the incumbent -----------------------------------------

class TestImprovement:
    def test_cost_reduction(self):
        inc = Incumbent(best_feasible_cost=5.0, fallback_cost=9.0,
                        best_feasible_input=np.array([0.0]))
        assert improvement(3.0, inc) == 2.0

    def test_clamped_at_zero(self):
        inc = Incumbent(best_feasible_cost=5.0, fallback_cost=9.0,
                        best_feasible_input=np.array([0.0]))
        assert improvement(7.0, inc) == 0.0

    def test_fallback_from_candidate_maximum(self):
        # no feasible point yet: incumbent cost is the pool maximum plus one
        inc = find_incumbent(np.empty((0, 1)), np.empty(0, dtype=bool),
                             lambda x: x[:, 0], candidate_costs=[10.0, 4.0, 3.0])
        assert not inc.has_feasible
        assert inc.best_feasible_cost == 11.0
        assert inc.fallback_cost == 11.0
        assert improvement(3.0, inc) == 8.0

    def test_vectorized(self):
        inc = Incumbent(best_feasible_cost=5.0, fallback_cost=9.0,
                        best_feasible_input=np.array([0.0]))
        np.testing.assert_array_equal(improvement(np.array([3.0, 7.0, 5.0]), inc),
                                      [2.0, 0.0, 0.0])


class TestFindIncumbent:
    def objective(self, x):
        return x[:, 0]

    def test_best_feasible_point_wins(self):
        x = np.array([[3.0], [1.0], [2.0]])
        feas = np.array([True, False, True])
        inc = find_incumbent(x, feas, self.objective, candidate_costs=[0.5])
        assert inc.has_feasible
        assert inc.best_feasible_cost == 2.0
        np.testing.assert_array_equal(inc.best_feasible_input, [2.0])

    def test_tie_returns_first(self):
        x = np.array([[2.0, 0.0], [2.0, 1.0]])
        feas = np.array([True, True])
        inc = find_incumbent(x, feas, lambda q: q[:, 0], candidate_costs=[9.0])
        np.testing.assert_array_equal(inc.best_feasible_input, [2.0, 0.0])

    def test_fallback_covers_evaluated_points(self):
        # an infeasible evaluated point above every candidate raises the fallback
        x = np.array([[50.0]])
        feas = np.array([False])
        inc = find_incumbent(x, feas, self.objective, candidate_costs=[10.0])
        assert inc.fallback_cost == 51.0

    def test_empty_pool_rejected(self):
        with pytest.raises(ValueError, match="empty candidate set"):
            find_incumbent(np.empty((0, 1)), np.empty(0, dtype=bool),
                           self.objective, candidate_costs=[])

    def test_incumbent_without_input_requires_equal_costs(self):
        with pytest.raises(ValueError):
            Incumbent(best_feasible_cost=3.0, fallback_cost=9.0)


# -- feasibility probability ------------------------------------------------

class TestFeasibilityProbability:
    def test_mean_at_threshold_is_half(self):
        for sigma2 in (0.01, 1.0, 25.0):
            pred = [PosteriorPrediction(mean=2.0, variance=sigma2)]
            assert feasibility_probability(pred, [ConstraintSpec(upper=2.0)]) == 0.5

    def test_standard_normal_975(self):
        pred = [PosteriorPrediction(mean=0.0, variance=1.0)]
        fp = feasibility_probability(pred, [ConstraintSpec(upper=1.959964)])
        assert fp == pytest.approx(0.975, abs=1e-4)

    def test_product_rule(self):
        preds = [PosteriorPrediction(mean=0.0, variance=1.0),
                 PosteriorPrediction(mean=5.0, variance=4.0)]
        specs = [ConstraintSpec(upper=0.0), ConstraintSpec(upper=5.0)]
        assert feasibility_probability(preds, specs) == pytest.approx(0.25, abs=1e-12)

    def test_interval_standard_normal(self):
        pred = [PosteriorPrediction(mean=0.0, variance=1.0)]
        spec = [ConstraintSpec(upper=1.0, lower=-1.0)]
        assert feasibility_probability(pred, spec) == pytest.approx(0.6827, abs=1e-3)

    def test_matches_erf_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            mu = rng.normal(scale=3.0)
            sigma = rng.uniform(0.2, 4.0)
            lam = rng.normal(scale=3.0)
            fp = feasibility_probability([PosteriorPrediction(mu, sigma ** 2)],
                                         [ConstraintSpec(upper=lam)])
            assert fp == pytest.approx(normal_cdf((lam - mu) / sigma), abs=1e-12)

    def test_matches_monte_carlo(self):
        # joint probability across mixed one-sided and interval constraints
        mean = np.array([0.3, 7.1, 650.0])
        variance = np.array([0.5, 0.8, 120.0])
        specs = [ConstraintSpec(upper=1.0),
                 ConstraintSpec(upper=8.2, lower=6.0),
                 ConstraintSpec(upper=675.0, lower=635.0)]
        preds = [PosteriorPrediction(m, v) for m, v in zip(mean, variance)]
        fp = feasibility_probability(preds, specs)
        mc = mc_feasibility_probability(mean, variance,
                                        [(None, 1.0), (6.0, 8.2), (635.0, 675.0)])
        assert fp == pytest.approx(mc, abs=1e-2)

    def test_rows_vectorization_matches_scalar(self):
        rng = np.random.default_rng(11)
        means = rng.normal(size=(2, 6))
        variances = rng.uniform(0.1, 2.0, size=(2, 6))
        specs = [ConstraintSpec(upper=0.5), ConstraintSpec(upper=1.0, lower=-1.0)]
        rows = feasibility_probability_rows(means, variances, specs)
        for j in range(6):
            preds = [PosteriorPrediction(means[k, j], variances[k, j]) for k in range(2)]
            assert rows[j] == pytest.approx(feasibility_probability(preds, specs), abs=1e-14)

    def test_prediction_spec_count_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            feasibility_probability([PosteriorPrediction(0.0, 1.0)],
                                    [ConstraintSpec(upper=0.0), ConstraintSpec(upper=1.0)])

    def test_strictly_increasing_in_threshold(self):
        lams = np.linspace(-2.0, 2.0, 9)
        fps = [feasibility_probability([PosteriorPrediction(0.0, 1.0)],
                                       [ConstraintSpec(upper=lam)]) for lam in lams]
        assert np.all(np.diff(fps) > 0)

    def test_strictly_decreasing_in_mean(self):
        mus = np.linspace(-2.0, 2.0, 9)
        fps = [feasibility_probability([PosteriorPrediction(mu, 1.0)],
                                       [ConstraintSpec(upper=0.0)]) for mu in mus]
        assert np.all(np.diff(fps) < 0)


# -- scalar acquisition values ----------------------------------------------

class TestAlphaValues:
    def test_alpha_fip_examples(self):
        assert alpha_fip(0.8, 2.5) == 0.8
        assert alpha_fip(0.8, 0.0) == 0.0
        assert alpha_fip(0.0, 3.0) == 0.0

    def test_alpha_hfi_examples(self):
        assert alpha_hfi(0.7, 2.0, 0.6) == pytest.approx(0.2)
        assert alpha_hfi(0.5, 2.0, 0.6) == pytest.approx(-0.2)
        assert alpha_hfi(1.0, 0.0, 0.0) == 0.0

    def test_alpha_eic_examples(self):
        assert alpha_eic(0.5, 4.0) == 2.0
        assert alpha_eic(0.0, 7.0) == 0.0

    @given(fp=st.floats(0.0, 1.0), impr=st.floats(0.0, 1e6))
    @settings(max_examples=200, deadline=None)
    def test_alpha_fip_range(self, fp, impr):
        out = alpha_fip(fp, impr)
        assert 0.0 <= out <= 1.0
        if impr == 0.0 or fp == 0.0:
            assert out == 0.0
        else:
            assert out == fp

    @given(fp=st.floats(0.0, 1.0), impr=st.floats(0.0, 1e6))
    @settings(max_examples=200, deadline=None)
    def test_alpha_eic_is_hfi_at_zero_threshold(self, fp, impr):
        assert alpha_eic(fp, impr) >= 0.0
        assert alpha_eic(fp, impr) == alpha_hfi(fp, impr, 0.0)

    def test_vectorized_forms(self):
        fp = np.array([0.8, 0.8, 0.0])
        impr = np.array([2.5, 0.0, 3.0])
        np.testing.assert_array_equal(alpha_fip(fp, impr), [0.8, 0.0, 0.0])
        np.testing.assert_allclose(alpha_hfi(fp, impr, 0.5), [0.75, 0.0, -1.5])
        np.testing.assert_array_equal(alpha_eic(fp, impr), [2.0, 0.0, 0.0])


# -- the selection rule ------------------------------------------------------

class TestSelectCandidate:
    def test_no_feasible_branch(self):
        scores = make_scores(fp=[0.9, 0.4], impr=[1.0, 2.0], pi=0.6)
        idx, branch = select_candidate(scores, dataset_feasible=[False, False])
        assert (idx, branch) == (0, BRANCH_NO_FEASIBLE)

    def test_high_confidence_branch(self):
        scores = make_scores(fp=[0.7, 0.5], impr=[1.0, 2.0], pi=0.6)
        idx, branch = select_candidate(scores, dataset_feasible=[True])
        assert (idx, branch) == (0, BRANCH_HFI)
        np.testing.assert_allclose(scores.alpha_hfi, [0.1, -0.2])

    def test_low_confidence_branch(self):
        scores = make_scores(fp=[0.55, 0.5], impr=[1.0, 2.0], pi=0.6)
        idx, branch = select_candidate(scores, dataset_feasible=[True])
        assert (idx, branch) == (0, BRANCH_LOW_CONFIDENCE)

    def test_threshold_is_strict(self):
        # max alpha_fip exactly pi stays on the low-confidence branch
        scores = make_scores(fp=[0.6, 0.5], impr=[1.0, 2.0], pi=0.6)
        _, branch = select_candidate(scores, dataset_feasible=[True])
        assert branch == BRANCH_LOW_CONFIDENCE

    def test_tie_breaks_to_lowest_index(self):
        scores = make_scores(fp=[0.5, 0.5, 0.5], impr=[1.0, 1.0, 1.0], pi=0.9)
        idx, _ = select_candidate(scores, dataset_feasible=[True])
        assert idx == 0
        idx, _ = select_candidate(scores, dataset_feasible=[False])
        assert idx == 0

    def test_empty_scores_rejected(self):
        scores = make_scores(fp=np.empty(0), impr=np.empty(0), pi=0.5)
        with pytest.raises(ValueError, match="empty candidate set"):
            select_candidate(scores, dataset_feasible=[True])

    def test_pi_override_recomputes_hfi(self):
        scores = make_scores(fp=[0.7, 0.99], impr=[5.0, 0.5], pi=0.6)
        # stored pi keeps candidate 0 ahead; a higher threshold flips the ranking
        idx, branch = select_candidate(scores, dataset_feasible=[True])
        assert (idx, branch) == (0, BRANCH_HFI)
        idx, branch = select_candidate(scores, dataset_feasible=[True], pi=0.9)
        assert (idx, branch) == (1, BRANCH_HFI)

    def test_zero_improvement_never_preferred(self):
        # a candidate with I = 0 is selected only when every candidate has I = 0
        rng = np.random.default_rng(7)
        for trial in range(300):
            n = rng.integers(2, 12)
            fp = rng.uniform(0.0, 1.0, n)
            impr = rng.uniform(0.0, 3.0, n)
            impr[rng.random(n) < 0.4] = 0.0
            if not impr.any():
                continue
            pi = float(rng.uniform(0.0, 1.0))
            feas = bool(rng.random() < 0.5)
            scores = make_scores(fp=fp, impr=impr, pi=pi)
            idx, _ = select_candidate(scores, dataset_feasible=[feas])
            assert impr[idx] > 0.0 or fp[idx] == 0.0

    def test_branch_label_is_pure_function_of_state(self):
        rng = np.random.default_rng(13)
        for trial in range(200):
            n = rng.integers(1, 9)
            fp = rng.uniform(0.0, 1.0, n)
            impr = rng.uniform(0.0, 3.0, n)
            pi = float(rng.uniform(0.0, 1.0))
            feas = bool(rng.random() < 0.5)
            scores = make_scores(fp=fp, impr=impr, pi=pi)
            _, branch = select_candidate(scores, dataset_feasible=[feas])
            if not feas:
                expected = BRANCH_NO_FEASIBLE
            elif scores.alpha_fip.max() > pi:
                expected = BRANCH_HFI
            else:
                expected = BRANCH_LOW_CONFIDENCE
            assert branch == expected

    def test_zero_threshold_matches_probability_weighted_improvement(self):
        # with known feasible data and some alpha_fip > 0, pi = 0 selection
        # reduces to the argmax of FP * I with identical tie-breaking
        rng = np.random.default_rng(29)
        for trial in range(200):
            n = rng.integers(2, 15)
            fp = rng.uniform(0.0, 1.0, n)
            impr = np.round(rng.uniform(0.0, 3.0, n), 1)
            if not (alpha_fip(fp, impr) > 0).any():
                continue
            scores = make_scores(fp=fp, impr=impr, pi=0.0)
            idx, branch = select_candidate(scores, dataset_feasible=[True])
            assert branch == BRANCH_HFI
            assert idx == int(np.argmax(alpha_eic(fp, impr)))

    def test_unit_threshold_always_probability_branch(self):
        rng = np.random.default_rng(31)
        for trial in range(100):
            n = rng.integers(1, 9)
            fp = rng.uniform(0.0, 1.0, n)
            impr = rng.uniform(0.0, 3.0, n)
            scores = make_scores(fp=fp, impr=impr, pi=1.0)
            _, branch = select_candidate(scores, dataset_feasible=[True])
            assert branch == BRANCH_LOW_CONFIDENCE
            _, branch = select_candidate(scores, dataset_feasible=[False])
            assert branch == BRANCH_NO_FEASIBLE

    def test_deterministic(self):
        rng = np.random.default_rng(41)
        fp = rng.uniform(0.0, 1.0, 40)
        impr = rng.uniform(0.0, 2.0, 40)
        scores = make_scores(fp=fp, impr=impr, pi=0.4)
        first = [select_candidate(scores, dataset_feasible=[True]) for _ in range(5)]
        assert all(item == first[0] for item in first)


# -- scoring against live models ---------------------------------------------

def fixed_models(x, observations, lengthscale=1.2):
    models = []
    for k in range(observations.shape[1]):
        params = KernelParams(lengthscales=np.full(x.shape[1], lengthscale),
                              signal_variance=1.0, noise_variance=1e-6)
        models.append(ConstraintGP.from_fixed_params(x, observations[:, k], params))
    return models


class TestScoreCandidates:
    def setup_method(self):
        rng = np.random.default_rng(5)
        self.x_train = rng.uniform(0.0, 4.0, size=(8, 2))
        self.obs = np.column_stack([np.sin(self.x_train[:, 0]),
                                    self.x_train.sum(axis=1) / 4.0])
        self.specs = [ConstraintSpec(upper=0.5), ConstraintSpec(upper=1.5)]
        self.models = fixed_models(self.x_train, self.obs)
        self.candidates = CandidateSet(inputs=rng.uniform(0.0, 4.0, size=(12, 2)),
                                       ids=np.arange(100, 112))
        self.costs = self.candidates.inputs[:, 0] + self.candidates.inputs[:, 1]
        feasible = satisfies_all(self.specs, self.obs)
        self.incumbent = find_incumbent(self.x_train, feasible,
                                        lambda q: q[:, 0] + q[:, 1], self.costs)

    def test_scores_align_with_posteriors(self):
        scores, means, variances = score_candidates(
            self.candidates, self.models, self.specs, self.incumbent,
            self.costs, pi=0.5, return_posteriors=True)
        assert len(scores) == 12
        np.testing.assert_array_equal(scores.candidate_ids, np.arange(100, 112))
        for k, model in enumerate(self.models):
            m, v = model.predict(self.candidates.inputs, return_var=True)
            np.testing.assert_array_equal(means[k], m)
            np.testing.assert_array_equal(variances[k], v)
        expected_fp = feasibility_probability_rows(means, variances, self.specs)
        np.testing.assert_array_equal(scores.feasibility_probability, expected_fp)
        np.testing.assert_array_equal(scores.improvement,
                                      improvement(self.costs, self.incumbent))
        np.testing.assert_array_equal(scores.alpha_eic,
                                      scores.feasibility_probability * scores.improvement)

    def test_score_ranges(self):
        scores = score_candidates(self.candidates, self.models, self.specs,
                                  self.incumbent, self.costs, pi=0.5)
        assert np.all(scores.feasibility_probability >= 0.0)
        assert np.all(scores.feasibility_probability <= 1.0)
        assert np.all(scores.improvement >= 0.0)
        assert np.all(scores.alpha_eic >= 0.0)
        assert np.all((scores.alpha_fip >= 0.0) & (scores.alpha_fip <= 1.0))

    def test_precomputed_improvement_short_circuit(self):
        impr = improvement(self.costs, self.incumbent)
        direct = score_candidates(self.candidates, self.models, self.specs,
                                  self.incumbent, self.costs, pi=0.5)
        cached = score_candidates(self.candidates, self.models, self.specs,
                                  self.incumbent, self.costs, pi=0.5,
                                  improvement_values=impr)
        np.testing.assert_array_equal(direct.alpha_hfi, cached.alpha_hfi)

    def test_empty_candidates_rejected(self):
        empty = CandidateSet(inputs=np.empty((0, 2)))
        with pytest.raises(ValueError, match="empty candidate set"):
            score_candidates(empty, self.models, self.specs, self.incumbent,
                             np.empty(0), pi=0.5)

    def test_model_spec_count_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            score_candidates(self.candidates, self.models, self.specs[:1],
                             self.incumbent, self.costs, pi=0.5)

    def test_objective_length_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            score_candidates(self.candidates, self.models, self.specs,
                             self.incumbent, self.costs[:-1], pi=0.5)

    def test_csv_export(self, tmp_path):
        scores = score_candidates(self.candidates, self.models, self.specs,
                                  self.incumbent, self.costs, pi=0.5)
        idx, branch = select_candidate(scores, dataset_feasible=[True])
        path = tmp_path / "scores.csv"
        export_scores_csv(scores, path, selected_index=idx, branch=branch)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == SCORES_CSV_HEADER
        assert len(rows) == 13
        branch_column = [row[-1] for row in rows[1:]]
        assert branch_column[idx] == branch
        assert all(cell == "" for i, cell in enumerate(branch_column) if i != idx)
        # numeric columns survive a float round trip exactly
        for i, row in enumerate(rows[1:]):
            assert int(row[0]) == scores.candidate_ids[i]
            assert float(row[3]) == scores.feasibility_probability[i]

    def test_csv_export_to_buffer(self):
        scores = make_scores(fp=[0.5], impr=[1.0], pi=0.2)
        buf = io.StringIO()
        export_scores_csv(scores, buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == ",".join(SCORES_CSV_HEADER)


# -- supporting containers -----------------------------------------------------

class TestContainers:
    def test_objective_table_finite_required(self):
        with pytest.raises(ValueError):
            ObjectiveTable(values=np.array([1.0, np.nan]))

    def test_objective_table_from_function(self):
        table = ObjectiveTable.from_function(lambda x: x[:, 0] * 2.0,
                                             np.array([[1.0], [3.0]]),
                                             provenance="2*x1")
        np.testing.assert_array_equal(table.values, [2.0, 6.0])
        assert table.provenance == "2*x1"
        assert len(table) == 2

    def test_candidate_set_default_ids(self):
        cs = CandidateSet(inputs=np.zeros((3, 2)) + np.arange(3)[:, None])
        np.testing.assert_array_equal(cs.ids, [0, 1, 2])
        assert cs.n_dims == 2

    def test_candidate_set_id_shape_checked(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            CandidateSet(inputs=np.zeros((3, 2)), ids=np.arange(2))

    def test_candidate_set_drop_preserves_ids(self):
        cs = CandidateSet(inputs=np.arange(8.0).reshape(4, 2), ids=np.array([5, 6, 7, 8]))
        smaller = cs.drop(1)
        np.testing.assert_array_equal(smaller.ids, [5, 7, 8])
        np.testing.assert_array_equal(smaller.inputs, [[0.0, 1.0], [4.0, 5.0], [6.0, 7.0]])

    def test_candidate_set_inputs_readonly(self):
        cs = CandidateSet(inputs=np.zeros((2, 2)))
        with pytest.raises(ValueError):
            cs.inputs[0, 0] = 1.0

    def test_scores_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            make_scores(fp=[0.5, 0.5], impr=[1.0], pi=0.5, costs=np.zeros(2))
