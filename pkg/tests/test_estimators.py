from fractions import Fraction as F

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from scmarginal import ConfoundedMerger, MarginalMerger
from scmarginal.errors import CounterfactuallyInfeasible, StatisticallyInconsistent
from scmarginal.merge import medication_observations

MEDICATION = [["1/2", "2/5", "1/2"], ["1/12", "1", "2/5"]]


class TestMarginalMerger:
    def test_params(self):
        m = MarginalMerger()
        assert m.get_params() == {"method": "hull"}
        m.set_params(method="support")
        assert clone(m).method == "support"

    def test_fit_array_like(self):
        m = MarginalMerger().fit(MEDICATION)
        assert m.lambda_a_bounds_ == (F(2, 5), F(2, 5))
        assert m.lambda_b_bounds_ == (F(1, 12), F(1, 12))
        assert m.problem_.obs_x == medication_observations()[0]

    def test_fit_observations(self):
        a = MarginalMerger().fit(medication_observations())
        b = MarginalMerger(method="support").fit(MEDICATION)
        assert a.polygon_ == b.polygon_

    def test_predict(self):
        m = MarginalMerger().fit(MEDICATION)
        out = m.predict([(F(2, 5), F(1, 12)), (0.4, 0.5), ("2/5", "1/12")])
        assert out.dtype == bool and out.tolist() == [True, False, True]

    def test_query_and_witness(self):
        m = MarginalMerger().fit(MEDICATION)
        assert m.query_bounds([1] + [0] * 15) == (0, 0)
        c = m.witness()
        assert m.problem_.lambdas(c) == (F(2, 5), F(1, 12))

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            MarginalMerger().predict([(0, 0)])

    @pytest.mark.parametrize("X", [
        [[0.5, 0.4]],
        [[0.5, 0.4, 0.5], [0.1, 1.2, 0.4]],
        [[0.5, 0.4, 0.5], [0.1, 1.0]],
    ])
    def test_bad_input(self, X):
        with pytest.raises(ValueError):
            MarginalMerger().fit(X)

    def test_inconsistent(self):
        with pytest.raises(StatisticallyInconsistent):
            MarginalMerger().fit([[0.3, 0.3, 0.5], [0.6, 0.6, 0.5]])

    def test_bad_method(self):
        with pytest.raises(ValueError):
            MarginalMerger(method="exact").fit(MEDICATION)

    def test_bad_points(self):
        m = MarginalMerger().fit(MEDICATION)
        with pytest.raises(ValueError):
            m.predict([(0.1, 0.2, 0.3)])


class TestConfoundedMerger:
    alpha = ("1/2", 0, 0, "1/2")
    beta = ("1/4",) * 4

    def test_params(self):
        m = ConfoundedMerger(monotonic_x=True)
        assert m.get_params() == {"monotonic_x": True, "monotonic_y": False}
        assert clone(m).monotonic_x

    def test_copy_model(self):
        m = ConfoundedMerger(monotonic_x=True, monotonic_y=True).fit((self.alpha, self.beta), do_x=(1, 0, 0, 1))
        assert m.bounds("ra=2") == (1, 1)
        w = np.zeros(80, dtype=int)
        w[16:] = 1
        assert m.bounds(w.tolist()) == (1, 1)

    def test_errors(self):
        with pytest.raises(NotFittedError):
            ConfoundedMerger().bounds("mass")
        with pytest.raises(ValueError):
            ConfoundedMerger().fit(((0.5, 0.5, 0.5, 0.5), self.beta))
        m = ConfoundedMerger().fit((self.alpha, self.beta))
        with pytest.raises(ValueError):
            m.bounds([1, 2])
        inconsistent = ConfoundedMerger().fit((self.alpha, ("3/4", 0, "1/4", 0)))
        with pytest.raises(CounterfactuallyInfeasible):
            inconsistent.bounds("mass")
