"""scikit-learn style front end.

``GcsiIndex`` and ``OperatorClassifier`` are fitted on a single operator and
expose their results as trailing-underscore attributes. ``OperatorFeatures``
maps a stack of operators to a defect feature matrix so the classification
can sit inside a ``Pipeline``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .classify import classify
from .engine import MEMBER, gcsi_index
from .linalg import Tolerances
from .search import SearchConfig
from .validation import check_operator, check_operator_stack


class _SearchParams(BaseEstimator):
    def __init__(
        self,
        k=1,
        seed=0,
        restarts=32,
        samples_per_restart=512,
        refine_iters=60,
        step_decay=0.7,
        member_threshold=0.95,
        ineq_tol=1e-8,
    ):
        self.k = k
        self.seed = seed
        self.restarts = restarts
        self.samples_per_restart = samples_per_restart
        self.refine_iters = refine_iters
        self.step_decay = step_decay
        self.member_threshold = member_threshold
        self.ineq_tol = ineq_tol

    def _config(self):
        return SearchConfig(
            seed=self.seed,
            restarts=self.restarts,
            samples_per_restart=self.samples_per_restart,
            refine_iters=self.refine_iters,
            step_decay=self.step_decay,
            member_threshold=self.member_threshold,
        )

    def _tol(self):
        return Tolerances(ineq_tol=self.ineq_tol)


class GcsiIndex(_SearchParams):
    """Estimate the GCSI index of an operator.

    Attributes
    ----------
    lambda_star_ : float
    membership_ : str
        ``"member"``, ``"non_member"`` or ``"undecided"``.
    certificates_ : list of Certificate
    verdict_ : GcsiVerdict
    n_features_in_ : int
        Size of the fitted operator.
    """

    def fit(self, A, y=None):
        a = check_operator(A)
        self.verdict_ = gcsi_index(a, self._config(), k=self.k, tol=self._tol())
        self.lambda_star_ = self.verdict_.lambda_star
        self.membership_ = self.verdict_.membership
        self.certificates_ = self.verdict_.certificates
        self.n_features_in_ = a.shape[0]
        return self

    def predict(self, X):
        """Membership label of every operator in ``X`` (same budget and seed)."""
        check_is_fitted(self, "verdict_")
        ops = check_operator_stack(X)
        return np.array(
            [gcsi_index(a, self._config(), k=self.k, tol=self._tol()).membership for a in ops],
            dtype=object,
        )


class OperatorClassifier(_SearchParams):
    """Classify one operator; ``report_`` holds the full ClassificationReport."""

    def fit(self, A, y=None):
        a = check_operator(A)
        self.report_ = classify(a, self._config(), k=self.k, tol=self._tol())
        self.classes_ = {
            name: getattr(self.report_, name).holds
            for name in ("normal", "cohyponormal", "semi_hyponormal", "paranormal")
        }
        self.classes_["gcsi_member"] = self.report_.gcsi.membership == MEMBER
        self.n_features_in_ = a.shape[0]
        return self


FEATURES = (
    "normal_defect",
    "cohyponormal_defect",
    "semi_hyponormal_defect",
    "paranormal_defect",
    "lambda_star",
    "kernel_eq",
)


class OperatorFeatures(TransformerMixin, _SearchParams):
    """Map operators to the row ``FEATURES`` of defects and indices."""

    def fit(self, X, y=None):
        ops = check_operator_stack(X)
        self.n_features_in_ = ops.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        ops = check_operator_stack(X, n=self.n_features_in_)
        rows = []
        for a in ops:
            r = classify(a, self._config(), k=self.k, tol=self._tol())
            rows.append([
                r.normal.defect,
                r.cohyponormal.defect,
                r.semi_hyponormal.defect,
                r.paranormal.defect,
                r.gcsi.lambda_star,
                float(r.kernel_eq),
            ])
        return np.array(rows)

    def get_feature_names_out(self, input_features=None):
        return np.array(FEATURES, dtype=object)
