"""Estimator-style front end for matrix inputs.

Wraps the solvers behind the familiar fit / fit_predict surface: the
instance is the feature matrix, fitting solves it, and the fitted
attributes carry the tour and the difficulty parameters.  There is no
transform; a tour is an ordering, not a feature mapping.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .alg_p import CHAIN_CAP
from .alg_q import ORDERED_CHAIN_CAP
from .errors import CapExceeded
from .graph import WeightedGraph, bad_vertices_p, min_violating_set
from .prims import HELD_KARP_CAP
from .solver import ALGORITHMS, solve


class NearMetricTSP(BaseEstimator):
    """Tour solver with scikit-learn estimator conventions.

    Parameters
    ----------
    algorithm:
        One of "auto", "alg1", "alg2", "alg4", "christofides", "exact".
        "auto" picks the strongest guarantee the instance parameters
        allow: christofides when already metric, the chain-guessing
        solver while the violating-vertex count fits its cap, the
        ordered-guess solver while the violating-set size fits its cap,
        and exact dynamic programming as the small-instance fallback.
    chain_cap, ordered_chain_cap, hk_cap:
        Enumeration and dynamic-programming size limits, forwarded to the
        solvers.

    Attributes
    ----------
    tour_: list[int]
        Vertex order of the found tour.
    weight_: int
        Its total weight.
    p_, q_: int
        Violating-vertex count and minimum violating-set size.
    report_: SolveReport
        The full solver report.
    """

    def __init__(
        self,
        algorithm: str = "auto",
        chain_cap: int = CHAIN_CAP,
        ordered_chain_cap: int = ORDERED_CHAIN_CAP,
        hk_cap: int = HELD_KARP_CAP,
    ) -> None:
        self.algorithm = algorithm
        self.chain_cap = chain_cap
        self.ordered_chain_cap = ordered_chain_cap
        self.hk_cap = hk_cap

    def _validated_graph(self, X) -> WeightedGraph:
        arr = check_array(X, dtype="numeric", ensure_2d=True)
        if arr.shape[0] != arr.shape[1]:
            raise ValueError(f"weight matrix must be square, got {arr.shape}")
        if not np.array_equal(arr, np.round(arr)):
            raise ValueError("weights must be integers")
        return WeightedGraph(arr.astype(np.int64).tolist())

    def _pick(self, g: WeightedGraph) -> str:
        if self.algorithm != "auto":
            if self.algorithm not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {self.algorithm!r}")
            return self.algorithm
        p = bad_vertices_p(g).size
        if p == 0:
            return "christofides"
        if p <= self.chain_cap and p + 1 <= self.hk_cap:
            return "alg2"
        if min_violating_set(g).size <= self.ordered_chain_cap:
            return "alg4"
        if g.n <= self.hk_cap:
            return "exact"
        raise CapExceeded("instance parameters exceed every solver cap")

    def fit(self, X, y=None) -> "NearMetricTSP":
        """Solve the instance given as a square weight matrix."""
        g = self._validated_graph(X)
        self.n_features_in_ = g.n
        report = solve(
            g,
            self._pick(g),
            chain_cap=self.chain_cap,
            ordered_chain_cap=self.ordered_chain_cap,
            hk_cap=self.hk_cap,
        )
        self.report_ = report
        self.tour_ = list(report.tour)
        self.weight_ = report.weight
        self.p_ = report.p
        self.q_ = report.q
        return self

    def fit_predict(self, X, y=None) -> np.ndarray:
        """Solve and return the tour as an index array."""
        return np.asarray(self.fit(X).tour_)

    def score(self, X, y=None) -> float:
        """Negative tour weight, so larger is better."""
        check_is_fitted(self, "weight_")
        return -float(self.weight_)
