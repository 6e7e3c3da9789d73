"""Descriptor matching: ratio test over the two nearest neighbors.

Nearest neighbors come either from an exact scan or from a best-bin-first
search over a k-d tree with a bounded number of leaf visits. The exact scan
doubles as the oracle for the approximate path in tests.
"""
from __future__ import annotations

import hashlib
import heapq
from dataclasses import dataclass

import numpy as np

_LEAF_SIZE = 16
_EXACT_FALLBACK_BELOW = 64


@dataclass(frozen=True)
class MatchParams:
    ratio_threshold: float = 0.8
    bbf_max_checks: int = 200
    exact_fallback: bool | None = None  # None: exact when target < 64 rows

    def __post_init__(self):
        if not 0.0 < self.ratio_threshold < 1.0:
            raise ValueError("ratio_threshold must be in (0, 1)")

    def params_hash(self) -> str:
        key = f"{self.ratio_threshold!r}|{self.bbf_max_checks}|{self.exact_fallback!r}"
        return hashlib.sha256(key.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class MatchReport:
    matched: int
    unmatched: int
    no_match_ratio: float


class _Node:
    __slots__ = ("axis", "thresh", "left", "right", "indices")

    def __init__(self):
        self.axis = -1
        self.thresh = 0.0
        self.left = None
        self.right = None
        self.indices = None  # set only on leaves


class KdTree:
    """Median-split k-d tree; immutable after construction."""

    def __init__(self, data: np.ndarray, leaf_size: int = _LEAF_SIZE):
        self.data = np.ascontiguousarray(data, dtype=np.float64)
        self.leaf_size = leaf_size
        idx = np.arange(len(self.data))
        self.root = self._build(idx) if len(idx) else None

    def _build(self, idx: np.ndarray) -> _Node:
        node = _Node()
        if len(idx) <= self.leaf_size:
            node.indices = idx
            return node
        pts = self.data[idx]
        spread = pts.max(axis=0) - pts.min(axis=0)
        axis = int(np.argmax(spread))
        if spread[axis] == 0.0:  # all points identical: nothing to split
            node.indices = idx
            return node
        vals = pts[:, axis]
        order = np.argsort(vals, kind="stable")
        mid = len(idx) // 2
        node.axis = axis
        node.thresh = float(vals[order[mid]])
        left_idx = idx[order[:mid]]
        right_idx = idx[order[mid:]]
        if len(left_idx) == 0 or len(right_idx) == 0:
            node.indices = idx
            return node
        node.left = self._build(left_idx)
        node.right = self._build(right_idx)
        return node

    def two_nearest_bbf(self, q: np.ndarray, max_checks: int):
        """Squared distances (d1, d2) to the two approximate nearest points,
        visiting at most max_checks leaves. Missing neighbors come back inf."""
        best = [np.inf, np.inf]  # smallest, second smallest squared distance
        if self.root is None:
            return best[0], best[1]
        checks = 0
        heap = [(0.0, 0, self.root)]
        tie = 1  # heapq tiebreaker; nodes are not comparable
        while heap and checks < max_checks:
            bound, _, node = heapq.heappop(heap)
            if bound >= best[1]:
                continue
            # descend to a leaf along near branches, queueing far siblings
            while node.indices is None:
                diff = q[node.axis] - node.thresh
                if diff < 0:
                    near, far = node.left, node.right
                else:
                    near, far = node.right, node.left
                fb = bound + diff * diff
                if fb < best[1]:
                    heapq.heappush(heap, (fb, tie, far))
                    tie += 1
                node = near
            pts = self.data[node.indices]
            d2 = np.sum((pts - q) ** 2, axis=1)
            for v in d2:
                if v < best[1]:
                    if v < best[0]:
                        best[1] = best[0]
                        best[0] = v
                    else:
                        best[1] = v
            checks += 1
        return best[0], best[1]


def _two_nearest_exact(query: np.ndarray, target: np.ndarray):
    """(n, 2) array of the two smallest Euclidean distances per query row."""
    d2 = (np.sum(query ** 2, axis=1)[:, None]
          + np.sum(target ** 2, axis=1)[None, :]
          - 2.0 * query @ target.T)
    np.maximum(d2, 0.0, out=d2)
    part = np.partition(d2, 1, axis=1)[:, :2]
    part.sort(axis=1)
    return np.sqrt(part)


def _ratio_decisions(d1: np.ndarray, d2: np.ndarray, threshold: float) -> np.ndarray:
    # a zero first distance is always a match, even against a duplicate
    return (d1 == 0.0) | (d1 < threshold * d2)


def match_features_exact(query: np.ndarray, target: np.ndarray,
                         mp: MatchParams = MatchParams()) -> MatchReport:
    """Ratio-test matching with an exact two-nearest-neighbor scan."""
    return _finish(query, target, mp, exact=True)


def match_features(query: np.ndarray, target: np.ndarray,
                   mp: MatchParams = MatchParams()) -> MatchReport:
    """Ratio-test matching; BBF search unless the target is small enough for
    the exact fallback.

    Conventions: empty query -> ratio 0; nonempty query against a target with
    fewer than two rows -> every query row unmatched (ratio 1).
    """
    use_exact = (mp.exact_fallback if mp.exact_fallback is not None
                 else len(target) < _EXACT_FALLBACK_BELOW)
    return _finish(query, target, mp, exact=use_exact)


def _finish(query: np.ndarray, target: np.ndarray, mp: MatchParams,
            exact: bool) -> MatchReport:
    query = np.asarray(query, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    n = len(query)
    if n == 0:
        return MatchReport(0, 0, 0.0)
    if len(target) < 2:
        return MatchReport(0, n, 1.0)
    if exact:
        dd = _two_nearest_exact(query, target)
        d1, d2 = dd[:, 0], dd[:, 1]
    else:
        tree = KdTree(target)
        d1 = np.empty(n)
        d2 = np.empty(n)
        for i in range(n):
            a, b = tree.two_nearest_bbf(query[i], mp.bbf_max_checks)
            d1[i] = np.sqrt(a)
            d2[i] = np.sqrt(b) if np.isfinite(b) else np.inf
    ok = _ratio_decisions(d1, d2, mp.ratio_threshold)
    matched = int(np.count_nonzero(ok))
    return MatchReport(matched, n - matched, (n - matched) / n)
