"""Position-bias examination model and exposure accounting for slate sets.

Examination probability depends only on rank: p_j = (1/log2(1+j))**eta for
1-based rank j, identical for all consumers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import GroupMap, RelevanceMatrix


@dataclass(frozen=True)
class ExposureModel:
    eta: float
    k: int
    probs: np.ndarray  # probs[j-1] is the examination probability at rank j

    @classmethod
    def pbm(cls, eta, k) -> "ExposureModel":
        if eta < 0:
            raise ValueError("eta must be non-negative")
        if k < 1:
            raise ValueError("k must be >= 1")
        ranks = np.arange(1, k + 1)
        probs = (1.0 / np.log2(1.0 + ranks)) ** eta
        return cls(float(eta), int(k), probs)


@dataclass(frozen=True)
class ExposureLedger:
    per_item: dict   # item_id -> accumulated exposure
    per_group: dict  # group_id -> accumulated exposure

    def item_vector(self, rel: RelevanceMatrix):
        return np.array([self.per_item[d] for d in rel.item_ids])

    def group_vector(self, groups: GroupMap):
        return np.array([self.per_group[g] for g in groups.group_ids])


def total_exposure(model: ExposureModel, m) -> float:
    """Fixed exposure budget of the whole ranking task: m * sum_j p_j."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return float(m * model.probs.sum())


def accumulate(slates, model: ExposureModel, groups: GroupMap) -> ExposureLedger:
    """Sum each item's examination probability over all slates it appears in.

    Items never shown get an explicit 0 entry; group totals aggregate the
    item totals under `groups`.
    """
    per_item = {d: 0.0 for d in groups.assignment}
    for cid, slate in slates.slates.items():
        for rank, d in enumerate(slate, start=1):
            if d not in per_item:
                raise ValueError(f"slate for {cid!r} contains unknown item {d!r}")
            per_item[d] += float(model.probs[rank - 1])
    per_group = {g: 0.0 for g in groups.group_ids}
    for d, e in per_item.items():
        per_group[groups.assignment[d]] += e
    return ExposureLedger(per_item, per_group)
