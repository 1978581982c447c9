"""Two-sided evaluation: examination-weighted NDCG for consumers and
JSD-based amortized fairness for items/groups.

DCG uses linear gain and the examination probability as the rank discount,
so the relevance metric and the exposure accounting share one position
model. Fairness is 1 minus the base-2 Jensen-Shannon divergence between the
normalized exposure and relevance distributions, hence bounded in [0,1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import GroupMap, RelevanceMatrix
from .exposure import ExposureLedger, ExposureModel, accumulate


@dataclass(frozen=True)
class EvalReport:
    ndcg_at: dict            # cutoff -> value in [0,1]
    fairness_individual: float
    fairness_group: float


def ndcg(slates, rel: RelevanceMatrix, model: ExposureModel, k_c) -> float:
    """Mean over consumers of DCG@k_c / IDCG@k_c.

    DCG@k_c = sum_{j<=k_c} R(slate[j], u) * p_j; the ideal ranking sorts the
    consumer's own relevance row. Consumers with zero ideal DCG contribute 1.
    """
    if not 1 <= k_c <= model.k:
        raise ValueError(f"cutoff {k_c} out of range 1..{model.k}")
    item_pos = rel.item_index()
    discounts = model.probs[:k_c]
    ideal_scores = -np.sort(-rel.scores, axis=1)[:, :k_c]
    idcg_all = ideal_scores @ discounts
    vals = []
    cpos = rel.consumer_index()
    for cid, slate in slates.slates.items():
        c = cpos[cid]
        gains = rel.scores[c, [item_pos[d] for d in slate[:k_c]]]
        dcg = float(gains @ discounts)
        idcg = float(idcg_all[c])
        vals.append(dcg / idcg if idcg > 0 else 1.0)
    return float(np.mean(vals))


def _jsd_base2(p, q):
    """Jensen-Shannon divergence with base-2 logs; 0*log 0 taken as 0."""
    m = 0.5 * (p + q)

    def kl(a, b):
        mask = a > 0
        return float(np.sum(a[mask] * np.log2(a[mask] / b[mask])))

    return 0.5 * kl(p, m) + 0.5 * kl(q, m)


def jsd_fairness(ledger: ExposureLedger, rel: RelevanceMatrix,
                 groups: GroupMap, level="individual") -> float:
    """1 - JSD between the exposure and relevance distributions.

    `level` selects per-item or per-group distributions; both are normalized
    to probability vectors first, so the metric is scale-invariant.
    """
    if level == "individual":
        e = ledger.item_vector(rel)
        r = rel.avg_relevance()
    elif level == "group":
        e = ledger.group_vector(groups)
        gidx = groups.indices(rel)
        r = np.bincount(gidx, weights=rel.avg_relevance(),
                        minlength=len(groups.group_ids))
    else:
        raise ValueError(f"unknown level {level!r}")
    if e.sum() <= 0:
        raise ValueError("all-zero exposure vector")
    if r.sum() <= 0:
        raise ValueError("all-zero relevance vector")
    return 1.0 - _jsd_base2(e / e.sum(), r / r.sum())


def evaluate(slates, rel: RelevanceMatrix, groups: GroupMap,
             model: ExposureModel, cutoffs) -> EvalReport:
    """Bundle NDCG at each cutoff with both fairness levels from one ledger."""
    ledger = accumulate(slates, model, groups)
    return EvalReport(
        ndcg_at={kc: ndcg(slates, rel, model, kc) for kc in cutoffs},
        fairness_individual=jsd_fairness(ledger, rel, groups, "individual"),
        fairness_group=jsd_fairness(ledger, rel, groups, "group"),
    )
