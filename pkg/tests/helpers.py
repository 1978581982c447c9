"""Shared test utilities, including independent brute-force oracles."""

import math

from verfair.allocator import SlateSet


def make_slateset(slates):
    """Wrap a plain {consumer: [items]} dict in a SlateSet."""
    return SlateSet(order=tuple(slates), slates=slates,
                    provenance={c: {d: "appending" for d in sl}
                                for c, sl in slates.items()},
                    pre_ranks={c: {d: r + 1 for r, d in enumerate(sl)}
                               for c, sl in slates.items()})


def brute_ndcg(slates, rel, probs, k_c):
    """Independent per-consumer DCG/IDCG computed with plain loops."""
    item_pos = {d: i for i, d in enumerate(rel.item_ids)}
    total = 0.0
    for c, cid in enumerate(rel.consumer_ids):
        dcg = sum(rel.scores[c, item_pos[d]] * probs[j]
                  for j, d in enumerate(slates.slates[cid][:k_c]))
        ideal = sorted(rel.scores[c], reverse=True)[:k_c]
        idcg = sum(v * probs[j] for j, v in enumerate(ideal))
        total += dcg / idcg if idcg > 0 else 1.0
    return total / rel.m


def direct_jsd(p, q):
    """Two-term KL against the mixture, base-2 logs, plain loops."""
    m = [(a + b) / 2 for a, b in zip(p, q)]

    def kl(a, b):
        return sum(x * math.log2(x / y) for x, y in zip(a, b) if x > 0)

    return 0.5 * kl(p, m) + 0.5 * kl(q, m)
