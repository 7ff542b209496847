"""Reference implementations kept deliberately naive; used only by tests."""

import itertools
import math


def kruskal_labels(edges, p):
    """Kruskal over pre-sorted edges with relabelled component arrays (no union-find)."""
    label = list(range(p))
    chosen = []
    for value, i, j in edges:
        if label[i] != label[j]:
            old, new = label[j], label[i]
            label = [new if lab == old else lab for lab in label]
            chosen.append((value, i, j))
    return chosen


def _is_forest(pairs, p):
    label = list(range(p))
    for i, j in pairs:
        if label[i] == label[j]:
            return False
        old, new = label[j], label[i]
        label = [new if lab == old else lab for lab in label]
    return True


def max_spanning_forest_enumerated(edges, p):
    """Edge set of the heaviest acyclic subset of maximal size, by exhaustive search."""
    items = [(v, (i, j)) for v, i, j in edges]
    positive = [it for it in items if it[0] > 0]
    best, best_set = -math.inf, None
    for size in range(min(p - 1, len(positive)), 0, -1):
        for combo in itertools.combinations(positive, size):
            if not _is_forest([e for _, e in combo], p):
                continue
            total = math.fsum(v for v, _ in combo)
            if total > best:
                best, best_set = total, {e for _, e in combo}
        if best_set is not None:
            break
    return best_set or set()


def naive_single_linkage(s, p):
    """Agglomerate the two clusters with the largest max |S| between members.

    Returns merge heights and the merged member sets.
    """
    clusters = [[v] for v in range(p)]
    heights, merged = [], []
    while len(clusters) > 1:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                link = max(abs(s[u][w]) for u in clusters[a] for w in clusters[b])
                if best is None or link > best[0]:
                    best = (link, a, b)
        link, a, b = best
        new = sorted(clusters[a] + clusters[b])
        clusters = [c for k, c in enumerate(clusters) if k not in (a, b)] + [new]
        heights.append(link)
        merged.append(new)
    return heights, merged
