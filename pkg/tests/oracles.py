"""Slow, independent re-implementations used as test oracles.

Everything here trades speed for obviousness: plain loops, plain floats,
no code shared with the package under test. When a unit test and one of
these functions disagree, trust neither until you know why.
"""

import math


def cosine(a, b):
    """Plain-loop cosine of two vectors, clipped into [-1, 1]."""
    dot = 0.0
    na = 0.0
    nb = 0.0
    for x, y in zip(a, b):
        dot += x * y
        na += x * x
        nb += y * y
    value = dot / (math.sqrt(na) * math.sqrt(nb))
    return min(1.0, max(-1.0, value))


def mean_rows(rows, members):
    """Mean of the selected rows, accumulated in ascending index order."""
    picked = sorted(members)
    out = [0.0] * len(rows[0])
    for i in picked:
        for d, v in enumerate(rows[i]):
            out[d] += v
    return [v / len(picked) for v in out]


def prune_groups(groups):
    """Drop groups contained in (or equal to) another, canonical order."""
    ordered = sorted({tuple(sorted(g)) for g in groups}, key=lambda g: (-len(g), g))
    kept = []
    for g in ordered:
        gs = set(g)
        if not any(gs <= k for k in kept):
            kept.append(gs)
    return kept


def brute_force_discover(points, alpha, max_iters=1000):
    """Naive restatement of the whole discovery loop.

    Returns (snapshots, converged, termination) where each snapshot is a
    (iteration, threshold, centroid rows, membership sets) tuple. Duplicate
    inputs collapse first; centroids that land on exactly equal coordinates
    collapse each iteration; the loop stops once no pair of current points
    clears the next threshold, or at k = 1, or at max_iters.
    """
    pts = [[float(v) for v in row] for row in points]
    unique = []
    lineage = []
    where = {}
    for i, row in enumerate(pts):
        key = tuple(row)
        if key in where:
            lineage[where[key]].add(i)
        else:
            where[key] = len(unique)
            unique.append(row)
            lineage.append({i})

    current = unique
    snapshots = []
    converged = False
    termination = "max_iterations"
    iteration = 0
    while iteration < max_iters:
        iteration += 1
        threshold = (iteration - alpha) / iteration
        n = len(current)
        sim = [[cosine(a, b) for b in current] for a in current]
        top = max(
            (sim[i][j] for i in range(n) for j in range(n) if i != j),
            default=float("-inf"),
        )
        if top < threshold:
            if not snapshots:
                snapshots.append(
                    (
                        iteration,
                        threshold,
                        [row[:] for row in current],
                        [set(s) for s in lineage],
                    )
                )
            converged = True
            termination = "converged"
            break

        neigh = [
            {j for j in range(n) if sim[i][j] >= threshold} | {i} for i in range(n)
        ]
        outliers = [i for i in range(n) if neigh[i] == {i}]
        groups = prune_groups([s for s in neigh if len(s) > 1])
        cents = [mean_rows(current, g) for g in groups]
        for i in outliers:
            best = 0
            best_sim = -2.0
            for g, c in enumerate(cents):
                s = cosine(current[i], c)
                if s > best_sim:
                    best = g
                    best_sim = s
            groups[best].add(i)
        cents = [mean_rows(current, g) for g in groups]
        lins = [set().union(*(lineage[m] for m in sorted(g))) for g in groups]

        kept_rows = []
        kept_lins = []
        seen = {}
        for row, lin in zip(cents, lins):
            key = tuple(row)
            if key in seen:
                kept_lins[seen[key]] |= lin
            else:
                seen[key] = len(kept_rows)
                kept_rows.append(row)
                kept_lins.append(set(lin))

        snapshots.append(
            (
                iteration,
                threshold,
                [row[:] for row in kept_rows],
                [set(s) for s in kept_lins],
            )
        )
        if len(kept_rows) == 1:
            converged = True
            termination = "converged"
            break
        current = kept_rows
        lineage = kept_lins
    return snapshots, converged, termination


def rank_by_similarity(rows, centroid):
    """Document order for one centroid: similarity desc, index asc."""
    sims = [cosine(row, centroid) for row in rows]
    return sorted(range(len(rows)), key=lambda i: (-sims[i], i))


def entropy_bits(counts):
    total = sum(counts)
    if total == 0:
        return 0.0
    h = 0.0
    for c in counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return h


def info_gain(y, x):
    """H(Y) - H(Y|X) in bits for two 0/1 sequences, clamped at 0."""
    n = len(y)
    n1 = sum(x)
    n0 = n - n1
    y1 = sum(y)
    y1x1 = sum(1 for yi, xi in zip(y, x) if yi and xi)
    hy = entropy_bits([y1, n - y1])
    cond = (n1 / n) * entropy_bits([y1x1, n1 - y1x1]) + (n0 / n) * entropy_bits(
        [y1 - y1x1, n0 - (y1 - y1x1)]
    )
    return max(hy - cond, 0.0)


def npmi_pair(p_joint, p_i, p_j, eps=1e-12):
    return math.log((p_joint + eps) / (p_i * p_j)) / (-math.log(p_joint + eps))


def npmi_topic(words, docs, eps=1e-12):
    """Document-level NPMI mean over distinct known word pairs; < 2 known -> 0."""
    doc_sets = [set(doc) for doc in docs]
    known = []
    for w in words:
        if w not in known and any(w in s for s in doc_sets):
            known.append(w)
    if len(known) < 2:
        return 0.0
    n = len(doc_sets)
    values = []
    for i in range(len(known)):
        for j in range(i + 1, len(known)):
            a, b = known[i], known[j]
            p_a = sum(1 for s in doc_sets if a in s) / n
            p_b = sum(1 for s in doc_sets if b in s) / n
            p_ab = sum(1 for s in doc_sets if a in s and b in s) / n
            values.append(npmi_pair(p_ab, p_a, p_b, eps))
    return sum(values) / len(values)


def boolean_windows(docs, width):
    """Sliding token windows as sets; short documents give one window."""
    windows = []
    for doc in docs:
        if not doc:
            continue
        if len(doc) <= width:
            windows.append(set(doc))
        else:
            for s in range(len(doc) - width + 1):
                windows.append(set(doc[s : s + width]))
    return windows


def cv_topic(words, docs, width=110, eps=1e-12):
    """Direct-definition sliding-window coherence for one topic."""
    windows = boolean_windows(docs, width)
    nw = len(windows)
    known = []
    for w in words:
        if w not in known and any(w in win for win in windows):
            known.append(w)
    m = len(known)
    if m < 2:
        return 0.0
    probs = [sum(1 for win in windows if w in win) / nw for w in known]
    vectors = []
    for i in range(m):
        row = []
        for j in range(m):
            if i == j:
                joint = probs[i]
            else:
                joint = (
                    sum(1 for win in windows if known[i] in win and known[j] in win)
                    / nw
                )
            row.append(npmi_pair(joint, probs[i], probs[j], eps))
        vectors.append(row)
    summed = [sum(col) for col in zip(*vectors)]
    sum_norm = math.sqrt(sum(v * v for v in summed))
    scores = []
    for row in vectors:
        dot = sum(a * b for a, b in zip(row, summed))
        norm = math.sqrt(sum(v * v for v in row))
        denom = norm * sum_norm
        scores.append(max(dot / denom, 0.0) if denom > 0 else 0.0)
    return sum(scores) / m


def rbo(a, b, p=0.9):
    """Truncated rank-biased overlap, normalized so identical lists score 1."""
    seen_a = set()
    seen_b = set()
    raw = 0.0
    norm = 0.0
    weight = 1.0
    for d in range(1, len(a) + 1):
        seen_a.add(a[d - 1])
        seen_b.add(b[d - 1])
        raw += weight * len(seen_a & seen_b) / d
        norm += weight
        weight *= p
    return raw / norm


def kl_nats(p, q):
    return sum(pi * math.log(pi / qi) for pi, qi in zip(p, q) if pi > 0)


def total_variation(p, q):
    return 0.5 * sum(abs(pi - qi) for pi, qi in zip(p, q))


def smoothed_distribution(counts, smoothing):
    total = sum(counts) + smoothing * len(counts)
    return [(c + smoothing) / total for c in counts]


def softmax(xs, temperature=1.0):
    scaled = [x / temperature for x in xs]
    top = max(scaled)
    exps = [math.exp(v - top) for v in scaled]
    total = sum(exps)
    return [e / total for e in exps]
