"""
Farthest point (maximin) selection in z-scored metric space.
The traversal is anchored on the vector nearest the centroid: the first pick is
the vector farthest from that anchor, every next pick maximizes its distance to
the closest already picked vector. Ties go to the smallest sample id.
"""
import numpy as np



def _zscore(x):
    std = x.std(axis=0)
    keep = std > 0 # Constant metrics carry no diversity
    return (x[:, keep] - x[:, keep].mean(axis=0)) / std[keep]


def select_diverse(vectors, k, seed=0):
    """
    Ids of min(k, len(vectors)) mutually distant vectors, in pick order.
    No random draw happens, `seed` is only kept for the selection manifest.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}.")
    if k == 0 or not vectors:
        return []
    # Work in id order so input order never matters
    vectors = sorted(vectors, key=lambda v: v.sample_id)
    ids = [ v.sample_id for v in vectors ]
    if len(set(ids)) != len(ids):
        raise ValueError("Metric vectors must have distinct sample ids.")
    z = _zscore(np.array([ v.values() for v in vectors ], dtype=float))
    k = min(k, len(vectors))
    dist = lambda i: np.linalg.norm(z - z[i], axis=1)
    # np.argmin/argmax return the first hit, i.e. the smallest id
    anchor = int(np.argmin(np.linalg.norm(z, axis=1)))
    selected = [int(np.argmax(dist(anchor)))]
    mindist = dist(selected[0])
    mindist[selected] = -np.inf
    for _ in range(1, k):
        nxt = int(np.argmax(mindist))
        selected.append(nxt)
        mindist = np.minimum(mindist, dist(nxt))
        mindist[selected] = -np.inf
    return [ ids[i] for i in selected ]


def min_pairwise_distance(vectors, ids):
    """ Smallest z-space distance between two of `ids` (inf below two ids) """
    vectors = sorted(vectors, key=lambda v: v.sample_id)
    index = { v.sample_id: i for i, v in enumerate(vectors) }
    z = _zscore(np.array([ v.values() for v in vectors ], dtype=float))
    pts = z[[ index[i] for i in ids ]]
    if len(pts) < 2:
        return np.inf
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    return float(d[np.triu_indices(len(pts), 1)].min())
