"""Agglomerative clustering over dissimilarity data.

Two merge criteria are provided. Ward's minimum-variance method treats
each observation as a point (here: its dissimilarity-matrix row) and at
each step merges the pair of clusters with the smallest between-cluster
variance

    ||mean_K - mean_L||^2 / (1/N_K + 1/N_L)

maintaining exact cluster means and sizes (no linkage-update shortcut).
McQuitty's similarity analysis works on the mismatch counts directly:
it merges the pair with the fewest dissimilar features and scores the
new cluster against every other cluster as the plain average of its two
parts' scores.

Both stop once k clusters remain. Pairs within 1e-9 of the minimum
criterion count as tied and one is drawn uniformly with the seeded
generator; without ties the outcome is seed-independent.

Merges are recorded scipy-style: observations are clusters 0..N-1 and
the merge at step t creates cluster id N+t.
"""

from dataclasses import dataclass

import numpy as np

from .dissim import DissimilarityMatrix

TIE_TOL = 1e-9


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    criterion: float


@dataclass(frozen=True)
class ClusterResult:
    """Hard assignment into k clusters plus the merge history that built them.

    Cluster labels are 0..k-1, ordered by each cluster's smallest member
    index, so labelling does not depend on merge order.
    """

    assignment: np.ndarray
    merges: tuple[Merge, ...]
    k: int

    def __post_init__(self):
        arr = np.asarray(self.assignment, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "assignment", arr)
        object.__setattr__(self, "merges", tuple(self.merges))

    @property
    def n(self) -> int:
        return self.assignment.size


def _check_k(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"k must be between 1 and the number of observations ({n}), got {k}")


def _pick_min_pair(crit: np.ndarray, rng) -> tuple[int, int]:
    """Index pair (i < j) of the minimum criterion; ties drawn uniformly."""
    m = crit.shape[0]
    flat = int(crit.argmin())
    i, j = divmod(flat, m)
    vmin = crit[i, j]
    mask = crit <= vmin + TIE_TOL
    if np.count_nonzero(mask) > 2:  # symmetric, so a unique pair hits twice
        cand = np.argwhere(mask)
        cand = cand[cand[:, 0] < cand[:, 1]]
        i, j = (int(v) for v in cand[rng.integers(len(cand))])
    return (i, j) if i < j else (j, i)


def _finish(n: int, members: list[list[int]], merges: list[Merge], k: int) -> ClusterResult:
    assignment = np.empty(n, dtype=np.int64)
    order = sorted(range(len(members)), key=lambda c: min(members[c]))
    for label, c in enumerate(order):
        assignment[members[c]] = label
    return ClusterResult(assignment, tuple(merges), k)


def _drop_cluster(crit, ids, members, j, m):
    """Remove active slot j by swapping the last active slot into it.

    O(m) per removal where rebuilding the matrix would be O(m^2); the
    slot order carries no meaning (cluster identity lives in ``ids``).
    """
    last = m - 1
    if j != last:
        crit[j, :m] = crit[last, :m]
        crit[:m, j] = crit[:m, last]
        crit[j, j] = np.inf
        ids[j] = ids[last]
        members[j] = members[last]
    ids.pop()
    members.pop()
    return last


def ward(points, k: int, seed=None) -> ClusterResult:
    """Cluster points into k groups by Ward's minimum-variance criterion."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-D array")
    n = pts.shape[0]
    _check_k(k, n)
    rng = np.random.default_rng(seed)

    means = pts.copy()
    sizes = np.ones(n, dtype=np.float64)
    ids = list(range(n))
    members = [[i] for i in range(n)]

    crit = np.full((n, n), np.inf)
    for i in range(n):
        d = means - means[i]
        row = np.einsum("ij,ij->i", d, d) / (1.0 / sizes[i] + 1.0 / sizes)
        crit[i] = row
        crit[i, i] = np.inf

    merges: list[Merge] = []
    m = n
    for step in range(n - k):
        i, j = _pick_min_pair(crit[:m, :m], rng)
        merges.append(Merge(ids[i], ids[j], float(crit[i, j])))

        total = sizes[i] + sizes[j]
        means[i] = (sizes[i] * means[i] + sizes[j] * means[j]) / total
        sizes[i] = total
        members[i] = members[i] + members[j]
        ids[i] = n + step

        last = _drop_cluster(crit, ids, members, j, m)
        if j != last:
            means[j] = means[last]
            sizes[j] = sizes[last]
        m = last

        d = means[:m] - means[i]
        row = np.einsum("ij,ij->i", d, d) / (1.0 / sizes[i] + 1.0 / sizes[:m])
        row[i] = np.inf
        crit[i, :m] = row
        crit[:m, i] = row

    return _finish(n, members, merges, k)


def mcquitty(d: DissimilarityMatrix, k: int, seed=None) -> ClusterResult:
    """Cluster into k groups by McQuitty's average-of-mismatches criterion."""
    n = d.n
    _check_k(k, n)
    rng = np.random.default_rng(seed)

    crit = d.cells.astype(np.float64)
    np.fill_diagonal(crit, np.inf)
    ids = list(range(n))
    members = [[i] for i in range(n)]

    merges: list[Merge] = []
    m = n
    for step in range(n - k):
        i, j = _pick_min_pair(crit[:m, :m], rng)
        merges.append(Merge(ids[i], ids[j], float(crit[i, j])))

        row = 0.5 * (crit[i, :m] + crit[j, :m])
        members[i] = members[i] + members[j]
        ids[i] = n + step

        last = _drop_cluster(crit, ids, members, j, m)
        if j != last:
            row[j] = row[last]
        m = last

        row = row[:m]
        row[i] = np.inf
        crit[i, :m] = row
        crit[:m, i] = row

    return _finish(n, members, merges, k)


def merge_trace(result: ClusterResult) -> str:
    """One line per merge: step, left members, right members, criterion value."""
    n = result.n
    members = {i: [i] for i in range(n)}
    lines = []
    for step, m in enumerate(result.merges):
        left, right = members[m.left], members[m.right]
        members[n + step] = left + right
        lines.append(
            "{}  {{{}}}  {{{}}}  {:.6g}".format(
                step + 1,
                " ".join(map(str, left)),
                " ".join(map(str, right)),
                m.criterion,
            )
        )
    return "\n".join(lines) + "\n" if lines else ""
