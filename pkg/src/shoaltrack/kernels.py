"""Hot numeric kernels: pairwise IoU and the assignment solver.

Both kernels are written as plain loops over numpy arrays and compiled with
numba when it is available.  Setting the environment variable
``SHOALTRACK_NO_NUMBA=1`` (before import) forces the pure-numpy fallback
path, which is what ``benchmarks/bench_kernels.py`` compares against.
"""

import os

import numpy as np

_FLAG = os.environ.get("SHOALTRACK_NO_NUMBA", "").strip().lower()
_DISABLE_NUMBA = _FLAG in ("1", "true", "yes", "on")

if not _DISABLE_NUMBA:
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a hard dependency
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False


def _iou_matrix_loops(boxes_a, boxes_b):
    # boxes are (N, 4) float64 arrays in (left, top, width, height) layout;
    # areas come from the corner values so identical boxes score exactly 1.0
    n = boxes_a.shape[0]
    m = boxes_b.shape[0]
    out = np.zeros((n, m), dtype=np.float64)
    for i in range(n):
        al = boxes_a[i, 0]
        at = boxes_a[i, 1]
        ar = al + boxes_a[i, 2]
        ab = at + boxes_a[i, 3]
        area_a = (ar - al) * (ab - at)
        for j in range(m):
            bl = boxes_b[j, 0]
            bt = boxes_b[j, 1]
            br = bl + boxes_b[j, 2]
            bb = bt + boxes_b[j, 3]
            iw = min(ar, br) - max(al, bl)
            if iw <= 0.0:
                continue
            ih = min(ab, bb) - max(at, bt)
            if ih <= 0.0:
                continue
            inter = iw * ih
            union = area_a + (br - bl) * (bb - bt) - inter
            if union > 0.0:
                out[i, j] = inter / union
    return out


def _iou_matrix_numpy(boxes_a, boxes_b):
    # broadcast fallback, identical semantics to the loop kernel
    if boxes_a.shape[0] == 0 or boxes_b.shape[0] == 0:
        return np.zeros((boxes_a.shape[0], boxes_b.shape[0]), dtype=np.float64)
    al, at = boxes_a[:, 0:1], boxes_a[:, 1:2]
    ar, ab = al + boxes_a[:, 2:3], at + boxes_a[:, 3:4]
    bl, bt = boxes_b[:, 0], boxes_b[:, 1]
    br, bb = bl + boxes_b[:, 2], bt + boxes_b[:, 3]
    iw = np.minimum(ar, br) - np.maximum(al, bl)
    ih = np.minimum(ab, bb) - np.maximum(at, bt)
    inter = np.clip(iw, 0.0, None) * np.clip(ih, 0.0, None)
    area_a = (ar - al) * (ab - at)
    area_b = (br - bl) * (bb - bt)
    union = area_a + area_b - inter
    out = np.zeros_like(inter)
    np.divide(inter, union, out=out, where=union > 0.0)
    return out


def _lap_min_square_loops(cost):
    """Shortest-augmenting-path solver for the square min-cost assignment.

    Returns ``(col_of_row, u, v)`` where the dual potentials satisfy
    ``u[i] + v[j] <= cost[i, j]`` with equality on matched edges, so the
    caller can reconstruct the equality graph for tie analysis.
    """
    n = cost.shape[0]
    u = np.zeros(n + 1, dtype=np.float64)
    v = np.zeros(n + 1, dtype=np.float64)
    # row assigned to each column; index n is a virtual staging column
    row_of_col = np.full(n + 1, -1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    minv = np.empty(n + 1, dtype=np.float64)
    used = np.empty(n + 1, dtype=np.bool_)
    for i in range(n):
        row_of_col[n] = i
        j0 = n
        minv[:] = np.inf
        used[:] = False
        while True:
            used[j0] = True
            i0 = row_of_col[j0]
            delta = np.inf
            j1 = -1
            for j in range(n):
                if not used[j]:
                    cur = cost[i0, j] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[row_of_col[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if row_of_col[j0] == -1:
                break
        while j0 != n:
            j1 = way[j0]
            row_of_col[j0] = row_of_col[j1]
            j0 = j1
    col_of_row = np.full(n, -1, dtype=np.int64)
    for j in range(n):
        if row_of_col[j] >= 0:
            col_of_row[row_of_col[j]] = j
    return col_of_row, u[:n], v[:n]


if NUMBA_ENABLED:
    iou_matrix = njit(cache=True)(_iou_matrix_loops)
    lap_min_square = njit(cache=True)(_lap_min_square_loops)
else:
    iou_matrix = _iou_matrix_numpy
    lap_min_square = _lap_min_square_loops
