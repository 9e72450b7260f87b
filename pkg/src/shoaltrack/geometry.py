"""Bounding-box geometry, IoU and optimal bipartite assignment.

Shared by the tracker (association) and the evaluation metrics (matching
predictions to ground truth).
"""

from dataclasses import dataclass

import numpy as np

from .kernels import iou_matrix as _iou_matrix_kernel
from .kernels import lap_min_square


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned rectangle in pixel space, top-left origin, y down.

    Zero width or height is legal (degenerate detections have area 0).
    """

    left: float
    top: float
    width: float
    height: float

    def __post_init__(self):
        vals = (self.left, self.top, self.width, self.height)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"non-finite bounding box: {vals}")
        if self.width < 0 or self.height < 0:
            raise ValueError(f"negative box size: {vals}")

    @property
    def right(self) -> float:
        return self.left + self.width

    @property
    def bottom(self) -> float:
        return self.top + self.height

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (self.left + self.width / 2.0, self.top + self.height / 2.0)

    @classmethod
    def from_center(cls, cx: float, cy: float, width: float, height: float) -> "BoundingBox":
        return cls(cx - width / 2.0, cy - height / 2.0, width, height)

    def to_ltwh(self) -> np.ndarray:
        return np.array([self.left, self.top, self.width, self.height], dtype=np.float64)


def boxes_to_array(boxes) -> np.ndarray:
    """Stack boxes into an (N, 4) float64 array in (left, top, w, h) layout."""
    if len(boxes) == 0:
        return np.zeros((0, 4), dtype=np.float64)
    return np.array([[b.left, b.top, b.width, b.height] for b in boxes], dtype=np.float64)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two boxes; 0 when the union has no area.

    Areas are derived from the corner coordinates so that identical boxes
    score exactly 1.0 regardless of rounding in left + width.
    """
    iw = min(a.right, b.right) - max(a.left, b.left)
    if iw <= 0:
        return 0.0
    ih = min(a.bottom, b.bottom) - max(a.top, b.top)
    if ih <= 0:
        return 0.0
    inter = iw * ih
    area_a = (a.right - a.left) * (a.bottom - a.top)
    area_b = (b.right - b.left) * (b.bottom - b.top)
    union = area_a + area_b - inter
    if union <= 0:
        return 0.0
    return inter / union


def pairwise_iou(boxes_a, boxes_b) -> np.ndarray:
    """IoU matrix between two box collections (lists or (N,4) ltwh arrays)."""
    arr_a = boxes_a if isinstance(boxes_a, np.ndarray) else boxes_to_array(boxes_a)
    arr_b = boxes_b if isinstance(boxes_b, np.ndarray) else boxes_to_array(boxes_b)
    arr_a = np.ascontiguousarray(arr_a, dtype=np.float64)
    arr_b = np.ascontiguousarray(arr_b, dtype=np.float64)
    return _iou_matrix_kernel(arr_a, arr_b)


@dataclass(frozen=True)
class Assignment:
    """One-to-one row/column pairing plus the leftovers on each side."""

    pairs: tuple
    unmatched_rows: tuple
    unmatched_cols: tuple


def assign_max_weight(weights, min_weight: float) -> Assignment:
    """Maximum-total-weight one-to-one assignment of a rectangular matrix.

    Solved as a min-cost assignment on the negated, zero-padded square
    matrix.  Pairs whose weight is <= ``min_weight`` are removed after the
    solve and reported unmatched.  Ties between equal-weight optima are
    broken toward the lexicographically smallest surviving pair list.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 2:
        raise ValueError(f"weight matrix must be 2-D, got shape {w.shape}")
    rows, cols = w.shape
    if rows == 0 or cols == 0:
        return Assignment(
            pairs=(),
            unmatched_rows=tuple(range(rows)),
            unmatched_cols=tuple(range(cols)),
        )
    if not np.all(np.isfinite(w)):
        raise ValueError("weight matrix contains non-finite entries")

    n = max(rows, cols)
    padded = np.zeros((n, n), dtype=np.float64)
    padded[:rows, :cols] = w
    cost = np.ascontiguousarray(-padded)
    col_of_row, u, v = lap_min_square(cost)
    col_of_row = col_of_row.copy()
    _refine_ties(padded, cost, u, v, col_of_row, rows, cols, min_weight)

    pairs = []
    matched_rows = set()
    matched_cols = set()
    for r in range(rows):
        c = int(col_of_row[r])
        if c < cols and w[r, c] > min_weight:
            pairs.append((r, c))
            matched_rows.add(r)
            matched_cols.add(c)
    unmatched_rows = tuple(r for r in range(rows) if r not in matched_rows)
    unmatched_cols = tuple(c for c in range(cols) if c not in matched_cols)
    return Assignment(tuple(pairs), unmatched_rows, unmatched_cols)


def _refine_ties(padded, cost, u, v, col_of_row, rows, cols, min_weight):
    """Move the optimal matching to the lexicographically smallest pair list.

    Every optimal assignment lives in the equality graph of the dual
    potentials, so rows are fixed greedily to their smallest tight column
    whose weight survives the threshold; a single alternating-path search
    rematches the displaced row.  Rows with no surviving candidate are left
    flexible (they report no pair either way).
    """
    n = padded.shape[0]
    scale = max(1.0, float(np.max(np.abs(padded))))
    tol = 1e-9 * scale
    slack = u[:, None] + v[None, :] - cost
    tight = np.abs(slack) <= tol

    row_of_col = np.full(n, -1, dtype=np.int64)
    for r in range(n):
        row_of_col[col_of_row[r]] = r

    col_fixed = np.zeros(n, dtype=bool)
    for r in range(rows):
        cand = np.flatnonzero(tight[r, :cols] & (padded[r, :cols] > min_weight))
        if cand.size == 0:
            continue
        cur = col_of_row[r]
        for c in cand:
            c = int(c)
            if col_fixed[c]:
                continue
            if c == cur or _rematch(tight, col_of_row, row_of_col, col_fixed, r, c, n):
                col_fixed[c] = True
                break


def _rematch(tight, col_of_row, row_of_col, col_fixed, r, c, n):
    """Try to re-route the matching so that row ``r`` takes column ``c``."""
    displaced = row_of_col[c]
    freed = col_of_row[r]
    col_of_row[r] = c
    row_of_col[c] = r
    col_of_row[displaced] = -1
    row_of_col[freed] = -1

    visited = np.zeros(n, dtype=bool)
    visited[c] = True
    if _augment(tight, col_of_row, row_of_col, col_fixed, visited, int(displaced), n):
        return True
    # roll back
    col_of_row[displaced] = c
    row_of_col[c] = displaced
    col_of_row[r] = freed
    row_of_col[freed] = r
    return False


def _augment(tight, col_of_row, row_of_col, col_fixed, visited, row, n):
    for j in range(n):
        if visited[j] or col_fixed[j] or not tight[row, j]:
            continue
        visited[j] = True
        owner = row_of_col[j]
        if owner < 0 or _augment(tight, col_of_row, row_of_col, col_fixed, visited, int(owner), n):
            col_of_row[row] = j
            row_of_col[j] = row
            return True
    return False
