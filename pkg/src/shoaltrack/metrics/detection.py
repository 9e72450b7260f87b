"""Frame-level detection evaluation: precision, recall, mAP50, mAP50-95.

Predictions are assigned to ground truth per frame by maximum-total-IoU
bipartite matching; unassigned ground-truth boxes count as false negatives
and unassigned predictions as false positives.  Average precision uses the
101-point interpolated convention over confidence-ranked predictions.
"""

from dataclasses import dataclass

import numpy as np

from ..geometry import assign_max_weight, boxes_to_array, pairwise_iou
from ..io import SequenceAnnotations

MAP_IOU_THRESHOLDS = tuple(round(t, 2) for t in np.linspace(0.5, 0.95, 10))
RECALL_GRID = np.linspace(0.0, 1.0, 101)

# mAP thresholds gate inclusively (IoU == threshold counts, the mAP50-95
# convention); the standalone matcher keeps the strict inequality.
_GATE_EPS = 1e-9


@dataclass(frozen=True)
class DetectionEvalResult:
    precision: float
    recall: float
    ap_per_threshold: dict
    map50: float
    map50_95: float
    tp: int
    fp: int
    fn: int
    precision_defined: bool
    recall_defined: bool


def _as_boxes(items):
    return [getattr(item, "box", item) for item in items]


def match_frame(gt_boxes, pred_boxes, iou_thresh: float):
    """Match one frame's predictions to ground truth at a strict IoU gate.

    Returns ``(tp_pairs, fp_indices, fn_indices)`` where pairs are
    (gt_index, pred_index).
    """
    gt = _as_boxes(gt_boxes)
    preds = _as_boxes(pred_boxes)
    ious = pairwise_iou(boxes_to_array(gt), boxes_to_array(preds))
    assignment = assign_max_weight(ious, min_weight=iou_thresh)
    return (
        list(assignment.pairs),
        list(assignment.unmatched_cols),
        list(assignment.unmatched_rows),
    )


def compute_map(gt: SequenceAnnotations, preds: SequenceAnnotations) -> DetectionEvalResult:
    """Evaluate scored predictions against ground truth over all frames."""
    frames = sorted(set(gt.frames) | set(preds.frames))
    n_gt = gt.num_boxes()

    # global prediction order: confidence-descending, stable on (frame, slot)
    pred_index = []
    for frame in frames:
        for slot, entry in enumerate(preds.frames.get(frame, ())):
            pred_index.append((frame, slot, entry.score))
    order = sorted(
        range(len(pred_index)),
        key=lambda i: (-pred_index[i][2], pred_index[i][0], pred_index[i][1]),
    )
    rank_of = {(pred_index[i][0], pred_index[i][1]): r for r, i in enumerate(order)}
    n_pred = len(pred_index)

    ap_per_threshold = {}
    for thresh in MAP_IOU_THRESHOLDS:
        flags = np.zeros(n_pred, dtype=np.float64)
        for frame in frames:
            gt_entries = gt.frames.get(frame, ())
            pred_entries = preds.frames.get(frame, ())
            if not gt_entries or not pred_entries:
                continue
            ious = pairwise_iou(
                boxes_to_array([e.box for e in gt_entries]),
                boxes_to_array([e.box for e in pred_entries]),
            )
            assignment = assign_max_weight(ious, min_weight=thresh - _GATE_EPS)
            for _, pred_slot in assignment.pairs:
                flags[rank_of[(frame, pred_slot)]] = 1.0
        ap_per_threshold[thresh] = _interpolated_ap(flags, n_gt)

    tp = fp = fn = 0
    for frame in frames:
        pairs, fps, fns = match_frame(
            [e.box for e in gt.frames.get(frame, ())],
            [e.box for e in preds.frames.get(frame, ())],
            iou_thresh=0.5,
        )
        tp += len(pairs)
        fp += len(fps)
        fn += len(fns)

    precision_defined = n_pred > 0
    recall_defined = n_gt > 0
    map50 = ap_per_threshold[MAP_IOU_THRESHOLDS[0]]
    return DetectionEvalResult(
        precision=tp / n_pred if precision_defined else 0.0,
        recall=tp / n_gt if recall_defined else 0.0,
        ap_per_threshold=ap_per_threshold,
        map50=map50,
        map50_95=float(np.mean([ap_per_threshold[t] for t in MAP_IOU_THRESHOLDS])),
        tp=tp,
        fp=fp,
        fn=fn,
        precision_defined=precision_defined,
        recall_defined=recall_defined,
    )


def _interpolated_ap(tp_flags: np.ndarray, n_gt: int) -> float:
    """101-point interpolated AP over the confidence-ranked TP flags."""
    if n_gt == 0 or tp_flags.size == 0:
        return 0.0
    cum_tp = np.cumsum(tp_flags)
    cum_fp = np.cumsum(1.0 - tp_flags)
    recall = cum_tp / n_gt
    precision = cum_tp / (cum_tp + cum_fp)
    # best precision achievable at or beyond each rank
    envelope = np.maximum.accumulate(precision[::-1])[::-1]
    idx = np.searchsorted(recall, RECALL_GRID, side="left")
    sampled = np.where(idx < recall.size, envelope[np.minimum(idx, recall.size - 1)], 0.0)
    return float(np.mean(sampled))
