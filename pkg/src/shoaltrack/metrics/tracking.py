"""Sequence-level tracking evaluation: MOTA, IDF1 and HOTA.

MOTA follows the CLEAR convention: previous-frame correspondences are kept
while they stay above the IoU gate, the rest is re-matched per frame, and
an identity switch is counted whenever the prediction matched to a
ground-truth identity changes.  IDF1 matches whole identities globally by
their per-frame overlap counts.  HOTA uses the published two-pass scheme
(global alignment scores first, then per-alpha matching weighted by them)
over the 19-value alpha grid.
"""

from dataclasses import dataclass

import numpy as np

from ..geometry import assign_max_weight, boxes_to_array, pairwise_iou
from ..io import SequenceAnnotations

HOTA_ALPHAS = tuple(round(a, 2) for a in np.linspace(0.05, 0.95, 19))
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class TrackingEvalResult:
    idf1: float
    mota: float
    hota: float
    deta: float
    assa: float
    idsw: int
    fp: int
    fn: int
    gt_count: int
    per_alpha: dict


class _SequencePair:
    """Frame-aligned view of ground truth and predictions with cached IoU."""

    def __init__(self, gt: SequenceAnnotations, pred: SequenceAnnotations):
        if gt.num_boxes() == 0:
            raise ValueError("ground truth contains no boxes; metrics undefined")
        self.gt_ids = gt.identities()
        self.pred_ids = pred.identities()
        gt_index = {g: i for i, g in enumerate(self.gt_ids)}
        pred_index = {p: i for i, p in enumerate(self.pred_ids)}
        self.frames = []
        for frame in sorted(set(gt.frames) | set(pred.frames)):
            g_entries = gt.frames.get(frame, ())
            p_entries = pred.frames.get(frame, ())
            if any(e.identity is None for e in g_entries) or any(
                e.identity is None for e in p_entries
            ):
                raise ValueError(f"frame {frame}: tracking metrics need identities on every box")
            g_idx = np.array([gt_index[e.identity] for e in g_entries], dtype=np.int64)
            p_idx = np.array([pred_index[e.identity] for e in p_entries], dtype=np.int64)
            ious = pairwise_iou(
                boxes_to_array([e.box for e in g_entries]),
                boxes_to_array([e.box for e in p_entries]),
            )
            self.frames.append((g_idx, p_idx, ious))
        self.gt_total = gt.num_boxes()
        self.pred_total = pred.num_boxes()
        self.gt_sizes = np.zeros(len(self.gt_ids), dtype=np.int64)
        self.pred_sizes = np.zeros(len(self.pred_ids), dtype=np.int64)
        for g_idx, p_idx, _ in self.frames:
            self.gt_sizes[g_idx] += 1
            self.pred_sizes[p_idx] += 1


def compute_mota(gt, pred, iou_gate: float = 0.5):
    """CLEAR accuracy; returns ``(mota, fp, fn, idsw)``."""
    data = _SequencePair(gt, pred)
    return _mota(data, iou_gate)


def compute_idf1(gt, pred, iou_gate: float = 0.5) -> float:
    data = _SequencePair(gt, pred)
    return _idf1(data, iou_gate)


def compute_hota(gt, pred):
    """Returns ``(hota, deta, assa, per_alpha)`` averaged over the alpha grid."""
    data = _SequencePair(gt, pred)
    return _hota(data)


def compute_tracking_metrics(gt, pred, iou_gate: float = 0.5) -> TrackingEvalResult:
    """All three tracking metrics over one shared frame alignment."""
    data = _SequencePair(gt, pred)
    mota, fp, fn, idsw = _mota(data, iou_gate)
    idf1 = _idf1(data, iou_gate)
    hota, deta, assa, per_alpha = _hota(data)
    return TrackingEvalResult(
        idf1=idf1,
        mota=mota,
        hota=hota,
        deta=deta,
        assa=assa,
        idsw=idsw,
        fp=fp,
        fn=fn,
        gt_count=data.gt_total,
        per_alpha=per_alpha,
    )


def _mota(data: _SequencePair, iou_gate: float):
    last_match: dict[int, int] = {}
    fn = fp = idsw = 0
    for g_idx, p_idx, ious in data.frames:
        pred_pos = {int(p): j for j, p in enumerate(p_idx)}
        matched_g = set()
        matched_p = set()
        pairs = []
        # continuity first: keep surviving correspondences from earlier
        # frames; two identities can point at the same prediction when one
        # went unmatched for a while, so first claim wins
        for i, g in enumerate(g_idx):
            p = last_match.get(int(g))
            if p is None or p not in pred_pos:
                continue
            j = pred_pos[p]
            if j in matched_p:
                continue
            if ious[i, j] > iou_gate:
                pairs.append((i, j))
                matched_g.add(i)
                matched_p.add(j)
        free_g = [i for i in range(len(g_idx)) if i not in matched_g]
        free_p = [j for j in range(len(p_idx)) if j not in matched_p]
        if free_g and free_p:
            sub = ious[np.ix_(free_g, free_p)]
            for a, b in assign_max_weight(sub, min_weight=iou_gate).pairs:
                pairs.append((free_g[a], free_p[b]))
        for i, j in pairs:
            g = int(g_idx[i])
            p = int(p_idx[j])
            if g in last_match and last_match[g] != p:
                idsw += 1
            last_match[g] = p
        fn += len(g_idx) - len(pairs)
        fp += len(p_idx) - len(pairs)
    mota = 1.0 - (fn + fp + idsw) / data.gt_total
    return mota, fp, fn, idsw


def _idf1(data: _SequencePair, iou_gate: float) -> float:
    overlaps = np.zeros((len(data.gt_ids), len(data.pred_ids)), dtype=np.float64)
    for g_idx, p_idx, ious in data.frames:
        if len(g_idx) == 0 or len(p_idx) == 0:
            continue
        hits = ious > iou_gate
        np.add.at(overlaps, np.ix_(g_idx, p_idx), hits.astype(np.float64))
    idtp = 0.0
    if overlaps.size:
        for g, p in assign_max_weight(overlaps, min_weight=0.0).pairs:
            idtp += overlaps[g, p]
    idfn = data.gt_total - idtp
    idfp = data.pred_total - idtp
    return 2.0 * idtp / (2.0 * idtp + idfp + idfn)


def _hota(data: _SequencePair):
    n_gt_ids = len(data.gt_ids)
    n_pred_ids = len(data.pred_ids)

    # pass one: global alignment from accumulated normalized similarity
    potential = np.zeros((n_gt_ids, n_pred_ids), dtype=np.float64)
    for g_idx, p_idx, ious in data.frames:
        if len(g_idx) == 0 or len(p_idx) == 0:
            continue
        denom = ious.sum(axis=0)[None, :] + ious.sum(axis=1)[:, None] - ious
        sim = np.zeros_like(ious)
        np.divide(ious, denom, out=sim, where=denom > _EPS)
        np.add.at(potential, np.ix_(g_idx, p_idx), sim)
    count_sum = data.gt_sizes[:, None] + data.pred_sizes[None, :] - potential
    alignment = np.zeros_like(potential)
    np.divide(potential, count_sum, out=alignment, where=count_sum > _EPS)

    # pass two: per-alpha matching weighted by the alignment scores
    per_alpha = {}
    for alpha in HOTA_ALPHAS:
        tp = 0
        fn = 0
        fp = 0
        match_counts = np.zeros((n_gt_ids, n_pred_ids), dtype=np.float64)
        for g_idx, p_idx, ious in data.frames:
            tp_frame = 0
            if len(g_idx) and len(p_idx):
                score = alignment[np.ix_(g_idx, p_idx)] * ious
                for a, b in assign_max_weight(score, min_weight=0.0).pairs:
                    if ious[a, b] >= alpha - _EPS:
                        match_counts[g_idx[a], p_idx[b]] += 1.0
                        tp_frame += 1
            tp += tp_frame
            fn += len(g_idx) - tp_frame
            fp += len(p_idx) - tp_frame
        union = data.gt_sizes[:, None] + data.pred_sizes[None, :] - match_counts
        ass_scores = np.zeros_like(match_counts)
        np.divide(match_counts, union, out=ass_scores, where=union > _EPS)
        assa = float((match_counts * ass_scores).sum() / tp) if tp else 0.0
        deta = tp / (tp + fn + fp) if (tp + fn + fp) else 0.0
        per_alpha[alpha] = (float(np.sqrt(deta * assa)), float(deta), float(assa))

    hota = float(np.mean([v[0] for v in per_alpha.values()]))
    deta = float(np.mean([v[1] for v in per_alpha.values()]))
    assa = float(np.mean([v[2] for v in per_alpha.values()]))
    return hota, deta, assa, per_alpha
