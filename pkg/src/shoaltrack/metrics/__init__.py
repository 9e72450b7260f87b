from .detection import DetectionEvalResult, compute_map, match_frame
from .tracking import (
    TrackingEvalResult,
    compute_hota,
    compute_idf1,
    compute_mota,
    compute_tracking_metrics,
)

__all__ = [
    "DetectionEvalResult",
    "TrackingEvalResult",
    "compute_hota",
    "compute_idf1",
    "compute_map",
    "compute_mota",
    "compute_tracking_metrics",
    "match_frame",
]
