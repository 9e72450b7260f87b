"""Multi-object tracking and swimming-locomotion analytics for fish shoals."""

from .geometry import Assignment, BoundingBox, assign_max_weight, iou, pairwise_iou

__all__ = [
    "Assignment",
    "BoundingBox",
    "assign_max_weight",
    "iou",
    "pairwise_iou",
]

__version__ = "0.1.0"
