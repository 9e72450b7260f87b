"""Multi-frame context stacking and detector wrapping.

Builds channel-stacked detector inputs from a window of video frames
around each focus frame, extends single-frame first-layer weights to the
widened channel count, and shuttles an external detector's boxes into MOT
detection files.
"""

from .scheme import ContextScheme, StackSpec, parse_scheme
from .stacking import FrameSequence, stack_frames
from .weights import extend_first_layer

__all__ = [
    "ContextScheme",
    "FrameSequence",
    "StackSpec",
    "extend_first_layer",
    "parse_scheme",
    "stack_frames",
]

__version__ = "0.1.0"
