"""First-layer weight extension for the widened channel count.

The focus-frame slot keeps the original three-channel weights verbatim;
every other slot is drawn from a zero-mean Gaussian so a fine-tuned model
initially relies on the focus frame and only gradually picks up context.
"""

import math

import numpy as np

from .scheme import ContextScheme

# N(0, 0.01) read as variance 0.01
DEFAULT_INIT_STD = math.sqrt(0.01)


def extend_first_layer(
    weights: np.ndarray,
    scheme: ContextScheme,
    seed: int = 0,
    init_std: float = DEFAULT_INIT_STD,
) -> np.ndarray:
    """Extend (out, 3, kh, kw) conv weights to (out, 3n, kh, kw).

    Deterministic for a given seed; slot order follows ascending frame
    offset, RGB within each slot.
    """
    weights = np.asarray(weights)
    if weights.ndim != 4 or weights.shape[1] != 3:
        raise ValueError(
            f"expected weights of shape (out_channels, 3, kh, kw), got {weights.shape}"
        )
    if init_std < 0:
        raise ValueError("init_std must be >= 0")
    rng = np.random.default_rng(seed)
    out_c, _, kh, kw = weights.shape
    n = scheme.frames_used
    extended = np.empty((out_c, 3 * n, kh, kw), dtype=weights.dtype)
    for slot in range(n):
        block = slice(3 * slot, 3 * slot + 3)
        if slot == scheme.focus_slot:
            extended[:, block] = weights
        else:
            extended[:, block] = rng.normal(0.0, init_std, size=(out_c, 3, kh, kw))
    return extended
