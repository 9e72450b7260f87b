"""Context-scheme grammar.

A scheme is a string over {x, X, _} with exactly one X: the focus frame
the detector predicts for.  Each x adds a context frame at its offset
relative to the X, while _ skips that position.  "x_X_x" therefore spans
five positions but uses three frames, at offsets -2, 0 and +2.
"""

from dataclasses import dataclass


class SchemeError(ValueError):
    pass


@dataclass(frozen=True)
class ContextScheme:
    pattern: str
    offsets: tuple

    @property
    def frames_used(self) -> int:
        return len(self.offsets)

    @property
    def focus_slot(self) -> int:
        return self.offsets.index(0)


@dataclass(frozen=True)
class StackSpec:
    frames_used: int
    channel_count: int
    boundary_policy: str = "clamp"


def parse_scheme(pattern: str) -> ContextScheme:
    if not pattern:
        raise SchemeError("empty context scheme")
    bad = set(pattern) - {"x", "X", "_"}
    if bad:
        raise SchemeError(f"illegal characters {sorted(bad)} in scheme {pattern!r}")
    if pattern.count("X") != 1:
        raise SchemeError(f"scheme {pattern!r} must contain exactly one X")
    focus = pattern.index("X")
    offsets = tuple(i - focus for i, ch in enumerate(pattern) if ch in "xX")
    return ContextScheme(pattern=pattern, offsets=offsets)


def stack_spec(scheme: ContextScheme) -> StackSpec:
    return StackSpec(frames_used=scheme.frames_used, channel_count=3 * scheme.frames_used)
