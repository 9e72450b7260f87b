"""Reading and writing of detection/track files, histograms and reports.

The single interchange format is the MOTChallenge 10-column CSV layout::

    frame, id, bb_left, bb_top, bb_width, bb_height, conf, x, y, z

Frames are 1-based in files.  ``id`` is -1 for anonymous detections.
Unknown trailing columns are ignored on load; the world coordinates x/y/z
are written as -1.
"""

from typing import Iterable, NamedTuple

from .geometry import BoundingBox

KINDS = ("detections", "tracks", "ground_truth")


class MotParseError(ValueError):
    """Raised for malformed MOT files; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class AnnotatedBox(NamedTuple):
    identity: int | None
    box: BoundingBox
    score: float


class SequenceAnnotations:
    """Per-frame boxes for one video, keyed by frame index and identity.

    Frame indices are 1-based (file convention).  Identities are positive
    integers or None for anonymous detections; a given (frame, identity)
    pair occurs at most once.
    """

    def __init__(self, name: str = "", image_size: tuple | None = None):
        self.name = name
        self.image_size = image_size
        self.frames: dict[int, list[AnnotatedBox]] = {}

    def add(self, frame: int, identity: int | None, box: BoundingBox, score: float = 1.0):
        if frame < 1:
            raise ValueError(f"frame index must be >= 1, got {frame}")
        if identity is not None:
            if identity < 1:
                raise ValueError(f"identity must be positive, got {identity}")
            if any(e.identity == identity for e in self.frames.get(frame, ())):
                raise ValueError(f"duplicate identity {identity} in frame {frame}")
        self.frames.setdefault(frame, []).append(AnnotatedBox(identity, box, score))

    def frame_ids(self) -> list[int]:
        return sorted(self.frames)

    def identities(self) -> list[int]:
        ids = {e.identity for entries in self.frames.values() for e in entries}
        ids.discard(None)
        return sorted(ids)

    def num_boxes(self) -> int:
        return sum(len(v) for v in self.frames.values())

    def track_of(self, identity: int) -> list[tuple[int, BoundingBox]]:
        """All (frame, box) entries of one identity, in frame order."""
        out = [
            (f, e.box)
            for f, entries in sorted(self.frames.items())
            for e in entries
            if e.identity == identity
        ]
        return out

    def sorted_entries(self) -> list[tuple[int, AnnotatedBox]]:
        rows = []
        for frame in self.frame_ids():
            entries = sorted(
                self.frames[frame],
                key=lambda e: (
                    e.identity if e.identity is not None else -1,
                    e.box.left,
                    e.box.top,
                    e.box.width,
                    e.box.height,
                    e.score,
                ),
            )
            rows.extend((frame, e) for e in entries)
        return rows


def parse_mot(lines: Iterable[str], kind: str) -> SequenceAnnotations:
    """Parse MOT CSV lines into annotations; errors carry line numbers."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}, expected one of {KINDS}")
    ann = SequenceAnnotations()
    check_duplicates = kind != "detections"
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(",")
        if len(fields) < 7:
            raise MotParseError(lineno, f"expected at least 7 columns, got {len(fields)}")
        try:
            frame = int(float(fields[0]))
            ident = int(float(fields[1]))
            left, top, width, height = (float(x) for x in fields[2:6])
            score = float(fields[6])
        except ValueError:
            raise MotParseError(lineno, f"non-numeric field in {line!r}") from None
        if frame < 1:
            raise MotParseError(lineno, f"frame index must be >= 1, got {frame}")
        identity = None if ident == -1 else ident
        if identity is not None and identity < 1:
            raise MotParseError(lineno, f"identity must be positive or -1, got {ident}")
        if check_duplicates and identity is not None:
            key = (frame, identity)
            if key in seen:
                raise MotParseError(lineno, f"duplicate identity {identity} in frame {frame}")
            seen.add(key)
        try:
            box = BoundingBox(left, top, width, height)
        except ValueError as exc:
            raise MotParseError(lineno, str(exc)) from None
        ann.frames.setdefault(frame, []).append(AnnotatedBox(identity, box, score))
    return ann


def write_mot(ann: SequenceAnnotations, kind: str) -> str:
    """Serialize annotations deterministically (frame then id, 6 decimals)."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}, expected one of {KINDS}")
    out = []
    for frame, e in ann.sorted_entries():
        ident = -1 if e.identity is None else e.identity
        b = e.box
        out.append(
            f"{frame},{ident},{b.left:.6f},{b.top:.6f},{b.width:.6f},{b.height:.6f},"
            f"{e.score:.6f},-1,-1,-1\n"
        )
    return "".join(out)


def load_mot(path, kind: str) -> SequenceAnnotations:
    with open(path, "r", encoding="ascii") as fh:
        ann = parse_mot(fh, kind)
    ann.name = str(path)
    return ann


def save_mot(path, ann: SequenceAnnotations, kind: str):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(write_mot(ann, kind))


def write_histogram_csv(hist) -> str:
    """Histogram as `bin_left,bin_right,count,weight` rows (weight empty
    when the histogram is empty)."""
    lines = ["bin_left,bin_right,count,weight\n"]
    edges = hist.bin_edges
    for i, count in enumerate(hist.counts):
        weight = "" if hist.weights is None else f"{hist.weights[i]:.9f}"
        lines.append(f"{edges[i]:.6f},{edges[i + 1]:.6f},{int(count)},{weight}\n")
    return "".join(lines)


def render_report_csv(metrics: dict) -> str:
    lines = ["metric,value\n"]
    for key, value in metrics.items():
        lines.append(f"{key},{_format_value(value)}\n")
    return "".join(lines)


def render_report_table(metrics: dict) -> str:
    if not metrics:
        return "(empty report)\n"
    width = max(len(k) for k in metrics)
    return "".join(f"{k:<{width}}  {_format_value(v)}\n" for k, v in metrics.items())


def _format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    return f"{value:.6f}"


def render_histogram_svg(hist, title: str = "") -> str:
    """Standalone 800x400 SVG bar chart, no external assets."""
    width, height = 800, 400
    margin_left, margin_bottom, margin_top = 60, 40, 30
    plot_w = width - margin_left - 20
    plot_h = height - margin_top - margin_bottom
    counts = [int(c) for c in hist.counts]
    peak = max(counts) if counts else 0
    n = len(counts)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    for i, count in enumerate(counts):
        bar_h = 0.0 if peak == 0 else plot_h * count / peak
        x = margin_left + plot_w * i / n
        y = margin_top + plot_h - bar_h
        parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{plot_w / n - 1:.2f}" '
            f'height="{bar_h:.2f}" fill="#4878a8"/>'
        )
    axis_y = margin_top + plot_h
    parts.append(
        f'<line x1="{margin_left}" y1="{axis_y}" x2="{margin_left + plot_w}" '
        f'y2="{axis_y}" stroke="black"/>'
    )
    lo, hi = hist.bin_edges[0], hist.bin_edges[-1]
    for frac, value in ((0.0, lo), (0.5, (lo + hi) / 2), (1.0, hi)):
        x = margin_left + plot_w * frac
        parts.append(
            f'<text x="{x:.1f}" y="{axis_y + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{value:.1f}</text>'
        )
    parts.append(
        f'<text x="{margin_left - 8}" y="{margin_top + 12}" text-anchor="end" '
        f'font-family="sans-serif" font-size="12">{peak}</text>'
    )
    parts.append(
        f'<text x="{margin_left - 8}" y="{axis_y}" text-anchor="end" '
        f'font-family="sans-serif" font-size="12">0</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
