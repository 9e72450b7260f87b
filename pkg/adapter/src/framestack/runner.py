"""Drive an external detector over stacked inputs and collect MOT lines.

Detector contract: the command is invoked once per focus frame with the
path of an ``.npy`` file (H x W x 3n uint8) appended as its final
argument; it writes one ``left top width height score`` line per box to
stdout.  Boxes land in the output file as MOT detection rows (id -1),
1-based frame numbers, parseable by the tracking toolkit.
"""

import shlex
import subprocess
import tempfile
from pathlib import Path

import numpy as np

from .scheme import ContextScheme
from .stacking import FrameSequence, stack_frames


class DetectorError(RuntimeError):
    pass


def parse_detector_output(text: str, command: str) -> list:
    boxes = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5:
            raise DetectorError(
                f"detector {command!r} wrote a malformed line {lineno}: {raw!r} "
                "(expected 'left top width height score')"
            )
        try:
            left, top, width, height, score = (float(x) for x in fields)
        except ValueError:
            raise DetectorError(
                f"detector {command!r} wrote a non-numeric line {lineno}: {raw!r}"
            ) from None
        boxes.append((left, top, width, height, score))
    return boxes


def run_adapter(
    frames_dir,
    scheme: ContextScheme,
    detector_command: str,
    output_path,
    seed: int | None = None,
) -> int:
    """Process every focus frame of a directory; returns the frame count.

    ``seed`` is exported to the detector process as FRAMESTACK_SEED so
    stochastic detectors can be pinned; stacking itself is deterministic.
    """
    sequence = FrameSequence.from_directory(frames_dir)
    argv = shlex.split(detector_command)
    lines = []
    env = None
    if seed is not None:
        import os

        env = dict(os.environ, FRAMESTACK_SEED=str(seed))
    with tempfile.TemporaryDirectory(prefix="framestack-") as tmp:
        stacked_path = Path(tmp) / "stacked.npy"
        for focus in range(len(sequence)):
            stacked = stack_frames(sequence, focus, scheme)
            np.save(stacked_path, stacked)
            proc = subprocess.run(
                argv + [str(stacked_path)],
                capture_output=True,
                text=True,
                env=env,
            )
            if proc.returncode != 0:
                raise DetectorError(
                    f"detector {detector_command!r} exited with {proc.returncode} "
                    f"on focus frame {focus}: {proc.stderr.strip()}"
                )
            for left, top, width, height, score in parse_detector_output(
                proc.stdout, detector_command
            ):
                lines.append(
                    f"{focus + 1},-1,{left:.6f},{top:.6f},{width:.6f},{height:.6f},"
                    f"{score:.6f},-1,-1,-1\n"
                )
    with open(output_path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("".join(lines))
    return len(sequence)
