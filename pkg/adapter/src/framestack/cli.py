"""framestack command line: adapt a detector, extend first-layer weights."""

import argparse
import sys

import numpy as np

from .runner import DetectorError, run_adapter
from .scheme import SchemeError, parse_scheme
from .weights import DEFAULT_INIT_STD, extend_first_layer


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemeError(message)


def build_parser():
    parser = _Parser(prog="framestack", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_adapt = sub.add_parser("adapt", help="run a detector over stacked frames")
    p_adapt.add_argument("--frames", required=True, help="directory of frame images")
    p_adapt.add_argument("--scheme", required=True, help="context scheme, e.g. x_X_x")
    p_adapt.add_argument("--detector", required=True, help="detector command line")
    p_adapt.add_argument("--out", required=True, help="output MOT detections file")
    p_adapt.add_argument("--seed", type=int, default=None,
                         help="exported to the detector as FRAMESTACK_SEED")
    p_adapt.set_defaults(func=cmd_adapt)

    p_ext = sub.add_parser("extend-weights", help="widen 3-channel conv weights")
    p_ext.add_argument("--weights", required=True, help=".npy tensor (out, 3, kh, kw)")
    p_ext.add_argument("--scheme", required=True)
    p_ext.add_argument("--out", required=True, help="output .npy path")
    p_ext.add_argument("--seed", type=int, default=0)
    p_ext.add_argument("--init-std", type=float, default=DEFAULT_INIT_STD,
                       help="std of the context-slot Gaussian (default sqrt(0.01))")
    p_ext.set_defaults(func=cmd_extend)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (SchemeError, DetectorError, ValueError, OSError) as exc:
        print(f"framestack: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"framestack: internal error: {exc!r}", file=sys.stderr)
        return 2


def cmd_adapt(args) -> int:
    scheme = parse_scheme(args.scheme)
    processed = run_adapter(args.frames, scheme, args.detector, args.out, seed=args.seed)
    print(f"processed {processed} focus frames -> {args.out}")
    return 0


def cmd_extend(args) -> int:
    scheme = parse_scheme(args.scheme)
    weights = np.load(args.weights)
    extended = extend_first_layer(weights, scheme, seed=args.seed, init_std=args.init_std)
    np.save(args.out, extended)
    print(f"{weights.shape} -> {extended.shape}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
