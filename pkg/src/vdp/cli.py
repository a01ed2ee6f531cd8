"""Command line interface: a thin in-process client of the service handlers.

Subcommands: enumerate, eval, check, reconstruct, convert.  Documents are
JSON, one object per file, schema "vdp-1".  Exit codes: 0 ok, 1 failed check,
2 input error, 3 precision or work-limit exhaustion.
"""

import argparse
import json
import sys

from .errors import (DepthExceeded, FlowViolation, InputError, NotHarmonic,
                     PrecisionExhausted, WorkLimitExceeded, ZeroVector)
from .service import (Config, handle_check, handle_convert, handle_enumerate,
                      handle_eval, handle_reconstruct)

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_PRECISION_OR_LIMIT = 3


def _add_common(p, needs_input):
    p.add_argument("--r", type=int, required=True, help="matrix rank r >= 2")
    p.add_argument("--q", type=int, required=True,
                   help="residue field size (prime power <= 16)")
    p.add_argument("--depth", type=int, required=True, help="ball radius n")
    p.add_argument("--mode", choices=("eqchar", "mixed"), default="eqchar",
                   help="coefficient ring flavor")
    p.add_argument("--seed", type=int, default=None,
                   help="seed for generated inputs")
    p.add_argument("--in", dest="infile", default=None,
                   help="input JSON document" + ("" if needs_input else " (optional)"))
    p.add_argument("--out", dest="outfile", default=None,
                   help="output path (default: stdout)")
    p.add_argument("--work-limit", dest="work_limit", type=int, default=10 ** 6,
                   help="enumeration budget in vertices")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vdp",
        description="lattice-class balls, unit transforms, harmonic cochains, "
                    "and class distributions")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = [
        ("enumerate", "emit the ball and special tree", False),
        ("eval", "tabulate a unit's transform with both evaluators", True),
        ("check", "validate a cochain or tree cochain", True),
        ("reconstruct", "factor a harmonic cochain into monomial units", False),
        ("convert", "cochain to distribution or back", True),
    ]
    for name, help_text, needs_input in specs:
        p = sub.add_parser(name, help=help_text)
        _add_common(p, needs_input)
    return parser


def _load_document(path):
    if path is None:
        return None
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise InputError("bad JSON in %s: %s" % (path, exc))


def _emit(result, path):
    text = json.dumps(result, indent=2, sort_keys=True)
    if path is None:
        print(text)
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _config(args):
    try:
        return Config(r=args.r, q=args.q, depth=args.depth, mode=args.mode,
                      seed=args.seed, work_limit=args.work_limit)
    except ValueError as exc:
        raise InputError(str(exc))


def run(argv):
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        doc = _load_document(args.infile)
        if args.command == "enumerate":
            result = handle_enumerate(cfg)
        elif args.command == "eval":
            if doc is None:
                raise InputError("eval needs --in with a unit document")
            result = handle_eval(cfg, doc)
        elif args.command == "check":
            if doc is None:
                raise InputError("check needs --in with a cochain document")
            result = handle_check(cfg, doc)
        elif args.command == "reconstruct":
            result = handle_reconstruct(cfg, doc)
        else:
            if doc is None:
                raise InputError("convert needs --in with a document")
            result = handle_convert(cfg, doc)
    except (InputError, ZeroVector) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (NotHarmonic, FlowViolation) as exc:
        print("check failure: %s" % exc, file=sys.stderr)
        return EXIT_CHECK_FAILURE
    except (PrecisionExhausted, WorkLimitExceeded, DepthExceeded) as exc:
        print("precision or limit: %s" % exc, file=sys.stderr)
        return EXIT_PRECISION_OR_LIMIT
    _emit(result, args.outfile)
    if args.command == "check" and not result["passed"]:
        return EXIT_CHECK_FAILURE
    if args.command == "eval" and result["agreement"]["mismatches"]:
        return EXIT_CHECK_FAILURE
    if args.command == "reconstruct" and not result["verification"]["exact_match"]:
        return EXIT_CHECK_FAILURE
    return EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
