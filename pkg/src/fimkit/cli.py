"""``fimkit`` command line.

Exit codes: 0 success, 1 a check failed or a required answer was
inconclusive, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys

from . import combinat as cb
from . import formats
from . import report as rp
from .linalg import Field
from .module import BoxError, from_presentation, restrict

COMMANDS = ("expand", "analyze", "check", "shift", "nagpal", "decompose", "hilbert")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fimkit", description="Exact computations with truncated FI^m-modules.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", "-i", required=True, help="presentation file (.fim) or module dump")
    p.add_argument("--box", help="box override, e.g. 4,4")
    p.add_argument("--field", help="Q or Fp:p (overrides the file)")
    p.add_argument("--out", choices=("table", "structured"), default="table")
    p.add_argument("--shift", help="shift amounts a1,...,am (shift, nagpal)")
    p.add_argument("--samples", type=int, default=50, help="random injections per check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s-max", type=int, default=2, help="highest homology degree reported by analyze (at least 2)")
    return p


def _shape_arg(text: str, what: str):
    try:
        return cb.parse_shape(text)
    except ValueError:
        raise formats.InputError(f"bad {what} {text!r}; expected n1,...,nm", source="command line") from None


def load(args):
    field = None
    if args.field:
        try:
            field = Field.parse(args.field)
        except ValueError as exc:
            raise formats.InputError(str(exc), source="--field") from None
    text = formats.read_text(args.input)
    box = _shape_arg(args.box, "box") if args.box else None
    if formats.is_module_dump(text):
        V = formats.parse_module(text, args.input, field)
        if box is not None:
            if len(box) != V.m or not cb.leq(box, V.box):
                raise formats.InputError(f"box {cb.format_shape(box)} must lie inside the stored box "
                                         f"{cb.format_shape(V.box)}", source=args.input)
            V = restrict(V, box)
        return V
    pres = formats.parse_presentation(text, args.input, field)
    if box is None:
        box = pres.box
    if box is None:
        raise formats.InputError("no box given in the file or on the command line", source=args.input)
    if len(box) != pres.m:
        raise formats.InputError(f"box {cb.format_shape(box)} does not have m = {pres.m} entries",
                                 source="--box")
    for g, label in pres.generators:
        if not cb.leq(g, box):
            raise formats.InputError(f"box {cb.format_shape(box)} is too small for generator "
                                     f"{label} at {cb.format_shape(g)}", source=args.input)
    return from_presentation(pres, box)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        V = load(args)
    except formats.InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    code = EXIT_OK
    try:
        if args.command == "expand":
            out = rp.expand_report(V)
        elif args.command == "analyze":
            if args.s_max < 0:
                raise formats.InputError("--s-max must be non-negative", source="--s-max")
            out, violations = rp.analyze_report(V, max(2, args.s_max))
            code = EXIT_FAIL if violations else EXIT_OK
        elif args.command == "check":
            out, ok = rp.check_report(V, args.samples, args.seed)
            code = EXIT_OK if ok else EXIT_FAIL
        elif args.command == "shift":
            amounts = _shape_arg(args.shift, "shift") if args.shift else cb.unit(V.m, 0)
            if len(amounts) != V.m:
                raise formats.InputError(f"shift needs {V.m} entries", source="--shift")
            out = rp.shift_report(V, amounts)
        elif args.command == "nagpal":
            amounts = _shape_arg(args.shift, "shift") if args.shift else None
            if amounts is not None and len(amounts) != V.m:
                raise formats.InputError(f"shift needs {V.m} entries", source="--shift")
            out = rp.nagpal_report(V, amounts)
            code = EXIT_OK if out["nagpal"]["complete"] else EXIT_FAIL
        elif args.command == "decompose":
            if V.field.p:
                print("error: decomposition into irreducibles is only supported over Q", file=stderr)
                return EXIT_INPUT
            out = rp.decompose_report(V)
        else:
            out, ok = rp.hilbert_report(V)
            code = EXIT_OK if ok else EXIT_FAIL
    except formats.InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except BoxError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    text = rp.emit_structured(out) if args.out == "structured" else rp.emit_table(out)
    stdout.write(text)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
