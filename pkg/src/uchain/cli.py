"""Command-line front end.

One JSON object per invocation on standard output (or --output), with
sorted keys and no whitespace so identical inputs give identical bytes.
Errors exit with the taxonomy's code (1 validation, 2 precondition,
3 parse/IO, 4 internal cross-check) and an {"error": {"kind", "detail"}}
payload.  ``verify`` and ``pairing-check`` exit 4 when the property they
test fails, 0 otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .complexes import (GradedComplex, LaurentChain, cone, complex_to_text,
                        dual, parse_chain_map, parse_complex)
from .errors import InfinityNotZero, UChainError
from .gf2 import rank
from .homology import f2_pairing, h_infinity, h_minus, h_plus, h_red, \
    mapping_torus_betti
from .lefschetz import (cotrace_map, delta_quantity, lefschetz_by_grading,
                        trace_map, verify_proposition)
from .normal_form import reduce_complex

_FLAVORS = {
    "minus": lambda cx: h_minus(cx),
    "infinity": lambda cx: h_infinity(cx),
    "plus": lambda cx: h_plus(cx),
    "red-minus": lambda cx: h_red(cx, "minus"),
    "red-plus": lambda cx: h_red(cx, "plus"),
}


def _load_complex(path: str) -> GradedComplex:
    return parse_complex(Path(path).read_text())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uchain",
        description="Exact computations with finitely generated chain "
                    "complexes over F2[U].")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--output", help="write the JSON payload to this path")
        return p

    p = add("classify", "normal form of a complex")
    p.add_argument("complex")

    p = add("homology", "homology presentation in one flavor")
    p.add_argument("complex")
    p.add_argument("--flavor", choices=sorted(_FLAVORS), default="minus")

    p = add("delta-quantity", "U^-1 coefficient of the duality composite")
    p.add_argument("complex")
    p.add_argument("map")

    p = add("lefschetz", "trace of the induced map on plus-flavor homology")
    p.add_argument("complex")
    p.add_argument("map")

    p = add("verify", "random campaign comparing the two computations")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-rank", type=int, default=8)
    p.add_argument("--max-exponent", type=int, default=6)
    p.add_argument("--jobs", type=int, default=1)

    p = add("cone", "mapping cone of a chain map")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("map")

    p = add("mapping-torus", "F2 Betti numbers of the mapping torus")
    p.add_argument("complex")
    p.add_argument("map")

    p = add("pairing-check", "perfect pairing between plus homology and "
                             "the dual's torsion")
    p.add_argument("complex")

    return parser


def _cmd_classify(args) -> tuple[dict, int]:
    red = reduce_complex(_load_complex(args.complex))
    return red.normal_form.to_json_dict(red.cancelled_pairs), 0


def _cmd_homology(args) -> tuple[dict, int]:
    cx = _load_complex(args.complex)
    return _FLAVORS[args.flavor](cx).to_json_dict(), 0


def _cmd_delta_quantity(args) -> tuple[dict, int]:
    cx = _load_complex(args.complex)
    f = parse_chain_map(Path(args.map).read_text(), cx, cx)
    return {"value": delta_quantity(cx, f)}, 0


def _cmd_lefschetz(args) -> tuple[dict, int]:
    cx = _load_complex(args.complex)
    f = parse_chain_map(Path(args.map).read_text(), cx, cx)
    traces = lefschetz_by_grading(cx, f)
    return {"value": sum(traces.values()) & 1,
            "trace_by_grading": {str(g): t for g, t in sorted(traces.items())}}, 0


def _cmd_verify(args) -> tuple[dict, int]:
    report = verify_proposition(args.seed, args.trials, args.max_rank,
                                args.max_exponent, jobs=args.jobs)
    return report.to_json_dict(), 0 if report.passed else 4


def _cmd_cone(args) -> tuple[dict, int]:
    src = _load_complex(args.source)
    tgt = _load_complex(args.target)
    f = parse_chain_map(Path(args.map).read_text(), src, tgt)
    return {"complex": complex_to_text(cone(f))}, 0


def _cmd_mapping_torus(args) -> tuple[dict, int]:
    cx = _load_complex(args.complex)
    f = parse_chain_map(Path(args.map).read_text(), cx, cx)
    betti = mapping_torus_betti(cx, f)
    return {"betti": {str(g): b for g, b in sorted(betti.items())}}, 0


def _cmd_pairing_check(args) -> tuple[dict, int]:
    cx = _load_complex(args.complex)
    if reduce_complex(cx).one_steps:
        raise InfinityNotZero(
            "free summands survive inverting U; the pairing check needs a "
            "finite plus flavor")
    plus = h_plus(cx)
    red_minus = h_red(dual(cx), "minus")
    rows = []
    for x in plus.basis:
        bits = 0
        for j, y in enumerate(red_minus.basis):
            if f2_pairing(x, y):
                bits |= 1 << j
        rows.append(bits)
    matrix_rank = rank(rows)
    dim = plus.f2_dimension
    invertible = matrix_rank == dim == red_minus.f2_dimension
    traced = trace_map(cx).apply_chain(
        cotrace_map(cx).apply_chain(LaurentChain.of(("1", 0))))
    trace_ok = traced.coefficient("1", 0) == cx.rank % 2 and \
        len(traced.terms) <= 1
    payload = {"dimension": dim, "matrix_rank": matrix_rank,
               "invertible": invertible, "trace_cotrace_ok": trace_ok}
    return payload, 0 if invertible and trace_ok else 4


_COMMANDS = {
    "classify": _cmd_classify,
    "homology": _cmd_homology,
    "delta-quantity": _cmd_delta_quantity,
    "lefschetz": _cmd_lefschetz,
    "verify": _cmd_verify,
    "cone": _cmd_cone,
    "mapping-torus": _cmd_mapping_torus,
    "pairing-check": _cmd_pairing_check,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, code = _COMMANDS[args.verb](args)
    except UChainError as err:
        payload, code = {"error": {"kind": err.kind, "detail": err.detail}}, \
            err.exit_code
    except OSError as err:
        payload, code = {"error": {"kind": "IOError", "detail": str(err)}}, 3
    text = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
