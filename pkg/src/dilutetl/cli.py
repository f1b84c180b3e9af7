"""Command-line interface.

JSON is the only machine-readable output; human summaries are plain
text.  Exit codes: 0 success, 1 verification failure, 2 usage error
(argparse's default).
"""

from __future__ import annotations

import argparse
import json
import sys

from .classical import tor_contrast
from .diagrams import (
    Diagram,
    enumerate_basis,
    multiply_diagrams,
)
from .exact import SparseMatrix, smith_normal_form
from .homalg import SizeGuardExceeded, bar_tor
from .idempotents import certify, find_idempotent
from .linkstates import (
    LinkState,
    augmentation_ideal_basis,
    cup_module,
    ideal_J,
    ideal_K,
    ideal_L,
    intersect,
    left_link_state,
    right_link_state,
)
from .mv import (
    build_cover,
    build_mv_complex,
    ext_via_resolution,
    tor_via_resolution,
    verify_acyclic,
)
from .rings import parse_ring
from .verify import RunConfig, run_verify_theorem


def _add_ring_args(sp, default_ring="Z", default_delta="0"):
    sp.add_argument("--ring", default=default_ring,
                    help="ring descriptor: Z, Q, Fp:<p>, Z[delta]")
    sp.add_argument("--delta", default=default_delta,
                    help="loop value: integer literal or 'generic'")


def _ring_of(args):
    return parse_ring(args.ring, args.delta)


def cmd_basis(args) -> int:
    basis = enumerate_basis(args.n)
    if args.count:
        print(len(basis))
        return 0
    if args.json:
        print(json.dumps([d.to_json_obj() for d in basis]))
    else:
        for d in basis:
            print(d.to_text())
    return 0


def cmd_multiply(args) -> int:
    d1 = Diagram.from_text(args.d1)
    d2 = Diagram.from_text(args.d2)
    if args.n and args.n != d1.n:
        print(f"--n {args.n} disagrees with the diagram size {d1.n}",
              file=sys.stderr)
        return 2
    out = multiply_diagrams(d1, d2)
    if out.is_annihilated:
        print("0")
    elif out.loops == 0:
        print(out.result.to_text())
    else:
        print(f"delta^{out.loops} * {out.result.to_text()}")
    return 0


def cmd_link_state(args) -> int:
    d = Diagram.from_text(args.diagram)
    p = left_link_state(d) if args.side == "left" else right_link_state(d)
    if args.json:
        print(json.dumps(p.to_json_obj()))
    else:
        print(p.to_text())
    return 0


def _parse_ideal_spec(n: int, spec: str):
    kind, _, rest = spec.partition(":")
    if kind == "J":
        return ideal_J(LinkState.from_text(rest))
    if kind == "K":
        verts = [int(v.lstrip("R")) for v in rest.split(",")]
        return ideal_K(n, verts)
    if kind == "L":
        return ideal_L(n, int(rest))
    if kind == "cup":
        return cup_module(n)
    if kind == "I":
        return augmentation_ideal_basis(n)
    raise argparse.ArgumentTypeError(f"bad ideal spec {spec!r}")


def cmd_ideal(args) -> int:
    ideals = [_parse_ideal_spec(args.n, s) for s in args.spec]
    target = intersect(ideals) if len(ideals) > 1 else ideals[0]
    obj = {
        "n": args.n,
        "label": target.label,
        "count": len(target),
        "diagrams": [d.to_text() for d in target.members()],
    }
    print(json.dumps(obj, indent=2))
    return 0


def cmd_idempotent(args) -> int:
    p = LinkState.from_text(args.link_state)
    if args.n and args.n != p.n:
        print(f"--n {args.n} disagrees with the link state length {p.n}",
              file=sys.stderr)
        return 2
    e = find_idempotent(p)
    cert = certify(p, e)
    print(json.dumps({
        "link_state": p.to_text(),
        "e": e.to_text(),
        "conditions": list(cert.conditions),
        "unit_verified": cert.unit_verified,
    }, indent=2))
    return 0


def cmd_mv(args) -> int:
    ring = _ring_of(args)
    cover = build_cover(args.n)
    mv = build_mv_complex(cover, ring)
    out = {
        "n": args.n,
        "ring": ring.descriptor(),
        "delta": ring.delta_descriptor(),
        "ranks": {str(p): mv.chain.rank(p) for p in sorted(mv.chain.degrees)},
        "shape_notes": mv.shape_notes,
    }
    ok = True
    if ring.kind == "Zdelta":
        try:
            mv.chain.check_d_squared()
            out["d_squared_zero"] = True
        except Exception:
            out["d_squared_zero"] = False
            ok = False
    else:
        hom = verify_acyclic(mv)
        out["acyclic"] = hom.is_trivial()
        out["homology"] = hom.to_json_obj()
        tor = tor_via_resolution(mv)
        ext = ext_via_resolution(mv)
        out["tor"] = tor.to_json_obj()
        out["ext"] = ext.to_json_obj()
        ok = hom.is_trivial()
    if args.emit_matrices:
        dump = {
            "schema_version": 1,
            "n": args.n,
            "ring": ring.descriptor(),
            "delta": ring.delta_descriptor(),
            "degrees": {str(p): mv.chain.rank(p)
                        for p in sorted(mv.chain.degrees)},
            "boundaries": {str(p): m.to_json_obj()
                           for p, m in sorted(mv.chain.boundaries.items())},
        }
        with open(args.emit_matrices, "w") as fh:
            json.dump(dump, fh)
        out["matrices_written_to"] = args.emit_matrices
    print(json.dumps(out, indent=2))
    return 0 if ok else 1


def cmd_homology(args) -> int:
    from .exact import ChainComplex, complex_homology

    ring = _ring_of(args)
    with open(args.infile) as fh:
        dump = json.load(fh)
    degrees = {int(p): list(range(r)) for p, r in dump["degrees"].items()}
    boundaries = {int(p): SparseMatrix.from_json_obj(m)
                  for p, m in dump["boundaries"].items()}
    cc = ChainComplex(ring, degrees, boundaries)
    res = complex_homology(cc)
    print(json.dumps(res.to_json_obj(), indent=2))
    return 0


def cmd_bar_tor(args) -> int:
    ring = _ring_of(args)
    groups = bar_tor(args.n, ring, args.max_degree)
    for p, g in enumerate(groups):
        print(json.dumps(g.to_json_obj(p)))
    return 0


def cmd_snf(args) -> int:
    with open(args.infile) as fh:
        mat = SparseMatrix.from_json_obj(json.load(fh))
    res = smith_normal_form(mat)
    print(json.dumps({"invariant_factors": list(res.invariants),
                      "rank": res.rank,
                      "torsion": list(res.torsion())}))
    return 0


def cmd_tl_compare(args) -> int:
    ring = _ring_of(args)
    obj = tor_contrast(args.n, ring, args.max_degree)
    print(json.dumps(obj, indent=2))
    return 0


def cmd_verify(args) -> int:
    overrides = {
        "n_values": args.n and [int(x) for x in args.n.split(",")],
        "rings": args.rings and args.rings.split(","),
        "deltas": args.deltas and [int(x) for x in args.deltas.split(",")],
        "max_bar_degree": args.max_bar_degree,
        "out_dir": args.out_dir,
        "seed": args.seed,
    }
    config = RunConfig.load(args.config, **overrides)
    report = run_verify_theorem(config)
    for rec in report.to_json_obj()["records"]:
        mark = "PASS" if rec["verdict"] == "pass" else "FAIL"
        print(f"[{mark}] {rec['name']} {json.dumps(rec['params'])}")
    print(f"report written to {config.out_dir}/report.json")
    return 0 if report.all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dilutetl",
        description="exact homology computations for dilute "
                    "Temperley-Lieb algebras")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("basis", help="enumerate the diagram basis")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--count", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_basis)

    sp = sub.add_parser("multiply", help="product of two diagrams")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("d1")
    sp.add_argument("d2")
    sp.set_defaults(func=cmd_multiply)

    sp = sub.add_parser("link-state", help="link state of a diagram")
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--side", choices=("left", "right"), default="right")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_link_state)

    sp = sub.add_parser("ideal", help="members of a named ideal")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("spec", nargs="+",
                    help="J:<linkstate> | K:R1,R3 | L:<i> | cup | I; "
                         "several specs intersect")
    sp.set_defaults(func=cmd_ideal)

    sp = sub.add_parser("idempotent", help="unit diagram for a link state")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--link-state", required=True)
    sp.set_defaults(func=cmd_idempotent)

    sp = sub.add_parser("mv", help="Mayer-Vietoris complex and functors")
    sp.add_argument("--n", type=int, required=True)
    _add_ring_args(sp)
    sp.add_argument("--emit-matrices", default=None, metavar="FILE")
    sp.set_defaults(func=cmd_mv)

    sp = sub.add_parser("homology", help="homology of a dumped complex")
    sp.add_argument("--in", dest="infile", required=True)
    _add_ring_args(sp)
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("bar-tor", help="Tor via the bar resolution")
    sp.add_argument("--n", type=int, required=True)
    _add_ring_args(sp)
    sp.add_argument("--max-degree", type=int, required=True)
    sp.set_defaults(func=cmd_bar_tor)

    sp = sub.add_parser("snf", help="Smith normal form of a matrix file")
    sp.add_argument("--in", dest="infile", required=True)
    sp.set_defaults(func=cmd_snf)

    sp = sub.add_parser("tl-compare",
                        help="classical vs dilute Tor side by side")
    sp.add_argument("--n", type=int, required=True)
    _add_ring_args(sp)
    sp.add_argument("--max-degree", type=int, required=True)
    sp.set_defaults(func=cmd_tl_compare)

    sp = sub.add_parser("verify", help="full verification run with report")
    sp.add_argument("--config", default=None, help="JSON config file")
    sp.add_argument("--n", default=None, help="comma-separated n values")
    sp.add_argument("--rings", default=None, help="comma-separated descriptors")
    sp.add_argument("--deltas", default=None, help="comma-separated integers")
    sp.add_argument("--max-bar-degree", type=int, default=None)
    sp.add_argument("--out-dir", default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeGuardExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
