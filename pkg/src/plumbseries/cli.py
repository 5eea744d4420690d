"""Command line interface: ``plumb-series <command> --graph FILE ...``.

Every command prints one JSON document (``--pretty`` gives a short human
summary instead).  Domain errors exit with status 1 and a single-line JSON
error document; usage errors exit with status 2.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import oracle
from .graph_model import GraphError, blow_up_free, load_graph, validate
from .invariants import (
    InvariantError,
    acampo_zeta,
    hilbert_function,
    multiplicity_vector,
    n_poly_from_graph,
    p_laufer,
    poly_mul,
    superisolated_n_poly,
    torus_knot_alexander,
    z_h_series,
    z_reduced,
    z_relative,
    z_series,
)
from .lattice import GroupClass, LatticeError, cycle_to_json, lattice_of, parse_rational, q_str
from .laufer import LauferError, UnsupportedClassification, artin_cycle, classify, compute_s
from .series import SeriesError, expand_factored, format_univariate

SCHEMA = "plumb-series/1"


class UsageError(Exception):
    pass


def _dump(doc: dict) -> str:
    return json.dumps({"schema": SCHEMA, **doc}, sort_keys=True, separators=(",", ":"))


# -- argument helpers -----------------------------------------------------------------


def parse_class(spec: str, lat) -> GroupClass:
    """``0``, a fractional vector ``a/b,...`` or dual coordinates ``n:1,0,2``."""
    spec = spec.strip()
    if spec == "0":
        return GroupClass.zero(lat.n)
    if spec.startswith("n:"):
        try:
            n = [int(x) for x in spec[2:].split(",")]
        except ValueError:
            raise UsageError(f"bad dual coordinates in class spec {spec!r}") from None
        if len(n) != lat.n:
            raise UsageError(f"class spec needs {lat.n} dual coordinates")
        return lat.class_from_key(lat.residue_key(n))
    try:
        frac = tuple(parse_rational(x) for x in spec.split(","))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    h = GroupClass(frac)
    lat.key_of_class(h)
    return h


def parse_cycle(spec: str) -> tuple[Fraction, ...]:
    try:
        return tuple(parse_rational(x) for x in spec.split(","))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _graph(args):
    if not args.graph:
        raise UsageError("--graph is required")
    g = load_graph(args.graph)
    if getattr(args, "arrow", None):
        extra = {}
        for item in args.arrow:
            vid, _, count = item.partition(":")
            try:
                extra[vid] = extra.get(vid, 0) + (int(count) if count else 1)
            except ValueError:
                raise UsageError(f"bad arrow spec {item!r}") from None
        g = g.with_arrows(extra)
    return g


def _vertices(args):
    if not args.vertices:
        raise UsageError("--vertices is required")
    return [v for v in args.vertices.split(",") if v]


def _need(args, name):
    val = getattr(args, name)
    if val is None:
        raise UsageError(f"--{name} is required")
    return val


def _bound(args) -> Fraction:
    try:
        return parse_rational(_need(args, "bound"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- commands -------------------------------------------------------------------------


def cmd_check(args):
    g = _graph(args)
    rep = validate(g)
    doc = {"command": "check", "report": rep.to_dict(), "ok": rep.ok}
    if not rep.ok:
        doc["error"] = {"code": "invalid_graph", "message": rep.failure_witness}
        return 1, doc
    return 0, doc


def cmd_invariants(args):
    g = _graph(args)
    lat = lattice_of(g)
    z = artin_cycle(lat)
    order, factors = lat.group_structure()
    return 0, {
        "command": "invariants",
        "vertices": list(g.ids),
        "determinant": lat.det,
        "order": order,
        "factors": list(factors),
        "canonical": cycle_to_json(lat.canonical_cycle()),
        "zmin": cycle_to_json(z),
        "chi_zmin": q_str(lat.chi(z)),
        "classification": classify(lat).to_dict(),
    }


def cmd_zmin(args):
    g = _graph(args)
    lat = lattice_of(g)
    z, trace = compute_s(lat, lat.total())
    doc = {"command": "zmin", "zmin": cycle_to_json(z), "chi": q_str(lat.chi(z)), "kind": classify(lat).kind.value}
    if args.trace:
        doc["trace"] = trace.to_json(g)
    return 0, doc


def cmd_classify(args):
    g = _graph(args)
    return 0, {"command": "classify", **classify(g).to_dict()}


def cmd_series(args):
    g = _graph(args)
    lat = lattice_of(g)
    h = parse_class(args.cls, lat) if args.cls is not None else None
    kind = args.kind
    if kind == "z":
        s = z_series(g, _need(args, "cap"))
    elif kind == "zh":
        if h is None:
            raise UsageError("series zh needs --class")
        s = z_h_series(g, h, _need(args, "cap"))
    elif kind == "reduced":
        s = z_reduced(g, _vertices(args), h, _bound(args))
    else:
        if args.vertices:
            s = z_relative(g, subset=_vertices(args), h=h, bound=_bound(args))
        else:
            s = z_relative(g, cap=_need(args, "cap"), h=h)
    doc = {"command": f"series {kind}", "series": s.to_json()}
    if h is not None:
        doc["class"] = h.to_json()
    if hasattr(s, "univariate") and len(getattr(s, "variables", ())) == 1:
        doc["text"] = format_univariate(s)
    return 0, doc


def cmd_p_laufer(args):
    g = _graph(args)
    p = p_laufer(g, _need(args, "cap"))
    return 0, {"command": "p-laufer", "classification": classify(g).to_dict(), "series": p.to_json()}


def cmd_hilbert(args):
    g = _graph(args)
    lat = lattice_of(g)
    query = parse_cycle(_need(args, "cycle"))
    if len(query) != lat.n:
        raise UsageError(f"--cycle needs {lat.n} coordinates")
    p = p_laufer(g, _need(args, "cap"))
    value = hilbert_function(p)(query)
    return 0, {"command": "hilbert", "cycle": cycle_to_json(query), "value": value}


def cmd_zeta(args):
    g = _graph(args)
    f = acampo_zeta(g)
    doc = {
        "command": "zeta",
        "multiplicities": multiplicity_vector(g).to_json(),
        "factored": f.to_json(),
        "text": str(f),
    }
    if args.bound is not None:
        e = expand_factored(f, _bound(args))
        doc["expansion"] = e.to_json()
    return 0, doc


def cmd_n_poly(args):
    if args.graph:
        g = _graph(args)
        verts = _vertices(args)
        if len(verts) != 1:
            raise UsageError("n-poly from a graph needs exactly one vertex")
        res = n_poly_from_graph(g, verts[0], _bound(args))
        source = "graph"
    else:
        d = _need(args, "degree")
        delta = [1]
        if args.delta:
            try:
                delta = poly_mul(delta, [int(x) for x in args.delta.split(",")])
            except ValueError:
                raise UsageError("--delta takes integer coefficients, constant term first") from None
        for item in args.torus or []:
            try:
                p, q = (int(x) for x in item.split(":"))
            except ValueError:
                raise UsageError(f"bad torus spec {item!r}") from None
            delta = poly_mul(delta, torus_knot_alexander(p, q))
        res = superisolated_n_poly(d, delta)
        source = "delta"
    return 0, {"command": "n-poly", "source": source, **res.to_json()}


def cmd_blowup(args):
    g = _graph(args)
    out = blow_up_free(g, _need(args, "vertex"), args.new_id)
    return 0, {"command": "blowup", "graph": out.to_dict(), "determinant": validate(out).determinant}


def cmd_verify(args):
    check = args.check
    window = _need(args, "window")
    if check == "compute-s":
        seed = args.seed if args.seed is not None else oracle.DEFAULT_SEED
        out = oracle.verify_compute_s(oracle.random_s_instances(window, seed))
        out.details["seed"] = seed
    else:
        g = _graph(args)
        if check == "thm35":
            out = oracle.verify_thm35(g, window)
        elif check == "main-identity":
            out = oracle.verify_main_identity(g, window)
        elif check == "lemma59":
            out = oracle.verify_lemma59(g, window)
        elif check == "character":
            lat = lattice_of(g)
            h = parse_class(_need(args, "cls"), lat)
            out = oracle.verify_character_formula(g, h, window)
        else:
            out = oracle.verify_reduction_consistency(g, _vertices(args), window)
    return (0 if out.passed else 1), {"command": f"verify {check}", "outcome": out.to_dict()}


# -- human output -------------------------------------------------------------------------


def _pretty(doc: dict) -> str:
    lines = []
    for key in sorted(doc):
        if key in ("schema",):
            continue
        val = doc[key]
        if key == "series" and isinstance(val, dict):
            lines.append(f"series over {', '.join(val['variables'])}:")
            for t in val["terms"]:
                where = t.get("n", t["exponent"])
                lines.append(f"  {' '.join(map(str, where))}: {t['coeff']}")
        elif isinstance(val, (dict, list)):
            lines.append(f"{key}: {json.dumps(val, sort_keys=True)}")
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines)


# -- parser ---------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file (line format or JSON)")
    common.add_argument("--arrow", action="append", metavar="ID[:COUNT]", help="add arrows to a vertex")
    common.add_argument("--pretty", action="store_true", help="human readable output")

    p = _Parser(prog="plumb-series", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn in (("check", cmd_check), ("invariants", cmd_invariants), ("classify", cmd_classify)):
        sp = sub.add_parser(name, parents=[common])
        sp.set_defaults(func=fn)
    sp = sub.add_parser("zmin", parents=[common])
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(func=cmd_zmin)

    sp = sub.add_parser("series", parents=[common])
    sp.add_argument("kind", choices=["z", "zh", "reduced", "relative"])
    sp.add_argument("--cap", type=int)
    sp.add_argument("--bound")
    sp.add_argument("--class", dest="cls")
    sp.add_argument("--vertices")
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("p-laufer", parents=[common])
    sp.add_argument("--cap", type=int)
    sp.set_defaults(func=cmd_p_laufer)

    sp = sub.add_parser("hilbert", parents=[common])
    sp.add_argument("--cap", type=int)
    sp.add_argument("--cycle", help="query cycle, coordinates in the E_j basis")
    sp.set_defaults(func=cmd_hilbert)

    sp = sub.add_parser("zeta", parents=[common])
    sp.add_argument("--bound")
    sp.set_defaults(func=cmd_zeta)

    sp = sub.add_parser("n-poly", parents=[common])
    sp.add_argument("--vertices")
    sp.add_argument("--bound")
    sp.add_argument("--degree", type=int)
    sp.add_argument("--delta", help="coefficients of a factor of Delta, constant term first")
    sp.add_argument("--torus", action="append", metavar="P:Q", help="multiply Delta by a torus knot polynomial")
    sp.set_defaults(func=cmd_n_poly)

    sp = sub.add_parser("blowup", parents=[common])
    sp.add_argument("--vertex")
    sp.add_argument("--new-id")
    sp.set_defaults(func=cmd_blowup)

    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("check", choices=["thm35", "main-identity", "lemma59", "character", "reduction", "compute-s"])
    sp.add_argument("--window", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--class", dest="cls")
    sp.add_argument("--vertices")
    sp.set_defaults(func=cmd_verify)
    return p


DOMAIN_ERRORS = (GraphError, LatticeError, LauferError, UnsupportedClassification, SeriesError, InvariantError, oracle.OracleError, OSError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, doc = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"plumb-series: error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        code = getattr(exc, "code", type(exc).__name__)
        if isinstance(exc, OSError):
            code = "io_error"
        print(_dump({"error": {"code": code, "message": " ".join(str(exc).split())}}))
        return 1
    print(_pretty(doc) if args.pretty else _dump(doc))
    return status


if __name__ == "__main__":
    sys.exit(main())
