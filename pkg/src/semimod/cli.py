"""Command-line interface: ``semimod <group> <verb> [options]``.

Exit status is 0 for a mathematical yes (or plain success), 1 for a no, and
2 for usage or validation errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Any, Callable, Optional

from . import bmodules as bm
from . import bundles as bd
from . import cones as cn
from . import matrices as mx
from . import quadratic as qd
from .schema import SchemaError, validate
from .semirings import (
    SemiringError,
    generates_unit_ideal,
    localize,
    semiring_from_json,
    universally_negative_free_witness,
)

DEFAULT_SEED = 20240601


class UsageError(ValueError):
    pass


# -- input helpers ---------------------------------------------------------------

def read_input(source: Optional[str], required: bool = True):
    """--in value: a file path, ``-`` for stdin, or inline JSON."""
    if source is None:
        if required:
            raise UsageError("this command needs --in FILE (or inline JSON)")
        return None
    text = source
    if source == "-":
        text = sys.stdin.read()
    elif not source.lstrip().startswith(("{", "[")):
        path = Path(source)
        if not path.is_file():
            raise UsageError(f"no such input file: {source}")
        text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"invalid JSON input: {e}") from None


def matrix_from_json(obj) -> mx.SemiringMatrix:
    validate(obj, "matrix")
    R = semiring_from_json(obj["ring"])
    rows, cols, ents = obj["rows"], obj["cols"], obj["entries"]
    if len(ents) != rows * cols:
        raise UsageError(f"expected {rows * cols} entries, got {len(ents)}")
    return mx.SemiringMatrix(R, rows, cols, tuple(R.element_from_json(e) for e in ents))


def projector_from_json(obj) -> bd.Projector:
    return bd.make_projector(matrix_from_json(obj))


def bmodule_from_json(obj) -> bm.FiniteBModule:
    validate(obj, "bmodule_input")
    if "join" in obj:
        return bm.FiniteBModule.from_table(obj["elements"], obj["join"])
    if "generators" in obj:
        return bm.module_from_presentation(bm.BPresentation(obj["generators"], tuple(map(tuple, obj["relations"]))))
    return bm.monotone_module(poset_from_json(obj))


def poset_from_json(obj) -> bm.FinitePoset:
    validate(obj, "poset")
    return bm.FinitePoset.from_relations(obj["elements"], obj["relations"])


def algebra_from_json(obj) -> bm.BAlgebra:
    validate(obj, "algebra")
    M = bm.FiniteBModule.from_table(obj["elements"], obj["join"])
    return bm.BAlgebra(M, tuple(tuple(r) for r in obj["mul"]), M.index(obj["one"]))


def cone_from_json(obj) -> cn.RationalCone:
    validate(obj, "cone_input")
    if "elements" in obj:
        return cn.order_cone(poset_from_json(obj))
    labels = tuple(obj["labels"]) if "labels" in obj else None
    return cn.RationalCone(obj["dimension"], tuple(tuple(g) for g in obj["generators"]), labels)


def twisted_from_json(F: qd.QuadField, obj) -> qd.SignTwistedIdeal:
    validate(obj, "twisted")
    I = qd.FractionalIdeal.from_json(F, obj["ideal"])
    return qd.SignTwistedIdeal(I, tuple(1 if s == "+" else -1 for s in obj["signs"]))


def _field(args) -> qd.QuadField:
    if args.d is None:
        raise UsageError("quad commands need --d N")
    return qd.QuadField(args.d)


# -- handlers: each returns (yes, result) --------------------------------------------

def ring_info(args):
    obj = read_input(args.inp)
    validate(obj, "semiring")
    R = semiring_from_json(obj)
    w = universally_negative_free_witness(R)
    return True, {
        "ring": R.to_json(),
        "name": str(R),
        "negative_free": bool(R.negative_free),
        "additively_cancellative": bool(R.additively_cancellative),
        "universally_negative_free": w is not None,
        "witness": None if w is None else R.element_to_json(w),
        "local": bool(R.local),
        "no_zero_divisors": bool(R.no_zero_divisors),
        "finite": bool(R.finite),
        "size": R.size(),
    }


def _ring_query(args, need: str):
    obj = read_input(args.inp)
    validate(obj, "ring_query")
    if need not in obj:
        raise UsageError(f"input needs an {need!r} field")
    R = semiring_from_json(obj["ring"])
    return R, obj[need]


def ring_unit(args):
    R, x = _ring_query(args, "element")
    x = R.element_from_json(x)
    inv = R.unit_inverse(x)
    return inv is not None, {
        "element": R.element_to_json(x),
        "unit": inv is not None,
        "inverse": None if inv is None else R.element_to_json(inv),
    }


def ring_unit_ideal(args):
    R, xs = _ring_query(args, "entries")
    xs = [R.element_from_json(x) for x in xs]
    ok = generates_unit_ideal(R, xs)
    return ok, {"entries": [R.element_to_json(x) for x in xs], "unit_ideal": ok}


def ring_localize(args):
    R, a = _ring_query(args, "element")
    S = localize(R, R.element_from_json(a))
    return True, {"ring": S.to_json(), "name": str(S)}


def _gl_ring(args):
    obj = read_input(args.inp)
    validate(obj, "semiring")
    return semiring_from_json(obj)


def gl_enumerate(args):
    R = _gl_ring(args)
    mats = mx.enumerate_gl(R, args.n)
    return True, {
        "ring": R.to_json(),
        "n": args.n,
        "count": len(mats),
        "torus_normalizer_order": mx.gl_order_formula(R, args.n),
        "matrices": [A.to_json() for A in mats],
    }


def gl_normalizer(args):
    R = _gl_ring(args)
    ok = mx.check_torus_normalizer(R, args.n)
    count = len(mx.enumerate_gl(R, args.n))
    return ok, {"ring": R.to_json(), "n": args.n, "holds": ok, "count": count,
                "torus_normalizer_order": mx.gl_order_formula(R, args.n)}


def gl_nonflat(args):
    cert = mx.gl_nonflat_witness(args.n)
    return cert.valid, cert.to_json()


def gl_inverse(args):
    A = matrix_from_json(read_input(args.inp))
    B = mx.find_inverse(A)
    return B is not None, {"inverse": None if B is None else B.to_json()}


def bundle_check(args):
    pi = projector_from_json(read_input(args.inp))
    z = bd.unit_surjective(pi)
    line = bd.is_line_bundle(pi)
    return line, {
        "line_bundle": line,
        "n": pi.n,
        "trace": pi.ring.element_to_json(pi.matrix.trace()),
        "two_by_two_singular": bd.two_by_two_singular(pi),
        "counit_surjective": bd.counit_surjective(pi),
        "unit_surjective": None if z is None else z.to_json(),
    }


def bundle_trivialize(args):
    pi = projector_from_json(read_input(args.inp))
    if not bd.is_line_bundle(pi):
        return False, {"line_bundle": False, "charts": []}
    charts = bd.trivializing_cover(pi)
    return True, {"line_bundle": True, "charts": [c.to_json() for c in charts]}


def bundle_tensor(args):
    obj = read_input(args.inp)
    validate(obj, "matrix_pair")
    p = projector_from_json(obj["left"])
    q = projector_from_json(obj["right"])
    k = bd.kronecker(p, q)
    return True, {"projector": k.to_json(), "line_bundle": bd.is_line_bundle(k)}


def bundle_pic(args):
    pi = projector_from_json(read_input(args.inp))
    iso = bd.pic_n_triviality_check(pi)
    return iso is not None, {"isomorphism": None if iso is None else iso.to_json()}


def bundle_sample(args):
    obj = read_input(args.inp, required=False) or {"kind": "naturals"}
    validate(obj, "semiring")
    R = semiring_from_json(obj)
    rng = random.Random(args.seed)
    pi = bd.random_projector(R, args.n, rng, bound=args.bound or 3)
    return True, {"seed": args.seed, "projector": pi.to_json(), "line_bundle": bd.is_line_bundle(pi)}


def _labels(M, xs):
    return [M.labels[x] for x in xs]


def bmod_present(args):
    M = bmodule_from_json(read_input(args.inp))
    return True, {"size": M.size, "module": M.to_json()}


def bmod_macpherson(args):
    M = bmodule_from_json(read_input(args.inp))
    ok = bm.is_projective_macpherson(M)
    return ok, {
        "projective": ok,
        "primitives": _labels(M, bm.primitive_elements(M)),
        "decompositions": {
            M.labels[x]: [_labels(M, d) for d in bm.irredundant_primitive_decompositions(M, x)]
            for x in range(M.size)
        },
        "antichain_decompositions": {
            M.labels[x]: [_labels(M, d) for d in bm.primitive_antichain_decompositions(M, x)]
            for x in range(M.size)
        },
    }


def bmod_free(args):
    M = bmodule_from_json(read_input(args.inp))
    basis = bm.is_free(M)
    return basis is not None, {"free": basis is not None, "basis": None if basis is None else _labels(M, basis)}


def bmod_flat(args):
    M = bmodule_from_json(read_input(args.inp))
    flat = bm.is_flat_finite(M)
    searched, failure = bm.is_flat_by_search(M)
    fail = None
    if failure is not None:
        r, s, x = failure
        fail = {"r": list(r), "s": list(s), "x": _labels(M, x)}
    return flat, {"flat": flat, "equational_search_flat": searched, "non_rectifiable": fail}


def bmod_golan(args):
    A = algebra_from_json(read_input(args.inp))
    f = bm.golan_morphism(A)
    return True, {"morphism": {A.module.labels[x]: f[x] for x in range(A.size)}}


def _cone(args):
    return cone_from_json(read_input(args.inp))


def cone_rays(args):
    C = _cone(args)
    rays = cn.extreme_rays(C)
    return True, {"rays": [list(map(str, r)) for r in rays], "labels": [C.label_of(r) for r in rays]}


def cone_free(args):
    C = _cone(args)
    basis = cn.is_free_cone(C)
    return basis is not None, {"free": basis is not None,
                               "basis": None if basis is None else [list(map(str, b)) for b in basis]}


def cone_flat(args):
    C = _cone(args)
    v = cn.flatness_verdict(C)
    return v["verdict"] == "free+flat", v


def cone_relation(args):
    C = _cone(args)
    rel = cn.relation_witness(C)
    return rel is not None, {"relation": None if rel is None else rel.to_json(C)}


def cone_order(args):
    P = poset_from_json(read_input(args.inp))
    C = cn.order_cone(P)
    return True, {"cone": C.to_json()}


def quad_unit(args):
    F = _field(args)
    u = qd.fundamental_unit(F)
    return True, {"field": F.to_json(), **u.to_json()}


def _group(args, narrow):
    F = _field(args)
    G = qd.class_group(F, args.bound, narrow=narrow)
    return True, {"field": F.to_json(), **G.to_json()}


def quad_classgroup(args):
    return _group(args, False)


def quad_narrow(args):
    return _group(args, True)


def quad_picrefl(args):
    F = _field(args)
    out = qd.refl_pic_group(F, args.bound)
    G = out["group"]
    return True, {
        "field": F.to_json(),
        "order": G.order,
        "modules": [m.to_json() for m in out["modules"]],
        "table": [list(r) for r in G.table],
        "pairwise_non_isomorphic": True,
    }


def _twisted(args, F, default_signs):
    obj = read_input(args.inp, required=False)
    if obj is None:
        return qd.SignTwistedIdeal(F.unit_ideal(), default_signs)
    return twisted_from_json(F, obj)


def quad_dual(args):
    F = _field(args)
    M = _twisted(args, F, (1, 1))
    D = qd.module_dual(M)
    return True, {"module": M.to_json(), "dual": D.to_json(), "self_dual": D == M,
                  "reflexive": qd.is_reflexive(M)}


def quad_certificate(args):
    F = _field(args)
    M = _twisted(args, F, (1, -1))
    cert = qd.non_invertibility_certificate(M)
    return cert is not None, {"module": M.to_json(), "certificate": None if cert is None else cert.to_json()}


COMMANDS: dict = {
    "ring": {
        "info": ring_info,
        "unit": ring_unit,
        "unit-ideal": ring_unit_ideal,
        "localize": ring_localize,
    },
    "gl": {
        "enumerate": gl_enumerate,
        "normalizer": gl_normalizer,
        "nonflat-witness": gl_nonflat,
        "inverse": gl_inverse,
    },
    "bundle": {
        "check": bundle_check,
        "trivialize": bundle_trivialize,
        "tensor": bundle_tensor,
        "pic": bundle_pic,
        "sample": bundle_sample,
    },
    "bmod": {
        "present": bmod_present,
        "macpherson": bmod_macpherson,
        "free": bmod_free,
        "flat": bmod_flat,
        "golan": bmod_golan,
    },
    "cone": {
        "rays": cone_rays,
        "free": cone_free,
        "flat": cone_flat,
        "relation": cone_relation,
        "order-cone": cone_order,
    },
    "quad": {
        "unit": quad_unit,
        "classgroup": quad_classgroup,
        "narrow": quad_narrow,
        "picrefl": quad_picrefl,
        "dual": quad_dual,
        "certificate": quad_certificate,
    },
}


# -- output --------------------------------------------------------------------------

def to_json_text(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _fmt_scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_fmt_scalar(x)}" for k, x in sorted(v.items())) + "}"
    return str(v)


def _is_matrix(v) -> bool:
    return isinstance(v, dict) and {"rows", "cols", "entries"} <= v.keys()


def _grid(rows, indent: str) -> list:
    cells = [[_fmt_scalar(x) for x in r] for r in rows]
    width = max((len(c) for r in cells for c in r), default=1)
    return [indent + " ".join(c.rjust(width) for c in r) for r in cells]


def _is_flat(v) -> bool:
    if isinstance(v, dict):
        return len(v) <= 4 and all(not isinstance(x, (dict, list)) for x in v.values())
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or _is_flat(x) for x in v) and len(_fmt_scalar(v)) <= 72
    return True


def _render(key: str, val, indent: str) -> list:
    head = f"{indent}{key}:"
    inner = indent + "  "
    if isinstance(val, dict) and val.keys() == {"kind", "params"}:
        return [f"{head} {semiring_from_json(val)}"]
    if _is_matrix(val):
        r, c = val["rows"], val["cols"]
        ents = val["entries"]
        return [head] + _grid([ents[i * c:(i + 1) * c] for i in range(r)], inner)
    if key == "table" and isinstance(val, list) and val:
        return [head] + _grid(val, inner)
    if _is_flat(val):
        return [f"{head} {_fmt_scalar(val)}"]
    if isinstance(val, dict):
        out = [head]
        for k, x in sorted(val.items()):
            out.extend(_render(k, x, inner))
        return out
    out = [head]
    for x in val:
        if _is_matrix(x):
            c = x["cols"]
            rows = _grid([x["entries"][i * c:(i + 1) * c] for i in range(x["rows"])], inner + "  ")
            rows[0] = inner + "- " + rows[0][len(inner) + 2:]
            out.extend(rows)
        elif isinstance(x, dict) and not _is_flat(x):
            sub = []
            for k, y in sorted(x.items()):
                sub.extend(_render(k, y, inner + "  "))
            sub[0] = inner + "- " + sub[0].lstrip()
            out.extend(sub)
        else:
            out.append(f"{inner}- {_fmt_scalar(x)}")
    return out


def to_text(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]
    for key, val in sorted(report["result"].items()):
        lines.extend(_render(key, val, ""))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semimod", description="Modules over commutative semirings, exactly.")
    groups = p.add_subparsers(dest="group", required=True, metavar="{" + "|".join(COMMANDS) + "}")
    for g, verbs in COMMANDS.items():
        gp = groups.add_parser(g, help=f"{g} commands")
        vs = gp.add_subparsers(dest="verb", required=True, metavar="{" + "|".join(verbs) + "}")
        for v in verbs:
            sp = vs.add_parser(v)
            sp.add_argument("--in", dest="inp", metavar="FILE", help="input JSON file, '-' for stdin, or inline JSON")
            sp.add_argument("--format", choices=("json", "text"), default="json")
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
            sp.add_argument("--d", type=int)
            sp.add_argument("--bound", type=int)
            sp.add_argument("--n", type=int, default=2, help="matrix size (gl, bundle sample)")
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    handler: Callable = COMMANDS[args.group][args.verb]
    try:
        yes, result = handler(args)
    except (UsageError, SchemaError, SemiringError, ValueError) as e:
        print(f"semimod: error: {e}", file=err)
        return 2
    report: dict[str, Any] = {
        "command": f"{args.group} {args.verb}",
        "status": "yes" if yes else "no",
        "result": result,
    }
    out.write(to_json_text(report) if args.format == "json" else to_text(report))
    return 0 if yes else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
