"""``hfk``: command-line front end.

Every subcommand prints one JSON document.  Exit codes: 0 success, 1 a
verification or regression failure (the report is still printed), 2 a usage
error or unreadable input.  Rationals are printed exactly, as integers or
``"n/d"`` strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import regression
from .knotlib import PERIODIC, SI, KnotModel, KnotSpecError, mirror, parse_knot
from .linalg import homology_towers
from .local_equiv import (
    ALMOST,
    STRICT,
    PhiComplex,
    correction_terms,
    find_local_map,
    format_params,
    match_standard,
    trivial_complex,
)
from .mapping_cone import (
    IOTA,
    MappingCone,
    WindowError,
    build_involution_periodic,
    build_involution_si,
    check_window,
    class_representative,
    involutive_summand,
    local_rep,
    parse_surgery,
)
from .surgery_algebra import box_morphism, box_tensor_D, induced_morphism, type_d_from_cfk

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad arguments or unreadable input; reported with exit code 2."""

    def __init__(self, message: str, location: str | None = None):
        super().__init__(message)
        self.location = location


# ---------------------------------------------------------------------------
# JSON helpers


def exact(x):
    """Fractions become ints or "n/d"; containers are converted recursively."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    if isinstance(x, float):
        raise TypeError("floating point value in output")
    return x


def read_json(source: str):
    """Parse a file (or ``-`` for stdin); malformed JSON raises UsageError with line:column."""
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}", source) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc.msg}", f"{source}:{exc.lineno}:{exc.colno}") from exc


def _looks_like_file(spec: str) -> bool:
    return spec == "-" or spec.endswith(".json") or Path(spec).is_file()


def load_knot(spec, flag: str = "--knot"):
    """A knot from a spec string, a JSON file path, or an embedded knot object.

    Returns ``(model, request_value)``; the request value is what an emitted
    document records so the run can be replayed from that document alone.
    """
    if isinstance(spec, dict):
        data, where = spec, "request.knot"
    elif _looks_like_file(spec):
        data, where = read_json(spec), spec
    else:
        try:
            return parse_knot(spec), spec
        except KnotSpecError as exc:
            raise UsageError(str(exc), flag) from exc
    if isinstance(data, dict) and "request" in data and "complex" not in data:
        return load_knot(data["request"]["knot"])
    try:
        model = KnotModel.from_json(data)
    except ValueError as exc:
        raise UsageError(str(exc), where) from exc
    return model, model.to_json()


def resolve_symmetry(model: KnotModel, tag: str | None):
    """``si``/``periodic`` (first of that kind), ``kind:name`` or a bare map name."""
    if tag is None:
        return None, None
    kind, _, name = tag.partition(":")
    if kind in (SI, PERIODIC):
        name = name or None
        if name is None:
            for n, (k, _f) in model.symmetries.items():
                if k == kind:
                    return kind, n
            raise UsageError(f"{model.name} carries no {kind} symmetry", "--sym")
        if name not in model.symmetries or model.symmetries[name][0] != kind:
            raise UsageError(f"{model.name} has no {kind} symmetry named {name!r}", "--sym")
        return kind, name
    if tag in model.symmetries:
        return model.symmetries[tag][0], tag
    known = ", ".join(sorted(model.symmetries)) or "none"
    raise UsageError(f"unknown symmetry {tag!r} (known: {known})", "--sym")


def parse_range(text: str, flag: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"expected a:b, got {text!r}", flag) from exc
    if a > b:
        raise UsageError(f"empty range {text!r}", flag)
    return a, b


def _frame(text) -> tuple[int, int]:
    try:
        return parse_surgery(text)
    except ValueError as exc:
        raise UsageError(str(exc), "--frame") from exc


def _replay(args, keys: tuple[str, ...]) -> None:
    """Fill unset options from the ``request`` block of ``--input``."""
    if getattr(args, "input", None) is None:
        return
    doc = read_json(args.input)
    req = doc.get("request") if isinstance(doc, dict) else None
    if not isinstance(req, dict):
        raise UsageError("document has no request block to replay", args.input)
    for k in keys:
        # unset options and unset switches both take the recorded value
        if getattr(args, k, None) in (None, False) and k in req:
            setattr(args, k, req[k])


# ---------------------------------------------------------------------------
# Subcommands


def _map_report(f) -> str:
    ok, where = f.is_chain_map()
    return "ok" if ok else f"not a chain map at {where}"


def cmd_knot(args):
    model, _ = load_knot(args.spec, "spec")
    if args.verify:
        rep = model.complex.verify()
        out = {"rank": model.rank, "verify": str(rep)}
        ok = rep.ok
        if args.maps:
            maps = {n: _map_report(f) for n, f in model.maps().items()}
            out["maps"] = maps
            ok &= all(v == "ok" for v in maps.values())
        return out, EXIT_OK if ok else EXIT_FAIL
    # a document emitted with --maps replays with its maps
    carried = Path(args.spec).is_file() and "maps" in (read_json(args.spec) or {})
    return model.to_json(include_maps=args.maps or carried), EXIT_OK


def _cone_flip(model, kind):
    if kind == SI:
        return SI
    if model.iota is None:
        raise UsageError(f"{model.name} has no iota map; the cone needs one unless --sym si is given")
    return IOTA


def cmd_cone(args):
    _replay(args, ("knot", "frame", "sym", "truncate", "spinc"))
    if args.knot is None or args.frame is None:
        raise UsageError("cone needs --knot and --frame")
    model, knot_req = load_knot(args.knot)
    p, q = _frame(args.frame)
    if q != 1:
        raise UsageError("the mapping cone takes an integer framing", "--frame")
    n = p
    kind, name = resolve_symmetry(model, args.sym)
    cone = MappingCone(model, n, _cone_flip(model, kind), name if kind == SI else None)
    if args.truncate is not None:
        a, b = parse_range(args.truncate, "--truncate")
    else:
        N = cone.default_bound()
        a, b = -N, N
    request = {"knot": knot_req, "frame": n, "sym": args.sym, "truncate": f"{a}:{b}", "spinc": args.spinc}
    try:
        check_window(cone, a, b)
    except WindowError as exc:
        return {"request": request, "window": str(exc)}, EXIT_FAIL
    residues = list(range(abs(n))) if args.spinc is None else [int(args.spinc) % abs(n)]
    classes = []
    for r in residues:
        s = class_representative(r, n)
        a_idx, b_idx = cone.truncation_indices(a, b, s)
        c = cone.assemble(a_idx, b_idx)
        entry = {"spinc": s, "rank": c.rank, "d": homology_towers(c).d}
        if kind is not None:
            entry.update(_cone_involution(cone, kind, name, s, a_idx, b_idx, c, n))
        if args.spinc is not None:
            entry["complex"] = c.to_json()
        classes.append(entry)
    return {"request": request, "knot": model.name, "frame": n, "window": [a, b], "classes": classes}, EXIT_OK


def _cone_involution(cone, kind, name, s, a_idx, b_idx, c, n) -> dict:
    if kind == SI:
        if (2 * s) % n:
            return {"involution": f"class [{s}] is not fixed"}
        if sorted(a_idx) != sorted(-t for t in a_idx):
            return {"involution": "window is not symmetric under s -> -s"}
        inv = build_involution_si(cone, a_idx, b_idx, c)
    else:
        inv = build_involution_periodic(cone, a_idx, b_idx, name, c)
    ok, where = inv.map.is_chain_map()
    if not ok:
        return {"involution": f"not a chain map at {where}"}
    lo, hi = correction_terms(PhiComplex(c, inv.map, 0, check=False))
    return {"involution": "ok", "d_lower": lo, "d_upper": hi}


def cmd_algebra(args):
    _replay(args, ("knot", "frame", "sym", "window", "box", "equivariant"))
    if args.knot is None or args.frame is None:
        raise UsageError("algebra needs --knot and --frame")
    model, knot_req = load_knot(args.knot)
    p, q = _frame(args.frame)
    if q != 1:
        raise UsageError("the type-D module takes an integer framing", "--frame")
    kind, name = resolve_symmetry(model, args.sym)
    if args.equivariant and kind is None:
        if not model.symmetries:
            raise UsageError(f"{model.name} carries no symmetry for --equivariant", "--sym")
        name = next(iter(model.symmetries))
        kind = model.symmetries[name][0]
    flip = _cone_flip(model, kind)
    X = type_d_from_cfk(model, p, flip, name if flip == SI else None)
    rep = X.verify()
    request = {"knot": knot_req, "frame": p, "sym": args.sym, "window": args.window,
               "box": bool(args.box), "equivariant": bool(args.equivariant)}
    out = {"request": request, "flip": flip, "verify": str(rep), "module": X.to_json()}
    code = EXIT_OK if rep.ok else EXIT_FAIL
    morphism = None
    if args.equivariant:
        f = model.symmetries[name][1]
        morphism = induced_morphism(f, X)
        out["morphism"] = morphism.to_json()
    if args.box:
        window = parse_range(args.window, "--window") if args.window else None
        bt = box_tensor_D(X, window)
        out["box"] = bt.complex.to_json()
        out["box_labels"] = {lab: bt.cone_label(lab) for lab in bt.complex.ids}
        if morphism is not None:
            m = box_morphism(morphism, bt, bt, collapse=f.skew)
            out["box_phi"] = m.to_json()["entries"]
            ok, where = m.is_chain_map()
            out["box_phi_chain_map"] = ok
            if not ok:
                code = EXIT_FAIL
    return out, code


def _dinv_rep(model, p, q, kind, name, spinc, method, bound):
    if method == "cone":
        if q != 1 or p <= 0:
            raise UsageError("--method cone needs a positive integer framing", "--method")
        return involutive_summand(model, p, kind, 0 if spinc is None else spinc, name, bound)
    return local_rep(model, f"{p}/{q}", kind, spinc, name)


def cmd_dinv(args):
    model, _ = load_knot(args.knot)
    p, q = _frame(args.frame)
    kind, name = resolve_symmetry(model, args.sym)
    try:
        if p > 0:
            lo, hi = correction_terms(_dinv_rep(model, p, q, kind, name, args.spinc, args.method, args.bound))
        else:
            # orientation reversal: S^3_{-r}(K) = -S^3_r(mirror K) swaps and negates the pair
            mlo, mhi = correction_terms(_dinv_rep(mirror(model), -p, q, kind, name, args.spinc,
                                                  args.method, args.bound))
            lo, hi = -mhi, -mlo
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc
    return {"d_lower": lo, "d_upper": hi}, EXIT_OK


def _phi_from_document(doc, where) -> PhiComplex:
    data = doc.get("phi_complex", doc) if isinstance(doc, dict) else doc
    try:
        return PhiComplex.from_json(data)
    except ValueError as exc:
        raise UsageError(str(exc), where) from exc


def cmd_local(args):
    options = {}
    if args.input is not None:
        doc = read_json(args.input)
        rep = _phi_from_document(doc, args.input)
        if isinstance(doc, dict):
            options = doc.get("options", {})
    else:
        if args.knot is None or args.surgery is None or args.sym is None:
            raise UsageError("local needs --input, or --knot with --surgery and --sym")
        model, _ = load_knot(args.knot)
        kind, name = resolve_symmetry(model, args.sym)
        p, q = _frame(args.surgery)
        try:
            rep = local_rep(model, f"{p}/{q}", kind, args.spinc, name, wedge=args.wedge)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    match = args.match_standard or bool(options.get("match_standard"))
    bound = args.bound if args.bound is not None else int(options.get("bound", 8))
    mode = ALMOST if rep.almost else STRICT
    lo, hi = (None, None) if rep.almost else correction_terms(rep)
    triv = trivial_complex(rep.tower_grading, almost=rep.almost)
    to_triv = find_local_map(rep, triv, mode) is not None
    from_triv = find_local_map(triv, rep, mode) is not None
    out = {
        "name": rep.name,
        "options": {"match_standard": match, "bound": bound},
        "mode": mode,
        "d_lower": lo,
        "d_upper": hi,
        "map_to_trivial": to_triv,
        "map_from_trivial": from_triv,
        "class": "trivial" if to_triv and from_triv else "nontrivial",
    }
    if match:
        params = match_standard(rep, bound=bound)
        out["standard"] = None if params is None else {"params": list(params), "text": format_params(params)}
    out["phi_complex"] = rep.to_json()
    return out, EXIT_OK


def cmd_regress(args):
    results = regression.run(args.filter)
    if not results:
        raise UsageError(f"no check matches {args.filter!r}", "--filter")
    checks = [{"criterion": r.criterion, "name": r.name, "ok": r.ok, "detail": r.detail} for r in results]
    failed = sum(not r.ok for r in results)
    out = {"passed": len(results) - failed, "failed": failed, "checks": checks}
    return out, EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# Output


def render_pretty(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        flat = all(isinstance(v, dict) and all(not isinstance(x, (dict, list)) for x in v.values())
                   for v in obj)
        if flat and obj:
            cols = list(dict.fromkeys(k for row in obj for k in row))
            cells = [[json.dumps(row.get(c, "")) for c in cols] for row in obj]
            widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(cols)]
            lines.append(pad + "  ".join(c.ljust(w) for c, w in zip(cols, widths)))
            for r in cells:
                lines.append(pad + "  ".join(x.ljust(w) for x, w in zip(r, widths)))
        else:
            for v in obj:
                if isinstance(v, (dict, list)):
                    lines.append(f"{pad}-")
                    lines.append(render_pretty(v, indent + 1))
                else:
                    lines.append(f"{pad}- {json.dumps(v)}")
    else:
        lines.append(pad + json.dumps(obj))
    return "\n".join(line for line in lines if line)


def emit(obj, style: str) -> str:
    obj = exact(obj)
    if style == "pretty":
        return render_pretty(obj)
    return json.dumps(obj, separators=(",", ":"))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--emit", choices=("json", "pretty"), default=argparse.SUPPRESS,
                        help="output style (default json)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="accepted for interface stability; every search here is exhaustive")
    parser = argparse.ArgumentParser(prog="hfk", parents=[common],
                                     description="Knot Floer complexes, surgery cones and local classes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("knot", parents=[common], help="emit or verify a knot complex")
    p.add_argument("spec", help="knot spec (torus:n, fig8, box:n, mirror(..), a#b) or a knot JSON file")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--maps", action="store_true", help="include (or verify) iota and symmetry maps")
    p.set_defaults(func=cmd_knot)

    p = sub.add_parser("cone", parents=[common], help="truncated mapping cone and its d-invariants")
    p.add_argument("--knot")
    p.add_argument("--frame")
    p.add_argument("--sym")
    p.add_argument("--truncate", help="a:b")
    p.add_argument("--spinc", type=int)
    p.add_argument("--input", help="replay the request of an emitted cone document")
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("algebra", parents=[common], help="type-D module, box tensor and induced maps")
    p.add_argument("--knot")
    p.add_argument("--frame")
    p.add_argument("--sym")
    p.add_argument("--box", action="store_true")
    p.add_argument("--equivariant", action="store_true")
    p.add_argument("--window", help="a:b Alexander window for --box")
    p.add_argument("--input", help="replay the request of an emitted algebra document")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("dinv", parents=[common], help="involutive correction terms of a surgery")
    p.add_argument("--knot", required=True)
    p.add_argument("--frame", required=True, help="n or p/q")
    p.add_argument("--sym", required=True)
    p.add_argument("--spinc", type=int)
    p.add_argument("--method", choices=("local", "cone"), default="local")
    p.add_argument("--bound", type=int, help="cone truncation bound for --method cone")
    p.set_defaults(func=cmd_dinv)

    p = sub.add_parser("local", parents=[common], help="local class of a phi-complex")
    p.add_argument("--input", help="phi-complex JSON, or a document emitted by this command")
    p.add_argument("--knot")
    p.add_argument("--surgery")
    p.add_argument("--sym")
    p.add_argument("--spinc", type=int)
    p.add_argument("--wedge", choices=("vv", "hv"), default="vv")
    p.add_argument("--match-standard", action="store_true")
    p.add_argument("--bound", type=int, help="largest |b| tried when matching standard complexes")
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("regress", parents=[common], help="replay the worked-example checks")
    p.add_argument("--filter")
    p.set_defaults(func=cmd_regress)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    style = getattr(args, "emit", "json")
    try:
        out, code = args.func(args)
    except UsageError as exc:
        err = {"error": str(exc)}
        if exc.location:
            err["location"] = exc.location
        print(emit(err, style))
        return EXIT_USAGE
    print(emit(out, style))
    return code


if __name__ == "__main__":
    sys.exit(main())
