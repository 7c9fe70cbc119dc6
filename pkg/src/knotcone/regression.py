"""Replayable checks behind ``hfk regress``.

Each check returns ``(ok, detail)`` where ``detail`` is JSON-ready.  The
expected values below are pinned exactly; nothing here is tolerance based.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .complex import EQUIVARIANT, SKEW, URing, Map, UComplex, compose, free_tower
from .knotlib import (
    PERIODIC,
    SI,
    parse_knot,
    sarkar_xi,
    staircase_torus,
    swap_involution,
)
from .linalg import homology_towers, homotopic
from .local_equiv import (
    STRICT,
    LocalMapCertificate,
    PhiComplex,
    correction_terms,
    cyclic_sample,
    find_local_map,
    lens_d,
    lens_d_closed,
    match_standard,
    odd_order_trivialize,
    phi_n,
    trivial_complex,
)
from .mapping_cone import (
    IOTA,
    V_invariant,
    alexander_slice,
    build_cone,
    class_representative,
    local_rep,
    v_wedge,
)
from .surgery_algebra import box_morphism, box_tensor_D, induced_morphism, type_d_from_cfk
from .swap_decomposition import SwapDecomposition


def _frac(x) -> str | int:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# 1 -------------------------------------------------------------------------
STRUCTURAL_KNOTS = (
    [f"torus:{n}" for n in range(1, 7)] + [f"box:{n}" for n in range(1, 7)]
    + ["unknot", "trefoil", "fig8", "mirror(fig8)", "mirror(torus:2)", "reverse(fig8)",
       "torus:1#fig8", "mirror(torus:1)#torus:1", "box:3#mirror(box:3)"]
)
EXPECTED_VARIANCE = {SI: SKEW, PERIODIC: EQUIVARIANT}


def _map_problems(f: Map, variance: str) -> list[str]:
    out = []
    if f.variance != variance:
        out.append(f"declared {f.variance}, expected {variance}")
    ok, where = f.is_chain_map()
    if not ok:
        out.append(f"not a chain map at {where}")
    return out


def check_structural():
    problems = {}
    for spec in STRUCTURAL_KNOTS:
        model = parse_knot(spec)
        rep = model.complex.verify()
        issues = [] if rep.ok else [str(rep)]
        if model.iota is not None:
            issues += [f"iota: {p}" for p in _map_problems(model.iota, SKEW)]
        for name, (kind, f) in model.symmetries.items():
            issues += [f"{name}: {p}" for p in _map_problems(f, EXPECTED_VARIANCE[kind])]
        if issues:
            problems[spec] = issues
    for n in (1, 3):
        cc, phi = swap_involution(staircase_torus(n))
        issues = [] if cc.verify().ok else [str(cc.verify())]
        issues += _map_problems(phi, SKEW)
        if issues:
            problems[f"swap C{n}xC{n}"] = issues
    return not problems, {"checked": len(STRUCTURAL_KNOTS) + 2, "problems": problems}


# 2 -------------------------------------------------------------------------
def homotopy_identities() -> dict:
    fig8 = parse_knot("fig8")
    c = fig8.complex
    xi = sarkar_xi(c)
    iota = fig8.iota
    phi = fig8.symmetry(PERIODIC)
    cc3, sw3 = swap_involution(staircase_torus(3))
    cc1, sw1 = swap_involution(staircase_torus(1))
    xi3 = sarkar_xi(cc3)
    cases = {
        "xi^2 ~ id (fig8)": (compose(xi, xi), c.identity()),
        "xi^2 ~ id (C3xC3)": (compose(xi3, xi3), cc3.identity()),
        "iota^2 ~ xi (fig8)": (compose(iota, iota), xi),
        "phi iota ~ iota phi (fig8)": (compose(phi, iota), compose(iota, phi)),
        "phi_sw^2 ~ id (C1xC1)": (compose(sw1, sw1), cc1.identity()),
        "phi_sw^2 ~ id (C3xC3)": (compose(sw3, sw3), cc3.identity()),
    }
    out = {}
    for name, (f, g) in cases.items():
        res = homotopic(f, g)
        out[name] = res.homotopic
    return out


def check_homotopies():
    out = homotopy_identities()
    return all(out.values()), out


# 3 -------------------------------------------------------------------------
TREFOIL_DELTA1 = {"x": {"p": "T s + U T^2 t"}, "y": {"z": "Z", "x": "W"}, "z": {"p": "U T^-1 s + t"}}
TREFOIL_BOX = {
    "x|W^2": (-2, {"p|1": "U"}),
    "x|W": (-2, {"p|T": "U", "p|1": "U"}),
    "x|1": (0, {"p|T": "1"}),
    "y|W": (-1, {"z|1": "U", "x|W^2": "1"}),
    "y|1": (-1, {"z|Z": "1", "x|W": "1"}),
    "y|Z": (-1, {"z|Z^2": "1", "x|1": "U"}),
    "z|1": (0, {"p|1": "1"}),
    "z|Z": (-2, {"p|1": "U", "p|T": "U"}),
    "z|Z^2": (-2, {"p|T": "U"}),
    "p|1": (-1, {}),
    "p|T": (-1, {}),
}
TREFOIL_PHI = {
    "x|W^2": "z|Z^2", "x|W": "z|Z", "x|1": "z|1", "z|1": "x|1", "z|Z": "x|W", "z|Z^2": "x|W^2",
    "y|W": "y|Z", "y|1": "y|1", "y|Z": "y|W", "p|1": "p|T", "p|T": "p|1",
}


def trefoil_fixture() -> dict:
    T = parse_knot("trefoil")
    X = type_d_from_cfk(T, 1)
    f = induced_morphism(T.symmetry(SI), X)
    bt = box_tensor_D(X, (-1, 1))
    m = box_morphism(f, bt, bt, collapse=True)
    box = {lab: (int(bt.complex.grading(lab)), {k: URing.format(v) for k, v in bt.complex.d(lab).items()})
           for lab in bt.complex.ids}
    phi = {}
    for lab in bt.complex.ids:
        row = m.row(lab)
        phi[lab] = " + ".join(sorted(h if v == URing.one else f"{URing.format(v)} {h}" for h, v in row.items()))
    return {"delta1": X.to_json()["delta1"], "box": box, "phi": phi,
            "box_chain_map": m.is_chain_map()[0]}


def check_trefoil():
    got = trefoil_fixture()
    ok = (got["delta1"] == TREFOIL_DELTA1 and got["box"] == TREFOIL_BOX
          and got["phi"] == TREFOIL_PHI and got["box_chain_map"])
    return ok, {"delta1": got["delta1"], "phi": got["phi"], "box_matches": got["box"] == TREFOIL_BOX}


# 4 -------------------------------------------------------------------------
def box_matches_cone(spec: str, n: int, window: int = 4) -> dict:
    K = parse_knot(spec)
    X = type_d_from_cfk(K, n)
    bt = box_tensor_D(X, (-window, window))
    cone = build_cone(K, n, IOTA, collapsed=True)
    cc = cone.truncate(-window, window)
    rel = {lab: bt.cone_label(lab) for lab in bt.complex.ids}
    same = set(rel.values()) == set(cc.ids) and len(rel) == cc.rank
    if same:
        for lab in bt.complex.ids:
            d1 = {rel[k]: frozenset(v) for k, v in bt.complex.d(lab).items()}
            d2 = {k: frozenset(v) for k, v in cc.d(rel[lab]).items()}
            if bt.complex.grading(lab) != cc.grading(rel[lab]) or d1 != d2:
                same = False
                break
    full = build_cone(K, n, IOTA)
    classes = [class_representative(i, n) for i in range(abs(n))]
    towers_full = [full.d_invariant(s) for s in classes]
    towers_box = []
    wide = box_tensor_D(X, (-window - full.default_bound(), window + full.default_bound()))
    for s in classes:
        ids = [lab for lab in wide.complex.ids
               if (int(wide.cone_label(lab)[1:].split(":")[0]) - s) % abs(n) == 0]
        keep = set(ids)
        sub = UComplex(ids, {i: wide.complex.grading(i) for i in ids},
                       {i: {k: v for k, v in wide.complex.d(i).items() if k in keep} for i in ids})
        towers_box.append(homology_towers(sub).d)
    return {"isomorphic": same, "d_cone": [_frac(x) for x in towers_full],
            "d_box": [_frac(x) for x in towers_box]}


def check_box_cone():
    out = {}
    ok = True
    for spec in ("torus:1", "fig8", "torus:3"):
        for n in (1, 2, 3):
            r = box_matches_cone(spec, n)
            out[f"{spec} n={n}"] = r
            ok &= r["isomorphic"] and r["d_cone"] == r["d_box"]
    return ok, out


# 5 -------------------------------------------------------------------------
def check_correction_terms():
    T = parse_knot("torus:1")
    rep = local_rep(T, 1, SI)
    d_lo, d_hi = correction_terms(rep)
    # d_lower = -2 V_upper and d_upper = -2 V_lower
    V_upper, V_lower = -d_lo / 2, -d_hi / 2
    V0_fig8 = V_invariant(parse_knot("fig8"), 0)
    detail = {"d_lower": _frac(d_lo), "d_upper": _frac(d_hi), "V_lower_0": _frac(V_lower),
              "V_upper_0": _frac(V_upper), "V0(fig8)": _frac(V0_fig8)}
    ok = d_lo == d_hi == -2 and V_lower == V_upper == 1 and V0_fig8 == 0
    return ok, detail


# 6 -------------------------------------------------------------------------
def explicit_wedge_certificate(spec: str = "fig8") -> LocalMapCertificate:
    """F[U] -> wedge sending 1 to a_0 + a_1, the two copies of a cycle a with v(a) = 1."""
    K = parse_knot(spec)
    A0 = alexander_slice(K.complex, 0)
    a = homology_towers(A0).free_reps[0]
    c, swap = v_wedge(K, 0)
    image = {}
    for side in ("L", "R"):
        for lab, p in a.items():
            image[f"{side}:{lab}"] = p
    one = free_tower(0)
    f = Map(one, c, {"1": image}, EQUIVARIANT, 0, "f")
    H = Map(one, c, {}, EQUIVARIANT, 1, "H")
    wedge = PhiComplex(c, swap, 0, "wedge")
    return LocalMapCertificate(trivial_complex(), wedge, f, H, STRICT, {"f(1)": sorted(image)})


def figure_eight_half() -> dict:
    K = parse_knot("fig8")
    out = {}
    for name in ("sigma", "sigma_prime"):
        rep = local_rep(K, "1/2", SI, symmetry=name)
        triv = trivial_complex(rep.tower_grading)
        out[name] = {"to_trivial": find_local_map(rep, triv) is not None,
                     "from_trivial": find_local_map(triv, rep) is not None}
    cert = explicit_wedge_certificate()
    out["explicit f(1)"] = {"image": cert.metadata["f(1)"], "verified": cert.verify()}
    rep = local_rep(K, "1/2", PERIODIC)
    triv = trivial_complex(rep.tower_grading)
    d_lo, d_hi = correction_terms(rep)
    out["periodic"] = {"to_trivial": find_local_map(rep, triv) is not None,
                      "from_trivial": find_local_map(triv, rep) is not None,
                      "d_lower": _frac(d_lo), "d_upper": _frac(d_hi)}
    return out


def check_figure_eight():
    out = figure_eight_half()
    ok = all(out[n]["to_trivial"] and out[n]["from_trivial"] for n in ("sigma", "sigma_prime"))
    ok &= out["explicit f(1)"]["verified"]
    # nontrivial means no local equivalence; a one-way map may still exist
    ok &= not (out["periodic"]["to_trivial"] and out["periodic"]["from_trivial"])
    return ok, out


# 7 -------------------------------------------------------------------------
def check_decomposition():
    r = SwapDecomposition(3).splitting_report()
    ok = (r["ranks"] == [121, 25, 96] and not r["span_missing"] and not r["G_subcomplex_failures"]
          and not r["Y_subcomplex_failures"] and r["I_equivariant"] and r["Pi_homotopy_found"]
          and r["closed_form_homotopy_ok"])
    keys = ("ranks", "span_missing", "G_subcomplex_failures", "I_equivariant",
            "Pi_strictly_equivariant", "Pi_homotopy_found", "closed_form_homotopy_ok")
    return ok, {k: r[k] for k in keys}


# 8 -------------------------------------------------------------------------
def box_signatures(ns=(3, 5), top: int = 8) -> dict:
    out = {}
    for n in ns:
        rep = local_rep(parse_knot(f"box:{n}"), 1, SI)
        params = match_standard(rep, bound=max(ns) + 1)
        out[n] = {"params": list(params) if params is not None else None,
                  "phi": {i: phi_n(params, i) for i in range(1, top + 1)} if params is not None else None}
    return out


def check_infinite_rank():
    out = box_signatures()
    ok = True
    for n, r in out.items():
        ok &= r["params"] == [-1, n]
        ok &= r["phi"] is not None and all(v == (1 if i == n else 0) for i, v in r["phi"].items())
    return ok, {str(n): r for n, r in out.items()}


# 9 -------------------------------------------------------------------------
def check_lens():
    bad = [(p, i) for p in range(1, 13) for i in range(p) if lens_d(p, 1, i) != lens_d_closed(p, i)]
    return not bad, {"checked": sum(range(1, 13)), "mismatches": bad}


# 10 ------------------------------------------------------------------------
def check_odd_order():
    sample = cyclic_sample(3)
    there, back = odd_order_trivialize(sample, 3)
    return there.verify() and back.verify(), {"rank": sample.complex.rank,
                                              "f": there.f.to_json()["entries"]}


@dataclass
class CheckResult:
    name: str
    criterion: int
    ok: bool
    seconds: float
    detail: object

    def to_json(self) -> dict:
        return {"name": self.name, "criterion": self.criterion, "ok": self.ok,
                "seconds": round(self.seconds, 2), "detail": self.detail}


CHECKS: list[tuple[str, int, Callable]] = [
    ("structural", 1, check_structural),
    ("homotopies", 2, check_homotopies),
    ("trefoil", 3, check_trefoil),
    ("box-cone", 4, check_box_cone),
    ("correction-terms", 5, check_correction_terms),
    ("fig8-half", 6, check_figure_eight),
    ("swap-decomposition", 7, check_decomposition),
    ("standard-signatures", 8, check_infinite_rank),
    ("lens", 9, check_lens),
    ("odd-order", 10, check_odd_order),
]


def run(filter_text: str | None = None) -> list[CheckResult]:
    results = []
    for name, crit, fn in CHECKS:
        if filter_text and filter_text not in name:
            continue
        t = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is reported as a failed check
            ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        results.append(CheckResult(name, crit, bool(ok), time.perf_counter() - t, detail))
    return results
