"""Integer surgery mapping cones and the involutions induced by knot symmetries.

Conventions:

* ``A_s`` is the Alexander-s slice of the knot complex, graded by gr_w.
* ``B_s`` is the Alexander-s slice of Z^{-1} CFK.  Its U-module generators
  are ``Z^{s - A(g)} g``, labelled simply ``g``; multiplication by powers of
  Z between different B_s is the identity on labels.  Graded by gr_w.
* ``Bt_s`` is the Alexander-s slice of W^{-1} CFK, generators
  ``W^{A(g) - s} g`` labelled ``g`` and graded by gr_z.
* ``v_s(W^a Z^b g) = U^a g in B_s`` and ``vt_s(W^a Z^b g) = U^b g in Bt_s``.
* ``h_s = Z^{2s+n} o K o vt_s : A_s -> B_{s+n}`` for a skew flip map K.

In the assembled cone, A_s sits at gr_w + alpha_s and B_s at gr_w + alpha_s - 1,
with ``alpha_{s+n} = alpha_s + 2s`` and alpha at the class representative
in (-|n|/2, |n|/2] given by :func:`cone_anchor`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .complex import (
    EQUIVARIANT,
    SKEW,
    BigradedComplex,
    Map,
    UComplex,
    URing,
    add,
    alexander_slice,
    compose,
    elem_accumulate,
    slice_map,
    slice_monomial,
    slice_label,
)
from .knotlib import PERIODIC, SI, KnotModel
from .linalg import (
    MapEquations,
    MapUnknown,
    homology_towers,
    solve_nullhomotopy,
)
from .local_equiv import PhiComplex, lens_d

IOTA = "iota"


# ---------------------------------------------------------------------------
# Localized complexes


def z_localized(c: BigradedComplex) -> UComplex:
    """The slice of Z^{-1} CFK (any s): W -> U, Z -> 1, graded by gr_w."""
    diff = {}
    for g, row in c.differential.items():
        out: dict = {}
        for h, p in row.items():
            for (a, _b) in p:
                elem_accumulate(out, h, frozenset((a,)))
        if out:
            diff[g] = out
    return UComplex(c.ids, {g: c.grading(g)[0] for g in c.ids}, diff)


def w_localized(c: BigradedComplex) -> UComplex:
    """The slice of W^{-1} CFK (any s): Z -> U, W -> 1, graded by gr_z."""
    diff = {}
    for g, row in c.differential.items():
        out: dict = {}
        for h, p in row.items():
            for (_a, b) in p:
                elem_accumulate(out, h, frozenset((b,)))
        if out:
            diff[g] = out
    return UComplex(c.ids, {g: c.grading(g)[1] for g in c.ids}, diff)


def localized_map(f: Map, source: UComplex, target: UComplex, target_kind: str) -> Map:
    """Push a knot-complex map into localized slices.

    ``target_kind`` is ``"B"`` (Z inverted: the W exponent survives as a U power)
    or ``"Bt"`` (W inverted: the Z exponent survives).
    """
    axis = 0 if target_kind == "B" else 1
    ents = {}
    for g, row in f.entries.items():
        out: dict = {}
        for h, p in row.items():
            for m in p:
                elem_accumulate(out, h, frozenset((m[axis],)))
        if out:
            ents[g] = out
    return Map(source, target, ents, EQUIVARIANT, f.shift[axis], f.name)


def tower_projection(b: UComplex, name: str = "p") -> tuple[UComplex, Map]:
    """A grading-preserving chain map from B (a copy of CF^-(S^3)) onto F2[U].

    The lexicographically first solution of the linear system is returned.
    """
    towers = homology_towers(b)
    d = towers.d
    p = UComplex([name], {name: d}, {})
    rho = MapUnknown(b, p, EQUIVARIANT, 0, "rho")
    eqs = MapEquations([rho])
    eqs.add_equation([(b.differential_map(), rho, None)])
    row = 0
    rep = towers.free_reps[0]
    for i, (x, y, k) in enumerate(rho.entries):
        for j in rep.get(x, ()):
            if j + k == 0:
                row ^= 1 << i
    eqs.add_raw(row, 1)
    sol = eqs.solve()
    assert sol is not None, "no projection onto the tower"
    return p, sol[0]


# ---------------------------------------------------------------------------
# Gradings


def class_representative(s: int, n: int) -> int:
    """Representative of s mod |n| in (-|n|/2, |n|/2]."""
    m = abs(n)
    r = s % m
    if 2 * r > m:
        r -= m
    return r


def cone_anchor(n: int, s0: int) -> Fraction:
    """Grading offset of A_{s0} for a class representative s0.

    For n > 0 this is ((2 s0 - n)^2 - n) / (4n), which is d(L(n,1), s0) when s0 >= 0
    and d(L(n,1), n + s0) + 2|s0| when s0 < 0.  For n < 0 the anchor is the one
    for which the unknot cone reproduces d = -d(L(|n|,1), .) in every class.
    """
    if n > 0:
        return Fraction((2 * s0 - n) ** 2 - n, 4 * n)
    return Fraction((2 * s0 + n) ** 2 + n, 4 * n) + 1 - 2 * s0


def alpha(n: int, s: int) -> Fraction:
    s0 = class_representative(s, n)
    a = cone_anchor(n, s0)
    t = s0
    step = n
    # walk from s0 to s in steps of n using alpha_{t+n} = alpha_t + 2t
    k = (s - s0) // step
    if k >= 0:
        for _ in range(k):
            a += 2 * t
            t += step
    else:
        for _ in range(-k):
            t -= step
            a -= 2 * t
    assert t == s
    return a


def beta(n: int, s: int) -> Fraction:
    return alpha(n, s) - 1


# ---------------------------------------------------------------------------
# The cone


@dataclass
class InducedInvolution:
    """An involution on an assembled cone, with its ingredients."""

    kind: str
    map: Map
    phi_A: dict = field(default_factory=dict)
    phi_B: Map | None = None
    homotopy: Map | None = None


class MappingCone:
    """Slices and maps of X_n(K) for one flip convention."""

    def __init__(self, knot: KnotModel, n: int, flip: str = IOTA, symmetry: str | None = None,
                 collapsed: bool = False):
        if n == 0:
            raise ValueError("framing must be nonzero")
        self.knot = knot
        self.n = n
        self.flip_kind = flip
        if flip == IOTA:
            if knot.iota is None:
                raise ValueError(f"{knot.name} has no iota map")
            K = knot.iota
        elif flip == SI:
            K = knot.symmetry(SI, symmetry)
        else:
            raise ValueError(f"unknown flip convention {flip!r}")
        if not K.skew:
            raise ValueError("the flip map must be skew")
        self.flip_map = K
        self.cfk = knot.complex
        self.B = z_localized(self.cfk)
        self.Bt = w_localized(self.cfk)
        self.K_to_B = localized_map(K, self.Bt, self.B, "B")
        self.collapsed = collapsed
        if collapsed:
            self.P, self.rho = tower_projection(self.B)
        else:
            self.P, self.rho = self.B, None
        self._A: dict = {}
        self._v: dict = {}
        self._h: dict = {}
        gmax = max(abs(self.cfk.alexander(g)) for g in self.cfk.ids)
        self.genus_bound = gmax

    # slices ------------------------------------------------------------
    def A(self, s: int) -> UComplex:
        if s not in self._A:
            self._A[s] = alexander_slice(self.cfk, s)
        return self._A[s]

    def vt(self, s: int) -> Map:
        a = self.A(s)
        ents = {}
        for lab in a.ids:
            g, _x, b = a.origin[lab]
            ents[lab] = {g: URing.poly([b])}
        return Map(a, self.Bt, ents, EQUIVARIANT, -2 * s, "vt")

    def v_full(self, s: int) -> Map:
        a = self.A(s)
        ents = {}
        for lab in a.ids:
            g, x, _b = a.origin[lab]
            ents[lab] = {g: URing.poly([x])}
        return Map(a, self.B, ents, EQUIVARIANT, 0, "v")

    def h_full(self, s: int) -> Map:
        h = compose(self.K_to_B, self.vt(s))
        h.name = "h"
        return h

    def v(self, s: int) -> Map:
        if s not in self._v:
            m = self.v_full(s)
            self._v[s] = compose(self.rho, m) if self.collapsed else m
        return self._v[s]

    def h(self, s: int) -> Map:
        if s not in self._h:
            m = self.h_full(s)
            self._h[s] = compose(self.rho, m) if self.collapsed else m
        return self._h[s]

    # assembly ------------------------------------------------------------
    def default_bound(self) -> int:
        return self.genus_bound + abs(self.n)

    def class_indices(self, residue: int, lo: int, hi: int) -> list[int]:
        m = abs(self.n)
        return [t for t in range(lo, hi + 1) if (t - residue) % m == 0]

    def truncation_indices(self, a: int, b: int, residue: int | None = None):
        """Index sets of the truncation: A_t for a <= t <= b, B_t for a + n <= t <= b.

        For n < 0 this contains every B that the chosen A's reach, so the
        truncation is a subcomplex; for n > 0 arrows into B_{t > b} are dropped.
        """
        n = self.n
        if a > b:
            raise ValueError("truncation needs a <= b")
        a_idx = list(range(a, b + 1))
        b_idx = list(range(a + n, b + 1))
        if residue is not None:
            m = abs(n)
            a_idx = [t for t in a_idx if (t - residue) % m == 0]
            b_idx = [t for t in b_idx if (t - residue) % m == 0]
        return a_idx, b_idx

    def assemble(self, a_idx: Iterable[int], b_idx: Iterable[int]) -> UComplex:
        """The cone on the given A and B indices; arrows into omitted B's are dropped."""
        a_idx, b_idx = list(a_idx), list(b_idx)
        b_set = set(b_idx)
        ids, gr, diff, origin = [], {}, {}, {}
        n = self.n
        for s in a_idx:
            A = self.A(s)
            al = alpha(n, s)
            for lab in A.ids:
                G = f"A{s}:{lab}"
                ids.append(G)
                gr[G] = A.grading(lab) + al
                origin[G] = ("A", s, lab)
        for t in b_idx:
            be = beta(n, t)
            for g in self.P.ids:
                G = f"B{t}:{g}"
                ids.append(G)
                gr[G] = self.P.grading(g) + be
                origin[G] = ("B", t, g)
        for s in a_idx:
            A = self.A(s)
            for lab in A.ids:
                G = f"A{s}:{lab}"
                row: dict = {}
                for lab2, p in A.d(lab).items():
                    row[f"A{s}:{lab2}"] = p
                for t, m in ((s, self.v(s)), (s + n, self.h(s))):
                    if t not in b_set:
                        continue
                    for g, p in m.row(lab).items():
                        elem_accumulate(row, f"B{t}:{g}", frozenset(p))
                if row:
                    diff[G] = row
        for t in b_idx:
            for g in self.P.ids:
                row = {f"B{t}:{g2}": p for g2, p in self.P.d(g).items()}
                if row:
                    diff[f"B{t}:{g}"] = row
        return UComplex(ids, gr, diff, origin)

    def truncate(self, a: int, b: int, residue: int | None = None, check: bool = False) -> UComplex:
        if check:
            check_window(self, a, b)
        return self.assemble(*self.truncation_indices(a, b, residue))

    def spinc_summand(self, residue: int, bound: int | None = None) -> UComplex:
        """Truncation of the class [residue] on a window that is exact."""
        N = self.default_bound() if bound is None else bound
        return self.truncate(-N, N, residue, check=True)

    def window(self, lo: int, hi: int) -> UComplex:
        """A_s for s in [lo, hi] with every B_t they reach (a subcomplex)."""
        n = self.n
        return self.assemble(range(lo, hi + 1), range(lo + min(0, n), hi + max(0, n) + 1))

    def d_invariant(self, residue: int, bound: int | None = None) -> Fraction:
        return homology_towers(self.spinc_summand(residue, bound)).d


class WindowError(ValueError):
    """The truncation window misses a slice where v or h is not a quasi-isomorphism."""


def map_cone(f: Map) -> UComplex:
    """Cone(f) for a map of U-complexes: source shifted so the total differential has degree -1."""
    src, tgt = f.source, f.target
    shift = Fraction(f.shift)
    ids, gr, diff = [], {}, {}
    for x in src.ids:
        ids.append(f"s:{x}")
        gr[f"s:{x}"] = src.grading(x) + shift + 1
    for y in tgt.ids:
        ids.append(f"t:{y}")
        gr[f"t:{y}"] = tgt.grading(y)
    for x in src.ids:
        row = {f"s:{x2}": p for x2, p in src.d(x).items()}
        row.update({f"t:{y}": p for y, p in f.row(x).items()})
        if row:
            diff[f"s:{x}"] = row
    for y in tgt.ids:
        row = {f"t:{y2}": p for y2, p in tgt.d(y).items()}
        if row:
            diff[f"t:{y}"] = row
    return UComplex(ids, gr, diff)


def is_quasi_isomorphism(f: Map) -> bool:
    t = homology_towers(map_cone(f))
    return not t.free and not t.torsion


def check_window(cone: "MappingCone", a: int, b: int) -> None:
    """Raise WindowError unless every cancelled end map is a quasi-isomorphism.

    Beyond the largest Alexander grading v is the identity, and below the
    smallest one vt is, so only finitely many slices need checking.
    """
    alex = [cone.cfk.alexander(g) for g in cone.cfk.ids]
    for t in range(b + 1, max(alex) + 1):
        if not is_quasi_isomorphism(cone.v_full(t)):
            raise WindowError(f"v_{t} is not a quasi-isomorphism; widen the window past {t}")
    for t in range(min(alex), a):
        if not is_quasi_isomorphism(cone.h_full(t)):
            raise WindowError(f"h_{t} is not a quasi-isomorphism; widen the window below {t}")


def build_cone(knot: KnotModel, n: int, flip: str = IOTA, symmetry: str | None = None,
               collapsed: bool = False) -> MappingCone:
    return MappingCone(knot, n, flip, symmetry, collapsed)


def V_invariant(knot: KnotModel, s: int) -> Fraction:
    """V_s = -d(A_s) / 2."""
    return -homology_towers(alexander_slice(knot.complex, s)).d / 2


def ni_wu_d(knot: KnotModel, n: int, i: int) -> Fraction:
    """d(L(n,1), i) - 2 max(V_i, V_{n-i}) for n > 0 and 0 <= i < n."""
    if n <= 0 or not 0 <= i < n:
        raise ValueError(f"closed formula needs n > 0 and 0 <= i < n, got n={n}, i={i}")
    return lens_d(n, 1, i) - 2 * max(V_invariant(knot, i), V_invariant(knot, n - i))


# ---------------------------------------------------------------------------
# Involutions


def _embed(entries: dict, prefix_src: str, prefix_tgt: str, out: dict, allowed: set) -> None:
    for x, row in entries.items():
        X = f"{prefix_src}:{x}"
        if X not in allowed:
            continue
        acc = out.setdefault(X, {})
        for y, p in row.items():
            Y = f"{prefix_tgt}:{y}"
            if Y in allowed:
                elem_accumulate(acc, Y, frozenset(p))


def _cone_map(cone_complex: UComplex, ents: dict, name: str) -> Map:
    clean = {x: r for x, r in ents.items() if r}
    return Map(cone_complex, cone_complex, clean, EQUIVARIANT, 0, name)


def si_ingredients(cone: MappingCone):
    """phi_B on B and the homotopy H: Bt -> B from [d, H] = F phi F + phi."""
    K = cone.flip_map
    KK = compose(K, K)
    phi_B = localized_map(KK, cone.B, cone.B, "B")
    K_bt = localized_map(K, cone.B, cone.Bt, "Bt")
    F = add(compose(cone.K_to_B, compose(K_bt, cone.K_to_B)), cone.K_to_B, check=False)
    F = Map(cone.Bt, cone.B, F.entries, EQUIVARIANT, 0)
    res = solve_nullhomotopy(F)
    if not res.found:
        raise AssertionError("no homotopy H for the strongly invertible involution")
    return phi_B, res.homotopy


def build_involution_si(cone: MappingCone, a_idx, b_idx, complex_: UComplex | None = None) -> InducedInvolution:
    """phi_A + phi_B + H vt on a symmetric truncation (flip convention K = phi_K)."""
    if cone.flip_kind != SI:
        raise ValueError("the strongly invertible involution needs the phi_K flip")
    if cone.collapsed:
        raise ValueError("involutions are built on the uncollapsed cone")
    c = complex_ or cone.assemble(a_idx, b_idx)
    allowed = set(c.ids)
    n = cone.n
    K = cone.flip_map
    phi_B, H = si_ingredients(cone)
    ents: dict = {}
    phi_A = {}
    for s in a_idx:
        if -s not in a_idx:
            raise ValueError("truncation is not symmetric under s -> -s")
        m = slice_map(K, s, -s, cone.A(s), cone.A(-s))
        phi_A[s] = m
        _embed(m.entries, f"A{s}", f"A{-s}", ents, allowed)
        Hs = compose(H, cone.vt(s))
        _embed(Hs.entries, f"A{s}", f"B{-s}", ents, allowed)
    for t in b_idx:
        _embed(phi_B.entries, f"B{t}", f"B{n - t}", ents, allowed)
    X = _cone_map(c, ents, "X(phi)")
    return InducedInvolution(SI, X, phi_A, phi_B, H)


def periodic_homotopy(knot: KnotModel, phi: Map) -> Map:
    """Skew L with [d, L] = iota phi + phi iota on the knot complex."""
    iota = knot.iota
    F = add(compose(iota, phi), compose(phi, iota), check=False)
    F = Map(knot.complex, knot.complex, F.entries, SKEW, (0, 0))
    res = solve_nullhomotopy(F)
    if not res.found:
        raise AssertionError("iota and phi do not commute up to homotopy")
    return res.homotopy


def build_involution_periodic(cone: MappingCone, a_idx, b_idx, symmetry: str | None = None,
                              complex_: UComplex | None = None) -> InducedInvolution:
    """phi_K on every slice plus H_s = Z^{2s+n} L vt_s (flip convention K = iota_K)."""
    if cone.flip_kind != IOTA:
        raise ValueError("the periodic involution needs the iota flip")
    if cone.collapsed:
        raise ValueError("involutions are built on the uncollapsed cone")
    c = complex_ or cone.assemble(a_idx, b_idx)
    allowed = set(c.ids)
    n = cone.n
    phi = cone.knot.symmetry(PERIODIC, symmetry)
    L = periodic_homotopy(cone.knot, phi)
    L_B = localized_map(L, cone.Bt, cone.B, "B")
    phi_B = localized_map(phi, cone.B, cone.B, "B")
    ents: dict = {}
    phi_A = {}
    for s in a_idx:
        m = slice_map(phi, s, s, cone.A(s), cone.A(s))
        phi_A[s] = m
        _embed(m.entries, f"A{s}", f"A{s}", ents, allowed)
        Hs = compose(L_B, cone.vt(s))
        _embed(Hs.entries, f"A{s}", f"B{s + n}", ents, allowed)
    for t in b_idx:
        _embed(phi_B.entries, f"B{t}", f"B{t}", ents, allowed)
    X = _cone_map(c, ents, "X(phi)")
    return InducedInvolution(PERIODIC, X, phi_A, phi_B, L_B)


def symmetric_truncation(cone: MappingCone, residue: int, bound: int | None = None):
    """Index sets for a truncation of class [residue] preserved by the involution."""
    N = cone.default_bound() if bound is None else bound
    return cone.truncation_indices(-N, N, residue)


def involutive_summand(knot: KnotModel, n: int, kind: str, residue: int = 0,
                       symmetry: str | None = None, bound: int | None = None) -> PhiComplex:
    """(CF^-(S^3_n(K), [residue]), phi) assembled from the truncated cone."""
    if n <= 0:
        raise ValueError("involutive summands are built for positive framings")
    if kind == SI:
        cone = MappingCone(knot, n, SI, symmetry)
        if (2 * residue) % n:
            raise ValueError(f"class [{residue}] is not fixed by the involution")
        a_idx, b_idx = symmetric_truncation(cone, residue, bound)
        inv = build_involution_si(cone, a_idx, b_idx)
    elif kind == PERIODIC:
        cone = MappingCone(knot, n, IOTA)
        a_idx, b_idx = symmetric_truncation(cone, residue, bound)
        inv = build_involution_periodic(cone, a_idx, b_idx, symmetry)
    else:
        raise ValueError(f"unknown symmetry kind {kind!r}")
    return PhiComplex(inv.map.source, inv.map, 0, f"X_{n}({knot.name})[{residue}]")


# ---------------------------------------------------------------------------
# Local representatives


def _slice_phi(knot: KnotModel, kind: str, s: int, symmetry: str | None) -> tuple[UComplex, Map]:
    f = knot.symmetry(kind, symmetry)
    A = alexander_slice(knot.complex, s)
    if kind == SI:
        if s != 0:
            raise ValueError("a strong inversion preserves only A_0")
        return A, slice_map(f, 0, 0, A, A)
    return A, slice_map(f, s, s, A, A)


def v_wedge(knot: KnotModel, s: int) -> tuple[UComplex, Map]:
    """Cone(A_s + A_s -> F2[U]) via v on both copies; the involution swaps them."""
    A = alexander_slice(knot.complex, s)
    B = z_localized(knot.complex)
    P, rho = tower_projection(B)
    v = compose(rho, _v_map(A, B))
    ids, gr, diff = [], {}, {}
    for side in ("L", "R"):
        for lab in A.ids:
            G = f"{side}:{lab}"
            ids.append(G)
            gr[G] = A.grading(lab)
    ids.append("B:p")
    gr["B:p"] = P.grading("p") - 1
    for side in ("L", "R"):
        for lab in A.ids:
            row = {f"{side}:{l2}": p for l2, p in A.d(lab).items()}
            for g, p in v.row(lab).items():
                row["B:p"] = p
            if row:
                diff[f"{side}:{lab}"] = row
    c = UComplex(ids, gr, diff)
    ents = {f"L:{lab}": {f"R:{lab}": URing.one} for lab in A.ids}
    ents.update({f"R:{lab}": {f"L:{lab}": URing.one} for lab in A.ids})
    ents["B:p"] = {"B:p": URing.one}
    return c, Map(c, c, ents, EQUIVARIANT, 0, "swap")


def _v_map(A: UComplex, B: UComplex) -> Map:
    ents = {}
    for lab in A.ids:
        g, x, _b = A.origin[lab]
        ents[lab] = {g: URing.poly([x])}
    return Map(A, B, ents, EQUIVARIANT, 0, "v")


def parse_surgery(text) -> tuple[int, int]:
    """``"n"`` or ``"p/q"`` as a reduced pair (p, q) with q > 0."""
    from math import gcd
    if isinstance(text, int):
        return text, 1
    text = str(text).strip()
    if "/" in text:
        a, b = text.split("/", 1)
        p, q = int(a), int(b)
    else:
        p, q = int(text), 1
    if q == 0 or p == 0:
        raise ValueError("surgery coefficient must be a nonzero rational")
    if q < 0:
        p, q = -p, -q
    g = gcd(abs(p), q)
    return p // g, q // g


def hv_wedge(knot: KnotModel, m: int, symmetry: str | None = None) -> PhiComplex:
    """A_{-m} ->h B_m <-v A_m for framing 2m with the truncated cone involution."""
    cone = MappingCone(knot, 2 * m, SI, symmetry)
    a_idx, b_idx = cone.truncation_indices(-m, m, m)
    inv = build_involution_si(cone, a_idx, b_idx)
    c = inv.map.source
    # the cone already carries the d(L(2m,1), m) anchor on A_m
    return PhiComplex(c, inv.map, 0, f"hv wedge A{m}({knot.name})")


def local_rep(knot: KnotModel, surgery, kind: str, spinc: int | None = None,
              symmetry: str | None = None, wedge: str = "vv") -> PhiComplex:
    """Local representative of (CF^-(S^3_{p/q}(K), [spinc]), phi).

    Strong inversions: class [0] (integer) gives (A_0, phi_K); framing 2m with
    class [m] gives the v-v wedge of A_m.  Rational p/q: q odd gives
    [(q-1)/2] with A_0; p or q even gives [(p+q-1)/2] with the wedge of A_0.
    ``wedge="hv"`` selects the h-v form A_{-m} -> B_m <- A_m instead.
    Periodic: integer class s in (-n/2, n/2] gives A_s (graded by gr_z when
    s < 0); rational n/m with class s in [0, n-1] gives A_{floor(s/m)}.
    The grading shift is d(L(p, q), [spinc]).
    """
    p, q = parse_surgery(surgery)
    if p <= 0:
        raise ValueError("local representatives are provided for positive surgeries")
    if kind == SI:
        if q == 1:
            s = 0 if spinc is None else spinc % p
            if s == 0:
                A, phi = _slice_phi(knot, SI, 0, symmetry)
                return PhiComplex(A, phi, lens_d(p, 1, 0), f"A0({knot.name})")
            if 2 * s == p:
                if wedge == "hv":
                    return hv_wedge(knot, s, symmetry)
                c, phi = v_wedge(knot, s)
                return PhiComplex(c, phi, lens_d(p, 1, s), f"wedge A{s}({knot.name})")
            raise ValueError(f"class [{s}] is not fixed by the involution")
        if q % 2 == 1:
            s = (q - 1) // 2 % p
            if spinc is not None and spinc % p != s:
                raise ValueError(f"representative is known for class [{s}] only")
            A, phi = _slice_phi(knot, SI, 0, symmetry)
            return PhiComplex(A, phi, lens_d(p, q, s), f"A0({knot.name})")
        s = (p + q - 1) // 2 % p
        if spinc is not None and spinc % p != s:
            raise ValueError(f"representative is known for class [{s}] only")
        c, phi = v_wedge(knot, 0)
        return PhiComplex(c, phi, lens_d(p, q, s), f"wedge A0({knot.name})")
    if kind == PERIODIC:
        if q == 1:
            s = class_representative(0 if spinc is None else spinc, p)
            A, phi = _slice_phi(knot, PERIODIC, s, symmetry)
            shift = lens_d(p, 1, s % p) + (-2 * s if s < 0 else 0)
            return PhiComplex(A, phi, shift, f"A{s}({knot.name})")
        s = 0 if spinc is None else spinc % p
        j = s // q
        A, phi = _slice_phi(knot, PERIODIC, j, symmetry)
        return PhiComplex(A, phi, lens_d(p, q, s), f"A{j}({knot.name})")
    raise ValueError(f"unknown symmetry kind {kind!r}")


# ---------------------------------------------------------------------------
# Z^k comparison


def multiply_z(knot: KnotModel, s: int, k: int) -> Map:
    """Multiplication by Z^k from A_s to A_{s+k} (k >= 0) as a U-map."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    c = knot.complex
    src, tgt = alexander_slice(c, s), alexander_slice(c, s + k)
    ents = {}
    for lab in src.ids:
        g, a, b = src.origin[lab]
        a2, b2 = slice_monomial(c.alexander(g), s + k)
        u = a - a2
        assert u == b + k - b2 and u >= 0
        ents[lab] = {slice_label((a2, b2), g): URing.poly([u])}
    return Map(src, tgt, ents, EQUIVARIANT, 0, f"Z^{k}")
