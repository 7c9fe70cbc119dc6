"""Type-D modules over the surgery algebra and their box tensor with the solid torus.

Idempotent 0 generators are knot-complex generators with (gr_w, gr_z);
idempotent 1 generators carry (gr, A).  An arrow ``x -> y`` is an algebra
element in the sector ``I_idem(y) . K . I_idem(x)``, so that ``delta1(x)``
contains ``y (x) a``.  Coefficients on connecting arrows are ``U^k T^m sigma``
or ``U^k T^m tau``; such an element has Maslov degree ``-2k - 1`` measured
from gr_w (sigma) or gr_z (tau) of its source.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .complex import EQUIVARIANT, BigradedComplex, Map, UComplex, VerificationReport, Violation
from .knotlib import KnotModel
from .linalg import F2System, solve_nullhomotopy
from .mapping_cone import IOTA, alpha, beta, localized_map, tower_projection, w_localized, z_localized
from .ring import (
    SIGMA,
    TAU,
    AlgebraElement,
    alg_mul,
    elliptic_E,
    format_algebra,
    format_ut_mono,
    format_wz_mono,
    parse_algebra,
    phi_sigma_mono,
    phi_tau_mono,
)
from .knotlib import SI


@dataclass(frozen=True)
class DGen:
    """A generator: ``gr`` is (gr_w, gr_z) in idempotent 0 and (gr, A) in idempotent 1."""

    id: str
    idem: int
    gr: tuple

    @property
    def alexander(self):
        if self.idem == 0:
            return Fraction(self.gr[0] - self.gr[1], 2)
        return self.gr[1]


def _sector(src: DGen, tgt: DGen) -> tuple[int, int]:
    return (tgt.idem, src.idem)


def _add_coeff(acc: dict, y: str, a: AlgebraElement) -> None:
    cur = acc.get(y)
    s = a if cur is None else cur + a
    if s:
        acc[y] = s
    else:
        acc.pop(y, None)


def _mul(b: AlgebraElement, a: AlgebraElement) -> AlgebraElement:
    return alg_mul(b, a)


class TypeDModule:
    """A type-D structure over the surgery algebra for a framed knot in S^3.

    ``framing`` is n and ``a_sigma`` the Alexander shift of sigma arrows
    (tau arrows shift by ``a_sigma + n``).
    """

    def __init__(self, generators: Iterable[DGen], delta: Mapping, framing: int,
                 a_sigma: int = 0, name: str = ""):
        self.generators = list(generators)
        self.gens = {g.id: g for g in self.generators}
        if len(self.gens) != len(self.generators):
            raise ValueError("duplicate generator ids")
        self.framing = framing
        self.a_sigma = a_sigma
        self.name = name
        clean: dict = {}
        for x, row in delta.items():
            if x not in self.gens:
                raise KeyError(f"arrow from unknown generator {x!r}")
            out = {}
            for y, a in row.items():
                if y not in self.gens:
                    raise KeyError(f"arrow into unknown generator {y!r}")
                want = _sector(self.gens[x], self.gens[y])
                if a and a.sector != want:
                    raise ValueError(f"arrow {x} -> {y} must lie in sector {want}, got {a.sector}")
                if a:
                    out[y] = a
            if out:
                clean[x] = out
        self.delta = clean

    @property
    def ids(self) -> list[str]:
        return [g.id for g in self.generators]

    def idem(self, g: str) -> int:
        return self.gens[g].idem

    def row(self, g: str) -> dict:
        return self.delta.get(g, {})

    def identity(self) -> "TypeDMorphism":
        ents = {}
        for g in self.generators:
            one = AlgebraElement(0, 0, {(0, 0)}) if g.idem == 0 else AlgebraElement(1, 1, {(0, 0)})
            ents[g.id] = {g.id: one}
        return TypeDMorphism(self, self, ents)

    def structure_defect(self) -> dict:
        """``sum b * a`` over composable arrow pairs, per (source, target)."""
        out: dict = {}
        for x, row in self.delta.items():
            acc: dict = {}
            for y, a in row.items():
                for z, b in self.row(y).items():
                    _add_coeff(acc, z, _mul(b, a))
            if acc:
                out[x] = acc
        return out

    def verify(self) -> VerificationReport:
        bad = []
        for x, row in self.structure_defect().items():
            for z, c in row.items():
                bad.append(Violation("structure relation", x, f"-> {z}: {format_algebra(c)}"))
        for x, row in self.delta.items():
            for y, a in row.items():
                if not morphism_entry_homogeneous(self, self, x, y, a, -1, self.a_sigma):
                    bad.append(Violation("grading", x, f"-> {y}: {format_algebra(a)}"))
        return VerificationReport(bad)

    def to_json(self) -> dict:
        return {
            "framing": self.framing,
            "a_sigma": self.a_sigma,
            "name": self.name,
            "generators": [
                {"id": g.id, "idempotent": g.idem, "gr": [_num(v) for v in g.gr]}
                for g in self.generators
            ],
            "delta1": {x: {y: format_algebra(a) for y, a in row.items()} for x, row in self.delta.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "TypeDModule":
        try:
            gens = [DGen(g["id"], int(g["idempotent"]), tuple(Fraction(v) for v in g["gr"]))
                    for g in data["generators"]]
            by_id = {g.id: g for g in gens}
            delta = {}
            for x, row in data.get("delta1", {}).items():
                delta[x] = {y: parse_algebra(t, _sector(by_id[x], by_id[y])) for y, t in row.items()}
            return cls(gens, delta, int(data["framing"]), int(data.get("a_sigma", 0)), data.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed type-D module: {exc}") from exc


def _num(v):
    v = Fraction(v)
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


# ---------------------------------------------------------------------------
# Gradings of morphism entries


def forced_coefficient(source: TypeDModule, target: TypeDModule, x: str, y: str,
                       degree: int, a_shift: int) -> list[AlgebraElement]:
    """The algebra monomials an entry ``x -> y`` of this degree may carry.

    ``a_shift`` is the Alexander shift of the idempotent-1 and sigma parts.
    """
    gx, gy = source.gens[x], target.gens[y]
    sec = _sector(gx, gy)
    out = []
    if sec == (0, 0):
        aw = Fraction(gy.gr[0] - gx.gr[0] - degree, 2)
        az = Fraction(gy.gr[1] - gx.gr[1] - degree, 2)
        if aw.denominator == 1 and az.denominator == 1 and aw >= 0 and az >= 0:
            out.append(AlgebraElement(0, 0, {(int(aw), int(az))}))
    elif sec == (1, 1):
        k = Fraction(gy.gr[0] - gx.gr[0] - degree, 2)
        m = gx.gr[1] + a_shift - gy.gr[1]
        if k.denominator == 1 and k >= 0 and Fraction(m).denominator == 1:
            out.append(AlgebraElement(1, 1, {(int(k), int(m))}))
    elif sec == (1, 0):
        n = source.framing
        for tag, src_gr, extra in ((SIGMA, gx.gr[0], 0), (TAU, gx.gr[1], n)):
            k = Fraction(gy.gr[0] - 1 - src_gr - degree, 2)
            m = gx.alexander + a_shift + extra - gy.gr[1]
            if k.denominator == 1 and k >= 0 and Fraction(m).denominator == 1:
                out.append(AlgebraElement(1, 0, {(int(k), int(m), tag)}))
    return out


def morphism_entry_homogeneous(source, target, x, y, a: AlgebraElement, degree, a_shift) -> bool:
    allowed = set()
    for c in forced_coefficient(source, target, x, y, degree, a_shift):
        allowed |= set(c.body)
    return set(a.body) <= allowed


# ---------------------------------------------------------------------------
# Morphisms


class TypeDMorphism:
    """``f(x) = sum y (x) a`` between two type-D modules."""

    def __init__(self, source: TypeDModule, target: TypeDModule, entries: Mapping,
                 degree: int = 0, a_shift: int | None = None, metadata: dict | None = None):
        self.source = source
        self.target = target
        self.degree = degree
        self.a_shift = target.a_sigma - source.a_sigma if a_shift is None else a_shift
        self.metadata = dict(metadata or {})
        clean = {}
        for x, row in entries.items():
            out = {}
            for y, a in row.items():
                want = _sector(source.gens[x], target.gens[y])
                if a and a.sector != want:
                    raise ValueError(f"entry {x} -> {y} must lie in sector {want}")
                if a:
                    out[y] = a
            if out:
                clean[x] = out
        self.entries = clean

    def row(self, x: str) -> dict:
        return self.entries.get(x, {})

    def is_zero(self) -> bool:
        return not self.entries

    def differential(self) -> dict:
        """``delta_Y o f + f o delta_X`` with algebra multiplication."""
        out: dict = {}
        for x in self.source.ids:
            acc: dict = {}
            for y, a in self.row(x).items():
                for z, b in self.target.row(y).items():
                    _add_coeff(acc, z, _mul(b, a))
            for w, c in self.source.row(x).items():
                for z, e in self.row(w).items():
                    _add_coeff(acc, z, _mul(e, c))
            if acc:
                out[x] = acc
        return out

    def is_cycle(self) -> bool:
        return not self.differential()

    def homogeneity_violations(self) -> list[str]:
        bad = []
        for x, row in self.entries.items():
            for y, a in row.items():
                if not morphism_entry_homogeneous(self.source, self.target, x, y, a,
                                                  self.degree, self.a_shift):
                    bad.append(f"{x} -> {y}: {format_algebra(a)}")
        return bad

    def __add__(self, other: "TypeDMorphism") -> "TypeDMorphism":
        ents = {x: dict(r) for x, r in self.entries.items()}
        for x, row in other.entries.items():
            acc = ents.setdefault(x, {})
            for y, a in row.items():
                _add_coeff(acc, y, a)
        return TypeDMorphism(self.source, self.target, ents, self.degree, self.a_shift)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "a_shift": self.a_shift,
            "entries": {x: {y: format_algebra(a) for y, a in row.items()} for x, row in self.entries.items()},
            "metadata": self.metadata,
        }


def compose_morphisms(f: TypeDMorphism, g: TypeDMorphism) -> TypeDMorphism:
    """``f o g``: coefficients multiply as ``(f-coefficient) * (g-coefficient)``."""
    out: dict = {}
    for x, row in g.entries.items():
        acc: dict = {}
        for y, a in row.items():
            for z, b in f.row(y).items():
                _add_coeff(acc, z, _mul(b, a))
        if acc:
            out[x] = acc
    return TypeDMorphism(g.source, f.target, out, f.degree + g.degree, f.a_shift + g.a_shift)


class MorphismUnknown:
    """Grading-forced unknown entries of a type-D morphism."""

    def __init__(self, source, target, degree, a_shift, allow=None):
        self.source, self.target = source, target
        self.degree, self.a_shift = degree, a_shift
        self.entries = []
        for x in source.ids:
            for y in target.ids:
                if allow is not None and not allow(x, y):
                    continue
                for c in forced_coefficient(source, target, x, y, degree, a_shift):
                    self.entries.append((x, y, c))

    def to_morphism(self, bits: int) -> TypeDMorphism:
        ents: dict = {}
        for i, (x, y, c) in enumerate(self.entries):
            if bits >> i & 1:
                _add_coeff(ents.setdefault(x, {}), y, c)
        return TypeDMorphism(self.source, self.target, ents, self.degree, self.a_shift)


def _slots(x, z, a: AlgebraElement):
    for m in a.body:
        yield (x, z, a.sector, m)


def solve_morphism(source: TypeDModule, target: TypeDModule, degree: int, a_shift: int,
                   rhs: Mapping, allow=None) -> TypeDMorphism | None:
    """Lexicographically first h (free variables zero) with ``d(h) = rhs``."""
    unk = MorphismUnknown(source, target, degree, a_shift, allow)
    rows: dict = {}
    for i, (x, y, c) in enumerate(unk.entries):
        bit = 1 << i
        for z, b in target.row(y).items():
            for s in _slots(x, z, _mul(b, c)):
                rows[s] = rows.get(s, 0) ^ bit
        # h o delta: x -> w (coefficient e) then w = x' of this entry
        for w in source.ids:
            e = source.row(w).get(x)
            if e is None:
                continue
            for s in _slots(w, y, _mul(c, e)):
                rows[s] = rows.get(s, 0) ^ bit
    const: dict = {}
    for x, row in rhs.items():
        for z, a in row.items():
            for s in _slots(x, z, a):
                const[s] = const.get(s, 0) ^ 1
    system = F2System(len(unk.entries))
    for s in set(rows) | set(const):
        system.add(rows.get(s, 0), const.get(s, 0))
    sol = system.solution()
    if sol is None:
        return None
    return unk.to_morphism(sol)


def is_null_homotopic(f: TypeDMorphism) -> TypeDMorphism | None:
    """A type-D homotopy h with d(h) = f, if one exists."""
    return solve_morphism(f.source, f.target, f.degree + 1, f.a_shift, f.entries)


# ---------------------------------------------------------------------------
# Construction from a knot complex


def _flip(knot: KnotModel, flip: str, symmetry: str | None) -> Map:
    if flip == IOTA:
        if knot.iota is None:
            raise ValueError(f"{knot.name} has no iota map")
        return knot.iota
    if flip == SI:
        return knot.symmetry(SI, symmetry)
    raise ValueError(f"unknown flip convention {flip!r}")


def type_d_from_cfk(knot: KnotModel, n: int, flip: str = IOTA, symmetry: str | None = None) -> TypeDModule:
    """The module whose sigma arrows encode v and tau arrows encode h_n.

    B = Z^{-1} CFK is projected onto its tower F[U] = [1]; the projection
    rho sends each generator g to U^{r(g)} p, which fixes the U powers.
    """
    if n == 0:
        raise ValueError("framing must be nonzero")
    c = knot.complex
    K = _flip(knot, flip, symmetry)
    B = z_localized(c)
    Bt = w_localized(c)
    _p, rho = tower_projection(B)
    r = {g: min(row["p"]) for g, row in rho.entries.items()}
    K_B = localized_map(K, Bt, B, "B")
    gens = [DGen(g.id, 0, (g.gr_w, g.gr_z)) for g in c.generators]
    gens.append(DGen("p", 1, (0, 0)))
    delta: dict = {}
    for g in c.ids:
        row: dict = {}
        for h, p in c.d(g).items():
            row[h] = AlgebraElement(0, 0, p)
        A = c.alexander(g)
        conn = set()
        if g in r:
            conn ^= {(r[g], A, SIGMA)}
        for h, u in K_B.row(g).items():
            if h in r:
                for e in u:
                    conn ^= {(e + r[h], A + n, TAU)}
        if conn:
            row["p"] = AlgebraElement(1, 0, conn)
        if row:
            delta[g] = row
    return TypeDModule(gens, delta, n, 0, f"X_{n}({knot.name})")


def tensor_E(X: TypeDModule, bar: str = "") -> TypeDModule:
    """X boxed with the elliptic bimodule: coefficients pass through E, gradings flip."""
    gens = []
    for g in X.generators:
        gr = (g.gr[1], g.gr[0]) if g.idem == 0 else (g.gr[0], -g.gr[1])
        gens.append(DGen(g.id + bar, g.idem, gr))
    delta = {x + bar: {y + bar: elliptic_E(a) for y, a in row.items()} for x, row in X.delta.items()}
    return TypeDModule(gens, delta, X.framing, -X.a_sigma - X.framing, X.name + "[E]")


# ---------------------------------------------------------------------------
# Box tensor with the solid torus


def d_label(g: str, idem: int, mono) -> str:
    if idem == 0:
        return f"{g}|{format_wz_mono(mono)}"
    return f"{g}|{format_ut_mono((0, mono))}"


def _reduce_wz(m):
    """W^i Z^j = U^min * (an F[U]-basis monomial)."""
    k = min(m)
    return k, (m[0] - k, m[1] - k)


def _act(a: AlgebraElement, d):
    """m2(a, d) for a basis element d: yields (U power, basis element)."""
    if a.sector == (0, 0):
        for (w, z) in a.body:
            yield _reduce_wz((w + d[0], z + d[1]))
    elif a.sector == (1, 1):
        for (u, t) in a.body:
            yield u, t + d
    else:
        for (u, t, tag) in a.body:
            push = phi_sigma_mono if tag == SIGMA else phi_tau_mono
            u2, t2 = push(d)
            yield u + u2, t + t2


@dataclass
class BoxTensor:
    """A truncated box tensor product: complex plus the basis bookkeeping."""

    complex: UComplex
    module: TypeDModule
    window: tuple[int, int]
    basis: dict = field(default_factory=dict)  # label -> (generator, idempotent, monomial)

    def cone_label(self, label: str) -> str:
        g, idem, mono = self.basis[label]
        if idem == 0:
            gen = self.module.gens[g]
            s = int(gen.alexander) - mono[0] + mono[1]
            from .complex import slice_label
            return f"A{s}:{slice_label(mono, g)}"
        t = self.module.gens[g].gr[1] + mono - self.module.a_sigma
        return f"B{t}:{g}"


def box_tensor_D(X: TypeDModule, window: tuple[int, int] | None = None) -> BoxTensor:
    """X boxed with the 0-framed solid torus module, truncated to a window.

    Idempotent-0 elements x|W^k, x|Z^k with Alexander index s in [a, b] and
    idempotent-1 elements p|T^t whose B index lies in [a + n, b]; arrows into
    omitted elements are dropped.  Gradings use the cone anchors.
    """
    n = X.framing
    if window is None:
        g = max(abs(int(gen.alexander)) for gen in X.generators if gen.idem == 0)
        window = (-(2 * g + abs(n)), 2 * g + abs(n))
    a, b = window
    basis: dict = {}
    gr: dict = {}
    index: dict = {}
    for gen in X.generators:
        if gen.idem == 0:
            A = int(gen.alexander)
            for s in range(a, b + 1):
                mono = (A - s, 0) if A >= s else (0, s - A)
                lab = d_label(gen.id, 0, mono)
                basis[lab] = (gen.id, 0, mono)
                index[(gen.id, mono)] = lab
                gr[lab] = gen.gr[0] - 2 * mono[0] + alpha(n, s)
        else:
            for bidx in range(a + n, b + 1):
                t = bidx - gen.gr[1] + X.a_sigma
                lab = d_label(gen.id, 1, t)
                basis[lab] = (gen.id, 1, t)
                index[(gen.id, t)] = lab
                gr[lab] = gen.gr[0] + beta(n, bidx)
    diff: dict = {}
    for lab, (g, idem, mono) in basis.items():
        row: dict = {}
        for y, coeff in X.row(g).items():
            for u, d2 in _act(coeff, mono):
                tgt = index.get((y, d2))
                if tgt is None:
                    continue
                cur = row.get(tgt, frozenset())
                row[tgt] = frozenset(cur) ^ {u}
        row = {k: v for k, v in row.items() if v}
        if row:
            diff[lab] = row
    c = UComplex(list(basis), gr, diff, {k: v for k, v in basis.items()})
    return BoxTensor(c, X, window, basis)


def varpi(label_basis: tuple):
    """The collapse [E] box D -> D on one basis element."""
    g, idem, mono = label_basis
    if idem == 0:
        return (mono[1], mono[0])
    return -mono


def box_morphism(f: TypeDMorphism, src: BoxTensor, tgt: BoxTensor, collapse: bool = False) -> Map:
    """``x|d -> sum y|m2(a, d)``, followed by varpi when ``collapse`` is set.

    With ``collapse`` the target of f is X boxed with [E] (same generator ids)
    and ``tgt`` is the box tensor of X itself.
    """
    tgt_index = {(g, mono): lab for lab, (g, _i, mono) in tgt.basis.items()}
    ents: dict = {}
    for lab, (g, _idem, mono) in src.basis.items():
        row: dict = {}
        for y, a in f.row(g).items():
            for u, d2 in _act(a, mono):
                if collapse:
                    d2 = varpi((y, f.target.idem(y), d2))
                t = tgt_index.get((y, d2))
                if t is None:
                    continue
                row[t] = frozenset(row.get(t, frozenset())) ^ {u}
        row = {k: v for k, v in row.items() if v}
        if row:
            ents[lab] = row
    return Map(src.complex, tgt.complex, ents, EQUIVARIANT, 0, "box")


# ---------------------------------------------------------------------------
# Induced morphisms


def _locally_null(f: Map, knot_complex: BigradedComplex) -> bool:
    B = z_localized(knot_complex)
    tgt = w_localized(knot_complex) if f.skew else B
    fl = localized_map(f, B, tgt, "Bt" if f.skew else "B")
    return solve_nullhomotopy(fl, check=False).found


def induced_morphism(f: Map, X: TypeDModule) -> TypeDMorphism:
    """The grading-preserving type-D morphism extending a knot-complex map.

    Equivariant f gives X -> X; skew f gives X -> X [E] (generator ids unchanged).
    The idempotent-1 part is T^(shift) unless f vanishes up to homotopy after
    localizing; the connecting part is the lexicographically first solution
    of the cycle condition.
    """
    c = f.source
    target = tensor_E(X) if f.skew else X
    a_shift = target.a_sigma - X.a_sigma
    ents: dict = {}
    for g in c.ids:
        row = {}
        for h, p in f.row(g).items():
            coeff = frozenset((z, w) for (w, z) in p) if f.skew else frozenset(p)
            row[h] = AlgebraElement(0, 0, coeff)
        if row:
            ents[g] = row
    locally_null = _locally_null(f, c)
    if not locally_null:
        for gen in X.generators:
            if gen.idem == 1:
                ents[gen.id] = {gen.id: AlgebraElement(1, 1, {(0, a_shift)})}
    base = TypeDMorphism(X, target, ents, 0, a_shift)
    defect = base.differential()
    idem = {g.id: g.idem for g in X.generators}
    g1 = solve_morphism(X, target, 0, a_shift, defect,
                        allow=lambda x, y: idem[x] == 0 and target.idem(y) == 1)
    if g1 is None:
        raise AssertionError("no connecting correction solves the cycle condition")
    out = base + g1
    out.metadata = {"g1": "lexicographically first solution (free variables set to 0)",
                    "locally_null": locally_null}
    assert out.is_cycle(), "induced morphism is not a cycle"
    bad = out.homogeneity_violations()
    assert not bad, f"induced morphism is not homogeneous: {bad}"
    return out


def to_json_text(obj) -> str:
    return json.dumps(obj, indent=None, sort_keys=True)
