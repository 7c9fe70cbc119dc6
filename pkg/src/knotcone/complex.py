"""Free bigraded complexes over F2[W,Z], F2[U]-complexes and graded maps.

A complex stores its differential as ``{source: {target: poly}}`` where
``poly`` is a :class:`~knotcone.ring.WZPoly` (knot complexes) or a
:class:`~knotcone.ring.UPoly` (F2[U]-complexes).  Elements are plain dicts
``{generator: poly}``.

A :class:`Map` between two complexes of the same kind carries a variance.
Skew maps satisfy ``f(W x) = Z f(x)``; their stored entries are the raw
images of generators, and the W <-> Z exchange is applied to ring
coefficients only when a skew map is pushed through them (in
:meth:`Map.apply`, :func:`compose` and the chain-map check).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .ring import (
    UPoly,
    WZPoly,
    format_wz,
    format_wz_mono,
    parse_wz,
    poly_mul,
    swap_wz,
)

EQUIVARIANT = "equivariant"
SKEW = "skew"


# ---------------------------------------------------------------------------
# Coefficient rings


class WZRing:
    """Adapter for F2[W,Z] with bigrading ``(gr_w, gr_z)``."""

    name = "WZ"
    zero = WZPoly()
    one = WZPoly(((0, 0),))

    @staticmethod
    def mul(p, q) -> WZPoly:
        return poly_mul(p, q)

    @staticmethod
    def transport(p) -> WZPoly:
        return swap_wz(p)

    @staticmethod
    def poly(monos) -> WZPoly:
        return WZPoly(monos)

    @staticmethod
    def mono_degree(m):
        return (-2 * m[0], -2 * m[1])

    @staticmethod
    def divisible_by_u(m) -> bool:
        return min(m) >= 1

    @staticmethod
    def forced_mono(src_gr, tgt_gr, shift, skew):
        """Monomial ``c`` with ``gr(c * tgt) = image grading of src``, or None."""
        if skew:
            want = (src_gr[1] + shift[0], src_gr[0] + shift[1])
        else:
            want = (src_gr[0] + shift[0], src_gr[1] + shift[1])
        dw = tgt_gr[0] - want[0]
        dz = tgt_gr[1] - want[1]
        if dw < 0 or dz < 0 or dw % 2 or dz % 2:
            return None
        return (dw // 2, dz // 2)

    @staticmethod
    def image_grading(src_gr, shift, skew):
        if skew:
            return (src_gr[1] + shift[0], src_gr[0] + shift[1])
        return (src_gr[0] + shift[0], src_gr[1] + shift[1])

    @staticmethod
    def term_grading(mono, gr):
        return (gr[0] - 2 * mono[0], gr[1] - 2 * mono[1])

    @staticmethod
    def format(p) -> str:
        return format_wz(p)

    @staticmethod
    def parse(text: str) -> WZPoly:
        return parse_wz(text)


class URing:
    """Adapter for F2[U] with a single rational Maslov grading."""

    name = "U"
    zero = UPoly()
    one = UPoly((0,))

    @staticmethod
    def mul(p, q) -> UPoly:
        return UPoly(p) * UPoly(q)

    @staticmethod
    def transport(p) -> UPoly:
        return p

    @staticmethod
    def poly(monos) -> UPoly:
        return UPoly(monos)

    @staticmethod
    def mono_degree(m):
        return -2 * m

    @staticmethod
    def divisible_by_u(m) -> bool:
        return m >= 1

    @staticmethod
    def forced_mono(src_gr, tgt_gr, shift, skew):
        diff = Fraction(tgt_gr) - (Fraction(src_gr) + Fraction(shift))
        if diff < 0 or diff.denominator != 1 or diff.numerator % 2:
            return None
        return diff.numerator // 2

    @staticmethod
    def image_grading(src_gr, shift, skew):
        return Fraction(src_gr) + Fraction(shift)

    @staticmethod
    def term_grading(mono, gr):
        return Fraction(gr) - 2 * mono

    @staticmethod
    def format(p) -> str:
        terms = sorted(p)
        out = []
        for k in terms:
            out.append("1" if k == 0 else ("U" if k == 1 else f"U^{k}"))
        return " + ".join(out) or "0"

    @staticmethod
    def parse(text: str) -> UPoly:
        text = text.strip()
        if text in ("", "0"):
            return UPoly()
        monos: set = set()
        for term in text.split("+"):
            term = term.strip()
            if term == "1":
                k = 0
            elif term == "U":
                k = 1
            elif term.startswith("U^"):
                k = int(term[2:])
            else:
                raise ValueError(f"cannot parse U-monomial {term!r}")
            if k < 0:
                raise ValueError("negative U exponent")
            monos ^= {k}
        return UPoly(monos)


# ---------------------------------------------------------------------------
# Elements


def elem_add(a: Mapping, b: Mapping, ring) -> dict:
    out = dict(a)
    for g, c in b.items():
        s = ring.poly(frozenset(out.get(g, ring.zero)) ^ frozenset(c))
        if s:
            out[g] = s
        else:
            out.pop(g, None)
    return out


def elem_accumulate(acc: dict, g, c: frozenset) -> None:
    """In place ``acc[g] += c`` with cancellation (c is a frozenset)."""
    cur = acc.get(g)
    if cur is None:
        if c:
            acc[g] = c
        return
    s = frozenset(cur) ^ c
    if s:
        acc[g] = s
    else:
        del acc[g]


# ---------------------------------------------------------------------------
# Complexes


@dataclass(frozen=True)
class Generator:
    id: str
    gr_w: int
    gr_z: int

    @property
    def alexander(self) -> int:
        return (self.gr_w - self.gr_z) // 2

    @property
    def grading(self) -> tuple[int, int]:
        return (self.gr_w, self.gr_z)


@dataclass(frozen=True)
class Violation:
    kind: str
    generator: str
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"{v.kind} at {v.generator}: {v.detail}" for v in self.violations)


class _ComplexBase:
    """Shared storage for both complex kinds."""

    ring = WZRing

    def __init__(self, ids: Iterable[str], gradings: Mapping, differential: Mapping,
                 origin: Mapping | None = None):
        ids = tuple(ids)
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate generator ids")
        self._ids = ids
        self._index = {g: i for i, g in enumerate(ids)}
        self._gr = {g: gradings[g] for g in ids}
        diff: dict = {}
        for g, row in differential.items():
            if g not in self._index:
                raise KeyError(f"differential from unknown generator {g!r}")
            clean = {}
            for h, c in row.items():
                if h not in self._index:
                    raise KeyError(f"differential into unknown generator {h!r}")
                c = self.ring.poly(c)
                if c:
                    clean[h] = c
            if clean:
                diff[g] = clean
        self._diff = diff
        self.origin = dict(origin or {})

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    @property
    def rank(self) -> int:
        return len(self._ids)

    def index(self, g: str) -> int:
        return self._index[g]

    def __contains__(self, g: str) -> bool:
        return g in self._index

    def grading(self, g: str):
        return self._gr[g]

    def d(self, g: str) -> dict:
        return self._diff.get(g, {})

    @property
    def differential(self) -> dict:
        return {g: dict(r) for g, r in self._diff.items()}

    def apply_d(self, elem: Mapping) -> dict:
        acc: dict = {}
        for g, c in elem.items():
            for h, e in self.d(g).items():
                elem_accumulate(acc, h, frozenset(self.ring.mul(c, e)))
        return {h: self.ring.poly(c) for h, c in acc.items()}

    def verify(self) -> VerificationReport:
        """Check d^2 = 0 and homogeneity of every differential term."""
        bad = []
        for g in self._ids:
            src = self._gr[g]
            want = self.ring.image_grading(src, self.d_shift, False)
            for h, c in self.d(g).items():
                for m in c:
                    got = self.ring.term_grading(m, self._gr[h])
                    if got != want:
                        bad.append(Violation(
                            "grading", g,
                            f"term {self.ring.format(self.ring.poly([m]))} {h} has grading {got}, expected {want}"))
            dd = self.apply_d(self.d(g))
            if dd:
                terms = " + ".join(f"({self.ring.format(c)}) {h}" for h, c in sorted(dd.items()))
                bad.append(Violation("d^2", g, f"d(d({g})) = {terms}"))
        return VerificationReport(tuple(bad))

    def identity(self) -> "Map":
        return Map(self, self, {g: {g: self.ring.one} for g in self._ids}, EQUIVARIANT, self.zero_shift)

    def zero_map(self, target=None, shift=None, variance=EQUIVARIANT) -> "Map":
        return Map(self, target or self, {}, variance, self.zero_shift if shift is None else shift)

    def differential_map(self) -> "Map":
        return Map(self, self, self._diff, EQUIVARIANT, self.d_shift)


class BigradedComplex(_ComplexBase):
    """Finitely generated free complex over F2[W,Z] with (gr_w, gr_z)."""

    ring = WZRing
    d_shift = (-1, -1)
    zero_shift = (0, 0)

    def __init__(self, generators: Iterable[Generator], differential: Mapping,
                 origin: Mapping | None = None):
        gens = tuple(generators)
        self.generators = gens
        super().__init__([g.id for g in gens], {g.id: g.grading for g in gens}, differential, origin)
        self._gen = {g.id: g for g in gens}

    def gen(self, g: str) -> Generator:
        return self._gen[g]

    def alexander(self, g: str) -> int:
        gw, gz = self._gr[g]
        return (gw - gz) // 2

    def verify(self) -> VerificationReport:
        rep = super().verify()
        extra = [Violation("alexander", g.id, "gr_w - gr_z is odd")
                 for g in self.generators if (g.gr_w - g.gr_z) % 2]
        return VerificationReport(rep.violations + tuple(extra))

    def relabel(self, names: Mapping[str, str]) -> "BigradedComplex":
        gens = [Generator(names.get(g.id, g.id), g.gr_w, g.gr_z) for g in self.generators]
        diff = {names.get(g, g): {names.get(h, h): c for h, c in row.items()} for g, row in self._diff.items()}
        return BigradedComplex(gens, diff)

    def to_json(self) -> dict:
        return {
            "generators": [{"id": g.id, "gr_w": g.gr_w, "gr_z": g.gr_z} for g in self.generators],
            "differential": [
                {"from": g, "to": h, "coef": format_wz(c)}
                for g in self._ids for h, c in sorted(self.d(g).items(), key=lambda kv: self._index[kv[0]])
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "BigradedComplex":
        try:
            gens = [Generator(str(g["id"]), int(g["gr_w"]), int(g["gr_z"])) for g in data["generators"]]
            diff: dict = {}
            for e in data.get("differential", []):
                row = diff.setdefault(str(e["from"]), {})
                c = parse_wz(str(e.get("coef", "1")))
                row[str(e["to"])] = WZPoly(frozenset(row.get(str(e["to"]), WZPoly())) ^ c)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed complex JSON: {exc}") from exc
        return cls(gens, diff)


def _frac_json(x: Fraction):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class UComplex(_ComplexBase):
    """Free F2[U]-complex with rational Maslov grading; d drops grading by 1."""

    ring = URing
    d_shift = Fraction(-1)
    zero_shift = Fraction(0)

    def __init__(self, ids: Iterable[str], gradings: Mapping, differential: Mapping,
                 origin: Mapping | None = None):
        super().__init__(ids, {g: Fraction(gradings[g]) for g in ids}, differential, origin)

    def shifted(self, delta) -> "UComplex":
        delta = Fraction(delta)
        return UComplex(self._ids, {g: self._gr[g] + delta for g in self._ids}, self._diff, self.origin)

    def relabel(self, names: Mapping[str, str]) -> "UComplex":
        ids = [names.get(g, g) for g in self._ids]
        gr = {names.get(g, g): self._gr[g] for g in self._ids}
        diff = {names.get(g, g): {names.get(h, h): c for h, c in row.items()} for g, row in self._diff.items()}
        origin = {names.get(g, g): o for g, o in self.origin.items()}
        return UComplex(ids, gr, diff, origin)

    def to_json(self) -> dict:
        return {
            "generators": [{"id": g, "gr": _frac_json(self._gr[g])} for g in self._ids],
            "differential": [
                {"from": g, "to": h, "coef": URing.format(c)}
                for g in self._ids for h, c in sorted(self.d(g).items(), key=lambda kv: self._index[kv[0]])
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "UComplex":
        try:
            ids = [str(g["id"]) for g in data["generators"]]
            gr = {str(g["id"]): Fraction(str(g["gr"])) for g in data["generators"]}
            diff: dict = {}
            for e in data.get("differential", []):
                row = diff.setdefault(str(e["from"]), {})
                c = URing.parse(str(e.get("coef", "1")))
                row[str(e["to"])] = UPoly(frozenset(row.get(str(e["to"]), UPoly())) ^ c)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed complex JSON: {exc}") from exc
        return cls(ids, gr, diff)


def free_tower(gr=0, name: str = "1") -> UComplex:
    """F2[U] on one generator in the given grading."""
    return UComplex([name], {name: Fraction(gr)}, {})


# ---------------------------------------------------------------------------
# Maps


class Map:
    """Homogeneous module map between two complexes of the same kind."""

    def __init__(self, source, target, entries: Mapping, variance: str = EQUIVARIANT, shift=None,
                 name: str = ""):
        if variance not in (EQUIVARIANT, SKEW):
            raise ValueError(f"unknown variance {variance!r}")
        if source.ring is not target.ring:
            raise ValueError("source and target must have the same coefficient ring")
        self.source = source
        self.target = target
        self.variance = variance
        self.shift = source.zero_shift if shift is None else (
            Fraction(shift) if source.ring is URing else tuple(shift))
        self.name = name
        ring = source.ring
        ents: dict = {}
        for g, row in entries.items():
            if g not in source:
                raise KeyError(f"map entry from unknown generator {g!r}")
            clean = {}
            for h, c in row.items():
                if h not in target:
                    raise KeyError(f"map entry into unknown generator {h!r}")
                c = ring.poly(c)
                if c:
                    clean[h] = c
            if clean:
                ents[g] = clean
        self._entries = ents

    @property
    def ring(self):
        return self.source.ring

    @property
    def skew(self) -> bool:
        return self.variance == SKEW

    @property
    def entries(self) -> dict:
        return {g: dict(r) for g, r in self._entries.items()}

    def row(self, g: str) -> dict:
        return self._entries.get(g, {})

    def __call__(self, elem) -> dict:
        return self.apply(elem)

    def apply(self, elem: Mapping | str) -> dict:
        if isinstance(elem, str):
            elem = {elem: self.ring.one}
        ring = self.ring
        acc: dict = {}
        for g, c in elem.items():
            c = ring.transport(c) if self.skew else c
            for h, e in self.row(g).items():
                elem_accumulate(acc, h, frozenset(ring.mul(c, e)))
        return {h: ring.poly(c) for h, c in acc.items()}

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, Map):
            return NotImplemented
        return (self.source is other.source or self.source.ids == other.source.ids) and \
            self._entries == other._entries and self.variance == other.variance

    def __hash__(self):  # pragma: no cover - maps are used as values
        return id(self)

    def __add__(self, other: "Map") -> "Map":
        return add(self, other)

    def __matmul__(self, other: "Map") -> "Map":
        return compose(self, other)

    def homogeneity_violations(self) -> list[str]:
        ring = self.ring
        bad = []
        for g, row in self._entries.items():
            want = ring.image_grading(self.source.grading(g), self.shift, self.skew)
            for h, c in row.items():
                for m in c:
                    got = ring.term_grading(m, self.target.grading(h))
                    if got != want:
                        bad.append(f"{g} -> {h}: grading {got}, expected {want}")
        return bad

    def chain_defect(self) -> "Map":
        """The map ``f d + d f``; zero exactly for chain maps."""
        d_src = self.source.differential_map()
        d_tgt = self.target.differential_map()
        return add(compose(self, d_src), compose(d_tgt, self), check=False)

    def is_chain_map(self) -> tuple[bool, str | None]:
        """(True, None) or (False, first generator where f d != d f)."""
        if self.homogeneity_violations():
            return False, "grading: " + self.homogeneity_violations()[0]
        defect = self.chain_defect()
        for g in self.source.ids:
            if defect.row(g):
                return False, g
        return True, None

    def restrict(self, gens: Iterable[str]) -> "Map":
        keep = set(gens)
        return Map(self.source, self.target, {g: r for g, r in self._entries.items() if g in keep},
                   self.variance, self.shift)

    def to_json(self) -> dict:
        ring = self.ring
        shift = list(self.shift) if ring is WZRing else _frac_json(self.shift)
        return {
            "variance": self.variance,
            "shift": shift,
            "entries": [
                {"from": g, "to": h, "coef": ring.format(c)}
                for g in self.source.ids
                for h, c in sorted(self.row(g).items(), key=lambda kv: self.target.index(kv[0]))
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, source, target=None) -> "Map":
        target = target or source
        ring = source.ring
        ents: dict = {}
        try:
            for e in data.get("entries", []):
                row = ents.setdefault(str(e["from"]), {})
                c = ring.parse(str(e.get("coef", "1")))
                row[str(e["to"])] = ring.poly(frozenset(row.get(str(e["to"]), ring.zero)) ^ c)
            shift = data.get("shift")
            if shift is not None and ring is URing:
                shift = Fraction(str(shift))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed map JSON: {exc}") from exc
        return cls(source, target, ents, data.get("variance", EQUIVARIANT), shift)

    def __repr__(self) -> str:
        ring = self.ring
        parts = []
        for g in self.source.ids:
            row = self.row(g)
            if row:
                img = " + ".join(f"{'' if c == ring.one else '(' + ring.format(c) + ')'}{h}".strip()
                                 for h, c in row.items())
                parts.append(f"{g} -> {img}")
        return f"Map[{self.variance}]({'; '.join(parts) or '0'})"


def _compose_shift(f: Map, g: Map):
    ring = f.ring
    if ring is URing:
        return Fraction(f.shift) + Fraction(g.shift)
    # gradings move by g, then by f (exchanged when f is skew)
    gw, gz = g.shift
    fw, fz = f.shift
    if f.skew:
        return (gz + fw, gw + fz)
    return (gw + fw, gz + fz)


def compose(f: Map, g: Map) -> Map:
    """``f o g``; skew factors transport coefficients through W <-> Z."""
    if g.target is not f.source and g.target.ids != f.source.ids:
        raise ValueError("compose: target of the inner map is not the source of the outer map")
    ring = f.ring
    out: dict = {}
    for x, row in g._entries.items():
        acc: dict = {}
        for y, c in row.items():
            c = ring.transport(c) if f.skew else c
            for z, e in f.row(y).items():
                elem_accumulate(acc, z, frozenset(ring.mul(c, e)))
        if acc:
            out[x] = acc
    variance = SKEW if f.skew != g.skew else EQUIVARIANT
    return Map(g.source, f.target, out, variance, _compose_shift(f, g))


def add(f: Map, g: Map, check: bool = True) -> Map:
    """Sum of two maps with the same source, target and variance."""
    if check:
        if f.variance != g.variance:
            raise ValueError("add: variance mismatch")
        if f.shift != g.shift and not (f.is_zero() or g.is_zero()):
            raise ValueError("add: grading shift mismatch")
    out: dict = {x: dict(r) for x, r in f._entries.items()}
    for x, row in g._entries.items():
        acc = out.setdefault(x, {})
        for y, c in row.items():
            elem_accumulate(acc, y, frozenset(c))
    shift = g.shift if f.is_zero() else f.shift
    variance = g.variance if f.is_zero() else f.variance
    return Map(f.source, f.target, out, variance, shift)


def power(f: Map, k: int) -> Map:
    out = f.source.identity()
    for _ in range(k):
        out = compose(f, out)
    return out


def scale(f: Map, poly) -> Map:
    """Post-multiply every entry of f by a ring element."""
    ring = f.ring
    ents = {x: {y: ring.mul(c, poly) for y, c in row.items()} for x, row in f._entries.items()}
    shift = f.shift
    if ring is URing:
        shift = Fraction(shift) - 2 * min(poly) if poly else shift
    else:
        if poly:
            a, b = min(poly)
            shift = (shift[0] - 2 * a, shift[1] - 2 * b)
    return Map(f.source, f.target, ents, f.variance, shift)


# ---------------------------------------------------------------------------
# Constructions on knot complexes


def tensor(c1: BigradedComplex, c2: BigradedComplex, sep: str = "|") -> BigradedComplex:
    """Tensor product over F2[W,Z]; generator ``a|b`` for each pair."""
    gens = []
    for a in c1.generators:
        for b in c2.generators:
            gens.append(Generator(f"{a.id}{sep}{b.id}", a.gr_w + b.gr_w, a.gr_z + b.gr_z))
    diff: dict = {}
    for a in c1.ids:
        for b in c2.ids:
            row: dict = {}
            for a2, c in c1.d(a).items():
                elem_accumulate(row, f"{a2}{sep}{b}", frozenset(c))
            for b2, c in c2.d(b).items():
                elem_accumulate(row, f"{a}{sep}{b2}", frozenset(c))
            if row:
                diff[f"{a}{sep}{b}"] = row
    origin = {f"{a}{sep}{b}": (a, b) for a in c1.ids for b in c2.ids}
    return BigradedComplex(gens, diff, origin)


def tensor_maps(f: Map, g: Map, source: BigradedComplex, target: BigradedComplex,
                sep: str = "|") -> Map:
    """``f (x) g`` on tensor complexes; both factors must have the same variance."""
    if f.variance != g.variance:
        raise ValueError("tensor_maps: both factors need the same variance")
    ents: dict = {}
    for a in f.source.ids:
        for b in g.source.ids:
            row: dict = {}
            for a2, c1 in f.row(a).items():
                for b2, c2 in g.row(b).items():
                    elem_accumulate(row, f"{a2}{sep}{b2}", frozenset(poly_mul(c1, c2)))
            if row:
                ents[f"{a}{sep}{b}"] = row
    fs, gs = f.shift, g.shift
    return Map(source, target, ents, f.variance, (fs[0] + gs[0], fs[1] + gs[1]))


def dual(c: BigradedComplex, suffix: str = "*") -> BigradedComplex:
    """Negated gradings and transposed differential."""
    gens = [Generator(g.id + suffix, -g.gr_w, -g.gr_z) for g in c.generators]
    diff: dict = {}
    for g in c.ids:
        for h, p in c.d(g).items():
            diff.setdefault(h + suffix, {})[g + suffix] = p
    out = BigradedComplex(gens, diff)
    return out


def dual_map(f: Map, src_dual: BigradedComplex, tgt_dual: BigradedComplex, suffix: str = "*") -> Map:
    """Transpose of ``f: C -> C'`` as a map ``C'* -> C*``."""
    ents: dict = {}
    for g, row in f._entries.items():
        for h, p in row.items():
            coef = f.ring.transport(p) if f.skew else p
            ents.setdefault(h + suffix, {})[g + suffix] = coef
    s = f.shift
    shift = (-s[1], -s[0]) if f.skew else (-s[0], -s[1])
    return Map(tgt_dual, src_dual, ents, f.variance, shift)


def swap_complex(c: BigradedComplex) -> BigradedComplex:
    """Exchange W and Z everywhere (gradings exchanged too)."""
    gens = [Generator(g.id, g.gr_z, g.gr_w) for g in c.generators]
    diff = {g: {h: swap_wz(p) for h, p in row.items()} for g, row in c.differential.items()}
    return BigradedComplex(gens, diff)


# ---------------------------------------------------------------------------
# Alexander slices


def slice_monomial(alex: int, s: int) -> tuple[int, int]:
    """Minimal ``(a, b)`` with ``alex - a + b = s``."""
    return (alex - s, 0) if alex >= s else (0, s - alex)


def slice_label(mono: tuple[int, int], g: str) -> str:
    return g if mono == (0, 0) else f"{format_wz_mono(mono)} {g}"


def alexander_slice(c: BigradedComplex, s: int) -> UComplex:
    """The F2[U]-subcomplex of elements of Alexander grading s.

    Generator ``W^a Z^b g`` for each knot generator g, with (a, b) minimal;
    the Maslov grading is gr_w.  ``origin`` maps each label to (g, a, b).
    """
    ids, gr, origin = [], {}, {}
    label_of = {}
    for g in c.generators:
        m = slice_monomial(g.alexander, s)
        lab = slice_label(m, g.id)
        label_of[g.id] = (lab, m)
        ids.append(lab)
        gr[lab] = g.gr_w - 2 * m[0]
        origin[lab] = (g.id, m[0], m[1])
    diff: dict = {}
    for g in c.ids:
        lab, (a, b) = label_of[g]
        row: dict = {}
        for h, p in c.d(g).items():
            lab2, (a2, b2) = label_of[h]
            for (pw, pz) in p:
                k = a + pw - a2
                assert k == b + pz - b2 and k >= 0, "slice bookkeeping"
                elem_accumulate(row, lab2, frozenset((k,)))
        if row:
            diff[lab] = row
    return UComplex(ids, gr, diff, origin)


def slice_map(f: Map, s_src: int, s_tgt: int, src_slice: UComplex | None = None,
              tgt_slice: UComplex | None = None) -> Map:
    """Restriction of a homogeneous knot-complex map to Alexander slices.

    For an equivariant f the slices must agree up to the map's Alexander
    shift; for a skew map, ``s_tgt`` is normally ``-s_src``.
    """
    c1, c2 = f.source, f.target
    src_slice = src_slice or alexander_slice(c1, s_src)
    tgt_slice = tgt_slice or alexander_slice(c2, s_tgt)
    ents: dict = {}
    for g in c1.ids:
        a, b = slice_monomial(c1.alexander(g), s_src)
        lab = slice_label((a, b), g)
        x = (b, a) if f.skew else (a, b)
        row: dict = {}
        for h, p in f.row(g).items():
            a2, b2 = slice_monomial(c2.alexander(h), s_tgt)
            lab2 = slice_label((a2, b2), h)
            for (pw, pz) in p:
                tw, tz = x[0] + pw, x[1] + pz
                k = tw - a2
                if k != tz - b2 or k < 0:
                    raise ValueError(f"map does not send slice {s_src} to slice {s_tgt}")
                elem_accumulate(row, lab2, frozenset((k,)))
        if row:
            ents[lab] = row
    gw_shift = _slice_shift(f, s_src)
    return Map(src_slice, tgt_slice, ents, EQUIVARIANT, gw_shift)


def _slice_shift(f: Map, s: int) -> Fraction:
    # Maslov grading on a slice is gr_w; a skew map sends gr_z (= gr_w - 2s) to gr_w.
    if f.skew:
        return Fraction(f.shift[0] - 2 * s)
    return Fraction(f.shift[0])


# ---------------------------------------------------------------------------
# F2[U]-complex constructions


def u_tensor(c1: UComplex, c2: UComplex, sep: str = "|") -> UComplex:
    ids, gr, diff = [], {}, {}
    for a in c1.ids:
        for b in c2.ids:
            g = f"{a}{sep}{b}"
            ids.append(g)
            gr[g] = c1.grading(a) + c2.grading(b)
            row: dict = {}
            for a2, c in c1.d(a).items():
                elem_accumulate(row, f"{a2}{sep}{b}", frozenset(c))
            for b2, c in c2.d(b).items():
                elem_accumulate(row, f"{a}{sep}{b2}", frozenset(c))
            if row:
                diff[g] = row
    return UComplex(ids, gr, diff, {f"{a}{sep}{b}": (a, b) for a in c1.ids for b in c2.ids})


def u_tensor_maps(f: Map, g: Map, source: UComplex, target: UComplex, sep: str = "|") -> Map:
    ents: dict = {}
    for a in f.source.ids:
        for b in g.source.ids:
            row: dict = {}
            for a2, p1 in f.row(a).items():
                for b2, p2 in g.row(b).items():
                    elem_accumulate(row, f"{a2}{sep}{b2}", frozenset(URing.mul(p1, p2)))
            if row:
                ents[f"{a}{sep}{b}"] = row
    return Map(source, target, ents, EQUIVARIANT, Fraction(f.shift) + Fraction(g.shift))


def u_dual(c: UComplex, suffix: str = "*") -> UComplex:
    ids = [g + suffix for g in c.ids]
    gr = {g + suffix: -c.grading(g) for g in c.ids}
    diff: dict = {}
    for g in c.ids:
        for h, p in c.d(g).items():
            diff.setdefault(h + suffix, {})[g + suffix] = p
    return UComplex(ids, gr, diff)


def u_dual_map(f: Map, src_dual: UComplex, tgt_dual: UComplex, suffix: str = "*") -> Map:
    ents: dict = {}
    for g, row in f._entries.items():
        for h, p in row.items():
            ents.setdefault(h + suffix, {})[g + suffix] = p
    return Map(tgt_dual, src_dual, ents, EQUIVARIANT, -Fraction(f.shift))


def direct_sum(parts: Iterable[tuple[str, UComplex]]) -> UComplex:
    """Direct sum with generator ``prefix:g``."""
    ids, gr, diff, origin = [], {}, {}, {}
    for prefix, c in parts:
        for g in c.ids:
            G = f"{prefix}:{g}"
            ids.append(G)
            gr[G] = c.grading(g)
            origin[G] = (prefix, g)
            row = {f"{prefix}:{h}": p for h, p in c.d(g).items()}
            if row:
                diff[G] = row
    return UComplex(ids, gr, diff, origin)


def to_json_text(obj) -> str:
    return json.dumps(obj, sort_keys=False)
