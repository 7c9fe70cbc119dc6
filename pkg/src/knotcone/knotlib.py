"""Model knot complexes over F2[W,Z] and their symmetry maps."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .complex import (
    EQUIVARIANT,
    SKEW,
    BigradedComplex,
    Generator,
    Map,
    add,
    compose,
    dual,
    dual_map,
    swap_complex,
    tensor,
    tensor_maps,
)
from .ring import WZPoly, swap_wz, wz

SI = "si"
PERIODIC = "periodic"


@dataclass
class KnotModel:
    """A knot complex together with named maps.

    ``symmetries`` maps a name to ``(kind, map)`` where kind is ``"si"`` for
    strong inversions (skew) and ``"periodic"`` (equivariant).
    """

    name: str
    complex: BigradedComplex
    iota: Map | None = None
    symmetries: dict = field(default_factory=dict)
    note: str = ""

    @property
    def rank(self) -> int:
        return self.complex.rank

    def symmetry(self, kind: str, name: str | None = None) -> Map:
        if name is not None:
            k, f = self.symmetries[name]
            if k != kind:
                raise ValueError(f"symmetry {name!r} is {k}, not {kind}")
            return f
        for _, (k, f) in self.symmetries.items():
            if k == kind:
                return f
        raise KeyError(f"{self.name} carries no {kind} symmetry")

    def maps(self) -> dict:
        out = {}
        if self.iota is not None:
            out["iota"] = self.iota
        for n, (_, f) in self.symmetries.items():
            out[n] = f
        return out

    def to_json(self, include_maps: bool = True) -> dict:
        out = {"name": self.name, "complex": self.complex.to_json()}
        if include_maps:
            maps = {}
            if self.iota is not None:
                maps["iota"] = {"kind": "iota", **self.iota.to_json()}
            for n, (kind, f) in self.symmetries.items():
                maps[n] = {"kind": kind, **f.to_json()}
            out["maps"] = maps
        return out

    @classmethod
    def from_json(cls, data) -> "KnotModel":
        try:
            c = BigradedComplex.from_json(data["complex"])
            iota, syms = None, {}
            for n, m in data.get("maps", {}).items():
                kind = m.get("kind")
                f = Map.from_json(m, c)
                f.name = n
                if kind == "iota":
                    iota = f
                elif kind in (SI, PERIODIC):
                    syms[n] = (kind, f)
                else:
                    raise ValueError(f"map {n!r} has unknown kind {kind!r}")
            return cls(str(data.get("name", "")), c, iota, syms)
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed knot JSON: {exc!r}") from exc


def _map(c, rows, variance, shift=(0, 0), name=""):
    ents = {}
    for g, img in rows.items():
        ents[g] = {h: (WZPoly([m]) if isinstance(m, tuple) else m) for h, m in img.items()}
    return Map(c, c, ents, variance, shift, name)


# ---------------------------------------------------------------------------
# Staircases C_n for T(2n, 2n+1)


def staircase_steps(n: int) -> list[int]:
    """Step lengths (1, 2n-1, 2, 2n-2, ..., 2n-1, 1) of length 4n - 2."""
    out = []
    for i in range(1, 2 * n):
        out += [i, 2 * n - i]
    return out


def x_name(k: int) -> str:
    return f"x{k}"


def y_name(k: int) -> str:
    return f"y{k}"


def staircase_torus(n: int) -> KnotModel:
    """C_n: x_k (k even, |k| <= 2n-2) and y_l (l odd, |l| <= 2n-1).

    ``d x_k = Z^{c(2n-1+k)} y_{k-1} + W^{c(2n+k)} y_{k+1}``; the top
    generator y_{2n-1} has gr_w = 0 and the bottom one y_{1-2n} has gr_z = 0.
    """
    if n < 1:
        raise ValueError("staircase_torus needs n >= 1")
    c = staircase_steps(n)
    step = lambda i: c[i - 1]  # noqa: E731  (1-based)
    genus = n * (2 * n - 1)
    gr = {y_name(2 * n - 1): (0, -2 * genus)}
    diff = {}
    for k in range(2 * n - 2, -2 * n, -2):
        a, b = step(2 * n - 1 + k), step(2 * n + k)
        yw = gr[y_name(k + 1)]
        gx = (yw[0] - 2 * b + 1, yw[1] + 1)
        gr[x_name(k)] = gx
        gr[y_name(k - 1)] = (gx[0] - 1, gx[1] - 1 + 2 * a)
        diff[x_name(k)] = {y_name(k - 1): wz(0, a), y_name(k + 1): wz(b, 0)}
    assert gr[y_name(1 - 2 * n)][1] == 0, "staircase grading anchor mismatch"
    # canonical order: x's by index, then y's by index
    xs = [x_name(k) for k in range(2 - 2 * n, 2 * n - 1, 2)]
    ys = [y_name(k) for k in range(1 - 2 * n, 2 * n, 2)]
    gens = [Generator(g, *gr[g]) for g in xs + ys]
    cx = BigradedComplex(gens, diff)
    phi = _map(cx, {g: {_negate(g): (0, 0)} for g in cx.ids}, SKEW, name="phi_std")
    return KnotModel(f"torus:{n}", cx, iota=phi, symmetries={"phi_std": (SI, phi)},
                     note=f"staircase for T({2 * n},{2 * n + 1})")


def _negate(g: str) -> str:
    letter, idx = g[0], int(g[1:])
    return f"{letter}{-idx}"


TREFOIL_ALIASES = {"y": "x0", "x": "y1", "z": "y-1"}


def trefoil() -> KnotModel:
    """The right-handed trefoil with generators named x, y, z (d y = W x + Z z)."""
    base = staircase_torus(1)
    cx = base.complex.relabel(TREFOIL_ALIASES_INV)
    order = ["x", "y", "z"]
    cx = BigradedComplex([cx.gen(g) for g in order], cx.differential)
    phi = _map(cx, {"x": {"z": (0, 0)}, "y": {"y": (0, 0)}, "z": {"x": (0, 0)}}, SKEW, name="phi")
    return KnotModel("trefoil", cx, iota=phi, symmetries={"phi": (SI, phi)})


TREFOIL_ALIASES_INV = {v: k for k, v in TREFOIL_ALIASES.items()}


# ---------------------------------------------------------------------------
# Figure-eight


def figure_eight() -> KnotModel:
    gens = [Generator("x0", 0, 0), Generator("a", 0, 0), Generator("b", 1, -1),
            Generator("c", -1, 1), Generator("e", 0, 0)]
    diff = {"a": {"b": wz(1, 0), "c": wz(0, 1)}, "b": {"e": wz(0, 1)}, "c": {"e": wz(1, 0)}}
    cx = BigradedComplex(gens, diff)
    one = (0, 0)
    iota = _map(cx, {"x0": {"x0": one, "e": one}, "a": {"a": one, "x0": one},
                     "b": {"c": one}, "c": {"b": one}, "e": {"e": one}}, SKEW, name="iota")
    sigma = _map(cx, {"x0": {"x0": one, "e": one}, "a": {"a": one},
                      "b": {"c": one}, "c": {"b": one}, "e": {"e": one}}, SKEW, name="sigma")
    sigma_p = _map(cx, {"x0": {"x0": one}, "a": {"a": one, "e": one},
                        "b": {"c": one}, "c": {"b": one}, "e": {"e": one}}, SKEW, name="sigma_prime")
    phi = _map(cx, {"x0": {"x0": one, "e": one}, "a": {"a": one, "x0": one},
                    "b": {"b": one}, "c": {"c": one}, "e": {"e": one}}, EQUIVARIANT, name="phi")
    return KnotModel("fig8", cx, iota=iota,
                     symmetries={"sigma": (SI, sigma), "sigma_prime": (SI, sigma_p),
                                 "phi": (PERIODIC, phi)})


# ---------------------------------------------------------------------------
# Box complex


def box(n: int) -> KnotModel:
    """v plus the square d r0 = W^n r1 + Z^n r_{-1}, d r_{-1} = W^n t, d r1 = Z^n t."""
    if n < 1:
        raise ValueError("box needs n >= 1")
    gens = [Generator("v", 0, 0), Generator("t", 0, 0), Generator("r1", 1, 1 - 2 * n),
            Generator("r-1", 1 - 2 * n, 1), Generator("r0", 2 - 2 * n, 2 - 2 * n)]
    diff = {"r0": {"r1": wz(n, 0), "r-1": wz(0, n)}, "r-1": {"t": wz(n, 0)}, "r1": {"t": wz(0, n)}}
    cx = BigradedComplex(gens, diff)
    one = (0, 0)
    phi = _map(cx, {"v": {"v": one, "t": one}, "t": {"t": one}, "r0": {"r0": one},
                    "r1": {"r-1": one}, "r-1": {"r1": one}}, SKEW, name="phi")
    return KnotModel(f"box:{n}", cx, iota=None, symmetries={"phi": (SI, phi)})


def unknot() -> KnotModel:
    cx = BigradedComplex([Generator("u", 0, 0)], {})
    one = cx.identity()
    phi = Map(cx, cx, {"u": {"u": WZPoly([(0, 0)])}}, SKEW, (0, 0), "phi")
    return KnotModel("unknot", cx, iota=phi,
                     symmetries={"phi": (SI, phi), "periodic": (PERIODIC, one)})


# ---------------------------------------------------------------------------
# Basepoint maps


def _derivative(c: BigradedComplex, axis: int) -> Map:
    ents = {}
    for g, row in c.differential.items():
        out = {}
        for h, p in row.items():
            monos = set()
            for m in p:
                if m[axis] % 2:
                    mm = (m[0] - 1, m[1]) if axis == 0 else (m[0], m[1] - 1)
                    monos ^= {mm}
            if monos:
                out[h] = WZPoly(monos)
        if out:
            ents[g] = out
    shift = (1, -1) if axis == 0 else (-1, 1)
    return Map(c, c, ents, EQUIVARIANT, shift, "Phi" if axis == 0 else "Psi")


def basepoint_Phi(c: BigradedComplex) -> Map:
    """Formal W-derivative of the differential."""
    return _derivative(c, 0)


def basepoint_Psi(c: BigradedComplex) -> Map:
    """Formal Z-derivative of the differential."""
    return _derivative(c, 1)


def sarkar_xi(c: BigradedComplex) -> Map:
    return add(c.identity(), compose(basepoint_Psi(c), basepoint_Phi(c)), check=False)


# ---------------------------------------------------------------------------
# Swap involution on C (x) C


def swap_involution(model: KnotModel, sep: str = "|") -> tuple[BigradedComplex, Map]:
    """``(id + Phi (x) Psi) o Sq o Sw`` on C (x) C for a staircase model.

    Sw exchanges the factors; Sq is the W/Z exchange combined with
    index negation in each factor, so ``Sq Sw (a|b) = neg(b)|neg(a)``.
    """
    c = model.complex
    for g in c.ids:
        if not re.fullmatch(r"[xy]-?\d+", g) or _negate(g) not in c:
            raise ValueError(f"{model.name} lacks the index-negation identification")
    cc = tensor(c, c, sep)
    sq_sw = Map(cc, cc, {f"{a}{sep}{b}": {f"{_negate(b)}{sep}{_negate(a)}": WZPoly([(0, 0)])}
                         for a in c.ids for b in c.ids}, SKEW, (0, 0), "SqSw")
    corr = tensor_maps(basepoint_Phi(c), basepoint_Psi(c), cc, cc, sep)
    fix = add(cc.identity(), corr, check=False)
    phi = compose(fix, sq_sw)
    phi.name = "phi_sw"
    n = (c.rank + 1) // 4
    if n in (1, 3) and c.rank == 4 * n - 1:
        # pins the factor convention: x0x0 -> x0x0 + U^(n-1) y1y-1
        corner = {f"x0{sep}x0": {(0, 0)}, f"y1{sep}y-1": {(n - 1, n - 1)}}
        got = {h: set(p) for h, p in phi.row(f"x0{sep}x0").items()}
        if got != corner:
            raise AssertionError(f"swap involution convention drifted: {got}")
    return cc, phi


# ---------------------------------------------------------------------------
# Combinations


def connected_sum(k1: KnotModel, k2: KnotModel, sep: str = "|") -> KnotModel:
    cx = tensor(k1.complex, k2.complex, sep)
    syms = {}
    for kind in (SI, PERIODIC):
        try:
            f1, f2 = k1.symmetry(kind), k2.symmetry(kind)
        except KeyError:
            continue
        syms[f"{kind}_sum"] = (kind, tensor_maps(f1, f2, cx, cx, sep))
    return KnotModel(f"{k1.name}#{k2.name}", cx, iota=None, symmetries=syms,
                     note="iota of a connected sum is not synthesized")


def mirror(model: KnotModel) -> KnotModel:
    c = model.complex
    cd = dual(c)
    ddual = lambda f: dual_map(f, cd, cd)  # noqa: E731
    syms = {n: (k, ddual(f)) for n, (k, f) in model.symmetries.items()}
    return KnotModel(f"mirror({model.name})", cd,
                     iota=ddual(model.iota) if model.iota is not None else None, symmetries=syms)


def reverse_map(f: Map, c_new: BigradedComplex) -> Map:
    ents = {g: {h: swap_wz(p) for h, p in row.items()} for g, row in f.entries.items()}
    return Map(c_new, c_new, ents, f.variance, (f.shift[1], f.shift[0]), f.name)


def reverse(model: KnotModel) -> KnotModel:
    cr = swap_complex(model.complex)
    syms = {n: (k, reverse_map(f, cr)) for n, (k, f) in model.symmetries.items()}
    return KnotModel(f"reverse({model.name})", cr,
                     iota=reverse_map(model.iota, cr) if model.iota is not None else None,
                     symmetries=syms)


# ---------------------------------------------------------------------------
# Knot spec strings


class KnotSpecError(ValueError):
    pass


def _atom(name: str) -> KnotModel:
    if name == "unknot":
        return unknot()
    if name in ("fig8", "4_1"):
        return figure_eight()
    if name == "trefoil":
        return trefoil()
    m = re.fullmatch(r"(torus|box):(\d+)", name)
    if m:
        n = int(m.group(2))
        if n < 1:
            raise KnotSpecError(f"{name}: n must be positive")
        return staircase_torus(n) if m.group(1) == "torus" else box(n)
    raise KnotSpecError(f"unknown knot {name!r}")


def parse_knot(spec: str) -> KnotModel:
    """Parse ``torus:n``, ``fig8``, ``box:n``, ``unknot``, ``trefoil``,
    ``mirror(...)``, ``reverse(...)`` and ``#`` connected sums."""
    text = spec.replace(" ", "")
    pos = 0

    def expr():
        nonlocal pos
        left = term()
        while pos < len(text) and text[pos] == "#":
            pos += 1
            left = connected_sum(left, term())
        return left

    def term():
        nonlocal pos
        for op, fn in (("mirror(", mirror), ("reverse(", reverse)):
            if text.startswith(op, pos):
                pos += len(op)
                inner = expr()
                if pos >= len(text) or text[pos] != ")":
                    raise KnotSpecError(f"missing ')' in {spec!r}")
                pos += 1
                return fn(inner)
        m = re.compile(r"[A-Za-z0-9_:]+").match(text, pos)
        if not m:
            raise KnotSpecError(f"cannot parse knot spec {spec!r} at {pos}")
        pos = m.end()
        return _atom(m.group(0))

    out = expr()
    if pos != len(text):
        raise KnotSpecError(f"trailing characters in {spec!r}")
    return out
