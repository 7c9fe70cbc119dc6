"""Splitting of C_n (x) C_n into the small summand Y_n and a complement G_n.

C_n is the staircase complex of T(2n, 2n+1), tensored with itself and carrying
the summand-swapping involution.  Elements are dictionaries
``{"a|b": WZPoly}``.  Every coefficient beyond the leading term of a G_n
generator is forced by bigrading; :meth:`SwapDecomposition.homogeneous`
solves for it.  A coefficient whose forced monomial does not have the
declared shape (pure U, pure W, ...) is kept and logged in
``shape_mismatches``.  A term no nonnegative monomial can make homogeneous
is left out and logged in ``absent_terms``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complex import EQUIVARIANT, SKEW, BigradedComplex, Generator, Map, add, compose, elem_add
from .complex import WZRing
from .knotlib import staircase_torus, swap_involution
from .linalg import F2System, solve_nullhomotopy
from .ring import WZPoly

ANY = "WZ"


class ShapeError(ValueError):
    """An element whose terms do not share one bigrading."""


def _x(k: int) -> str:
    return f"x{k}"


def _y(k: int) -> str:
    return f"y{k}"


def pair(a: str, b: str) -> str:
    return f"{a}|{b}"


@dataclass
class Family:
    tag: str
    elements: list = field(default_factory=list)


class SwapDecomposition:
    """Builds Y_n and G_n for odd n and checks the splitting claims."""

    def __init__(self, n: int, repair: bool = False):
        if n < 1 or n % 2 == 0:
            raise ValueError("the decomposition is defined for odd n >= 1")
        self.n = n
        # repair: the box correction of the anti-diagonal xy/yx families falls
        # back to the other box element when the listed one has no coefficient
        self.repair = repair
        model = staircase_torus(n)
        self.factor = model.complex
        self.complex, self.phi = swap_involution(model)
        self.evens = list(range(2 - 2 * n, 2 * n - 1, 2))
        self.odds = list(range(1 - 2 * n, 2 * n, 2))
        self.shape_mismatches: list = []
        self.absent_terms: list = []
        self.substituted_terms: list = []
        self._tag = "Y"
        self.Y = self._build_Y()
        self.families = self._build_G()

    # element helpers --------------------------------------------------------
    def grading(self, label: str) -> tuple[int, int]:
        return self.complex.grading(label)

    def homogeneous(self, lead: str, *terms) -> dict:
        """``lead + sum(monomial * element)`` with each monomial forced by bigrading.

        ``terms`` are ``(shape, label_or_element)``; shape is "1", "U", "W", "Z"
        or "WZ".  An element argument is a dict whose labels share one bigrading.
        A list of targets is tried in order and the first that fits is used.
        """
        gw, gz = self.grading(lead)
        out = {lead: WZPoly({(0, 0)})}
        for shape, target in terms:
            options = target if isinstance(target, list) else [target]
            for pos, option in enumerate(options):
                elem = self._as_elem(option)
                some = next(iter(elem))
                m, w = self._elem_grading(elem)
                a2, b2 = Fraction(m - gw, 2), Fraction(w - gz, 2)
                if a2.denominator == 1 and b2.denominator == 1 and a2 >= 0 and b2 >= 0:
                    break
            else:
                self.absent_terms.append((self._tag, lead, next(iter(self._as_elem(options[0])))))
                continue
            if pos:
                self.substituted_terms.append((self._tag, lead, some))
            a, b = int(a2), int(b2)
            ok = {"1": a == b == 0, "U": a == b, "W": b == 0, "Z": a == 0, ANY: True}[shape]
            if not ok:
                self.shape_mismatches.append((self._tag, lead, some, shape, (a, b)))
            for lab, p in elem.items():
                mono = next(iter(p))
                out = elem_add(out, {lab: WZPoly({(mono[0] + a, mono[1] + b)})}, WZRing)
        return out

    @staticmethod
    def _as_elem(option) -> dict:
        return {option: WZPoly({(0, 0)})} if isinstance(option, str) else option

    def _elem_grading(self, elem: dict) -> tuple[int, int]:
        gr = set()
        for lab, p in elem.items():
            for (a, b) in p:
                gw, gz = self.grading(lab)
                gr.add((gw - 2 * a, gz - 2 * b))
        if len(gr) != 1:
            raise ShapeError(f"inhomogeneous element {elem}")
        return gr.pop()

    def sym(self, a: str, b: str) -> dict:
        return {pair(a, b): WZPoly({(0, 0)}), pair(b, a): WZPoly({(0, 0)})}

    # Y_n ----------------------------------------------------------------------
    def _build_Y(self) -> list[tuple[str, dict]]:
        n = self.n
        one = WZPoly({(0, 0)})
        gens = []
        # staircase part: y_i y_i, y_i y_{i+2} and the x connectors between them
        for i in self.odds:
            gens.append((f"{_y(i)}{_y(i)}", {pair(_y(i), _y(i)): one}))
            if i + 2 <= 2 * n - 1:
                gens.append((f"{_y(i)}{_y(i + 2)}", {pair(_y(i), _y(i + 2)): one}))
        for i in self.odds:
            # connectors y_i x_{i+1} and x_{i+1} y_{i+2} on either side of y_i y_{i+2}
            if i + 1 <= 2 * n - 2:
                gens.append((f"{_y(i)}{_x(i + 1)}", {pair(_y(i), _x(i + 1)): one}))
                gens.append((f"{_x(i + 1)}{_y(i + 2)}", {pair(_x(i + 1), _y(i + 2)): one}))
        # the box; y_{-1} y_1 is already a staircase generator, so the box uses the symmetric sum
        gens.append(("box:yy", self.sym(_y(1), _y(-1))))
        gens.append(("box:y-x", self.sym(_y(-1), _x(0))))
        gens.append(("box:y+x", self.sym(_y(1), _x(0))))
        gens.append(("box:xx", {pair(_x(0), _x(0)): one}))
        return gens

    # G_n ----------------------------------------------------------------------
    def _build_G(self) -> list[Family]:
        n = self.n
        fams = []

        def put(f, lead, *terms):
            self._tag = f.tag
            f.elements.append(self.homogeneous(lead, *terms))

        def fam(tag):
            f = Family(tag)
            fams.append(f)
            return f

        f1 = fam("yy_sym")
        for a in self.odds:
            for b in self.odds:
                if a < b and a != -b:
                    f1.elements.append(self.sym(_y(a), _y(b)))
        f2 = fam("yx_sym")
        for i in self.odds:
            for j in self.evens:
                if j not in (-i + 1, -i - 1):
                    f2.elements.append(self.sym(_y(i), _x(j)))
        f3, f4, f5, f6, f7, f8 = (fam(t) for t in ("xx_diag_pos", "xx_diag_neg", "xx_anti_odd",
                                                    "xx_anti_even", "xx_inner_outer", "xx_outer_inner"))
        for i in self.evens:
            if i > 0:
                k = n - i // 2
                terms = []
                if (k * (2 * n - k)) % 2:
                    terms.append((ANY, pair(_y(i + 1), _y(i - 1))))
                    self._check_monomial(pair(_x(i), _x(i)), pair(_y(i + 1), _y(i - 1)),
                                         (k - 1, 2 * n - k - 1))
                put(f3, pair(_x(i), _x(i)), *terms)
            elif i < 0:
                put(f4, pair(_x(i), _x(i)))
        for i in self.evens:
            if i <= 0:
                continue
            m = i // 2
            if m % 2:
                put(f5, pair(_x(-i), _x(i)))
                put(f5, pair(_x(i), _x(-i)))
            else:
                put(f6, pair(_x(-i), _x(i)), ("U", pair(_x(0), _x(0))))
                put(f6, pair(_x(i), _x(-i)), ("U", pair(_x(0), _x(0))))
        for i in self.evens:
            for j in self.evens:
                if abs(i) < abs(j):
                    ki, kj = n - i // 2, n - j // 2
                    terms = []
                    if (ki * (2 * n - kj)) % 2:
                        terms.append((ANY, pair(_y(i + 1), _y(j - 1))))
                        self._check_monomial(pair(_x(i), _x(j)), pair(_y(i + 1), _y(j - 1)),
                                             (ki - 1, 2 * n - kj - 1))
                    put(f7, pair(_x(i), _x(j)), *terms)
                elif abs(i) > abs(j):
                    put(f8, pair(_x(i), _x(j)))
        f9 = fam("yy_ladder")
        for i in self.odds:
            for j in self.odds:
                if i < j - 2 and i != -j:
                    put(f9, pair(_y(i), _y(j)), ("U", pair(_y(i + 2), _y(j - 2))))
        f10, f11 = fam("yy_anti_odd"), fam("yy_anti_even")
        for i in self.odds:
            if i <= 2:
                continue
            m = (i - 1) // 2
            box = self.sym(_y(1), _y(-1))
            if m % 2:
                put(f10, pair(_y(i), _y(-i)), ("U", pair(_y(i - 2), _y(-i + 2))))
                put(f10, pair(_y(-i), _y(i)), ("U", pair(_y(-i + 2), _y(i - 2))))
            else:
                put(f11, pair(_y(i), _y(-i)), ("U", pair(_y(i - 2), _y(-i + 2))), ("U", box))
                put(f11, pair(_y(-i), _y(i)), ("U", pair(_y(-i + 2), _y(i - 2))), ("U", box))
        f12, f13 = fam("xy_ladder"), fam("xy_anti_even")
        for i in self.evens:
            for j in self.evens:
                if i >= j:
                    continue
                if i == -j and (j // 2) % 2 == 0:
                    put(f13, pair(_x(-j), _y(j + 1)), ("W", pair(_y(-j + 1), _x(j))), (ANY, self._box(-1)))
                    put(f13, pair(_y(-j - 1), _x(j)), ("Z", pair(_x(-j), _y(j - 1))), (ANY, self._box(1)))
                    continue
                put(f12, pair(_x(i), _y(j + 1)), ("W", pair(_y(i + 1), _x(j))))
                put(f12, pair(_y(-j - 1), _x(-i)), ("Z", pair(_x(-j), _y(-i - 1))))
        f14, f15, f16 = fam("yx_anti_odd"), fam("yx_anti_even"), fam("yx_adjacent")
        for j in self.evens:
            if j <= 0:
                continue
            m = j // 2
            if m % 2:
                put(f14, pair(_y(j + 1), _x(-j)), ("Z", pair(_x(j), _y(-j + 1))))
                put(f14, pair(_x(j), _y(-j - 1)), ("W", pair(_y(j - 1), _x(-j))))
            else:
                put(f15, pair(_y(j + 1), _x(-j)), ("Z", pair(_x(j), _y(-j + 1))), (ANY, self._box(-1)))
                put(f15, pair(_x(j), _y(-j - 1)), ("W", pair(_y(j - 1), _x(-j))), (ANY, self._box(1)))
            put(f16, pair(_y(j - 1), _x(-j)), ("W", pair(_x(j - 2), _y(-j + 1))))
            put(f16, pair(_x(j), _y(-j + 1)), ("Z", pair(_y(j - 1), _x(-j + 2))))
        return fams

    def _box(self, side: int):
        first = self.sym(_y(side), _x(0))
        return [first, self.sym(_y(-side), _x(0))] if self.repair else first

    def _check_monomial(self, lead: str, other: str, mono: tuple[int, int]) -> None:
        gw, gz = self.grading(lead)
        tw, tz = self.grading(other)
        if (tw - 2 * mono[0], tz - 2 * mono[1]) != (gw, gz):
            raise ShapeError(f"{lead}: requested monomial W^{mono[0]} Z^{mono[1]} on {other} is not homogeneous")

    # ranks and spans ------------------------------------------------------------
    @property
    def G(self) -> list[dict]:
        return [e for f in self.families for e in f.elements]

    def ranks(self) -> tuple[int, int, int]:
        return self.complex.rank, len(self.Y), len(self.G)

    def family_counts(self) -> dict:
        return {f.tag: len(f.elements) for f in self.families}

    def _in_span(self, target: dict, basis: list[dict]) -> dict | None:
        """Coefficients c_i (single monomials, forced by grading) with sum c_i e_i = target."""
        if not target:
            return {}
        tg = self._elem_grading(target)
        cands = []
        for idx, e in enumerate(basis):
            eg = self._elem_grading(e)
            a2, b2 = Fraction(eg[0] - tg[0], 2), Fraction(eg[1] - tg[1], 2)
            if a2.denominator == 1 and b2.denominator == 1 and a2 >= 0 and b2 >= 0:
                cands.append((idx, (int(a2), int(b2))))
        slots: dict = {}
        for v, (idx, (a, b)) in enumerate(cands):
            for lab, p in basis[idx].items():
                for (pa, pb) in p:
                    key = (lab, pa + a, pb + b)
                    slots[key] = slots.get(key, 0) ^ (1 << v)
        rhs = {}
        for lab, p in target.items():
            for m in p:
                rhs[(lab, m[0], m[1])] = 1
        system = F2System(len(cands))
        for s in set(slots) | set(rhs):
            system.add(slots.get(s, 0), rhs.get(s, 0))
        sol = system.solution()
        if sol is None:
            return None
        return {cands[v][0]: cands[v][1] for v in range(len(cands)) if sol >> v & 1}

    def span_check(self) -> list[str]:
        """Generators of C_n (x) C_n not in the F[W,Z]-span of Y_n and G_n."""
        basis = [e for _, e in self.Y] + self.G
        missing = []
        for g in self.complex.ids:
            if self._in_span({g: WZPoly({(0, 0)})}, basis) is None:
                missing.append(g)
        return missing

    def apply_d(self, elem: dict) -> dict:
        return self.complex.apply_d(elem)

    def subcomplex_failures(self, which: str) -> list[int]:
        elems = [e for _, e in self.Y] if which == "Y" else self.G
        return [i for i, e in enumerate(elems) if self._in_span(self.apply_d(e), elems) is None]

    def phi_preserves_Y(self) -> list[int]:
        elems = [e for _, e in self.Y]
        return [i for i, e in enumerate(elems) if self._in_span(self.phi.apply(e), elems) is None]

    # Y_n as a complex with I, Pi and the homotopy -------------------------------
    def y_complex(self) -> tuple[BigradedComplex, Map, Map, Map]:
        """(Y_n, I, Pi, phi restricted to Y_n)."""
        names = [name for name, _ in self.Y]
        elems = [e for _, e in self.Y]
        gens = []
        for name, e in self.Y:
            gw, gz = self._elem_grading(e)
            gens.append(Generator(name, gw, gz))
        diff = {}
        for name, e in self.Y:
            c = self._in_span(self.apply_d(e), elems)
            diff[name] = {names[i]: WZPoly({m}) for i, m in c.items()}
        Yc = BigradedComplex(gens, diff)
        incl = Map(Yc, self.complex, {name: e for name, e in self.Y}, EQUIVARIANT)
        phiY = {}
        for name, e in self.Y:
            c = self._in_span(self.phi.apply(e), elems)
            phiY[name] = {names[i]: WZPoly({m}) for i, m in c.items()}
        phi_Y = Map(Yc, Yc, phiY, SKEW, self.phi.shift)
        basis = elems + self.G
        proj = {}
        for g in self.complex.ids:
            c = self._in_span({g: WZPoly({(0, 0)})}, basis)
            row = {names[i]: WZPoly({m}) for i, m in c.items() if i < len(elems)}
            if row:
                proj[g] = row
        Pi = Map(self.complex, Yc, proj, EQUIVARIANT)
        return Yc, incl, Pi, phi_Y

    def closed_form_homotopy(self, Yc, defect: Map) -> Map:
        """Cancel each ``U^t (y1y-1 + y-1y1)`` defect row with ``W^(t-n) Z^t (y-1x0 + x0y-1)``.

        ``d(y-1x0 + x0y-1) = W^n (y1y-1 + y-1y1)``, so the rows are killed
        exactly; any other kind of defect raises.
        """
        entries = {}
        for g, row in defect.entries.items():
            if not row:
                continue
            if set(row) != {"box:yy"} or len(row["box:yy"]) != 1:
                raise ValueError(f"defect at {g} is not a single U-power of the box class")
            a, b = next(iter(row["box:yy"]))
            if a != b or a < self.n:
                raise ValueError(f"defect at {g} has coefficient W^{a} Z^{b}")
            entries[g] = {"box:y-x": WZPoly({(a - self.n, b)})}
        shift = tuple(a - b for a, b in zip(self.phi.shift, BigradedComplex.d_shift))
        return Map(self.complex, Yc, entries, SKEW, shift)

    def splitting_report(self) -> dict:
        Yc, I, Pi, phi_Y = self.y_complex()
        report = {
            "ranks": list(self.ranks()),
            "families": self.family_counts(),
            "span_missing": self.span_check(),
            "G_subcomplex_failures": self.subcomplex_failures("G"),
            "Y_subcomplex_failures": self.subcomplex_failures("Y"),
            "Y_verify": Yc.verify().ok,
            "I_chain": I.is_chain_map()[0],
            "Pi_chain": Pi.is_chain_map()[0],
        }
        report["I_equivariant"] = add(compose(self.phi, I), compose(I, phi_Y), check=False).is_zero()
        defect = add(compose(Pi, self.phi), compose(phi_Y, Pi), check=False)
        defect = Map(self.complex, Yc, defect.entries, SKEW, self.phi.shift)
        report["Pi_strictly_equivariant"] = defect.is_zero()
        h = solve_nullhomotopy(defect)
        report["Pi_homotopy_found"] = h.found
        report["Pi_homotopy_entries"] = sum(len(r) for r in h.homotopy.entries.values()) if h.found else None
        self._homotopy = h.homotopy
        closed = self.closed_form_homotopy(Yc, defect)
        commutator = add(compose(Yc.differential_map(), closed),
                         compose(closed, self.complex.differential_map()), check=False)
        report["closed_form_homotopy_ok"] = (not closed.homogeneity_violations()
                                            and add(commutator, defect, check=False).is_zero())
        report["shape_mismatches"] = [list(m[:4]) for m in self.shape_mismatches]
        report["absent_terms"] = [list(m) for m in self.absent_terms]
        report["substituted_terms"] = [list(m) for m in self.substituted_terms]
        return report
