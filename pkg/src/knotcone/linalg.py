"""Exact F2 linear algebra for graded complexes.

Every homogeneous map entry between two generators is a single monomial
fixed by the gradings, so unknown maps reduce to one F2 variable per
admissible (source, target) pair.  Linear conditions on unknown maps are
expressed as sums of ``post o X o pre`` and solved with a bitset Gaussian
elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .complex import (
    EQUIVARIANT,
    SKEW,
    Map,
    UComplex,
    URing,
    WZRing,
    elem_accumulate,
)


class NotAChainMap(ValueError):
    """Raised when a solver is handed a map that does not commute with d."""

    def __init__(self, generator: str):
        super().__init__(f"not a chain map: [d, F] is nonzero on generator {generator!r}")
        self.generator = generator


# ---------------------------------------------------------------------------
# Bitset solver


class F2System:
    """Incremental Gaussian elimination over F2 with int bitsets.

    Rows are stored in semi-echelon form keyed by their lowest set bit.
    ``solution()`` sets every free variable to 0, which makes it the
    lexicographically first solution in the sense of lowest-index-first.
    """

    def __init__(self, nvars: int = 0):
        self.nvars = nvars
        self._rows: dict[int, tuple[int, int]] = {}  # pivot bit -> (row, rhs)
        self.inconsistent = False
        self._pivot_mask = 0

    def add(self, row: int, rhs: int = 0) -> bool:
        """Add the equation ``row . x = rhs``; return False if it became inconsistent."""
        rows = self._rows
        while row:
            low = row & -row
            hit = rows.get(low)
            if hit is None:
                rows[low] = (row, rhs)
                self._pivot_mask |= low
                return True
            row ^= hit[0]
            rhs ^= hit[1]
        if rhs:
            self.inconsistent = True
            return False
        return True

    @property
    def rank(self) -> int:
        return len(self._rows)

    def solution(self) -> int | None:
        if self.inconsistent:
            return None
        x = 0
        for low in sorted(self._rows, reverse=True):
            row, rhs = self._rows[low]
            if (bin(row & x).count("1") & 1) ^ rhs:
                x |= low
        return x

    def free_variables(self) -> list[int]:
        return [i for i in range(self.nvars) if not (self._pivot_mask >> i) & 1]

    def kernel_vector(self, free_index: int) -> int:
        x = 1 << free_index
        for low in sorted(self._rows, reverse=True):
            row, _ = self._rows[low]
            if bin(row & x).count("1") & 1:
                x |= low
        return x

    def kernel_basis(self) -> list[int]:
        return [self.kernel_vector(i) for i in self.free_variables()]


def popcount(x: int) -> int:
    return bin(x).count("1")


class Subspace:
    """Span of bitset vectors with canonical (fully reduced) residues."""

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: dict[int, int] = {}
        self._mask = 0
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        rows = self._rows
        hit = v & self._mask
        while hit:
            low = hit & -hit
            v ^= rows[low]
            hit = v & self._mask
        return v

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        low = v & -v
        # keep existing rows free of the new pivot
        for p, r in list(self._rows.items()):
            if r & low:
                self._rows[p] = r ^ v
        self._rows[low] = v
        self._mask |= low
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self._rows)

    def basis(self) -> list[int]:
        return list(self._rows.values())


# ---------------------------------------------------------------------------
# Graded pieces of F2[U]-complexes


class GradedPiece:
    """F2 basis ``{(g, k) : gr(g) - 2k = grading}`` of one grading of a U-complex."""

    def __init__(self, complex_: UComplex, grading):
        self.complex = complex_
        self.grading = Fraction(grading)
        basis = []
        for g in complex_.ids:
            diff = complex_.grading(g) - self.grading
            if diff >= 0 and diff.denominator == 1 and diff.numerator % 2 == 0:
                basis.append((g, diff.numerator // 2))
        self.basis = basis
        self.index = {b: i for i, b in enumerate(basis)}

    def __len__(self) -> int:
        return len(self.basis)

    def vector(self, elem: Mapping) -> int:
        """Bitset of a homogeneous element ``{g: UPoly}`` in this grading."""
        v = 0
        for g, poly in elem.items():
            for k in poly:
                i = self.index.get((g, k))
                if i is None:
                    raise ValueError(f"{g} U^{k} is not in grading {self.grading}")
                v ^= 1 << i
        return v

    def element(self, v: int) -> dict:
        acc: dict = {}
        i = 0
        while v:
            if v & 1:
                g, k = self.basis[i]
                elem_accumulate(acc, g, frozenset((k,)))
            v >>= 1
            i += 1
        return {g: URing.poly(c) for g, c in acc.items()}


def map_columns(f: Map, src: GradedPiece, tgt: GradedPiece) -> list[int]:
    """Matrix of a U-equivariant map between graded pieces, as target bitsets."""
    cols = []
    for g, k in src.basis:
        v = 0
        for h, poly in f.row(g).items():
            for m in poly:
                v ^= 1 << tgt.index[(h, k + m)]
        cols.append(v)
    return cols


def d_columns(c: UComplex, src: GradedPiece, tgt: GradedPiece) -> list[int]:
    return map_columns(c.differential_map(), src, tgt)


def apply_columns(cols: Sequence[int], v: int) -> int:
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= cols[i]
        v >>= 1
        i += 1
    return out


def rows_of(cols: Sequence[int], nrows: int, offset: int = 0) -> list[int]:
    """Transpose columns into per-row bitsets over variables ``offset + j``."""
    rows = [0] * nrows
    for j, col in enumerate(cols):
        bit = 1 << (offset + j)
        while col:
            low = col & -col
            rows[low.bit_length() - 1] |= bit
            col ^= low
    return rows


# ---------------------------------------------------------------------------
# Homology towers


@dataclass(frozen=True)
class TowerDecomposition:
    free: tuple[Fraction, ...]
    torsion: tuple[tuple[Fraction, int], ...]
    free_reps: tuple[dict, ...] = field(default=(), compare=False)
    torsion_reps: tuple[dict, ...] = field(default=(), compare=False)

    @property
    def max_torsion(self) -> int:
        return max((k for _, k in self.torsion), default=0)

    def poincare(self, grading) -> int:
        """F2-dimension of homology in one grading."""
        g = Fraction(grading)
        n = 0
        for t in self.free:
            d = t - g
            if d >= 0 and d.denominator == 1 and d.numerator % 2 == 0:
                n += 1
        for t, k in self.torsion:
            d = t - g
            if d >= 0 and d.denominator == 1 and d.numerator % 2 == 0 and d.numerator // 2 < k:
                n += 1
        return n

    @property
    def d(self) -> Fraction:
        if len(self.free) != 1:
            raise ValueError(f"expected exactly one free tower, found {len(self.free)}")
        return self.free[0]


def homology_towers(c: UComplex) -> TowerDecomposition:
    """Decompose H_*(C) as a sum of F2[U] and F2[U]/U^k summands.

    Persistence-style column reduction: generators ordered by decreasing
    grading (ties by declaration order), earlier columns added to later ones,
    pivot = lowest-grading row.  A pivot pair (row r, column c) contributes
    F2[U]/U^k at gr(r) with ``k = (gr r - gr c + 1) / 2``; k = 0 cancels.
    """
    order = sorted(c.ids, key=lambda g: (-c.grading(g), c.index(g)))
    pos = {g: i for i, g in enumerate(order)}
    n = len(order)
    # column j: {row position: U-power}; V tracks the basis change
    cols: list[dict] = []
    vcols: list[dict] = []
    for g in order:
        col = {}
        for h, p in c.d(g).items():
            (k,) = tuple(p)
            col[pos[h]] = k
        cols.append(col)
        vcols.append({pos[g]: 0})
    gr = [c.grading(g) for g in order]
    pivot_of_row: dict[int, int] = {}
    for j in range(n):
        col = cols[j]
        while col:
            low = max(col)
            i = pivot_of_row.get(low)
            if i is None:
                pivot_of_row[low] = j
                break
            shift = (gr[i] - gr[j]) / 2
            assert shift.denominator == 1 and shift >= 0
            m = int(shift)
            for r, k in cols[i].items():
                key = k + m
                if col.get(r) == key:
                    del col[r]
                else:
                    assert r not in col, "inhomogeneous column"
                    col[r] = key
            vc = vcols[j]
            for r, k in vcols[i].items():
                key = k + m
                if vc.get(r) == key:
                    del vc[r]
                else:
                    vc[r] = key
    paired_rows = set(pivot_of_row)
    free, free_reps, torsion, torsion_reps = [], [], [], []

    def as_elem(col: dict, drop: int = 0) -> dict:
        out = {}
        for r, k in col.items():
            out[order[r]] = URing.poly([k - drop])
        return out

    for j in range(n):
        if cols[j]:
            continue
        if j in paired_rows:
            continue
        free.append(gr[j])
        free_reps.append(as_elem(vcols[j]))
    for r, j in sorted(pivot_of_row.items()):
        k = (gr[r] - gr[j] + 1) / 2
        assert k.denominator == 1
        k = int(k)
        if k > 0:
            torsion.append((gr[r], k))
            torsion_reps.append(as_elem(cols[j], drop=k))
    return TowerDecomposition(tuple(free), tuple(torsion), tuple(free_reps), tuple(torsion_reps))


def max_torsion(c: UComplex) -> int:
    return homology_towers(c).max_torsion


class TowerFunctional:
    """Linear functional detecting the free-tower component of cycles.

    For a complex with one free tower and U-bound ``N >= max torsion``, a
    cycle ``a`` in grading g is nontorsion iff ``U^N a`` is not a boundary;
    the residue of ``U^N a`` modulo boundaries lies in a one-dimensional
    space, which makes nontorsion an affine condition.
    """

    def __init__(self, c: UComplex, bound: int | None = None):
        self.complex = c
        towers = homology_towers(c)
        if len(towers.free) != 1:
            raise ValueError(f"expected exactly one free tower, found {len(towers.free)}")
        self.towers = towers
        self.tower_grading = towers.free[0]
        self.tower_rep = towers.free_reps[0]
        self.bound = towers.max_torsion if bound is None else max(bound, towers.max_torsion)
        self._cache: dict = {}

    def in_tower_parity(self, grading) -> bool:
        d = self.tower_grading - Fraction(grading)
        return d.denominator == 1 and d.numerator % 2 == 0

    def functional(self, grading) -> int:
        """Bitset over ``GradedPiece(c, grading)``; 0 if no tower there."""
        g = Fraction(grading)
        if g in self._cache:
            return self._cache[g]
        c = self.complex
        piece = GradedPiece(c, g)
        if not self.in_tower_parity(g) or g > self.tower_grading:
            self._cache[g] = 0
            return 0
        N = self.bound
        low = GradedPiece(c, g - 2 * N)
        above = GradedPiece(c, g - 2 * N + 1)
        bounds = Subspace(d_columns(c, above, low))
        j = int((self.tower_grading - g) / 2)
        e = low.vector({h: URing.poly([k + j + N for k in p]) for h, p in self.tower_rep.items()})
        e_red = bounds.reduce(e)
        assert e_red, "tower representative became a boundary"
        probe = e_red & -e_red
        lam = 0
        for i, (h, k) in enumerate(piece.basis):
            v = 1 << low.index[(h, k + N)]
            if bounds.reduce(v) & probe:
                lam |= 1 << i
        self._cache[g] = lam
        return lam

    def evaluate(self, elem: Mapping, grading) -> int:
        piece = GradedPiece(self.complex, grading)
        return popcount(piece.vector(elem) & self.functional(grading)) & 1


# ---------------------------------------------------------------------------
# Unknown maps and linear map equations


class MapUnknown:
    """An unknown homogeneous map: one F2 variable per admissible entry."""

    def __init__(self, source, target, variance: str = EQUIVARIANT, shift=None, name: str = "X"):
        self.source = source
        self.target = target
        self.variance = variance
        self.skew = variance == SKEW
        ring = source.ring
        self.ring = ring
        self.shift = source.zero_shift if shift is None else (
            Fraction(shift) if ring is URing else tuple(shift))
        self.name = name
        self.entries: list[tuple[str, str, object]] = []
        for x in source.ids:
            gx = source.grading(x)
            for y in target.ids:
                m = ring.forced_mono(gx, target.grading(y), self.shift, self.skew)
                if m is not None:
                    self.entries.append((x, y, m))
        self.offset = 0

    def __len__(self) -> int:
        return len(self.entries)

    def to_map(self, bits: int) -> Map:
        ents: dict = {}
        bits >>= self.offset
        i = 0
        while bits and i < len(self.entries):
            if bits & 1:
                x, y, m = self.entries[i]
                ents.setdefault(x, {})[y] = self.ring.poly([m])
            bits >>= 1
            i += 1
        return Map(self.source, self.target, ents, self.variance, self.shift, self.name)

    def bits_of(self, f: Map) -> int:
        """Variable bitset of a concrete map of the same shape."""
        lookup = {(x, y): i for i, (x, y, _) in enumerate(self.entries)}
        out = 0
        for x, row in f.entries.items():
            for y, p in row.items():
                i = lookup.get((x, y))
                if i is None or tuple(p) != (self.entries[i][2],):
                    raise ValueError(f"map entry {x} -> {y} is not of the declared shape")
                out |= 1 << (self.offset + i)
        return out


def _transpose(f: Map) -> dict:
    """``{x: [(w, c)]}`` whenever ``f(w)`` contains ``c x``."""
    out: dict = {}
    for w, row in f.entries.items():
        for x, p in row.items():
            for m in p:
                out.setdefault(x, []).append((w, m))
    return out


class MapEquations:
    """Linear system in several unknown maps.

    ``add_equation(terms, constant, mod_u)`` imposes
    ``sum(post o X o pre) = constant``; ``pre``/``post`` of None mean the
    identity.  Equations are indexed by slot (source gen, target gen, monomial).
    """

    def __init__(self, unknowns: Sequence[MapUnknown]):
        self.unknowns = list(unknowns)
        off = 0
        for u in self.unknowns:
            u.offset = off
            off += len(u)
        self.system = F2System(off)
        self.nvars = off

    def _term_slots(self, unknown: MapUnknown, pre: Map | None, post: Map | None):
        ring = unknown.ring
        one = next(iter(ring.one))
        pre_t = _transpose(pre) if pre is not None else None
        post_rows = post.entries if post is not None else None
        post_skew = post.skew if post is not None else False
        for i, (x, y, mono) in enumerate(unknown.entries):
            bit = 1 << (unknown.offset + i)
            sources = pre_t.get(x, ()) if pre_t is not None else ((x, one),)
            for w, c in sources:
                cx = _transport_mono(ring, c) if unknown.skew else c
                base = _mul_mono(ring, cx, mono)
                if post_rows is None:
                    yield (w, y, base), bit
                    continue
                base_t = _transport_mono(ring, base) if post_skew else base
                for z, p in post_rows.get(y, {}).items():
                    for e in p:
                        yield (w, z, _mul_mono(ring, base_t, e)), bit

    def add_equation(self, terms: Sequence[tuple], constant: Map | None = None,
                     mod_u: bool = False) -> None:
        rows: dict = {}
        for term in terms:
            pre, unknown, post = term
            for slot, bit in self._term_slots(unknown, pre, post):
                rows[slot] = rows.get(slot, 0) ^ bit
        rhs: dict = {}
        if constant is not None:
            for w, row in constant.entries.items():
                for z, p in row.items():
                    for m in p:
                        rhs[(w, z, m)] = rhs.get((w, z, m), 0) ^ 1
        ring = self.unknowns[0].ring if self.unknowns else WZRing
        for slot in set(rows) | set(rhs):
            if mod_u and ring.divisible_by_u(slot[2]):
                continue
            self.system.add(rows.get(slot, 0), rhs.get(slot, 0))

    def add_raw(self, row: int, rhs: int) -> None:
        self.system.add(row, rhs)

    def fix(self, unknown: MapUnknown, value: Map) -> None:
        """Pin an unknown to a concrete map."""
        bits = unknown.bits_of(value)
        for i in range(len(unknown)):
            b = 1 << (unknown.offset + i)
            self.system.add(b, 1 if bits & b else 0)

    def solve(self) -> list[Map] | None:
        x = self.system.solution()
        if x is None:
            return None
        return [u.to_map(x) for u in self.unknowns]

    def kernel(self) -> list[list[Map]]:
        return [[u.to_map(v) for u in self.unknowns] for v in self.system.kernel_basis()]


def _mul_mono(ring, a, b):
    if ring is URing:
        return a + b
    return (a[0] + b[0], a[1] + b[1])


def _transport_mono(ring, a):
    if ring is URing:
        return a
    return (a[1], a[0])


# ---------------------------------------------------------------------------
# Null-homotopies and homotopy classes


@dataclass
class NullHomotopyResult:
    homotopy: Map | None
    certificate: object = None

    @property
    def found(self) -> bool:
        return self.homotopy is not None

    def __bool__(self) -> bool:
        return self.found


def homotopy_shift(f: Map):
    ring = f.ring
    if ring is URing:
        return Fraction(f.shift) + 1
    return (f.shift[0] + 1, f.shift[1] + 1)


def solve_nullhomotopy(f: Map, mod_u: bool = False, check: bool = True) -> NullHomotopyResult:
    """Find H of f's variance with ``dH + Hd = f`` (modulo U if requested)."""
    if check and not mod_u:
        ok, where = f.is_chain_map()
        if not ok:
            raise NotAChainMap(where)
    H = MapUnknown(f.source, f.target, f.variance, homotopy_shift(f), name="H")
    eqs = MapEquations([H])
    eqs.add_equation([(None, H, f.target.differential_map()), (f.source.differential_map(), H, None)],
                     f, mod_u=mod_u)
    sol = eqs.solve()
    if sol is None:
        return NullHomotopyResult(None, _certificate(f) if not mod_u else "inconsistent mod U")
    h = sol[0]
    if not mod_u:
        from .complex import add, compose
        defect = add(add(compose(f.target.differential_map(), h), compose(h, f.source.differential_map()),
                         check=False), f, check=False)
        assert defect.is_zero(), "null-homotopy failed re-verification"
    return NullHomotopyResult(h)


def _certificate(f: Map):
    """A homology class on which f acts nontrivially, when one is visible."""
    if f.ring is not URing:
        return "no homotopy: linear system inconsistent"
    src = f.source
    towers = homology_towers(src)
    reps = list(zip(towers.free, towers.free_reps)) + [
        (g, r) for (g, _), r in zip(towers.torsion, towers.torsion_reps)]
    for grading, rep in reps:
        img = f.apply(rep)
        tgt_gr = grading + Fraction(f.shift)
        tgt = GradedPiece(f.target, tgt_gr)
        above = GradedPiece(f.target, tgt_gr + 1)
        bounds = Subspace(d_columns(f.target, above, tgt))
        if tgt.vector(img) not in bounds:
            return {"cycle": rep, "grading": grading, "image": img}
    return "no homotopy: linear system inconsistent"


@dataclass
class HomotopyResult:
    homotopic: bool
    homotopy: Map | None = None
    certificate: object = None

    def __bool__(self) -> bool:
        return self.homotopic


def homotopic(f: Map, g: Map, mod_u: bool = False) -> HomotopyResult:
    if f.variance != g.variance:
        raise ValueError("homotopic: variance mismatch")
    if f.shift != g.shift and not (f.is_zero() or g.is_zero()):
        raise ValueError("homotopic: grading shift mismatch")
    from .complex import add
    diff = add(f, g, check=False)
    if diff.is_zero():
        diff = Map(f.source, f.target, {}, f.variance, f.shift if not f.is_zero() else g.shift)
    res = solve_nullhomotopy(diff, mod_u=mod_u)
    return HomotopyResult(res.found, res.homotopy, res.certificate)


def chain_map_space(source, target, shift=None, variance: str = EQUIVARIANT,
                    extra=None) -> list[Map]:
    """Basis of chain maps of the given shape.

    ``extra(eqs, X)`` may add further linear conditions (it receives the
    :class:`MapEquations` and the unknown, and may append unknowns only by
    building its own system; use :func:`solve_maps` for joint systems).
    """
    X = MapUnknown(source, target, variance, shift, name="f")
    eqs = MapEquations([X])
    eqs.add_equation([(None, X, target.differential_map()), (source.differential_map(), X, None)])
    if extra is not None:
        extra(eqs, X)
    if eqs.system.inconsistent:
        return []
    return [k[0] for k in eqs.kernel()]


def solve_maps(unknowns: Sequence[MapUnknown], equations: Sequence[tuple]) -> list[Map] | None:
    """Solve a joint system; each equation is ``(terms, constant, mod_u)``."""
    eqs = MapEquations(unknowns)
    for eq in equations:
        terms, const, mod_u = (list(eq) + [None, False])[:3]
        eqs.add_equation(terms, const, mod_u)
    return eqs.solve()


def dump_triplets(cols: Sequence[int]) -> str:
    """Plain-text sparse dump ``row col 1`` of a column matrix."""
    lines = []
    for j, col in enumerate(cols):
        i = 0
        while col:
            if col & 1:
                lines.append(f"{i} {j} 1")
            col >>= 1
            i += 1
    return "\n".join(lines)
