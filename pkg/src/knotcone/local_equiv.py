"""phi-complexes, standard complexes, correction terms and local maps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .complex import (
    EQUIVARIANT,
    _frac_json,
    Map,
    UComplex,
    URing,
    add,
    compose,
    power,
    u_dual,
    u_dual_map,
    u_tensor,
    u_tensor_maps,
)
from .linalg import (
    F2System,
    GradedPiece,
    MapEquations,
    MapUnknown,
    TowerFunctional,
    d_columns,
    homology_towers,
    homotopic,
    map_columns,
    rows_of,
    solve_nullhomotopy,
)

STRICT = "strict"
ALMOST = "almost"


class PhiComplex:
    """A free F2[U]-complex with a grading-preserving chain map phi.

    ``shift`` is added to every grading when invariants are reported.
    """

    almost = False

    def __init__(self, complex_: UComplex, phi: Map, shift=0, name: str = "", check: bool = True):
        self.complex = complex_
        self.phi = phi
        self.shift = Fraction(shift)
        self.name = name
        if check:
            self._validate()

    def _validate(self) -> None:
        if self.phi.source is not self.complex or self.phi.target is not self.complex:
            raise ValueError("phi must be an endomorphism of the complex")
        if Fraction(self.phi.shift) != 0 and not self.phi.is_zero():
            raise ValueError("phi must preserve the grading")
        ok, where = self.phi.is_chain_map()
        if not ok:
            raise ValueError(f"phi is not a chain map (at {where})")
        towers = homology_towers(self.complex)
        if len(towers.free) != 1:
            raise ValueError(f"expected exactly one free tower, found {len(towers.free)}")

    def graded(self) -> UComplex:
        """The underlying complex with the shift applied to every grading."""
        return self.complex if self.shift == 0 else self.complex.shifted(self.shift)

    def graded_phi(self) -> Map:
        c = self.graded()
        return Map(c, c, self.phi.entries, EQUIVARIANT, 0, self.phi.name)

    def is_true(self) -> bool:
        """Whether phi squared is homotopic to the identity."""
        return homotopic(compose(self.phi, self.phi), self.complex.identity()).homotopic

    def dual(self) -> "PhiComplex":
        cd = u_dual(self.complex)
        return type(self)(cd, u_dual_map(self.phi, cd, cd), -self.shift, f"-{self.name}", check=False)

    def tensor(self, other: "PhiComplex") -> "PhiComplex":
        c = u_tensor(self.complex, other.complex)
        return type(self)(c, u_tensor_maps(self.phi, other.phi, c, c), self.shift + other.shift,
                          f"{self.name}*{other.name}", check=False)

    @property
    def tower_grading(self) -> Fraction:
        return homology_towers(self.complex).d + self.shift

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name or 'unnamed'}, rank={self.complex.rank}, shift={self.shift})"

    def to_json(self) -> dict:
        return {"name": self.name, "almost": self.almost, "shift": _frac_json(self.shift),
                "complex": self.complex.to_json(), "phi": self.phi.to_json()["entries"]}

    @classmethod
    def from_json(cls, data, check: bool = True) -> "PhiComplex":
        try:
            c = UComplex.from_json(data["complex"])
            phi = Map.from_json({"entries": data.get("phi", []), "shift": 0}, c)
            shift = Fraction(str(data.get("shift", 0)))
            kind = AlmostPhiComplex if data.get("almost") else PhiComplex
            name = str(data.get("name", ""))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed phi-complex JSON: {exc}") from exc
        return kind(c, phi, shift, name, check=check)


class AlmostPhiComplex(PhiComplex):
    """phi-bar commutes with d only modulo U, and squares to id modulo U up to homotopy."""

    almost = True

    def _validate(self) -> None:
        c = self.complex
        phi = self.phi
        defect = phi.chain_defect()
        for g, row in defect.entries.items():
            for h, p in row.items():
                if 0 in p:
                    raise ValueError(f"[d, phi] is not in the image of U (at {g})")
        towers = homology_towers(c)
        if len(towers.free) != 1:
            raise ValueError(f"expected exactly one free tower, found {len(towers.free)}")
        sq = add(compose(phi, phi), c.identity(), check=False)
        if not solve_nullhomotopy(sq, mod_u=True, check=False).found:
            raise ValueError("phi squared is not the identity modulo U up to homotopy")


def as_almost(p: PhiComplex) -> AlmostPhiComplex:
    return AlmostPhiComplex(p.complex, p.phi, p.shift, p.name, check=False)


# ---------------------------------------------------------------------------
# Standard complexes


def _sign(a) -> int:
    if a in ("+", 1, "+1"):
        return 1
    if a in ("-", "−", -1, "-1"):
        return -1
    raise ValueError(f"sign parameter must be + or -, got {a!r}")


def normalize_params(params: Sequence) -> tuple:
    """Canonical tuple ``(a1, b2, a3, b4, ...)`` with a in {+1, -1}, b a nonzero int."""
    params = tuple(params)
    if len(params) % 2:
        raise ValueError("standard complex parameters come in (sign, exponent) pairs")
    out = []
    for i, x in enumerate(params):
        if i % 2 == 0:
            out.append(_sign(x))
        else:
            b = int(x)
            if b == 0:
                raise ValueError("exponent parameters must be nonzero")
            out.append(b)
    return tuple(out)


def format_params(params: Sequence) -> str:
    parts = []
    for i, x in enumerate(normalize_params(params)):
        parts.append(("+" if x > 0 else "-") if i % 2 == 0 else str(x))
    return "C(" + ", ".join(parts) + ")"


def build_standard(params: Sequence) -> AlmostPhiComplex:
    """Standard complex on t0..t_{2m}; omega = 1 + phi-bar joins t_{i-1}, t_i for odd i."""
    ps = normalize_params(params)
    n = len(ps)
    ids = [f"t{i}" for i in range(n + 1)]
    gr = {"t0": Fraction(0)}
    diff: dict = {}
    omega: dict = {}
    for i in range(1, n + 1):
        x = ps[i - 1]
        prev, cur = f"t{i - 1}", f"t{i}"
        if i % 2 == 1:
            gr[cur] = gr[prev]
            if x > 0:
                omega[cur] = {prev: URing.one}
            else:
                omega[prev] = {cur: URing.one}
        else:
            if x > 0:
                gr[cur] = gr[prev] - 2 * x + 1
                diff[cur] = {prev: URing.poly([x])}
            else:
                gr[cur] = gr[prev] + 2 * (-x) - 1
                diff[prev] = {cur: URing.poly([-x])}
    c = UComplex(ids, gr, diff)
    ents = {g: {g: URing.one} for g in ids}
    for g, row in omega.items():
        for h in row:
            ents[g][h] = URing.one
    phi = Map(c, c, ents, EQUIVARIANT, 0, "phi_bar")
    return AlmostPhiComplex(c, phi, 0, format_params(ps) if ps else "C()")


def dual_params(params: Sequence) -> tuple:
    return tuple(-x for x in normalize_params(params))


def phi_n(params: Sequence, n: int) -> int:
    """(# of exponent parameters equal to n) - (# equal to -n)."""
    ps = normalize_params(params)
    bs = ps[1::2]
    return sum(1 for b in bs if b == n) - sum(1 for b in bs if b == -n)


# ---------------------------------------------------------------------------
# Correction terms


def _identity_plus(cols: list[int]) -> list[int]:
    return [c ^ (1 << j) for j, c in enumerate(cols)]


def _u_power_columns(src: GradedPiece, tgt: GradedPiece, k: int) -> list[int]:
    return [1 << tgt.index[(g, e + k)] for g, e in src.basis]


def _require_true(p: PhiComplex) -> None:
    # (1 + phi) of a cycle need not be a cycle when phi only commutes mod U
    if p.almost:
        raise ValueError("d_lower and d_upper need a phi-complex; almost phi-complexes carry only phi_n")


def d_lower(p: PhiComplex) -> Fraction:
    """Max grading of a nontorsion cycle a with (1 + phi) a a boundary."""
    _require_true(p)
    c, phi = p.complex, p.phi
    lam = TowerFunctional(c)
    tau, N = lam.tower_grading, lam.bound
    for j in range(N + 1):
        d = tau - 2 * j
        Vd, Vup, Vdown = GradedPiece(c, d), GradedPiece(c, d + 1), GradedPiece(c, d - 1)
        na = len(Vd)
        sys_ = F2System(na + len(Vup))
        for row in rows_of(d_columns(c, Vd, Vdown), len(Vdown)):
            sys_.add(row)
        r1 = rows_of(_identity_plus(map_columns(phi, Vd, Vd)), na)
        r2 = rows_of(d_columns(c, Vup, Vd), na, offset=na)
        for a, b in zip(r1, r2):
            sys_.add(a ^ b)
        sys_.add(lam.functional(d), 1)
        if sys_.solution() is not None:
            return d + p.shift
    raise AssertionError("d_lower search exhausted its provable range")


def d_upper(p: PhiComplex) -> Fraction:
    """Max value of a triple (x, y, z) with dy = (1+phi)x, dz = U^m x,
    and U^m y + (1+phi) z nontorsion; m = max torsion suffices."""
    _require_true(p)
    c, phi = p.complex, p.phi
    lam = TowerFunctional(c)
    tau, N = lam.tower_grading, lam.bound
    top = max(c.grading(g) for g in c.ids) + 1
    v = tau + 2 * ((top - tau) // 2) if top >= tau else tau
    while v >= tau:
        Vx, Vy, Vz = GradedPiece(c, v - 1), GradedPiece(c, v), GradedPiece(c, v - 2 * N)
        nx, ny, nz = len(Vx), len(Vy), len(Vz)
        Vdz = GradedPiece(c, v - 2 * N - 1)
        sys_ = F2System(nx + ny + nz)
        # d y + (1 + phi) x = 0
        ra = rows_of(_identity_plus(map_columns(phi, Vx, Vx)), nx, 0)
        rb = rows_of(d_columns(c, Vy, Vx), nx, nx)
        for a, b in zip(ra, rb):
            sys_.add(a ^ b)
        # d z + U^N x = 0
        ra = rows_of(_u_power_columns(Vx, Vdz, N), len(Vdz), 0)
        rb = rows_of(d_columns(c, Vz, Vdz), len(Vdz), nx + ny)
        for a, b in zip(ra, rb):
            sys_.add(a ^ b)
        # lambda(U^N y + (1 + phi) z) = 1
        lam_v = lam.functional(v - 2 * N)
        row = 0
        for j, col in enumerate(_u_power_columns(Vy, Vz, N)):
            if bin(col & lam_v).count("1") & 1:
                row |= 1 << (nx + j)
        for j, col in enumerate(_identity_plus(map_columns(phi, Vz, Vz))):
            if bin(col & lam_v).count("1") & 1:
                row |= 1 << (nx + ny + j)
        sys_.add(row, 1)
        if sys_.solution() is not None:
            return v + p.shift
        v -= 2
    raise AssertionError("d_upper search exhausted its provable range")


def correction_terms(p: PhiComplex) -> tuple[Fraction, Fraction]:
    return d_lower(p), d_upper(p)


def V_from_d(d) -> Fraction:
    return -Fraction(d) / 2


# ---------------------------------------------------------------------------
# Local maps


@dataclass
class LocalMapCertificate:
    source: PhiComplex
    target: PhiComplex
    f: Map
    homotopy: Map
    mode: str
    metadata: dict = field(default_factory=dict)

    def verify(self) -> bool:
        c1, c2 = self.f.source, self.f.target
        ok, _ = self.f.is_chain_map()
        if not ok:
            return False
        phi1 = Map(c1, c1, self.source.phi.entries, EQUIVARIANT, 0)
        phi2 = Map(c2, c2, self.target.phi.entries, EQUIVARIANT, 0)
        rel = add(compose(self.f, phi1), compose(phi2, self.f), check=False)
        rel = add(rel, compose(c2.differential_map(), self.homotopy), check=False)
        rel = add(rel, compose(self.homotopy, c1.differential_map()), check=False)
        for row in rel.entries.values():
            for p in row.values():
                if self.mode == STRICT or 0 in p:
                    return False
        t1 = homology_towers(c1)
        lam = TowerFunctional(c2)
        return lam.evaluate(self.f.apply(t1.free_reps[0]), t1.free[0]) == 1

    def to_json(self) -> dict:
        return {"mode": self.mode, "f": self.f.to_json(), "homotopy": self.homotopy.to_json(),
                **self.metadata}


def find_local_map(p1: PhiComplex, p2: PhiComplex, mode: str = STRICT) -> LocalMapCertificate | None:
    """Grading-preserving f with [d, f] = 0, f phi1 + phi2 f = [d, H]
    (modulo U in almost mode) and f an isomorphism on the free tower."""
    if mode not in (STRICT, ALMOST):
        raise ValueError(f"unknown mode {mode!r}")
    c1, c2 = p1.graded(), p2.graded()
    phi1, phi2 = p1.graded_phi(), p2.graded_phi()
    t1 = homology_towers(c1)
    lam = TowerFunctional(c2)
    if t1.free[0] != lam.tower_grading:
        return None
    f = MapUnknown(c1, c2, EQUIVARIANT, 0, "f")
    H = MapUnknown(c1, c2, EQUIVARIANT, 1, "H")
    eqs = MapEquations([f, H])
    d1, d2 = c1.differential_map(), c2.differential_map()
    eqs.add_equation([(None, f, d2), (d1, f, None)])
    eqs.add_equation([(phi1, f, None), (None, f, phi2), (None, H, d2), (d1, H, None)],
                     mod_u=(mode == ALMOST))
    # tower condition: lambda(f(t1)) = 1
    grading = t1.free[0]
    piece = GradedPiece(c2, grading)
    lam_vec = lam.functional(grading)
    rep = t1.free_reps[0]
    row = 0
    for i, (x, y, k) in enumerate(f.entries):
        for j in rep.get(x, ()):
            idx = piece.index.get((y, j + k))
            if idx is not None and (lam_vec >> idx) & 1:
                row ^= 1 << (f.offset + i)
    eqs.add_raw(row, 1)
    sol = eqs.solve()
    if sol is None:
        return None
    cert = LocalMapCertificate(p1, p2, sol[0], sol[1], mode,
                               {"variables": eqs.nvars, "rank": eqs.system.rank})
    assert cert.verify(), "local map failed re-verification"
    return cert


def locally_equivalent(p1: PhiComplex, p2: PhiComplex, mode: str = STRICT):
    a = find_local_map(p1, p2, mode)
    if a is None:
        return None
    b = find_local_map(p2, p1, mode)
    if b is None:
        return None
    return a, b


def trivial_complex(shift=0, almost: bool = False) -> PhiComplex:
    c = UComplex(["1"], {"1": Fraction(0)}, {})
    cls = AlmostPhiComplex if almost else PhiComplex
    return cls(c, c.identity(), shift, "trivial", check=False)


def candidate_params(max_pairs: int, bound: int) -> Iterable[tuple]:
    """All parameter lists with at most ``max_pairs`` pairs and |b| <= bound."""
    yield ()
    bs = [b for k in range(1, bound + 1) for b in (k, -k)]
    for m in range(1, max_pairs + 1):
        for combo in itertools.product(*([(-1, 1), bs] * m)):
            yield tuple(combo)


def normalized_almost(a: PhiComplex) -> AlmostPhiComplex:
    """Shift so the free tower sits in grading 0."""
    d = homology_towers(a.complex).d
    return AlmostPhiComplex(a.complex, a.phi, -d, a.name, check=False)


def match_standard(a: PhiComplex, bound: int = 8, max_pairs: int | None = None,
                   check_unique: bool = False):
    """First standard complex almost-locally equivalent to ``a`` (tower moved to 0)."""
    target = normalized_almost(a)
    if max_pairs is None:
        max_pairs = max(0, (a.complex.rank - 1) // 2)
    found = None
    for params in candidate_params(max_pairs, bound):
        std = build_standard(params)
        if locally_equivalent(target, std, ALMOST) is not None:
            if found is None:
                found = params
                if not check_unique:
                    return found
            else:
                raise AssertionError(f"two standard matches: {found} and {params}")
    return found


# ---------------------------------------------------------------------------
# Lens spaces


@lru_cache(maxsize=None)
def lens_d(p: int, q: int, i: int) -> Fraction:
    """d(L(p, q), i) by the recursion with base d(S^3) = 0."""
    if p < 1 or q < 0:
        raise ValueError("lens_d needs p >= 1 and q >= 0")
    if p == 1:
        return Fraction(0)
    if q == 0:
        raise ValueError("q must be positive for p > 1")
    i %= p
    r = p % q
    return Fraction(-1, 4) + Fraction((2 * i + 1 - p - q) ** 2, 4 * p * q) - lens_d(q, r, i % q)


def lens_d_closed(p: int, i: int) -> Fraction:
    """Closed form for L(p, 1): ((2i - p)^2 - p) / (4p), 0 <= i < p."""
    i %= p
    return Fraction((2 * i - p) ** 2 - p, 4 * p)


# ---------------------------------------------------------------------------
# Odd order


def odd_order_trivialize(p: PhiComplex, order: int):
    """Certificates that ``F = sum phi^i`` is a local map both ways between
    (C, phi) and (C, id), given phi^order homotopic to the identity."""
    if order % 2 == 0 or order < 1:
        raise ValueError("order must be odd and positive")
    c, phi = p.complex, p.phi
    if not homotopic(power(phi, order), c.identity()).homotopic:
        raise ValueError(f"phi^{order} is not homotopic to the identity")
    F = c.zero_map()
    for i in range(order):
        F = add(F, power(phi, i), check=False)
    F = Map(c, c, F.entries, EQUIVARIANT, 0, "F")
    trivial = PhiComplex(c, c.identity(), p.shift, "identity", check=False)
    certs = []
    for src, tgt, rel in ((p, trivial, add(compose(F, phi), F, check=False)),
                          (trivial, p, add(compose(phi, F), F, check=False))):
        rel = Map(c, c, rel.entries, EQUIVARIANT, 0)
        res = solve_nullhomotopy(rel, check=False)
        if not res.found:
            raise AssertionError("F failed to commute with phi up to homotopy")
        cert = LocalMapCertificate(src, tgt, F, res.homotopy, STRICT, {"order": order})
        if not cert.verify():
            raise AssertionError("F is not an isomorphism on the free tower")
        certs.append(cert)
    return tuple(certs)


def cyclic_sample(order: int = 3) -> PhiComplex:
    """t, x_i (gr 2) and y_i (gr 1) for i in Z/order with d y_i = U x_i.

    phi shifts the index on x and y and sends t to t + U(x_0 + x_1); the
    three-term sum telescopes, so phi^order is the identity on the nose.
    """
    if order < 3:
        raise ValueError("order must be at least 3")
    ids = ["t"] + [f"x{i}" for i in range(order)] + [f"y{i}" for i in range(order)]
    gr = {"t": 0, **{f"x{i}": 2 for i in range(order)}, **{f"y{i}": 1 for i in range(order)}}
    diff = {f"y{i}": {f"x{i}": URing.poly([1])} for i in range(order)}
    c = UComplex(ids, gr, diff)
    ents = {"t": {"t": URing.one, "x0": URing.poly([1]), "x1": URing.poly([1])}}
    for i in range(order):
        j = (i + 1) % order
        ents[f"x{i}"] = {f"x{j}": URing.one}
        ents[f"y{i}"] = {f"y{j}": URing.one}
    return PhiComplex(c, Map(c, c, ents, EQUIVARIANT, 0, "cycle"), 0, f"cyclic sample of order {order}")
