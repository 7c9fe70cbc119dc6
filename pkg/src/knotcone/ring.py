"""Exact arithmetic over F2[W,Z], F2[U,T,T^-1] and the surgery algebra.

Polynomials are frozensets of monomials; a monomial is present exactly
when its coefficient is 1.  Addition is symmetric difference and every
product cancels terms by parity.

Monomials:

* ``(w, z)`` stands for ``W^w Z^z`` with ``w, z >= 0``;
* ``(u, t)`` stands for ``U^u T^t`` with ``u >= 0`` and ``t`` any integer;
* ``k`` (a bare int) stands for ``U^k`` in F2[U].
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

EXPONENT_LIMIT = 2**62


def _check(*exps: int) -> None:
    for e in exps:
        if not -EXPONENT_LIMIT < e < EXPONENT_LIMIT:
            raise OverflowError(f"exponent {e} out of range")


def _parity(monos: Iterable) -> frozenset:
    out: set = set()
    for m in monos:
        if m in out:
            out.remove(m)
        else:
            out.add(m)
    return frozenset(out)


class WZPoly(frozenset):
    """Element of F2[W,Z]; a frozenset of ``(w_exp, z_exp)`` pairs."""

    def __add__(self, other: "WZPoly") -> "WZPoly":
        return WZPoly(frozenset.__xor__(self, other))

    __radd__ = __add__

    def __mul__(self, other: "WZPoly") -> "WZPoly":
        return poly_mul(self, other)

    def swap(self) -> "WZPoly":
        """Exchange W and Z in every term."""
        return WZPoly((z, w) for (w, z) in self)

    def __repr__(self) -> str:
        return f"WZPoly({format_wz(self)!r})"

    def __str__(self) -> str:
        return format_wz(self)


def wz(w: int = 0, z: int = 0) -> WZPoly:
    """The single monomial ``W^w Z^z``."""
    if w < 0 or z < 0:
        raise ValueError("W and Z exponents must be nonnegative")
    _check(w, z)
    return WZPoly(((w, z),))


WZ_ZERO = WZPoly()
WZ_ONE = wz(0, 0)


def alexander_degree(mono: tuple[int, int]) -> int:
    """Alexander degree ``z_exp - w_exp`` of a WZ monomial."""
    return mono[1] - mono[0]


def u_degree(mono: tuple[int, int]) -> int:
    """Largest power of U = WZ dividing the monomial."""
    return min(mono)


def poly_mul(a: Iterable[tuple[int, int]], b: Iterable[tuple[int, int]]) -> WZPoly:
    """Product in F2[W,Z] with mod-2 cancellation."""
    b = tuple(b)
    prods = []
    for (w1, z1) in a:
        for (w2, z2) in b:
            _check(w1 + w2, z1 + z2)
            prods.append((w1 + w2, z1 + z2))
    return WZPoly(_parity(prods))


def swap_wz(p: Iterable[tuple[int, int]]) -> WZPoly:
    """The ring involution W <-> Z on F2[W,Z]."""
    return WZPoly((z, w) for (w, z) in p)


class UTPoly(frozenset):
    """Element of F2[U,T,T^-1]; a frozenset of ``(u_exp, t_exp)`` pairs."""

    def __add__(self, other: "UTPoly") -> "UTPoly":
        return UTPoly(frozenset.__xor__(self, other))

    __radd__ = __add__

    def __mul__(self, other: "UTPoly") -> "UTPoly":
        return ut_mul(self, other)

    def __repr__(self) -> str:
        return f"UTPoly({format_ut(self, '')!r})"


def ut(u: int = 0, t: int = 0) -> UTPoly:
    if u < 0:
        raise ValueError("U exponent must be nonnegative")
    _check(u, t)
    return UTPoly(((u, t),))


def ut_mul(a: Iterable[tuple[int, int]], b: Iterable[tuple[int, int]]) -> UTPoly:
    b = tuple(b)
    prods = []
    for (u1, t1) in a:
        for (u2, t2) in b:
            _check(u1 + u2, t1 + t2)
            prods.append((u1 + u2, t1 + t2))
    return UTPoly(_parity(prods))


def phi_sigma_mono(m: tuple[int, int]) -> tuple[int, int]:
    """``W^i Z^j -> U^i T^(j-i)``."""
    i, j = m
    return (i, j - i)


def phi_tau_mono(m: tuple[int, int]) -> tuple[int, int]:
    """``W^i Z^j -> U^j T^(j-i)``."""
    i, j = m
    return (j, j - i)


def phi_sigma(p: Iterable[tuple[int, int]]) -> UTPoly:
    return UTPoly(_parity(phi_sigma_mono(m) for m in p))


def phi_tau(p: Iterable[tuple[int, int]]) -> UTPoly:
    return UTPoly(_parity(phi_tau_mono(m) for m in p))


class UPoly(frozenset):
    """Element of F2[U]; a frozenset of nonnegative exponents."""

    def __add__(self, other: "UPoly") -> "UPoly":
        return UPoly(frozenset.__xor__(self, other))

    __radd__ = __add__

    def __mul__(self, other: "UPoly") -> "UPoly":
        other = tuple(other)
        return UPoly(_parity(a + b for a in self for b in other))

    def __repr__(self) -> str:
        return "UPoly(" + (" + ".join(f"U^{k}" for k in sorted(self)) or "0") + ")"


def upow(k: int) -> UPoly:
    if k < 0:
        raise ValueError("U exponent must be nonnegative")
    return UPoly((k,))


# ---------------------------------------------------------------------------
# The surgery algebra

SIGMA = "s"
TAU = "t"


@dataclass(frozen=True)
class AlgebraElement:
    """Element of one idempotent sector ``I_left . K . I_right``.

    ``body`` holds WZ monomials for the 0->0 sector, ``(u, t)`` pairs for
    the 1->1 sector and ``(u, t, tag)`` triples (tag ``"s"`` for sigma,
    ``"t"`` for tau) for the 1->0 sector.  The sector 0->1 is zero and
    cannot be constructed.
    """

    left: int
    right: int
    body: frozenset

    def __post_init__(self) -> None:
        if (self.left, self.right) == (0, 1):
            raise ValueError("I0 . K . I1 is zero; no such element exists")
        if self.left not in (0, 1) or self.right not in (0, 1):
            raise ValueError("idempotents are 0 or 1")
        object.__setattr__(self, "body", frozenset(self.body))

    def __bool__(self) -> bool:
        return bool(self.body)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not other.body:
            return self
        if not self.body:
            return other
        if (self.left, self.right) != (other.left, other.right):
            raise ValueError("cannot add elements of different idempotent sectors")
        return AlgebraElement(self.left, self.right, self.body ^ other.body)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return alg_mul(self, other)

    def __str__(self) -> str:
        return format_algebra(self)

    @property
    def sector(self) -> tuple[int, int]:
        return (self.left, self.right)


def alg_wz(p: Iterable[tuple[int, int]]) -> AlgebraElement:
    return AlgebraElement(0, 0, frozenset(p))


def alg_ut(p: Iterable[tuple[int, int]]) -> AlgebraElement:
    return AlgebraElement(1, 1, frozenset(p))


def alg_sigma(u: int = 0, t: int = 0) -> AlgebraElement:
    _check(u, t)
    return AlgebraElement(1, 0, frozenset({(u, t, SIGMA)}))


def alg_tau(u: int = 0, t: int = 0) -> AlgebraElement:
    _check(u, t)
    return AlgebraElement(1, 0, frozenset({(u, t, TAU)}))


def alg_zero(left: int, right: int) -> AlgebraElement:
    return AlgebraElement(left, right, frozenset())


def alg_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product ``a * b``; mismatched idempotents give zero in sector (a.left, b.right)."""
    left, right = a.left, b.right
    if a.right != b.left or (left, right) == (0, 1):
        if (left, right) == (0, 1):
            # no such sector; return the zero of the 0->0 sector as a neutral zero
            return alg_zero(0, 0)
        return alg_zero(left, right)
    kind = (a.left, a.right, b.right)
    prods: list = []
    if kind == (0, 0, 0):
        return AlgebraElement(0, 0, poly_mul(a.body, b.body))
    if kind == (1, 1, 1):
        return AlgebraElement(1, 1, ut_mul(a.body, b.body))
    if kind == (1, 1, 0):
        for (u1, t1) in a.body:
            for (u2, t2, tag) in b.body:
                _check(u1 + u2, t1 + t2)
                prods.append((u1 + u2, t1 + t2, tag))
        return AlgebraElement(1, 0, _parity(prods))
    if kind == (1, 0, 0):
        for (u1, t1, tag) in a.body:
            push = phi_sigma_mono if tag == SIGMA else phi_tau_mono
            for m in b.body:
                u2, t2 = push(m)
                _check(u1 + u2, t1 + t2)
                prods.append((u1 + u2, t1 + t2, tag))
        return AlgebraElement(1, 0, _parity(prods))
    raise AssertionError(kind)  # pragma: no cover


def elliptic_E(a: AlgebraElement) -> AlgebraElement:
    """The involution swapping W/Z, sigma/tau and T/T^-1, fixing U."""
    if a.sector == (0, 0):
        return AlgebraElement(0, 0, frozenset((z, w) for (w, z) in a.body))
    if a.sector == (1, 1):
        return AlgebraElement(1, 1, frozenset((u, -t) for (u, t) in a.body))
    flip = {SIGMA: TAU, TAU: SIGMA}
    return AlgebraElement(1, 0, frozenset((u, -t, flip[tag]) for (u, t, tag) in a.body))


def varpi_wz(p: Iterable[tuple[int, int]]) -> WZPoly:
    """Collapse map on i0 . D: ``W^i Z^j -> W^j Z^i``."""
    return swap_wz(p)


def varpi_ut(p: Iterable[tuple[int, int]]) -> UTPoly:
    """Collapse map on i1 . D: ``U^i T^j -> U^i T^-j``."""
    return UTPoly((u, -t) for (u, t) in p)


# ---------------------------------------------------------------------------
# Text grammar

def _fmt_power(var: str, e: int) -> str:
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


def format_wz_mono(m: tuple[int, int]) -> str:
    parts = [p for p in (_fmt_power("W", m[0]), _fmt_power("Z", m[1])) if p]
    return " ".join(parts) or "1"


def format_wz(p: Iterable[tuple[int, int]]) -> str:
    terms = sorted(p, key=lambda m: (m[0] + m[1], m[0]))
    return " + ".join(format_wz_mono(m) for m in terms) or "0"


def format_ut_mono(m: tuple[int, int], tag: str = "") -> str:
    parts = [p for p in (_fmt_power("U", m[0]), _fmt_power("T", m[1])) if p]
    if tag:
        parts.append(tag)
    return " ".join(parts) or "1"


def format_ut(p: Iterable, tag: str = "") -> str:
    terms = sorted(p)
    return " + ".join(format_ut_mono(m, tag) for m in terms) or "0"


def format_algebra(a: AlgebraElement) -> str:
    if a.sector == (0, 0):
        return format_wz(a.body)
    if a.sector == (1, 1):
        return format_ut(a.body)
    terms = sorted(a.body, key=lambda m: (m[2], m[0], m[1]))
    return " + ".join(format_ut_mono((u, t), tag) for (u, t, tag) in terms) or "0"


_TOKEN = re.compile(r"([WZUT])(?:\^(-?\d+))?|([st])|(1)")


def _parse_mono(text: str) -> tuple[dict, str | None]:
    exps = {"W": 0, "Z": 0, "U": 0, "T": 0}
    tag = None
    pos = 0
    text = text.strip()
    pieces = text.replace("*", " ").split()
    if not pieces:
        raise ValueError("empty monomial")
    for piece in pieces:
        pos = 0
        while pos < len(piece):
            m = _TOKEN.match(piece, pos)
            if not m:
                raise ValueError(f"cannot parse monomial {text!r}")
            if m.group(1):
                exps[m.group(1)] += int(m.group(2)) if m.group(2) else 1
            elif m.group(3):
                if tag is not None:
                    raise ValueError(f"two connecting tags in {text!r}")
                tag = m.group(3)
            pos = m.end()
    return exps, tag


def _split_terms(text: str) -> list[str]:
    text = text.strip()
    if text == "0" or not text:
        return []
    return [t for t in (s.strip() for s in text.split("+")) if t]


def parse_wz(text: str) -> WZPoly:
    """Parse ``"W^2 Z + Z^3 + 1"`` style text into a WZPoly."""
    monos = []
    for term in _split_terms(text):
        exps, tag = _parse_mono(term)
        if tag or exps["U"] or exps["T"]:
            raise ValueError(f"{term!r} is not a W,Z monomial")
        monos.append((exps["W"], exps["Z"]))
        if exps["W"] < 0 or exps["Z"] < 0:
            raise ValueError(f"negative exponent in {term!r}")
    return WZPoly(_parity(monos))


def parse_algebra(text: str, sector: tuple[int, int] | None = None) -> AlgebraElement:
    """Parse an element of the surgery algebra.

    W/Z terms give the 0->0 sector, U/T terms the 1->1 sector and terms
    ending with ``s`` or ``t`` the 1->0 sector.  ``sector`` disambiguates
    ``0`` and ``1``.
    """
    terms = _split_terms(text)
    found: set = set()
    monos: list = []
    for term in terms:
        exps, tag = _parse_mono(term)
        if tag:
            kind = (1, 0)
            if exps["W"] or exps["Z"]:
                raise ValueError(f"W,Z may not multiply a connecting element: {term!r}")
            monos.append((exps["U"], exps["T"], tag))
        elif exps["U"] or exps["T"]:
            kind = (1, 1)
            if exps["W"] or exps["Z"]:
                raise ValueError(f"mixed W,Z and U,T monomial {term!r}")
            monos.append((exps["U"], exps["T"]))
        elif exps["W"] or exps["Z"]:
            kind = (0, 0)
            monos.append((exps["W"], exps["Z"]))
        else:
            kind = None
            monos.append(None)
        if kind:
            found.add(kind)
    if len(found) > 1:
        raise ValueError(f"terms from different sectors in {text!r}")
    if found:
        kind = found.pop()
        if sector is not None and sector != kind:
            raise ValueError(f"{text!r} is not in sector {sector}")
    else:
        kind = sector if sector is not None else (0, 0)
    fixed = []
    for m in monos:
        if m is None:
            if kind == (1, 0):
                raise ValueError("a bare 1 is not a connecting element")
            fixed.append((0, 0))
        else:
            fixed.append(m)
    if kind == (0, 0) and any(e < 0 for m in fixed for e in m):
        raise ValueError("negative W,Z exponent")
    if kind != (0, 0) and any(m[0] < 0 for m in fixed):
        raise ValueError("negative U exponent")
    return AlgebraElement(kind[0], kind[1], _parity(fixed))
