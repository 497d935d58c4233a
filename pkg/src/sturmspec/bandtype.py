"""A/B types of spectral bands and the forward properties that come with them.

A band of sigma_c is of type A when it sits strictly inside a band one
level below (c without its last digit), and of type B when it is not
inside anything one level below but strictly inside a band two levels
below.  Associated bands are located once at a large reference coupling
and then followed by index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .bandscan import (
    Band,
    BandSet,
    find_container,
    precedes,
    spectrum,
    spectrum_bands,
    strictly_inside,
    weakly_inside,
    band_trace_zero,
)
from .contfrac import ContFrac, is_degenerate, make_contfrac, reduce
from .errors import DegenerateExpansion, Inconsistent, MissingNeighbor, PreconditionFail
from .tracepoly import trace_eval

V_REF = 8.0
WEAK_TOL = 1e-9


@dataclass(frozen=True)
class BackwardFlags:
    A: bool
    B: bool
    weakA: bool
    weakB: bool


def backward_type(band: Band, V: float, tol: float = WEAK_TOL) -> BackwardFlags:
    c = band.parent
    if is_degenerate(c) and reduce(c).digits != (0, 0, -1):
        raise DegenerateExpansion(str(c))
    if not c.can_extend():
        raise DegenerateExpansion(f"{c} cannot be extended by 0 and -1")
    below_a = spectrum(c.extend(0), V)
    below_b = spectrum(c.extend(-1), V)
    return BackwardFlags(
        A=find_container(band, below_a) is not None,
        B=find_container(band, below_b) is not None,
        weakA=find_container(band, below_a, strict=False, tol=tol) is not None,
        weakB=find_container(band, below_b, strict=False, tol=tol) is not None,
    )


def _drop(c: ContFrac, k: int) -> ContFrac | None:
    if c.level - k < -1:
        return None
    return ContFrac(c.digits[: len(c.digits) - k])


def dichotomy_label(band: Band, V: float, tol: float = WEAK_TOL) -> str | None:
    """"A", "B", or None when neither characterisation applies."""
    c = band.parent
    one = _drop(c, 1)
    if one is None:
        return None
    if find_container(band, spectrum(one, V)) is not None:
        return "A"
    if find_container(band, spectrum(one, V), strict=False, tol=tol) is not None:
        return None
    two = _drop(c, 2)
    if two is None or find_container(band, spectrum(two, V)) is not None:
        return "B"
    return None


@dataclass
class TypeReport:
    cf: ContFrac
    index: int
    labels: dict[float, str | None]
    backward: dict[float, BackwardFlags]
    forward_checks: dict[int, "ForwardReport"] = field(default_factory=dict)

    @property
    def final(self) -> str:
        seen = set(self.labels.values())
        if len(seen) == 1 and None not in seen:
            return seen.pop()
        return "inconsistent"

    def record(self) -> dict:
        return {"cf": list(self.cf.digits), "index": self.index, "type": self.final,
                "labels": {repr(v): l for v, l in self.labels.items()}}


def classify(c: ContFrac | Sequence[int], V_grid: Sequence[float], strict: bool = True) -> list[TypeReport]:
    """Label every band of sigma_c at each V of the grid.

    Raises Inconsistent when a band changes label or gets none.
    """
    if not isinstance(c, ContFrac):
        c = make_contfrac(c)
    reports: list[TypeReport] = []
    for V in V_grid:
        bs = spectrum_bands(c, V)
        if not reports:
            reports = [TypeReport(c, j, {}, {}) for j in range(len(bs))]
        for rep, band in zip(reports, bs):
            rep.labels[V] = dichotomy_label(band, V)
            if c.can_extend():
                rep.backward[V] = backward_type(band, V)
    if strict:
        bad = [r for r in reports if r.final == "inconsistent"]
        if bad:
            raise Inconsistent(f"{c}: bands {[r.index for r in bad]} have labels {[r.labels for r in bad]}")
    return reports


def band_labels(c: ContFrac, V: float) -> list[str | None]:
    return [dichotomy_label(b, V) for b in spectrum_bands(c, V)]


# -- associated bands ----------------------------------------------------------------


@dataclass(frozen=True)
class Associated:
    """Indices of the bands tied to I_c for a given m, resolved at V_ref."""

    cf: ContFrac
    index: int
    m: int
    label: str
    M: int
    children: tuple[int, ...]
    tower: dict[int, tuple[int, ...]]
    J: int | None
    K: int | None
    counts_ok: bool

    def require_J(self) -> int:
        if self.J is None:
            raise MissingNeighbor(f"no band of sigma_[c,{self.m}] precedes band {self.index}")
        return self.J

    def require_K(self) -> int:
        if self.K is None:
            raise MissingNeighbor(f"no band of sigma_[c,{self.m}] follows band {self.index}")
        return self.K


def _inside(bs: BandSet, outer) -> list[int]:
    return [b.index for b in bs if strictly_inside(b, outer)]


def associated_bands(I_c: Band, m: int, n: int, V_ref: float = V_REF) -> Associated:
    c = I_c.parent
    ref = spectrum_bands(c, V_ref)[I_c.index]
    flags = backward_type(ref, V_ref)
    if flags.A == flags.B:
        raise Inconsistent(f"band {I_c.index} of {c} has backward flags {flags} at V={V_ref}")
    label = "A" if flags.A else "B"
    M = m - 1 if label == "A" else m
    cm = c.extend(m)
    s_cm = spectrum_bands(cm, V_ref)
    children = tuple(_inside(s_cm, ref))
    counts_ok = len(children) == M
    tower: dict[int, tuple[int, ...]] = {}
    outer = [ref] * (M + 1)
    for k in range(1, n + 1):
        s = spectrum_bands(cm.extend(k), V_ref)
        if k == 1:
            idx = tuple(_inside(s, ref))
        else:
            idx = []
            for o in outer:
                inside = _inside(s, o)
                counts_ok = counts_ok and len(inside) == 1
                idx.extend(inside[:1])
            idx = tuple(idx)
        counts_ok = counts_ok and len(idx) == M + 1
        tower[k] = idx
        outer = [s[i] for i in idx]
    before = [b.index for b in s_cm if precedes(b, ref)]
    after = [b.index for b in s_cm if precedes(ref, b)]
    return Associated(c, I_c.index, m, label, M, children, tower,
                      max(before) if before else None, min(after) if after else None, counts_ok)


@dataclass
class ForwardReport:
    m: int
    V: float
    M: int
    A1: bool
    A2: bool
    B1: bool
    B2: bool
    I: bool
    tower_counts: dict[int, list[int]]

    @property
    def all_hold(self) -> bool:
        return self.A1 and self.A2 and self.B1 and self.B2 and self.I

    @property
    def unique(self) -> bool:
        """Exactly M+1 tower bands at n = 1 and one per tower band afterwards."""
        return all(
            counts == ([self.M + 1] if k == 1 else [1] * (self.M + 1)) for k, counts in self.tower_counts.items()
        )


def forward_check(I_c: Band, m: int, V: float, n_max: int = 4, V_ref: float = V_REF) -> ForwardReport:
    """Evaluate (A1), (A2), (B1), (B2) and the interlacing order at V for n = 1..n_max."""
    assoc = associated_bands(I_c, m, n_max, V_ref)
    c = I_c.parent
    Ic = spectrum_bands(c, V)[I_c.index]
    cm = c.extend(m)
    s_cm = spectrum_bands(cm, V)
    kids = [s_cm[i] for i in assoc.children]
    a1 = len(kids) == assoc.M and all(strictly_inside(b, Ic) for b in kids)
    a2 = all(not backward_type(b, V).weakB for b in kids)
    b1 = b2 = order = True
    counts: dict[int, list[int]] = {}
    prev = [Ic] * (assoc.M + 1)
    for k in range(1, n_max + 1):
        s = spectrum_bands(cm.extend(k), V)
        tower = [s[i] for i in assoc.tower[k]]
        if len(tower) != assoc.M + 1:
            b1 = False
            break
        b1 = b1 and all(strictly_inside(t, p) for t, p in zip(tower, prev))
        inside = [sum(1 for b in s if strictly_inside(b, p)) for p in prev]
        counts[k] = inside[:1] if k == 1 else inside
        b2 = b2 and all(not backward_type(t, V).weakA for t in tower)
        chain = [tower[0]]
        for kid, t in zip(kids, tower[1:]):
            chain += [kid, t]
        order = order and all(precedes(x, y) for x, y in zip(chain, chain[1:]))
        prev = tower
    return ForwardReport(m, V, assoc.M, a1, a2, b1, b2, order, counts)


def index_relation_check(I_c: Band, m: int, n: int, V_ref: float = V_REF) -> bool:
    a = associated_bands(I_c, m, n, V_ref)
    ic = I_c.index
    tower = a.tower[n]
    ok = a.counts_ok
    if a.M >= 1:
        for i, kid in enumerate(a.children):
            ok = ok and tower[i] == n * kid + ic and tower[i + 1] == n * (kid + 1) + ic
    else:
        if a.K is not None:
            ok = ok and tower[0] == n * a.K + ic
        if a.J is not None:
            ok = ok and tower[0] == n * (a.J + 1) + ic
    if a.label == "B" and m == 1 and a.children:
        c = I_c.parent
        ref = spectrum_bands(c, V_ref)[ic]
        below = spectrum(c.extend(0), V_ref)
        if not below.full_line:
            before = [b.index for b in below if precedes(b, ref)]
            after = [b.index for b in below if precedes(ref, b)]
            if before:
                ok = ok and a.children[0] == ic + max(before) + 1
            if after:
                ok = ok and a.children[0] == ic + min(after)
    return ok


# -- trace ladder ------------------------------------------------------------------


@dataclass
class LadderReport:
    side: str
    E: float
    V: float
    excess: list[float]
    magnitudes: list[float]
    sign_products: list[float]
    before_trace_zero: bool

    def max_error(self) -> float:
        return max(abs(x - (k + 1) * self.V) for k, x in enumerate(self.excess))

    @property
    def monotone(self) -> bool:
        return all(a < b for a, b in zip(self.magnitudes, self.magnitudes[1:]))

    @property
    def signs_positive(self) -> bool:
        return all(s > 0 for s in self.sign_products)


def trace_ladder_check(I_c: Band, m: int, n_max: int, V: float, side: str = "J", V_ref: float = V_REF) -> LadderReport:
    """|t_[c,m,n](E)| - |t_c(E)| against n V at E = R(J_cm) (or L(K_cm) for side "K")."""
    a = associated_bands(I_c, m, 1, V_ref)
    if a.label != "B":
        raise PreconditionFail("the ladder needs a type-B band")
    c = I_c.parent
    cm = c.extend(m)
    s_cm = spectrum_bands(cm, V)
    Ic = spectrum_bands(c, V)[I_c.index]
    tower1 = spectrum_bands(cm.extend(1), V)
    if side == "J":
        E = s_cm[a.require_J()].right
        target = tower1[a.tower[1][0]]
    else:
        E = s_cm[a.require_K()].left
        target = tower1[a.tower[1][-1]]
    if not (target.left <= E <= target.right):
        raise PreconditionFail(f"E = {E} lies outside the first tower band {target.as_interval()}")
    tc = trace_eval(c, E, V)
    tcm = trace_eval(cm, E, V)
    excess, mags, signs = [], [], []
    prev = tc
    for n in range(1, n_max + 1):
        t = trace_eval(cm.extend(n), E, V)
        excess.append(abs(t) - abs(tc))
        mags.append(abs(t))
        signs.append(tcm * prev * t)
        prev = t
    before = True
    if side == "J" and Ic.left <= E <= Ic.right:
        z = band_trace_zero(Ic, V)
        before = E < z and math.copysign(1, tc) == math.copysign(1, trace_eval(c, Ic.left, V))
    return LadderReport(side, E, V, excess, mags, signs, before)


def past_trace_zero(I_c: Band, m: int, V: float, V_ref: float = V_REF) -> bool:
    """True when R(J_cm) lies in I_c at or beyond the zero of t_c inside it."""
    a = associated_bands(I_c, m, 1, V_ref)
    c = I_c.parent
    Ic = spectrum_bands(c, V)[I_c.index]
    E = spectrum_bands(c.extend(m), V)[a.require_J()].right
    return Ic.left <= E <= Ic.right and E >= band_trace_zero(Ic, V)


def duality_pair(c: ContFrac, m: int, V: float) -> tuple[BandSet, BandSet, list, list]:
    """sigma_[c,m] and sigma_[c,m-1,1] with their backward labels."""
    left = spectrum_bands(c.extend(m), V)
    right = spectrum_bands(c.extend(m - 1, 1), V)

    def lab(bs: BandSet) -> list[str | None]:
        out = []
        for b in bs:
            f = backward_type(b, V)
            out.append("A" if f.A and not f.B else "B" if f.B and not f.A else None)
        return out

    return left, right, lab(left), lab(right)


def weak_ok(inner: Band, outer: Band) -> bool:
    return weakly_inside(inner, outer, WEAK_TOL)
