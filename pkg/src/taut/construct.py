"""Constructive realizations of the dynamical toolbox, with checkable certificates.

Everything here either returns an element together with the data needed
to re-check it by pure evaluation, or raises.  Choices (interval
subdivision points, padding powers, target points) follow a fixed
preference order, so identical inputs produce identical certificates on
every platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .circle import CircleMap, SubdivisionTree
from .errors import (
    BadTuple,
    BudgetExceeded,
    CertificateError,
    IdentityInput,
    NoRoomInTarget,
    SchemaError,
    SearchBudgetExceeded,
)
from .lift import (
    DEFAULT_MAX_DEN,
    DEFAULT_MAX_ITER,
    LiftMap,
    RotResult,
    defect_delta,
    rot_result_from_json,
)
from .plmap import PLMap, concat, conjugate, commutator, is_ftau, is_ftau_compact
from .ring import ONE, QTau, ZERO, TAU, ZTau, is_tau_power, tau_pow
from .ring import parse_qtau, parse_ztau, qtau_literal, ztau_literal


# -- deterministic raw randomness -------------------------------------------

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 with the standard constants; fixed here so that seeded
    output is bit-identical on every platform and interpreter."""

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next64() % n

    def bit(self) -> bool:
        return bool(self.next64() & 1)


# -- deterministic point choices ---------------------------------------------

def preference_points(max_depth: int = 12):
    """Interior subdivision points of [0, 1], by depth then by value.

    Depth d refines the depth-(d-1) partition with one wide-first split
    per part, so the mesh shrinks geometrically and the enumeration is
    dense in (0, 1).
    """
    pts = [ZERO, ONE]
    for _ in range(max_depth):
        mids = [pts[i] + TAU * (pts[i + 1] - pts[i])
                for i in range(len(pts) - 1)]
        yield from mids
        merged = []
        for a, m in zip(pts, mids):
            merged += [a, m]
        merged.append(pts[-1])
        pts = merged


def circle_points(max_depth: int = 12):
    yield ZERO
    yield from preference_points(max_depth)


def points_between(lo: ZTau, hi: ZTau, count: int) -> list[ZTau]:
    """count increasing ring points strictly inside (lo, hi)."""
    if (hi - lo).sign() <= 0:
        raise NoRoomInTarget(f"({lo}, {hi}) is empty")
    gap = hi - lo
    return [lo + tau_pow(count + 1 - i) * gap for i in range(count)]


def first_power_below(limit: ZTau) -> int:
    """Smallest m >= 1 with tau**m < limit (limit must be positive)."""
    if limit.sign() <= 0:
        raise NoRoomInTarget(f"no powers of tau below {limit}")
    m = 1
    while (limit - tau_pow(m)).sign() <= 0:
        m += 1
        if m > 4096:
            raise SearchBudgetExceeded("power search ran away")
    return m


# -- circle arcs --------------------------------------------------------------

def _reduce(x: ZTau) -> ZTau:
    return x - x.floor()


def arc_contains(lo: ZTau, hi: ZTau, x: ZTau) -> bool:
    """Closed counterclockwise arc from lo to hi (mod 1) containing x."""
    span = _reduce(hi - lo)
    d = _reduce(x - lo)
    return (span - d).sign() >= 0


def arcs_disjoint(a: tuple[ZTau, ZTau], b: tuple[ZTau, ZTau]) -> bool:
    return not (arc_contains(*a, b[0]) or arc_contains(*a, b[1])
                or arc_contains(*b, a[0]) or arc_contains(*b, a[1]))


def _chart(center: ZTau, w: ZTau) -> ZTau:
    """Coordinates of the circle cut at center: w -> (w - center) mod 1."""
    d = _reduce(w - center)
    if not d:
        raise ValueError("point is the chart center")
    return d


def _unchart(center: ZTau, t: ZTau) -> ZTau:
    return _reduce(center + t)


def _embed_in_chart(g: PLMap, center: ZTau) -> CircleMap:
    """Circle map acting like the interval map g in the chart at center."""
    return conjugate(CircleMap.from_interval_map(g), CircleMap.rotation(center))


# -- interval matching --------------------------------------------------------

def _two_scale_exponents(ell: ZTau) -> list[int]:
    """Write a positive ring length as c*tau**k + d*tau**(k+1) with c, d >= 0
    and return the exponent multiset, large parts first.

    The rewrite tau**k = tau**(k+1) + tau**(k+2) pushes the coefficient
    pair through a Fibonacci step whose expanding eigendirection carries
    the (positive) value, so both coefficients become non-negative after
    finitely many steps.
    """
    if ell.sign() <= 0:
        raise BadTuple(f"length {ell} is not positive")
    ca, cb = ell.a, ell.b
    k = 0
    budget = 4 * (abs(ca).bit_length() + abs(cb).bit_length()) + 64
    while ca < 0 or cb < 0:
        ca, cb = ca + cb, ca
        k += 1
        budget -= 1
        if budget < 0:
            raise SearchBudgetExceeded("two-scale decomposition ran away")
    return [k] * ca + [k + 1] * cb


def _split_largest(exps: list[int]) -> None:
    i = exps.index(min(exps))
    m = exps[i]
    exps[i:i + 1] = [m + 1, m + 2]


def match_intervals(a: ZTau, b: ZTau, c: ZTau, d: ZTau) -> PLMap:
    """Increasing PL bijection [a, b] -> [c, d] inside the tau-slope groupoid.

    If the length ratio is a power of tau the map is linear.  Otherwise
    both intervals are cut into pieces whose lengths are powers of tau
    (two adjacent scales each) and pieces are matched one to one after
    equalizing the counts by wide-first splits, largest piece first.
    """
    la = b - a
    lc = d - c
    if la.sign() <= 0 or lc.sign() <= 0:
        raise BadTuple("intervals must have positive length")
    k = is_tau_power(QTau(lc) / QTau(la))
    if k is not None:
        return PLMap((a, b), (c, d), (k,))
    src = _two_scale_exponents(la)
    tgt = _two_scale_exponents(lc)
    while len(src) < len(tgt):
        _split_largest(src)
    while len(tgt) < len(src):
        _split_largest(tgt)
    xs = [a]
    for e in src:
        xs.append(xs[-1] + tau_pow(e))
    ys = [c]
    for e in tgt:
        ys.append(ys[-1] + tau_pow(e))
    # cumulative sums reproduce the endpoints exactly by construction
    xs[-1] = b
    ys[-1] = d
    return PLMap(xs, ys, [t - s for s, t in zip(src, tgt)])


# -- tuple transitivity -------------------------------------------------------

@dataclass(frozen=True)
class TransitivityCertificate:
    """An element mapping sources to targets, re-checkable by evaluation."""

    element: PLMap
    sources: tuple[ZTau, ...]
    targets: tuple[ZTau, ...]
    compact: bool = False
    expr: str | None = None
    pieces: dict[str, PLMap] = field(default_factory=dict)

    def verify(self) -> None:
        if not is_ftau(self.element):
            raise CertificateError("element does not fix 0 and 1 on [0, 1]")
        for s, t in zip(self.sources, self.targets):
            if self.element.eval_zt(s) != t:
                raise CertificateError(f"element does not map {s} to {t}")
        if self.compact and not is_ftau_compact(self.element):
            raise CertificateError("support closure is not inside (0, 1)")
        if self.expr is not None:
            from .expr import evaluate_str

            if evaluate_str(self.expr, dict(self.pieces)) != self.element:
                raise CertificateError("expression does not rebuild the element")

    def to_json(self) -> dict:
        return {
            "kind": "connect-cert",
            "sources": [ztau_literal(s) for s in self.sources],
            "targets": [ztau_literal(t) for t in self.targets],
            "compact": self.compact,
            "element": self.element.to_json(),
            "expr": self.expr,
            "pieces": {name: p.to_json() for name, p in self.pieces.items()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> TransitivityCertificate:
        try:
            return cls(
                element=PLMap.from_json(obj["element"]),
                sources=tuple(parse_ztau(s) for s in obj["sources"]),
                targets=tuple(parse_ztau(t) for t in obj["targets"]),
                compact=bool(obj.get("compact", False)),
                expr=obj.get("expr"),
                pieces={k: PLMap.from_json(v)
                        for k, v in obj.get("pieces", {}).items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad transitivity certificate: {exc}") from exc


def _check_tuples(xs, ys) -> tuple[tuple[ZTau, ...], tuple[ZTau, ...]]:
    xs = tuple(xs)
    ys = tuple(ys)
    if len(xs) != len(ys):
        raise BadTuple("tuples must have equal length")
    for tup in (xs, ys):
        for v in tup:
            if not isinstance(v, ZTau):
                raise BadTuple(f"{v!r} is not a ring point")
            if v.sign() <= 0 or (ONE - v).sign() <= 0:
                raise BadTuple(f"{v} is not strictly inside (0, 1)")
        for u, v in zip(tup, tup[1:]):
            if (v - u).sign() <= 0:
                raise BadTuple("tuples must be strictly increasing")
    return xs, ys


def connect_tuple(xs, ys) -> TransitivityCertificate:
    """Element of F_tau carrying one increasing ring tuple to another,
    built gap by gap with match_intervals."""
    xs, ys = _check_tuples(xs, ys)
    px = (ZERO,) + xs + (ONE,)
    py = (ZERO,) + ys + (ONE,)
    parts = [match_intervals(px[i], px[i + 1], py[i], py[i + 1])
             for i in range(len(px) - 1)]
    cert = TransitivityCertificate(concat(parts), xs, ys)
    cert.verify()
    return cert


def connect_tuple_derived(xs, ys) -> TransitivityCertificate:
    """Single commutator [l, f] in F_tau' carrying xs to ys.

    f is a compactly supported element doing the transport, built from a
    padded connect_tuple g and a copy h of g's boundary behaviour; l
    pushes the support interval strictly above it, so l^-1 f^-1 l fixes
    every source point and the commutator acts like f there.
    """
    xs, ys = _check_tuples(xs, ys)
    lo_lim = min(xs[0], ys[0]) if xs else TAU
    hi_lim = max(xs[-1], ys[-1]) if xs else TAU
    a = tau_pow(first_power_below(lo_lim))
    b = ONE - tau_pow(first_power_below(ONE - hi_lim))
    g = connect_tuple((a,) + xs + (b,), (a,) + ys + (b,)).element
    h = concat([g.restrict(ZERO, a), PLMap.identity(a, b), g.restrict(b, ONE)])
    f = g * h.inverse()
    i1, i2 = points_between(b, ONE, 2)
    l = connect_tuple((a, b), (i1, i2)).element
    cert = TransitivityCertificate(
        element=commutator(l, f),
        sources=xs,
        targets=ys,
        compact=True,
        expr="comm(l, f)",
        pieces={"l": l, "f": f},
    )
    cert.verify()
    return cert


# -- proximality ---------------------------------------------------------------

def proximal_shrink(j: tuple[ZTau, ZTau], i: tuple[ZTau, ZTau]) -> PLMap:
    """F_tau element carrying the closed interval j into the open interval i."""
    j_lo, j_hi = j
    i_lo, i_hi = i
    if (j_hi - j_lo).sign() < 0:
        raise BadTuple("degenerate source interval")
    if (i_lo - j_lo).sign() < 0 and (j_hi - i_hi).sign() < 0:
        return PLMap.identity()
    t1, t2 = points_between(i_lo, i_hi, 2)
    if j_lo == j_hi:
        f = connect_tuple((j_lo,), (t1,)).element
    else:
        f = connect_tuple((j_lo, j_hi), (t1, t2)).element
    for s in (j_lo, j_hi):
        img = f.eval_zt(s)
        if (img - i_lo).sign() <= 0 or (i_hi - img).sign() <= 0:
            raise CertificateError("shrink target check failed")
    return f


def proximal_shrink_circle(j: tuple[ZTau, ZTau], i: tuple[ZTau, ZTau],
                           max_depth: int = 12) -> CircleMap:
    """T_tau element carrying the closed arc j into the open arc i.

    Works in the chart at a ring point away from both arcs; such a point
    is found along the preference order (the arcs cannot cover the whole
    circle when the target has points to spare).
    """
    z = None
    for cand in circle_points(max_depth):
        if not arc_contains(*j, cand) and not arc_contains(*i, cand):
            z = cand
            break
    if z is None:
        raise NoRoomInTarget("no free ring point outside both arcs")
    jc = (_chart(z, j[0]), _chart(z, j[1]))
    ic = (_chart(z, i[0]), _chart(z, i[1]))
    f = proximal_shrink(jc, ic)
    out = _embed_in_chart(f, z)
    for s in j:
        img = out.eval_zt(s)
        if not arc_contains(*i, img):
            raise CertificateError("arc shrink target check failed")
    return out


# -- local factorization --------------------------------------------------------

@dataclass(frozen=True)
class FactorCertificate:
    """g = u * v with u fixing a neighbourhood of x and v built from pieces
    fixing a neighbourhood of y (v = comm(h2, h1) * f)."""

    g: CircleMap
    x: ZTau
    y: ZTau
    arc: tuple[ZTau, ZTau]
    u: CircleMap
    v: CircleMap
    pieces: dict[str, CircleMap]
    u_expr: str = "g * f^-1 * comm(h2, h1)^-1"
    v_expr: str = "comm(h2, h1) * f"

    def verify(self) -> None:
        from .expr import evaluate_str

        env = {"g": self.g, **self.pieces}
        if evaluate_str(self.u_expr, dict(env)) != self.u:
            raise CertificateError("u expression does not rebuild u")
        if evaluate_str(self.v_expr, dict(env)) != self.v:
            raise CertificateError("v expression does not rebuild v")
        if self.u * self.v != self.g:
            raise CertificateError("u * v differs from the factored element")
        if not self.u.fixes_neighborhood_of(self.x):
            raise CertificateError("u does not fix a neighbourhood of x")
        h3 = commutator(self.pieces["h2"], self.pieces["h1"])
        for name, piece in list(self.pieces.items()) + [("comm(h2,h1)", h3)]:
            if not piece.fixes_neighborhood_of(self.y):
                raise CertificateError(
                    f"piece {name} does not fix a neighbourhood of y")

    def to_json(self) -> dict:
        return {
            "kind": "factor-cert",
            "x": ztau_literal(self.x),
            "y": ztau_literal(self.y),
            "arc": [ztau_literal(self.arc[0]), ztau_literal(self.arc[1])],
            "g": self.g.to_json(),
            "u": self.u.to_json(),
            "v": self.v.to_json(),
            "u_expr": self.u_expr,
            "v_expr": self.v_expr,
            "pieces": {k: p.to_json() for k, p in self.pieces.items()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> FactorCertificate:
        try:
            return cls(
                g=CircleMap.from_json(obj["g"]),
                x=parse_ztau(obj["x"]),
                y=parse_ztau(obj["y"]),
                arc=(parse_ztau(obj["arc"][0]), parse_ztau(obj["arc"][1])),
                u=CircleMap.from_json(obj["u"]),
                v=CircleMap.from_json(obj["v"]),
                pieces={k: CircleMap.from_json(v)
                        for k, v in obj["pieces"].items()},
                u_expr=obj["u_expr"],
                v_expr=obj["v_expr"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad factor certificate: {exc}") from exc


def _chart_restriction_fixed_arc(u: CircleMap, lo: ZTau, hi: ZTau,
                                 center: ZTau) -> PLMap:
    """Chart table of u on the closed arc [lo, hi] that u maps onto itself
    fixing its endpoints; the arc and its image must avoid the center."""
    from .circle import _window

    span = _reduce(hi - lo)
    a = _reduce(lo)
    w = _window(u.table, a, a + span)
    m = w.ys[0] - a
    if m.b != 0:
        raise CertificateError("arc endpoint is not fixed")
    c0 = _chart(center, lo)
    shift = c0 - a
    xs = [x + shift for x in w.xs]
    ys = [y - m.a + shift for y in w.ys]
    return PLMap(xs, ys, w.ks)


def factor_local(g: CircleMap, max_depth: int = 12) -> FactorCertificate:
    """Split g != id as u * v with u in the neighbourhood-stabilizer of a
    point x and v a product of commutator material fixing a point y.

    Follows the arc game: pick x moved by g and a spare point y, squeeze
    an arc I around x until I, I*g and {x, y} are suitably separated,
    transport I*g back with an element f fixing y, cancel the remaining
    inner part of g*f^-1 on I by the commutator [h2, h1].
    """
    if g.is_identity():
        raise IdentityInput("cannot factor the identity")
    x = None
    for cand in circle_points(max_depth):
        if g.eval_zt(cand) != cand:
            x = cand
            break
    if x is None:
        raise SearchBudgetExceeded("no moved ring point found")
    xg = g.eval_zt(x)
    y = None
    for cand in circle_points(max_depth):
        if cand != x and cand != xg:
            y = cand
            break
    assert y is not None
    arc = None
    for m in range(3, 64):
        r = tau_pow(m)
        lo = _reduce(x - r)
        hi = _reduce(x + r)
        ig = (g.eval_zt(lo), g.eval_zt(hi))
        if (not arc_contains(lo, hi, y)
                and not arc_contains(*ig, x)
                and not arc_contains(*ig, y)):
            arc = (lo, hi)
            break
    if arc is None:
        raise SearchBudgetExceeded("no separating arc found")
    lo, hi = arc
    a1 = _chart(y, lo)
    b1 = _chart(y, hi)
    f_chart = connect_tuple_derived(
        (a1, b1), (_chart(y, g.eval_zt(lo)), _chart(y, g.eval_zt(hi))))
    f = _embed_in_chart(f_chart.element, y)
    w = g * f.inverse()
    if w.eval_zt(lo) != lo or w.eval_zt(hi) != hi:
        raise CertificateError("transport does not fix the arc endpoints")
    inner = _chart_restriction_fixed_arc(w, lo, hi, y)
    h1_chart = concat([PLMap.identity(ZERO, a1), inner,
                       PLMap.identity(b1, ONE)])
    h1 = _embed_in_chart(h1_chart, y)
    eps = tau_pow(first_power_below(a1))
    top = ONE - tau_pow(first_power_below(ONE - b1))
    t1, t2 = points_between(b1, top, 2)
    h2_chart = connect_tuple((eps, a1, b1, top), (eps, t1, t2, top)).element
    h2 = _embed_in_chart(h2_chart, y)
    h3 = commutator(h2, h1)
    u = g * f.inverse() * h3.inverse()
    v = h3 * f
    cert = FactorCertificate(g=g, x=x, y=y, arc=arc, u=u, v=v,
                             pieces={"f": f, "h1": h1, "h2": h2})
    cert.verify()
    return cert


# -- the two-conjugates commutator -----------------------------------------------

@dataclass(frozen=True)
class CommutatorCertificate:
    """k = [g, h] with supp(h) inside an arc displaced off itself by g, so
    k is a product of two conjugates of g^(+-1) and fixes x nearby."""

    result: CircleMap
    g: CircleMap
    h: CircleMap
    x: ZTau
    arc: tuple[ZTau, ZTau]
    expr: str = "g^-1 * conj(g, h)"

    def verify(self) -> None:
        from .expr import evaluate_str

        if evaluate_str(self.expr, {"g": self.g, "h": self.h}) != self.result:
            raise CertificateError("expression does not rebuild the element")
        if self.result.is_identity():
            raise CertificateError("commutator collapsed to the identity")
        if self.h.is_identity():
            raise CertificateError("inner element is the identity")
        if not self.result.fixes_neighborhood_of(self.x):
            raise CertificateError("result does not fix a neighbourhood of x")

    def to_json(self) -> dict:
        return {
            "kind": "commutator-cert",
            "x": ztau_literal(self.x),
            "arc": [ztau_literal(self.arc[0]), ztau_literal(self.arc[1])],
            "result": self.result.to_json(),
            "g": self.g.to_json(),
            "h": self.h.to_json(),
            "expr": self.expr,
        }

    @classmethod
    def from_json(cls, obj: dict) -> CommutatorCertificate:
        try:
            return cls(
                result=CircleMap.from_json(obj["result"]),
                g=CircleMap.from_json(obj["g"]),
                h=CircleMap.from_json(obj["h"]),
                x=parse_ztau(obj["x"]),
                arc=(parse_ztau(obj["arc"][0]), parse_ztau(obj["arc"][1])),
                expr=obj["expr"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad commutator certificate: {exc}") from exc


def commutator_trick(g: CircleMap, x: ZTau, seed: int = 0,
                     max_depth: int = 12) -> CommutatorCertificate:
    """k = [g, h] fixing a neighbourhood of x, h supported in an arc I with
    I*g disjoint from I and x outside I and I*g."""
    if g.is_identity():
        raise IdentityInput("need a nontrivial element")
    x = _reduce(x)
    w = None
    for cand in circle_points(max_depth):
        img = g.eval_zt(cand)
        if img != cand and cand != x and img != x:
            w = cand
            break
    if w is None:
        raise SearchBudgetExceeded("no usable moved point found")
    arc = None
    for m in range(2, 64):
        r = tau_pow(m)
        lo = _reduce(w - r)
        hi = _reduce(w + r)
        ig = (g.eval_zt(lo), g.eval_zt(hi))
        if (arcs_disjoint((lo, hi), ig)
                and not arc_contains(lo, hi, x)
                and not arc_contains(*ig, x)):
            arc = (lo, hi)
            break
    if arc is None:
        raise SearchBudgetExceeded("no displaced arc found")
    lo, hi = arc
    h0 = None
    for tries in range(64):
        cand = random_element(seed + tries, 3, "F_tau")
        if not cand.is_identity():
            h0 = cand
            break
    if h0 is None:
        raise SearchBudgetExceeded("random inner element kept degenerating")
    # embed h0 into the arc through the chart at its endpoint hi
    a2 = _chart(hi, lo)
    t = match_intervals(ZERO, ONE, a2, ONE)
    inner = conjugate(h0, t)
    h = _embed_in_chart(concat([PLMap.identity(ZERO, a2), inner]), hi)
    k = commutator(g, h)
    cert = CommutatorCertificate(result=k, g=g, h=h, x=x, arc=arc)
    cert.verify()
    return cert


# -- defect witnesses -------------------------------------------------------------

def standard_push_map() -> CircleMap:
    """Two-piece circle map fixing 0: slope 1/tau on [0, tau**2], tau after."""
    t2 = tau_pow(2)
    return CircleMap.from_interval_map(
        PLMap((ZERO, t2, ONE), (ZERO, TAU, ONE), (-1, 1)))


@dataclass(frozen=True)
class DefectWitness:
    """Pair (g, h) with exact rotation numbers witnessing a lower bound for
    the defect of rot."""

    g: LiftMap
    h: LiftMap
    delta: QTau
    rots: tuple[RotResult, RotResult, RotResult]
    n: int | None = None

    def verify(self, *, max_den: int = DEFAULT_MAX_DEN,
               max_iter: int = DEFAULT_MAX_ITER) -> None:
        d = defect_delta(self.g, self.h, max_den=max_den, max_iter=max_iter)
        if not d.is_exact or d.exact != self.delta:
            raise CertificateError("recomputed defect delta disagrees")

    def to_json(self) -> dict:
        return {
            "kind": "defect-witness",
            "n": self.n,
            "delta": qtau_literal(self.delta),
            "g": self.g.to_json(),
            "h": self.h.to_json(),
            "rots": [r.to_json() for r in self.rots],
        }

    @classmethod
    def from_json(cls, obj: dict) -> DefectWitness:
        try:
            return cls(
                g=LiftMap.from_json(obj["g"]),
                h=LiftMap.from_json(obj["h"]),
                delta=parse_qtau(obj["delta"]),
                rots=tuple(rot_result_from_json(r) for r in obj["rots"]),
                n=obj.get("n"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad defect witness: {exc}") from exc


def defect_witness(n: int, *, max_den: int = DEFAULT_MAX_DEN,
                   max_iter: int = DEFAULT_MAX_ITER) -> DefectWitness:
    """Deterministic family: g pulls everything towards 0, h is g conjugated
    by the rotation tau**2; both have rot 0, and rot(g*h) drifts towards -1
    as n grows, so delta = |rot(g*h)| approaches the defect bound 1."""
    if n < 1:
        raise BadTuple("need n >= 1")
    g = LiftMap(standard_push_map(), 0).power(-n)
    rho = LiftMap(CircleMap.rotation(tau_pow(2)), 0)
    h = conjugate(g, rho)
    d = defect_delta(g, h, max_den=max_den, max_iter=max_iter)
    if not d.is_exact:
        raise BudgetExceeded("product rotation number not certified in budget")
    return DefectWitness(g=g, h=h, delta=d.exact, rots=d.rots, n=n)


def defect_witness_search(samples: int, seed: int, *, size: int = 4,
                          max_den: int = DEFAULT_MAX_DEN,
                          max_iter: int = DEFAULT_MAX_ITER) -> DefectWitness:
    """Seeded random search keeping the best exactly-certified delta."""
    rng = SplitMix64(seed)
    best: DefectWitness | None = None
    for _ in range(samples):
        sg = rng.next64()
        sh = rng.next64()
        g = random_element(sg, size, "Lift")
        h = random_element(sh, size, "Lift")
        try:
            d = defect_delta(g, h, max_den=max_den, max_iter=max_iter)
        except BudgetExceeded:
            continue
        if not d.is_exact:
            continue
        if best is None or d.exact > best.delta:
            best = DefectWitness(g=g, h=h, delta=d.exact, rots=d.rots)
    if best is None:
        raise BudgetExceeded("no pair could be certified exactly")
    return best


# -- seeded random elements --------------------------------------------------------

def _random_tree(rng: SplitMix64, leaves: int) -> SubdivisionTree:
    if leaves == 1:
        return SubdivisionTree.leaf()
    left = 1 + rng.below(leaves - 1)
    return SubdivisionTree.split(_random_tree(rng, left),
                                 _random_tree(rng, leaves - left),
                                 rng.bit())


def random_element(seed: int, size: int, flavor: str = "T_tau"):
    """Deterministic element from a SplitMix64 stream: two subdivision trees
    with `size` leaves, plus a shift (and an integer part for lifts)."""
    if size < 1:
        raise BadTuple("size must be at least 1")
    rng = SplitMix64(seed)
    p = _random_tree(rng, size)
    q = _random_tree(rng, size)
    if flavor == "F_tau":
        pb = p.boundaries(ZERO, ONE)
        qb = q.boundaries(ZERO, ONE)
        ks = [te - se for se, te in zip(p.leaf_exponents(), q.leaf_exponents())]
        return PLMap(pb, qb, ks)
    shift = rng.below(size) if size > 1 else 0
    out = CircleMap.from_tree_pair(p, q, shift)
    if flavor == "T_tau":
        return out
    if flavor == "Lift":
        return LiftMap(out, rng.below(5) - 2)
    raise ValueError(f"unknown flavor {flavor!r}")
