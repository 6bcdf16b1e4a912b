"""Exact piecewise linear bijections with Z[tau] breakpoints and tau-power slopes.

A PLMap is an increasing PL bijection between two intervals with Z[tau]
endpoints, stored as breakpoints xs, their images ys and per-piece slope
exponents ks (piece i has slope tau**ks[i]).  Construction always checks
the slope identities exactly and merges colinear pieces, so equality of
normalized tables is equality of maps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DomainMismatch,
    NotInRing,
    NotIncreasing,
    NotTauPower,
    OutOfDomain,
    SchemaError,
    SlopeMismatch,
)
from .ring import ONE, QTau, ZERO, ZTau, _as_qtau, is_tau_power, tau_pow


def _piece_index(xs, x) -> int:
    # largest j with xs[j] <= x, clipped to the last piece
    lo, hi = 0, len(xs) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (x - xs[mid]).sign() >= 0:
            lo = mid
        else:
            hi = mid
    return lo


class PLMap:
    __slots__ = ("xs", "ys", "ks")

    def __init__(self, xs, ys, ks) -> None:
        xs = tuple(xs)
        ys = tuple(ys)
        ks = tuple(ks)
        if len(xs) < 2 or len(xs) != len(ys) or len(ks) != len(xs) - 1:
            raise SchemaError("breakpoint table has inconsistent lengths")
        for v in xs + ys:
            if not isinstance(v, ZTau):
                raise NotInRing(f"breakpoint {v!r} is not in Z[tau]")
        for i in range(len(ks)):
            dx = xs[i + 1] - xs[i]
            dy = ys[i + 1] - ys[i]
            if dx.sign() <= 0 or dy.sign() <= 0:
                raise NotIncreasing(f"table is not strictly increasing at piece {i}")
            if dy != tau_pow(ks[i]) * dx:
                if is_tau_power(QTau(dy) / QTau(dx)) is None:
                    raise NotTauPower(f"slope of piece {i} is no power of tau")
                raise SlopeMismatch(
                    f"piece {i} does not have slope tau**{ks[i]}")
        # merge colinear neighbours: same exponent across a shared breakpoint
        keep = [0]
        for i in range(1, len(xs) - 1):
            if ks[i - 1] != ks[i]:
                keep.append(i)
        keep.append(len(xs) - 1)
        self.xs = tuple(xs[i] for i in keep)
        self.ys = tuple(ys[i] for i in keep)
        self.ks = tuple(ks[i] for i in keep[:-1])

    # -- construction -------------------------------------------------

    @classmethod
    def identity(cls, lo: ZTau = ZERO, hi: ZTau = ONE) -> PLMap:
        return cls((lo, hi), (lo, hi), (0,))

    @classmethod
    def from_raw(cls, xs, ys, ks=None) -> PLMap:
        """Validate an untrusted table; slope exponents are inferred if absent."""
        xs = [_coerce_ring(x) for x in xs]
        ys = [_coerce_ring(y) for y in ys]
        if ks is None:
            ks = []
            for i in range(len(xs) - 1):
                dx = xs[i + 1] - xs[i]
                dy = ys[i + 1] - ys[i]
                if dx.sign() <= 0 or dy.sign() <= 0:
                    raise NotIncreasing(f"table is not strictly increasing at piece {i}")
                k = is_tau_power(QTau(dy) / QTau(dx))
                if k is None:
                    raise NotTauPower(f"slope of piece {i} is no power of tau")
                ks.append(k)
        return cls(xs, ys, [int(k) for k in ks])

    @classmethod
    def from_json(cls, obj: object) -> PLMap:
        if not isinstance(obj, dict):
            raise SchemaError("piecewise map payload must be an object")
        try:
            xs = [QTau(ZTau.from_json(v)) if "a" in v else QTau.from_json(v)
                  for v in obj["xs"]]
            ys = [QTau(ZTau.from_json(v)) if "a" in v else QTau.from_json(v)
                  for v in obj["ys"]]
            ks = obj.get("ks")
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad piecewise map payload: {exc}") from exc
        return cls.from_raw(xs, ys, ks)

    def to_json(self) -> dict:
        return {
            "xs": [x.to_json() for x in self.xs],
            "ys": [y.to_json() for y in self.ys],
            "ks": list(self.ks),
        }

    # -- basic queries ------------------------------------------------

    @property
    def num_pieces(self) -> int:
        return len(self.ks)

    def domain(self) -> tuple[ZTau, ZTau]:
        return self.xs[0], self.xs[-1]

    def codomain(self) -> tuple[ZTau, ZTau]:
        return self.ys[0], self.ys[-1]

    def is_identity(self) -> bool:
        return self.ks == (0,) and self.xs == self.ys

    def __repr__(self) -> str:
        return (f"PLMap([{', '.join(map(str, self.xs))}] -> "
                f"[{', '.join(map(str, self.ys))}], ks={list(self.ks)})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PLMap):
            return NotImplemented
        return (self.xs, self.ys, self.ks) == (other.xs, other.ys, other.ks)

    def __hash__(self) -> int:
        return hash((self.xs, self.ys, self.ks))

    # -- evaluation ---------------------------------------------------

    def eval(self, x) -> QTau:
        x = _as_qtau(x)
        if (x - self.xs[0]).sign() < 0 or (x - self.xs[-1]).sign() > 0:
            raise OutOfDomain(f"{x} outside [{self.xs[0]}, {self.xs[-1]}]")
        j = _piece_index(self.xs, x)
        return QTau(self.ys[j]) + QTau(tau_pow(self.ks[j])) * (x - QTau(self.xs[j]))

    def eval_zt(self, x: ZTau) -> ZTau:
        if (x - self.xs[0]).sign() < 0 or (x - self.xs[-1]).sign() > 0:
            raise OutOfDomain(f"{x} outside [{self.xs[0]}, {self.xs[-1]}]")
        j = _piece_index(self.xs, x)
        return self.ys[j] + tau_pow(self.ks[j]) * (x - self.xs[j])

    def preimage_zt(self, y: ZTau) -> ZTau:
        j = _piece_index(self.ys, y)
        return self.xs[j] + tau_pow(-self.ks[j]) * (y - self.ys[j])

    # -- group structure ----------------------------------------------

    def __mul__(self, other: PLMap) -> PLMap:
        """Composition in action order: x -> other(self(x))."""
        if not isinstance(other, PLMap):
            return NotImplemented
        if self.ys[0] != other.xs[0] or self.ys[-1] != other.xs[-1]:
            raise DomainMismatch(
                f"range [{self.ys[0]}, {self.ys[-1]}] does not match "
                f"domain [{other.xs[0]}, {other.xs[-1]}]")
        pts = set(self.xs)
        for u in other.xs[1:-1]:
            pts.add(self.preimage_zt(u))
        xs = sorted(pts)
        ys = [other.eval_zt(self.eval_zt(x)) for x in xs]
        ks = []
        for i in range(len(xs) - 1):
            j1 = _piece_index(self.xs, xs[i])
            j2 = _piece_index(other.xs, self.eval_zt(xs[i]))
            ks.append(self.ks[j1] + other.ks[j2])
        return PLMap(xs, ys, ks)

    def inverse(self) -> PLMap:
        return PLMap(self.ys, self.xs, tuple(-k for k in self.ks))

    def restrict(self, lo: ZTau, hi: ZTau) -> PLMap:
        if (lo - self.xs[0]).sign() < 0 or (hi - self.xs[-1]).sign() > 0 \
                or (hi - lo).sign() <= 0:
            raise OutOfDomain(f"[{lo}, {hi}] is not inside the domain")
        xs = [lo] + [x for x in self.xs if (x - lo).sign() > 0
                     and (hi - x).sign() > 0] + [hi]
        ys = [self.eval_zt(x) for x in xs]
        ks = [self.ks[_piece_index(self.xs, xs[i])] for i in range(len(xs) - 1)]
        return PLMap(xs, ys, ks)

    # -- dynamics -----------------------------------------------------

    def support(self) -> IntervalSet:
        """Closure of the moved set, from the maximal pointwise-fixed pieces."""
        fixed = []
        for i, k in enumerate(self.ks):
            if k == 0 and self.ys[i] == self.xs[i]:
                if fixed and fixed[-1][1] == self.xs[i]:
                    fixed[-1] = (fixed[-1][0], self.xs[i + 1])
                else:
                    fixed.append((self.xs[i], self.xs[i + 1]))
        out = []
        cur = self.xs[0]
        for lo, hi in fixed:
            if (lo - cur).sign() > 0:
                out.append((cur, lo))
            cur = hi
        if (self.xs[-1] - cur).sign() > 0:
            out.append((cur, self.xs[-1]))
        return IntervalSet(tuple(out))

    def shift_roots(self, s: ZTau) -> Trichotomy:
        """Exact trichotomy for d(x) = self(x) - x - s on the domain."""
        vals = [self.ys[i] - self.xs[i] - s for i in range(len(self.xs))]
        for i, k in enumerate(self.ks):
            if k == 0 and not vals[i]:
                return Trichotomy(FLAT, flat=(self.xs[i], self.xs[i + 1]))
        for i, v in enumerate(vals):
            if not v:
                return Trichotomy(ROOT, root=QTau(self.xs[i]))
        signs = [v.sign() for v in vals]
        if all(sg > 0 for sg in signs):
            return Trichotomy(ABOVE)
        if all(sg < 0 for sg in signs):
            return Trichotomy(BELOW)
        for i in range(len(self.ks)):
            if signs[i] * signs[i + 1] < 0:
                k = self.ks[i]
                # d is linear and non-constant on the piece (k = 0 would make
                # the endpoint values equal), so the root is the exact quotient
                root = (QTau(self.xs[i] * tau_pow(k) - self.ys[i] + s)
                        / QTau(tau_pow(k) - ONE))
                return Trichotomy(ROOT, root=root)
        raise AssertionError("sign pattern without a crossing")


ABOVE = "above"
BELOW = "below"
ROOT = "root"
FLAT = "flat"


@dataclass(frozen=True)
class Trichotomy:
    verdict: str
    root: QTau | None = None
    flat: tuple[ZTau, ZTau] | None = None

    def has_fixed_point(self) -> bool:
        return self.verdict in (ROOT, FLAT)

    def witness(self) -> QTau:
        if self.verdict == ROOT:
            return self.root
        if self.verdict == FLAT:
            return QTau(self.flat[0])
        raise ValueError(f"no fixed point in verdict {self.verdict!r}")


@dataclass(frozen=True)
class IntervalSet:
    intervals: tuple[tuple[ZTau, ZTau], ...]

    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x: ZTau) -> bool:
        return any((x - lo).sign() >= 0 and (hi - x).sign() >= 0
                   for lo, hi in self.intervals)

    def inside(self, lo: ZTau, hi: ZTau, strict: bool = False) -> bool:
        cmp = 1 if strict else 0
        return all((a - lo).sign() >= cmp and (hi - b).sign() >= cmp
                   for a, b in self.intervals)


def _coerce_ring(v) -> ZTau:
    if isinstance(v, ZTau):
        return v
    if isinstance(v, int):
        return ZTau(v)
    if isinstance(v, QTau):
        if v.den != 1:
            raise NotInRing(f"{v} is not in Z[tau]")
        return v.num
    raise NotInRing(f"{v!r} is not in Z[tau]")


def concat(parts: list[PLMap]) -> PLMap:
    """Glue maps on adjacent intervals into one map (endpoints must meet)."""
    xs = list(parts[0].xs)
    ys = list(parts[0].ys)
    ks = list(parts[0].ks)
    for p in parts[1:]:
        if p.xs[0] != xs[-1] or p.ys[0] != ys[-1]:
            raise DomainMismatch(
                f"piece starting at ({p.xs[0]}, {p.ys[0]}) does not meet "
                f"({xs[-1]}, {ys[-1]})")
        xs.extend(p.xs[1:])
        ys.extend(p.ys[1:])
        ks.extend(p.ks)
    return PLMap(xs, ys, ks)


# -- group words, shared by interval, circle and lift elements ---------

def power(el, k: int, piece_cap: int | None = None):
    """el**k by exact repeated composition; k = 0 gives the identity."""
    if k == 0:
        return el * el.inverse()
    base = el if k > 0 else el.inverse()
    k = abs(k)
    out = None
    while k:
        if k & 1:
            out = base if out is None else _capped_mul(out, base, piece_cap)
        k >>= 1
        if k:
            base = _capped_mul(base, base, piece_cap)
    return out


def _capped_mul(a, b, piece_cap):
    out = a * b
    if piece_cap is not None:
        n = getattr(out, "num_pieces", None)
        if n is not None and n > piece_cap:
            from .errors import PowerBudgetExceeded

            raise PowerBudgetExceeded(
                f"{n} pieces exceed the configured cap {piece_cap}")
    return out


def commutator(a, b):
    """[a, b] = a^-1 b^-1 a b (right-action convention)."""
    return a.inverse() * b.inverse() * a * b


def conjugate(a, b):
    """a conjugated by b: b^-1 a b."""
    return b.inverse() * a * b


# -- membership flavours -------------------------------------------------

def is_ftau(g: PLMap) -> bool:
    """Increasing PL bijection of [0,1] (breakpoint/slope conditions are
    already part of the representation)."""
    return (g.xs[0] == ZERO and g.xs[-1] == ONE
            and g.ys[0] == ZERO and g.ys[-1] == ONE)


def is_ftau_compact(g: PLMap) -> bool:
    """In F_tau with support closure strictly inside (0, 1)."""
    if not is_ftau(g):
        return False
    return g.support().inside(ZERO, ONE, strict=True)


def is_supported_in(g: PLMap, lo: ZTau, hi: ZTau) -> bool:
    return g.support().inside(lo, hi)
