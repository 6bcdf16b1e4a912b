"""Circle maps of the golden ratio Thompson group T_tau as canonical lifts.

An element is stored as the one-period table of its lift: a PLMap on
[0, 1] with image [v, v+1], where the base value v = table(0) lies in
Z[tau] with 0 <= v < 1.  Storing v in the ring is exactly the constraint
that separates T_tau from arbitrary PL circle maps with tau-power slopes
(every rotation satisfies the breakpoint and slope conditions, but only
ring rotations preserve Z[tau]/Z).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DegreeNotOne,
    LeafCountMismatch,
    NotFtau,
    SchemaError,
    ValidationError,
)
from .plmap import PLMap, _coerce_ring, _piece_index, is_ftau, power
from .ring import ONE, QTau, ZERO, TAU, ZTau, _as_qtau, tau_pow

DEFAULT_PIECE_CAP = 100_000


class CircleMap:
    __slots__ = ("table",)

    def __init__(self, table: PLMap) -> None:
        if table.xs[0] != ZERO or table.xs[-1] != ONE:
            raise ValidationError("lift table must live on [0, 1]")
        if table.ys[-1] - table.ys[0] != ONE:
            raise DegreeNotOne("lift must satisfy g(1) = g(0) + 1")
        j = table.ys[0].floor()
        if j:
            table = PLMap(table.xs, tuple(y - j for y in table.ys), table.ks)
        self.table = table

    # -- constructors ---------------------------------------------------

    @classmethod
    def identity(cls) -> CircleMap:
        return cls(PLMap.identity())

    @classmethod
    def rotation(cls, alpha: ZTau | int) -> CircleMap:
        if isinstance(alpha, int):
            alpha = ZTau(alpha)
        v = alpha - alpha.floor()
        return cls(PLMap((ZERO, ONE), (v, v + 1), (0,)))

    @classmethod
    def from_interval_map(cls, g: PLMap) -> CircleMap:
        if not is_ftau(g):
            raise NotFtau("interval map must be an F_tau element on [0, 1]")
        return cls(g)

    @classmethod
    def from_tree_pair(cls, p: SubdivisionTree, q: SubdivisionTree,
                       shift: int) -> CircleMap:
        """Map leaf i of p's partition onto leaf (i + shift) mod L of q's,
        wrapping through 1."""
        lcount = p.leaf_count()
        if q.leaf_count() != lcount:
            raise LeafCountMismatch(
                f"{lcount} leaves versus {q.leaf_count()}")
        shift %= lcount
        pb = p.boundaries(ZERO, ONE)
        qb = q.boundaries(ZERO, ONE)
        pe = p.leaf_exponents()
        qe = q.leaf_exponents()
        ys = []
        for i in range(lcount):
            j = i + shift
            ys.append(qb[j % lcount] + (1 if j >= lcount else 0))
        ys.append(ys[0] + 1)
        ks = [qe[(i + shift) % lcount] - pe[i] for i in range(lcount)]
        return cls(PLMap(pb, ys, ks))

    @classmethod
    def from_raw(cls, xs, ys, ks=None, v=None) -> CircleMap:
        table = PLMap.from_raw(xs, ys, ks)
        if v is not None:
            v = _coerce_ring(v)
            if table.ys[0] != v - v.floor() and table.ys[0] != v:
                raise SchemaError("stated base value disagrees with the table")
        return cls(table)

    @classmethod
    def from_json(cls, obj: object) -> CircleMap:
        if not isinstance(obj, dict):
            raise SchemaError("circle map payload must be an object")
        table = PLMap.from_json({k: obj[k] for k in ("xs", "ys", "ks")
                                 if k in obj})
        g = cls(table)
        stated = obj.get("base")
        if stated is None and isinstance(obj.get("v"), dict):
            stated = obj["v"]
        if stated is not None:
            sv = ZTau.from_json(stated)
            if g.v != sv - sv.floor():
                raise SchemaError("stated base value disagrees with the table")
        return g

    def to_json(self) -> dict:
        out = self.table.to_json()
        out["base"] = self.v.to_json()
        return out

    # -- queries --------------------------------------------------------

    @property
    def v(self) -> ZTau:
        return self.table.ys[0]

    @property
    def num_pieces(self) -> int:
        return self.table.num_pieces

    def is_rotation(self) -> bool:
        return self.table.ks == (0,)

    def is_identity(self) -> bool:
        return self.is_rotation() and not self.v

    def __repr__(self) -> str:
        return f"CircleMap(v={self.v}, pieces={self.num_pieces})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CircleMap):
            return NotImplemented
        return self.table == other.table

    def __hash__(self) -> int:
        return hash(("circle", self.table))

    # -- evaluation -------------------------------------------------------

    def eval(self, x) -> QTau:
        x = _as_qtau(x)
        r = x - x.floor()
        y = self.table.eval(r)
        return y - y.floor()

    def eval_zt(self, x: ZTau) -> ZTau:
        r = x - x.floor()
        y = self.table.eval_zt(r)
        return y - y.floor()

    def lift_eval(self, x) -> QTau:
        x = _as_qtau(x)
        n = x.floor()
        return self.table.eval(x - n) + n

    def lift_eval_zt(self, x: ZTau) -> ZTau:
        n = x.floor()
        return self.table.eval_zt(x - n) + n

    # -- group operations -------------------------------------------------

    def compose_with_carry(self, other: CircleMap) -> tuple[CircleMap, int]:
        """Canonical table of x -> other(self(x)) plus the integer carry
        between the true composed lift and the canonical one."""
        g = self.table
        w = _window(other.table, g.ys[0], g.ys[-1])
        comp = g * w
        m = comp.ys[0].floor()
        table = PLMap(comp.xs, tuple(y - m for y in comp.ys), comp.ks)
        return CircleMap(table), m

    def inverse_with_carry(self) -> tuple[CircleMap, int]:
        inv = self.table.inverse()
        t = _window(inv, ZERO, ONE)
        m = t.ys[0].floor()
        table = PLMap(t.xs, tuple(y - m for y in t.ys), t.ks)
        return CircleMap(table), m

    def __mul__(self, other: CircleMap) -> CircleMap:
        if not isinstance(other, CircleMap):
            return NotImplemented
        return self.compose_with_carry(other)[0]

    def inverse(self) -> CircleMap:
        return self.inverse_with_carry()[0]

    def __pow__(self, k: int) -> CircleMap:
        return power(self, k, DEFAULT_PIECE_CAP)

    # -- fixed sets ---------------------------------------------------------

    def fixed_segments(self) -> list[tuple[ZTau, ZTau]]:
        """Maximal pointwise-fixed closed sub-intervals of [0, 1] (the circle
        gluing at 0 = 1 is left to the callers)."""
        tb = self.table
        segs: list[tuple[ZTau, ZTau]] = []
        for i, k in enumerate(tb.ks):
            if k != 0:
                continue
            d = tb.ys[i] - tb.xs[i]
            if d.b == 0 and d.a in (0, 1):
                if segs and segs[-1][1] == tb.xs[i]:
                    segs[-1] = (segs[-1][0], tb.xs[i + 1])
                else:
                    segs.append((tb.xs[i], tb.xs[i + 1]))
        return segs

    def fixes_neighborhood_of(self, x: ZTau) -> bool:
        x = x - x.floor()
        segs = self.fixed_segments()
        if len(segs) == 1 and segs[0] == (ZERO, ONE):
            return True
        for lo, hi in segs:
            if (x - lo).sign() > 0 and (hi - x).sign() > 0:
                return True
        if not x:
            left = any(hi == ONE and (ONE - lo).sign() > 0 for lo, hi in segs)
            right = any(lo == ZERO and hi.sign() > 0 for lo, hi in segs)
            return left and right
        return False


def _window(pl: PLMap, lo: ZTau, hi: ZTau) -> PLMap:
    """Table of the periodic extension of a one-period lift on [lo, hi].

    pl must satisfy pl(x + 1) = pl(x) + 1 across its period, i.e. domain
    and image both have length one.
    """
    t0 = pl.xs[0]
    pts = {lo, hi}
    for x in pl.xs[:-1]:
        nmin = (lo - x).ceil()
        nmax = (hi - x).floor()
        for n in range(nmin, nmax + 1):
            pts.add(x + n)
    xs = sorted(pts)
    ys = []
    for x in xs:
        n = (x - t0).floor()
        ys.append(pl.eval_zt(x - n) + n)
    ks = []
    for i in range(len(xs) - 1):
        n = (xs[i] - t0).floor()
        ks.append(pl.ks[_piece_index(pl.xs, xs[i] - n)])
    return PLMap(xs, ys, ks)


# -- tau-subdivision trees -------------------------------------------------

@dataclass(frozen=True)
class SubdivisionTree:
    """Binary subdivision of an interval into (tau*l, tau**2*l) parts.

    wide_first picks which part comes first: True gives (tau*l, tau**2*l),
    False gives (tau**2*l, tau*l).  Leaves carry no data.
    """

    left: SubdivisionTree | None = None
    right: SubdivisionTree | None = None
    wide_first: bool = True

    @classmethod
    def leaf(cls) -> SubdivisionTree:
        return cls()

    @classmethod
    def split(cls, left: SubdivisionTree, right: SubdivisionTree,
              wide_first: bool = True) -> SubdivisionTree:
        return cls(left, right, wide_first)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def leaf_count(self) -> int:
        if self.is_leaf:
            return 1
        return self.left.leaf_count() + self.right.leaf_count()

    def boundaries(self, lo: ZTau, hi: ZTau) -> list[ZTau]:
        """Endpoints of the leaf partition of [lo, hi], lo and hi included."""
        if self.is_leaf:
            return [lo, hi]
        frac = TAU if self.wide_first else tau_pow(2)
        mid = lo + frac * (hi - lo)
        return self.left.boundaries(lo, mid)[:-1] + self.right.boundaries(mid, hi)

    def leaf_exponents(self) -> list[int]:
        """Exponent e of each leaf length tau**e relative to the root length."""
        if self.is_leaf:
            return [0]
        first, second = (1, 2) if self.wide_first else (2, 1)
        return ([e + first for e in self.left.leaf_exponents()]
                + [e + second for e in self.right.leaf_exponents()])

    def to_json(self):
        if self.is_leaf:
            return "leaf"
        tag = "s+" if self.wide_first else "s-"
        return [tag, self.left.to_json(), self.right.to_json()]

    @classmethod
    def from_json(cls, obj: object) -> SubdivisionTree:
        if obj == "leaf":
            return cls.leaf()
        if (isinstance(obj, list) and len(obj) == 3
                and obj[0] in ("s+", "s-")):
            return cls.split(cls.from_json(obj[1]), cls.from_json(obj[2]),
                             obj[0] == "s+")
        raise SchemaError(f"bad subdivision tree payload: {obj!r}")
