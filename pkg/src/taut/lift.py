"""Lifts of circle maps to the line, rotation numbers and stable commutator length.

A LiftMap is a canonical circle lift plus an integer translation part, so
the central integer translations are exactly the lifts with identity base.
Rotation numbers are certified:

* lifts of ring rotations are translations, with exact value in Z[tau];
* rational values p/q are proved by an exact fixed point of the q-th
  power shifted by p (Poincare's criterion), found by Stern-Brocot
  descent where every step is an exact sign trichotomy;
* otherwise the answer degrades to a sound enclosure computed from the
  exact N-th power map: its displacement range has width < 1, giving an
  interval of width < 1/N before outward rounding to denominator 2N.

scl is |rot|/2: the commutator subgroup of the lifted group has index
two and carries scl = |rot|/2 by Bavard duality (the rotation number
spans the homogeneous quasimorphisms and has defect one there), and the
squaring identity scl(f) = scl(f**2)/2 extends the formula to the whole
group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .circle import DEFAULT_PIECE_CAP, CircleMap
from .errors import PowerBudgetExceeded, SchemaError
from .plmap import ABOVE, BELOW, power
from .ring import (
    QTau,
    ZTau,
    _as_qtau,
    qtau_literal,
    ztau_literal,
    parse_qtau,
    parse_ztau,
)

DEFAULT_MAX_ITER = 10_000
DEFAULT_MAX_DEN = 1_000


@dataclass(frozen=True)
class LiftMap:
    base: CircleMap
    n: int = 0

    @classmethod
    def identity(cls) -> LiftMap:
        return cls(CircleMap.identity(), 0)

    @classmethod
    def translation(cls, alpha: ZTau | int) -> LiftMap:
        if isinstance(alpha, int):
            alpha = ZTau(alpha)
        return cls(CircleMap.rotation(alpha), alpha.floor())

    def project(self) -> CircleMap:
        return self.base

    def translate(self, j: int) -> LiftMap:
        return LiftMap(self.base, self.n + j)

    def is_translation(self) -> bool:
        return self.base.is_rotation()

    def translation_amount(self) -> ZTau:
        if not self.is_translation():
            raise ValueError("not a translation")
        return self.base.v + self.n

    def is_identity(self) -> bool:
        return self.base.is_identity() and self.n == 0

    @property
    def num_pieces(self) -> int:
        return self.base.num_pieces

    def __mul__(self, other: LiftMap) -> LiftMap:
        if not isinstance(other, LiftMap):
            return NotImplemented
        b, m = self.base.compose_with_carry(other.base)
        return LiftMap(b, self.n + other.n + m)

    def inverse(self) -> LiftMap:
        b, m = self.base.inverse_with_carry()
        return LiftMap(b, m - self.n)

    def power(self, k: int, piece_cap: int = DEFAULT_PIECE_CAP) -> LiftMap:
        return power(self, k, piece_cap)

    def eval(self, x) -> QTau:
        return self.base.lift_eval(x) + self.n

    def eval_zt(self, x: ZTau) -> ZTau:
        return self.base.lift_eval_zt(x) + self.n

    def __repr__(self) -> str:
        return f"LiftMap({self.base!r}, n={self.n})"

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "n": self.n}

    @classmethod
    def from_json(cls, obj: object) -> LiftMap:
        if not isinstance(obj, dict) or "base" not in obj:
            raise SchemaError("lift payload must carry a base table")
        return cls(CircleMap.from_json(obj["base"]), int(obj.get("n", 0)))


# -- rotation number results ------------------------------------------------

@dataclass(frozen=True)
class RotRational:
    """rot = value exactly; f**q has an exact fixed point modulo the shift p."""

    value: Fraction
    root: QTau

    kind = "rational"

    @property
    def p(self) -> int:
        return self.value.numerator

    @property
    def q(self) -> int:
        return self.value.denominator

    def approx(self) -> float:
        return float(self.value)

    def to_json(self, element: LiftMap | None = None) -> dict:
        cert = {"power": self.q, "shift": self.p,
                "root": qtau_literal(self.root)}
        if element is not None:
            cert["element"] = element.to_json()
        return {"kind": self.kind, "value": str(self.value),
                "certificate": cert}


@dataclass(frozen=True)
class RotTranslation:
    """The element is a translation; rot is its exact amount in Z[tau]."""

    value: ZTau

    kind = "ztau"

    def approx(self) -> float:
        return float(self.value)

    def to_json(self, element: LiftMap | None = None) -> dict:
        cert: dict = {"translation": True}
        if element is not None:
            cert["element"] = element.to_json()
        return {"kind": self.kind, "value": ztau_literal(self.value),
                "certificate": cert}


@dataclass(frozen=True)
class RotEnclosure:
    """lo <= rot <= hi with hi - lo <= 2/iterations, endpoints rational."""

    lo: Fraction
    hi: Fraction
    iterations: int

    kind = "enclosure"

    def approx(self) -> float:
        return float(self.lo + self.hi) / 2

    def width(self) -> Fraction:
        return self.hi - self.lo

    def to_json(self, element: LiftMap | None = None) -> dict:
        out = {"kind": self.kind, "lo": str(self.lo), "hi": str(self.hi),
               "iterations": self.iterations}
        if element is not None:
            out["certificate"] = {"element": element.to_json()}
        return out


RotResult = RotRational | RotTranslation | RotEnclosure


def rot_result_from_json(obj: object) -> RotResult:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("rotation payload must carry a kind")
    kind = obj["kind"]
    if kind == "rational":
        cert = obj.get("certificate", {})
        return RotRational(Fraction(obj["value"]),
                           parse_qtau(cert["root"]))
    if kind == "ztau":
        return RotTranslation(parse_ztau(obj["value"]))
    if kind == "enclosure":
        return RotEnclosure(Fraction(obj["lo"]), Fraction(obj["hi"]),
                            int(obj["iterations"]))
    raise SchemaError(f"unknown rotation result kind {kind!r}")


# -- the rotation number ----------------------------------------------------

def _classify(f_q: LiftMap, p: int):
    """Trichotomy of rot against p/q, given the exact q-th power f_q."""
    return f_q.base.table.shift_roots(ZTau(p - f_q.n))


def rot(f: LiftMap, *, max_den: int = DEFAULT_MAX_DEN,
        max_iter: int = DEFAULT_MAX_ITER,
        piece_cap: int = DEFAULT_PIECE_CAP) -> RotResult:
    if f.is_translation():
        return RotTranslation(f.translation_amount())
    # Work with the canonical base; the integer part shifts rot exactly,
    # so rot(f) = rot(base lift) + n holds by construction in all cases.
    f0 = LiftMap(f.base, 0)
    res = _rot_base(f0, max_den, max_iter, piece_cap)
    n = f.n
    if n == 0:
        return res
    if isinstance(res, RotRational):
        return RotRational(res.value + n, res.root)
    return RotEnclosure(res.lo + n, res.hi + n, res.iterations)


def _rot_base(f0: LiftMap, max_den: int, max_iter: int,
              piece_cap: int) -> RotResult:
    # integer window first: rot lies in (v - 1, v + 1) with 0 <= v < 1
    window = None
    for m in (0, 1):
        verdict = _classify(f0, m)
        if verdict.has_fixed_point():
            return RotRational(Fraction(m), verdict.witness())
        if verdict.verdict == BELOW:
            window = m - 1
            break
    if window is None:
        window = 1  # rot > 1; it is < 2 because v < 1
    # Stern-Brocot descent inside (window, window + 1)
    p_lo, q_lo, f_lo = window, 1, f0
    p_hi, q_hi, f_hi = window + 1, 1, f0
    if max_den >= 2:
        while q_lo + q_hi <= max_den:
            try:
                f_med = _mul_capped(f_lo, f_hi, piece_cap)
            except PowerBudgetExceeded:
                break
            p_med = p_lo + p_hi
            q_med = q_lo + q_hi
            verdict = _classify(f_med, p_med)
            if verdict.has_fixed_point():
                return RotRational(Fraction(p_med, q_med), verdict.witness())
            if verdict.verdict == ABOVE:
                p_lo, q_lo, f_lo = p_med, q_med, f_med
            else:
                p_hi, q_hi, f_hi = p_med, q_med, f_med
    return rot_enclosure(f0, max_iter, piece_cap=piece_cap)


def _mul_capped(a: LiftMap, b: LiftMap, piece_cap: int) -> LiftMap:
    out = a * b
    if out.num_pieces > piece_cap:
        raise PowerBudgetExceeded(
            f"{out.num_pieces} pieces exceed the configured cap {piece_cap}")
    return out


def rot_enclosure(f: LiftMap, iterations: int,
                  piece_cap: int = DEFAULT_PIECE_CAP) -> RotEnclosure:
    """Sound enclosure of rot(f) from the exact power f**M, M <= iterations.

    The displacement of the M-th power has range of width < 1 (strictly),
    so dividing its exact min and max by M gives an interval of width
    < 1/M; outward rounding to denominator 2M keeps the width below 2/M
    and preserves nesting when M doubles.
    """
    if iterations < 1:
        raise ValueError("iterations must be positive")
    m_used = iterations
    big = None
    while True:
        try:
            big = f.power(m_used, piece_cap)
            break
        except PowerBudgetExceeded:
            if m_used == 1:
                raise
            m_used //= 2
    tb = big.base.table
    disps = [tb.ys[i] - tb.xs[i] + big.n for i in range(len(tb.xs) - 1)]
    dmin = min(disps)
    dmax = max(disps)
    lo = Fraction((dmin * 2).floor(), 2 * m_used)
    hi = Fraction((dmax * 2).ceil(), 2 * m_used)
    return RotEnclosure(lo, hi, m_used)


def verify_rot(f: LiftMap, res: RotResult,
               piece_cap: int = DEFAULT_PIECE_CAP) -> bool:
    """Re-check a rotation result against its element by pure evaluation."""
    if isinstance(res, RotTranslation):
        return f.is_translation() and f.translation_amount() == res.value
    if isinstance(res, RotRational):
        fq = f.power(res.q, piece_cap)
        if fq.eval(res.root) != res.root + res.p:
            return False
        # independent route: the shifted q-th power must exhibit a root
        return fq.base.table.shift_roots(ZTau(res.p - fq.n)).has_fixed_point()
    if isinstance(res, RotEnclosure):
        again = rot_enclosure(f, res.iterations, piece_cap)
        return again == res
    return False


# -- stable commutator length ------------------------------------------------

@dataclass(frozen=True)
class SclRational:
    value: Fraction
    rot: RotResult

    kind = "rational"

    def approx(self) -> float:
        return float(self.value)

    def to_json(self, element: LiftMap | None = None) -> dict:
        return {"kind": self.kind, "value": str(self.value),
                "certificate": {"rot": self.rot.to_json(element)}}


@dataclass(frozen=True)
class SclZTauHalf:
    """Exact value numerator/2 with numerator in Z[tau]."""

    numerator: ZTau
    rot: RotResult

    kind = "ztau-half"

    def approx(self) -> float:
        return float(self.numerator) / 2

    def to_json(self, element: LiftMap | None = None) -> dict:
        return {"kind": self.kind,
                "value": f"({ztau_literal(self.numerator)})/2",
                "certificate": {"rot": self.rot.to_json(element)}}


@dataclass(frozen=True)
class SclEnclosure:
    lo: Fraction
    hi: Fraction
    iterations: int
    rot: RotResult

    kind = "enclosure"

    def approx(self) -> float:
        return float(self.lo + self.hi) / 2

    def to_json(self, element: LiftMap | None = None) -> dict:
        return {"kind": self.kind, "lo": str(self.lo), "hi": str(self.hi),
                "iterations": self.iterations,
                "certificate": {"rot": self.rot.to_json(element)}}


SclResult = SclRational | SclZTauHalf | SclEnclosure


def scl_result_from_json(obj: object) -> SclResult:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("scl payload must carry a kind")
    kind = obj["kind"]
    inner = rot_result_from_json(obj.get("certificate", {}).get("rot", {}))
    if kind == "ztau-half":
        value = obj["value"]
        if not (value.startswith("(") and value.endswith(")/2")):
            raise SchemaError(f"bad half-ring value {value!r}")
        return SclZTauHalf(parse_ztau(value[1:-3]), inner)
    if kind == "rational":
        return SclRational(Fraction(obj["value"]), inner)
    if kind == "enclosure":
        return SclEnclosure(Fraction(obj["lo"]), Fraction(obj["hi"]),
                            int(obj["iterations"]), inner)
    raise SchemaError(f"unknown scl result kind {kind!r}")


def verify_scl(f: LiftMap, res: SclResult,
               piece_cap: int = DEFAULT_PIECE_CAP) -> bool:
    if not verify_rot(f, res.rot, piece_cap):
        return False
    if isinstance(res, SclZTauHalf):
        return (isinstance(res.rot, RotTranslation)
                and abs(res.rot.value) == res.numerator)
    if isinstance(res, SclRational):
        return (isinstance(res.rot, RotRational)
                and abs(res.rot.value) / 2 == res.value)
    if isinstance(res, SclEnclosure):
        lo, hi = _abs_interval(res.rot.lo, res.rot.hi)
        return (lo / 2, hi / 2) == (res.lo, res.hi)
    return False


def scl(f: LiftMap, *, max_den: int = DEFAULT_MAX_DEN,
        max_iter: int = DEFAULT_MAX_ITER,
        piece_cap: int = DEFAULT_PIECE_CAP) -> SclResult:
    r = rot(f, max_den=max_den, max_iter=max_iter, piece_cap=piece_cap)
    if isinstance(r, RotTranslation):
        return SclZTauHalf(abs(r.value), r)
    if isinstance(r, RotRational):
        return SclRational(abs(r.value) / 2, r)
    lo, hi = _abs_interval(r.lo, r.hi)
    return SclEnclosure(lo / 2, hi / 2, r.iterations, r)


def _abs_interval(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return Fraction(0), max(-lo, hi)


# -- the defect of rot -------------------------------------------------------

@dataclass(frozen=True)
class DefectDelta:
    """|rot(f) + rot(g) - rot(fg)|, exact when all three rots are exact."""

    exact: QTau | None
    lo: Fraction
    hi: Fraction
    rots: tuple[RotResult, RotResult, RotResult]

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def exact_fraction(self) -> Fraction:
        if self.exact is None or self.exact.num.b != 0:
            raise ValueError("delta is not an exact rational")
        return Fraction(self.exact.num.a, self.exact.den)

    def to_json(self) -> dict:
        if self.exact is not None:
            return {"kind": "exact", "value": qtau_literal(self.exact)}
        return {"kind": "enclosure", "lo": str(self.lo), "hi": str(self.hi)}


def _rot_interval(r: RotResult) -> tuple[QTau, QTau] | None:
    if isinstance(r, RotTranslation):
        v = QTau(r.value)
        return v, v
    if isinstance(r, RotRational):
        v = _as_qtau(r.value)
        return v, v
    return None


def defect_delta(f: LiftMap, g: LiftMap, *, max_den: int = DEFAULT_MAX_DEN,
                 max_iter: int = DEFAULT_MAX_ITER,
                 piece_cap: int = DEFAULT_PIECE_CAP) -> DefectDelta:
    opts = {"max_den": max_den, "max_iter": max_iter, "piece_cap": piece_cap}
    rf = rot(f, **opts)
    rg = rot(g, **opts)
    rfg = rot(f * g, **opts)
    exact_parts = [_rot_interval(r) for r in (rf, rg, rfg)]
    if all(p is not None for p in exact_parts):
        d = abs(exact_parts[0][0] + exact_parts[1][0] - exact_parts[2][0])
        fr = _to_fraction_bounds(d)
        return DefectDelta(d, fr[0], fr[1], (rf, rg, rfg))
    lo = hi = None
    ivs = []
    for r, p in zip((rf, rg, rfg), exact_parts):
        if p is not None:
            ivs.append(p)
        else:
            ivs.append((_as_qtau(r.lo), _as_qtau(r.hi)))
    lo = ivs[0][0] + ivs[1][0] - ivs[2][1]
    hi = ivs[0][1] + ivs[1][1] - ivs[2][0]
    alo, ahi = _abs_qtau_interval(lo, hi)
    return DefectDelta(None, _to_fraction_bounds(alo)[0],
                       _to_fraction_bounds(ahi)[1], (rf, rg, rfg))


def _abs_qtau_interval(lo: QTau, hi: QTau) -> tuple[QTau, QTau]:
    if lo.sign() >= 0:
        return lo, hi
    if hi.sign() <= 0:
        return -hi, -lo
    return QTau(0), max(-lo, hi)


def _to_fraction_bounds(x: QTau, scale: int = 1 << 32) -> tuple[Fraction, Fraction]:
    lo = Fraction((x * scale).floor(), scale)
    hi = Fraction((x * scale).ceil(), scale)
    return lo, hi
