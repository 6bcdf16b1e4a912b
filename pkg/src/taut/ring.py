"""Exact arithmetic in Z[tau] and its fraction field, tau = (sqrt(5)-1)/2.

tau is the positive root of x**2 + x - 1, hence tau**2 = 1 - tau and
1/tau = 1 + tau: tau is a unit.  {1, tau} is an integral basis, so an
element a + b*tau is a unique integer pair and all comparisons, floors
and divisions below are carried out in integer arithmetic only.  Floats
never decide anything.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd, isqrt

from .errors import NonPositive, NotInRing, SchemaError

# Internally every formula is written for the metallic family
# x**2 + n*x - 1; only n = 1, the golden case, is exposed or tested.
# n**2 + 4 is never a perfect square for n >= 1, which keeps the exact
# sign and floor comparisons below strict.
_METALLIC_N = 1
_DISC = _METALLIC_N * _METALLIC_N + 4
TAU_FLOAT = (_DISC ** 0.5 - _METALLIC_N) / 2


def _isign(n: int) -> int:
    return (n > 0) - (n < 0)


@total_ordering
class ZTau:
    """The real number a + b*tau with arbitrary-precision integers a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a: int, b: int = 0) -> None:
        self.a = a
        self.b = b

    def __repr__(self) -> str:
        return f"ZTau({self.a}, {self.b})"

    def __str__(self) -> str:
        return ztau_str(self)

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = ZTau(other)
        if isinstance(other, ZTau):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        if isinstance(other, int):
            other = ZTau(other)
        if isinstance(other, ZTau):
            return (self - other).sign() < 0
        return NotImplemented

    def __add__(self, other: ZTau | int) -> ZTau:
        if isinstance(other, int):
            return ZTau(self.a + other, self.b)
        if isinstance(other, ZTau):
            return ZTau(self.a + other.a, self.b + other.b)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: ZTau | int) -> ZTau:
        if isinstance(other, int):
            return ZTau(self.a - other, self.b)
        if isinstance(other, ZTau):
            return ZTau(self.a - other.a, self.b - other.b)
        return NotImplemented

    def __rsub__(self, other: ZTau | int) -> ZTau:
        return (-self) + other

    def __neg__(self) -> ZTau:
        return ZTau(-self.a, -self.b)

    def __mul__(self, other: ZTau | int) -> ZTau:
        if isinstance(other, int):
            return ZTau(self.a * other, self.b * other)
        if isinstance(other, ZTau):
            # tau**2 = 1 - n*tau
            bb = self.b * other.b
            return ZTau(self.a * other.a + bb,
                        self.a * other.b + self.b * other.a
                        - _METALLIC_N * bb)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> ZTau:
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other: "ZTau | QTau | int") -> "QTau":
        return QTau(self) / other

    def __rtruediv__(self, other: "ZTau | QTau | int") -> "QTau":
        return _as_qtau(other) / QTau(self)

    def conj(self) -> ZTau:
        """Galois conjugate: tau -> -n - tau, so a + b*tau -> (a-n*b) - b*tau."""
        return ZTau(self.a - _METALLIC_N * self.b, -self.b)

    def norm(self) -> int:
        """Field norm a**2 - n*a*b - b**2; multiplicative, +-1 exactly on units."""
        return self.a * self.a - _METALLIC_N * self.a * self.b - self.b * self.b

    def sign(self) -> int:
        # 2*(a + b*tau) = (2a - n*b) + b*sqrt(n**2+4); compare by squaring
        u = 2 * self.a - _METALLIC_N * self.b
        v = self.b
        if v == 0:
            return _isign(u)
        if u == 0:
            return _isign(v)
        if (u > 0) == (v > 0):
            return _isign(u)
        if u > 0:
            return 1 if u * u > _DISC * v * v else -1
        return -1 if u * u > _DISC * v * v else 1

    def floor(self) -> int:
        v = self.b
        if v == 0:
            return self.a
        m = isqrt(_DISC * v * v) if v > 0 else -isqrt(_DISC * v * v) - 1
        return self.a + (m - _METALLIC_N * v) // 2

    def ceil(self) -> int:
        return -((-self).floor())

    def __abs__(self) -> ZTau:
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return self.a + self.b * TAU_FLOAT

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}

    @classmethod
    def from_json(cls, obj: object) -> ZTau:
        if not isinstance(obj, dict) or set(obj) - {"a", "b"}:
            raise SchemaError(f"bad ring element payload: {obj!r}")
        try:
            return cls(int(obj.get("a", "0")), int(obj.get("b", "0")))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad ring element payload: {obj!r}") from exc


ZERO = ZTau(0)
ONE = ZTau(1)
TAU = ZTau(0, 1)
INV_TAU = ZTau(_METALLIC_N, 1)


@lru_cache(maxsize=None)
def tau_pow(k: int) -> ZTau:
    """Exact tau**k for any integer k (negative powers via 1/tau = n + tau)."""
    a, b = 1, 0
    if k >= 0:
        for _ in range(k):
            a, b = b, a - _METALLIC_N * b
    else:
        for _ in range(-k):
            a, b = a * _METALLIC_N + b, a
    return ZTau(a, b)


@total_ordering
class QTau:
    """Quotient (a + b*tau) / den in canonical form: den > 0, gcd cleared."""

    __slots__ = ("num", "den")

    def __init__(self, num: ZTau | int, den: int = 1) -> None:
        if isinstance(num, int):
            num = ZTau(num)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = gcd(gcd(abs(num.a), abs(num.b)), den)
        if g > 1:
            num = ZTau(num.a // g, num.b // g)
            den //= g
        self.num = num
        self.den = den

    def __repr__(self) -> str:
        return f"QTau({self.num!r}, {self.den})"

    def __str__(self) -> str:
        return qtau_str(self)

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other: object) -> bool:
        other = _maybe_qtau(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __lt__(self, other: object) -> bool:
        other = _maybe_qtau(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() < 0

    def __add__(self, other: object) -> QTau:
        other = _maybe_qtau(other)
        if other is None:
            return NotImplemented
        return QTau(self.num * other.den + other.num * self.den,
                    self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other: object) -> QTau:
        other = _maybe_qtau(other)
        if other is None:
            return NotImplemented
        return QTau(self.num * other.den - other.num * self.den,
                    self.den * other.den)

    def __rsub__(self, other: object) -> QTau:
        return (-self) + other

    def __neg__(self) -> QTau:
        return QTau(-self.num, self.den)

    def __abs__(self) -> QTau:
        return -self if self.sign() < 0 else self

    def __mul__(self, other: object) -> QTau:
        other = _maybe_qtau(other)
        if other is None:
            return NotImplemented
        return QTau(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> QTau:
        other = _maybe_qtau(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero")
        # 1/z = conj(z) / norm(z); the norm is a plain integer.
        n = other.num.norm()
        return QTau(self.num * other.num.conj() * other.den, self.den * n)

    def __rtruediv__(self, other: object) -> QTau:
        o = _maybe_qtau(other)
        if o is None:
            return NotImplemented
        return o / self

    def sign(self) -> int:
        return self.num.sign()

    def floor(self) -> int:
        a, b, d = self.num.a, self.num.b, self.den
        u, v, big_d = 2 * a - _METALLIC_N * b, b, 2 * d
        if v == 0:
            return u // big_d
        m = isqrt(_DISC * v * v) if v > 0 else -isqrt(_DISC * v * v) - 1
        return (u + m) // big_d

    def ceil(self) -> int:
        return -((-self).floor())

    def is_ring_element(self) -> bool:
        return self.den == 1

    def as_ztau(self) -> ZTau:
        if self.den != 1:
            raise NotInRing(f"{self} is not in Z[tau]")
        return self.num

    def __float__(self) -> float:
        return float(self.num) / self.den

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": str(self.den)}

    @classmethod
    def from_json(cls, obj: object) -> QTau:
        if not isinstance(obj, dict) or set(obj) - {"num", "den"}:
            raise SchemaError(f"bad quotient payload: {obj!r}")
        try:
            den = int(obj.get("den", "1"))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad quotient payload: {obj!r}") from exc
        return cls(ZTau.from_json(obj.get("num", {})), den)


def _maybe_qtau(x: object) -> QTau | None:
    if isinstance(x, QTau):
        return x
    if isinstance(x, (int, ZTau)):
        return QTau(x)
    if isinstance(x, Fraction):
        return QTau(ZTau(x.numerator), x.denominator)
    return None


def _as_qtau(x: object) -> QTau:
    q = _maybe_qtau(x)
    if q is None:
        raise TypeError(f"cannot interpret {x!r} as a ring quotient")
    return q


def is_tau_power(x: QTau | ZTau | int) -> int | None:
    """Return k with x = tau**k, or None.

    Clears denominators and rejects non-units by the integer norm, then
    walks the value into the window (tau, 1] by exact unit multiplications.
    The step count is capped by a bit-length bound; the cap is generous
    and only guards against bugs, not against correct inputs.
    """
    x = _as_qtau(x)
    if x.sign() <= 0:
        raise NonPositive("tau powers are positive")
    n = x.num.norm()
    d2 = x.den * x.den
    if n != d2 and n != -d2:
        return None
    cap = 2 * (x.num.a.bit_length() + x.num.b.bit_length()
               + x.den.bit_length()) + 16
    k = 0
    one = QTau(ONE)
    qtau = QTau(TAU)
    qinv = QTau(INV_TAU)
    for _ in range(cap):
        if x > one:
            x = x * qtau
            k += 1
        elif x <= qtau:
            x = x * qinv
            k -= 1
        else:
            break
    return -k if x == one else None


def ztau_str(z: ZTau) -> str:
    """Compact human form: '0', 't', '1-t', '-1+2*t', '3'."""
    if z.b == 0:
        return str(z.a)
    if z.b == 1:
        t = "t"
    elif z.b == -1:
        t = "-t"
    else:
        t = f"{z.b}*t"
    if z.a == 0:
        return t
    return f"{z.a}+{t}" if not t.startswith("-") else f"{z.a}{t}"


def ztau_literal(z: ZTau) -> str:
    """Explicit canonical form 'a+b*t' used in serialized payloads."""
    return f"{z.a}{z.b:+}*t"


def qtau_str(q: QTau) -> str:
    if q.den == 1:
        return ztau_str(q.num)
    return f"({ztau_str(q.num)})/{q.den}"


def qtau_literal(q: QTau) -> str:
    return f"({ztau_literal(q.num)})/{q.den}"


def parse_ztau(text: str) -> ZTau:
    """Parse 'a+b*t' with optional signs and omitted zero terms."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty ring literal")
    a = b = 0
    i = 0
    first = True
    while i < len(s):
        sign = 1
        if s[i] in "+-":
            sign = -1 if s[i] == "-" else 1
            i += 1
        elif not first:
            raise ValueError(f"expected '+' or '-' in {text!r}")
        first = False
        j = i
        while j < len(s) and s[j].isdigit():
            j += 1
        if j > i:
            coeff = int(s[i:j])
            i = j
            if i < len(s) and s[i] == "*":
                i += 1
                if i >= len(s) or s[i] != "t":
                    raise ValueError(f"expected 't' after '*' in {text!r}")
                b += sign * coeff
                i += 1
            elif i < len(s) and s[i] == "t":
                b += sign * coeff
                i += 1
            else:
                a += sign * coeff
        elif i < len(s) and s[i] == "t":
            b += sign
            i += 1
        else:
            raise ValueError(f"bad ring literal {text!r}")
    return ZTau(a, b)


def parse_qtau(text: str) -> QTau:
    """Parse '(a+b*t)/d', 'a+b*t' or a plain rational 'p/q'."""
    s = text.replace(" ", "")
    if "/" in s:
        left, _, right = s.rpartition("/")
        if left.startswith("(") and left.endswith(")"):
            left = left[1:-1]
        if not right.lstrip("+-").isdigit():
            raise ValueError(f"bad denominator in {text!r}")
        return QTau(parse_ztau(left), int(right))
    return QTau(parse_ztau(s))
