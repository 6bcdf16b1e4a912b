from decimal import Decimal, getcontext

from taut.ring import ZTau, QTau

getcontext().prec = 110
TAU_DECIMAL = (Decimal(5).sqrt() - 1) / 2


def zt(a, b=0):
    return ZTau(a, b)


def decimal_value(x):
    """100-digit decimal surrogate, for cross-checks only."""
    if isinstance(x, QTau):
        return (x.num.a + x.num.b * TAU_DECIMAL) / x.den
    return x.a + x.b * TAU_DECIMAL
