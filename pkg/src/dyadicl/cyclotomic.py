"""Exact arithmetic in Q(zeta_{2^n}) and the normalized 2-adic valuation.

Elements are dense vectors of rationals over the power basis of
zeta = zeta_{2^n}, reduced negacyclically (zeta^(2^(n-1)) = -1), so
multiplication never needs general polynomial division.  Levels 0 and 1
collapse to the rationals: zeta_1 = 1 and zeta_2 = -1 fold into the
constant coefficient.  Embeddings follow one fixed compatible system of
roots, zeta_{2^k} = zeta_{2^n}^(2^(n-k)).

ord2 is normalized by ord2(2) = 1.  The prime above 2 in Q(zeta_{2^n})
is unique and totally ramified, so for nonzero a at level n >= 2,
ord2(a) = ord2(N(a)) / 2^(n-1), where N is the field norm down to Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import lcm


class LevelMismatchError(ValueError):
    """Two operands live at incompatible cyclotomic levels."""


def _dim(level: int) -> int:
    """Coefficient-vector length at a level."""
    return 1 if level <= 1 else 1 << (level - 1)


def _v2(x: int) -> int:
    """2-adic valuation of a nonzero integer."""
    return (x & -x).bit_length() - 1


@total_ordering
class DyadicValuation:
    """An exact 2-adic valuation: a rational, or infinite (for zero)."""

    __slots__ = ("_v",)

    def __init__(self, value: Fraction | int | None):
        self._v = None if value is None else Fraction(value)

    @classmethod
    def infinite(cls) -> "DyadicValuation":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self._v is None

    def finite(self) -> Fraction:
        if self._v is None:
            raise ValueError("valuation is infinite")
        return self._v

    @staticmethod
    def _coerce(other) -> "Fraction | None | type(NotImplemented)":
        if isinstance(other, DyadicValuation):
            return other._v
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self._v == v

    def __lt__(self, other) -> bool:
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        if self._v is None:
            return False  # +inf is the greatest
        if v is None:
            return True
        return self._v < v

    def __add__(self, other) -> "DyadicValuation":
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        if self._v is None or v is None:
            return DyadicValuation.infinite()
        return DyadicValuation(self._v + v)

    __radd__ = __add__

    def __hash__(self):
        return hash(("DyadicValuation", self._v))

    def __str__(self) -> str:
        if self._v is None:
            return "inf"
        return f"{self._v.numerator}/{self._v.denominator}"

    def __repr__(self) -> str:
        return f"DyadicValuation({self})"


def ord2_rational(q: Fraction | int) -> DyadicValuation:
    """Ordinary 2-adic valuation of a rational number."""
    q = Fraction(q)
    if q == 0:
        return DyadicValuation.infinite()
    return DyadicValuation(_v2(q.numerator) - _v2(q.denominator))


@dataclass(frozen=True)
class CyclotomicNumber:
    """Element of Q(zeta_{2^level}) as an ascending-power coefficient vector."""

    level: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be non-negative")
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != _dim(self.level):
            raise ValueError(
                f"level {self.level} needs {_dim(self.level)} coefficients, "
                f"got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    # -- predicates / conversions -------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return neg(self)

    # -- formatting / serialization -------------------------------------

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.coeffs[0])
        sym = f"z{1 << self.level}"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                parts.append(f"{head}{sym}" + (f"^{i}" if i > 1 else ""))
        return " + ".join(parts).replace("+ -", "- ")

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "coeffs": [[c.numerator, c.denominator] for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CyclotomicNumber":
        level = d["level"]
        coeffs = tuple(Fraction(int(num), int(den)) for num, den in d["coeffs"])
        return cls(level, coeffs)


def zero(level: int) -> CyclotomicNumber:
    return CyclotomicNumber(level, (Fraction(0),) * _dim(level))


def one(level: int) -> CyclotomicNumber:
    return cyclo_from_rational(1, level)


def cyclo_from_rational(q: Fraction | int, level: int) -> CyclotomicNumber:
    """Constant-coefficient embedding of a rational."""
    coeffs = [Fraction(0)] * _dim(level)
    coeffs[0] = Fraction(q)
    return CyclotomicNumber(level, tuple(coeffs))


def monomial(level: int, index: int, coeff: Fraction | int = 1) -> CyclotomicNumber:
    """coeff * zeta_{2^level}^index, index taken modulo the group order."""
    order = 1 << level
    j = index % order
    if level <= 1:
        return cyclo_from_rational(Fraction(coeff) * ((-1) ** j if level == 1 else 1), level)
    half = order >> 1
    coeffs = [Fraction(0)] * half
    if j >= half:
        coeffs[j - half] = -Fraction(coeff)
    else:
        coeffs[j] = Fraction(coeff)
    return CyclotomicNumber(level, tuple(coeffs))


def root_of_unity(level: int, k: int, exponent: int) -> CyclotomicNumber:
    """zeta_{2^k}^exponent written at the given (coarser or equal) level."""
    if not 0 <= k <= level:
        raise ValueError(f"cannot represent zeta_{{2^{k}}} at level {level}")
    return monomial(level, exponent * (1 << (level - k)))


def _pair(a, b) -> tuple[CyclotomicNumber, CyclotomicNumber]:
    """Match two operands to a common level.

    Plain rationals and level <= 1 values lift anywhere; two genuinely
    cyclotomic operands must already share a level (callers embed first).
    """
    if not isinstance(a, CyclotomicNumber):
        a = cyclo_from_rational(Fraction(a), b.level)
    if not isinstance(b, CyclotomicNumber):
        b = cyclo_from_rational(Fraction(b), a.level)
    if a.level == b.level:
        return a, b
    if a.level <= 1:
        return cyclo_from_rational(a.coeffs[0], b.level), b
    if b.level <= 1:
        return a, cyclo_from_rational(b.coeffs[0], a.level)
    raise LevelMismatchError(f"levels {a.level} and {b.level}; embed_to_level first")


def add(a, b) -> CyclotomicNumber:
    a, b = _pair(a, b)
    return CyclotomicNumber(a.level, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def sub(a, b) -> CyclotomicNumber:
    a, b = _pair(a, b)
    return CyclotomicNumber(a.level, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))


def neg(a: CyclotomicNumber) -> CyclotomicNumber:
    return CyclotomicNumber(a.level, tuple(-x for x in a.coeffs))


def mul(a, b) -> CyclotomicNumber:
    a, b = _pair(a, b)
    m = len(a.coeffs)
    if m == 1:
        return CyclotomicNumber(a.level, (a.coeffs[0] * b.coeffs[0],))
    out = [Fraction(0)] * m
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j, bj in enumerate(b.coeffs):
            if bj == 0:
                continue
            k = i + j
            if k < m:
                out[k] += ai * bj
            else:
                out[k - m] -= ai * bj
    return CyclotomicNumber(a.level, tuple(out))


def embed_to_level(a: CyclotomicNumber, target: int) -> CyclotomicNumber:
    """Rewrite a at a finer level; the field element is unchanged."""
    if target < a.level:
        raise LevelMismatchError(f"cannot embed level {a.level} down to {target}")
    if target == a.level:
        return a
    stride = _dim(target) // _dim(a.level)
    coeffs = [Fraction(0)] * _dim(target)
    for i, c in enumerate(a.coeffs):
        coeffs[i * stride] = c
    return CyclotomicNumber(target, tuple(coeffs))


def _int_poly_sq(f: list[int]) -> list[int]:
    out = [0] * (2 * len(f) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, fj in enumerate(f):
                out[i + j] += fi * fj
    return out


def field_norm(a: CyclotomicNumber) -> Fraction:
    """Norm down to Q, i.e. the resultant of the coefficient polynomial
    with x^(2^(n-1)) + 1.

    Computed by the even/odd split: the squaring map sends the roots of
    x^m + 1 two-to-one onto the roots of x^(m/2) + 1, and
    f(x) f(-x) = fe(x^2)^2 - x^2 fo(x^2)^2, so one halving step replaces
    f by fe^2 - y fo^2 reduced mod y^(m/2) + 1.  All steps are integer
    arithmetic over a common denominator.
    """
    if a.level <= 1:
        return a.coeffs[0]
    den = lcm(*(c.denominator for c in a.coeffs))
    f = [int(c * den) for c in a.coeffs]
    m = len(f)
    while m > 1:
        ee = _int_poly_sq(f[0::2])
        oo = _int_poly_sq(f[1::2])
        g = [0] * m
        for i, c in enumerate(ee):
            g[i] += c
        for i, c in enumerate(oo):
            g[i + 1] -= c
        half = m // 2
        f = [g[i] - (g[i + half] if i + half < m else 0) for i in range(half)]
        m = half
    return Fraction(f[0], den ** len(a.coeffs))


def ord2(a: CyclotomicNumber | Fraction | int) -> DyadicValuation:
    """Normalized 2-adic valuation, ord2(2) = 1; infinite for zero."""
    if not isinstance(a, CyclotomicNumber):
        return ord2_rational(a)
    if a.is_zero():
        return DyadicValuation.infinite()
    if a.level <= 1:
        return ord2_rational(a.coeffs[0])
    nm = field_norm(a)
    return DyadicValuation(Fraction(_v2(nm.numerator) - _v2(nm.denominator), _dim(a.level)))


def congruent_mod(a, b, modulus) -> bool:
    """a == b modulo the fractional ideal generated 2-adically by modulus.

    The local ring above 2 is a valuation ring, so membership reduces to
    ord2(a - b) >= ord2(modulus).
    """
    a, b = _pair(a, b)
    if not isinstance(modulus, CyclotomicNumber):
        modulus = cyclo_from_rational(Fraction(modulus), a.level)
    if modulus.is_zero():
        raise ValueError("zero modulus")
    return ord2(sub(a, b)) >= ord2(modulus)


def galois_conjugate(a: CyclotomicNumber, t: int) -> CyclotomicNumber:
    """Apply sigma_t: zeta -> zeta^t, t odd."""
    if t % 2 == 0:
        raise ValueError("t must be odd")
    if a.level <= 1:
        return a
    order = 1 << a.level
    half = order >> 1
    coeffs = [Fraction(0)] * half
    for i, c in enumerate(a.coeffs):
        if c == 0:
            continue
        j = (i * t) % order
        if j >= half:
            coeffs[j - half] -= c
        else:
            coeffs[j] += c
    return CyclotomicNumber(a.level, tuple(coeffs))
