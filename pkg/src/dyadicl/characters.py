"""Dirichlet characters over the 2-power cyclotomic tower.

chi_n is the even character modulo 2^(n+2) of exact order 2^n cutting
out the n-th layer of the cyclotomic 2-tower over Q.  Any Galois
conjugate would do; we fix the convention

    chi_n(5) = zeta_{2^n},   chi_n(-1) = 1,

and record it in output metadata.  psi_d is the quadratic character of
Q(sqrt(d)), a Kronecker symbol of the fundamental discriminant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt, lcm

from .cyclotomic import CyclotomicNumber, cyclo_from_rational, monomial, zero

CONVENTION = "chi_n(5) = zeta_{2^n}"


# -- elementary integer helpers ----------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for q in range(3, isqrt(n) + 1, 2):
        if n % q == 0:
            return False
    return True


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((p, e), ...)."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    q = 5
    while q * q <= n:
        e = 0
        while n % q == 0:
            n //= q
            e += 1
        if e:
            out.append((q, e))
        q += 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(n))


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n):
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def kronecker_symbol(a: int, b: int) -> int:
    """Kronecker symbol (a/b) for arbitrary integers."""
    if b == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    k = 1
    if v % 2 == 1 and a % 8 in (3, 5):
        k = -1
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    a %= b
    while a != 0:
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2 == 1 and b % 8 in (3, 5):
            k = -k
        if a % 4 == 3 and b % 4 == 3:
            k = -k
        a, b = b % a, a
    return k if b == 1 else 0


def fundamental_discriminant(d: int) -> int:
    """Fundamental discriminant of Q(sqrt(d)) for square-free d >= 1."""
    return d if d % 4 == 1 else 4 * d


# -- the quadratic characters psi_d ------------------------------------------


def psi_eval(d: int, a: int) -> int:
    """psi_d(a) in {-1, 0, 1}: Kronecker symbol of the fundamental
    discriminant of Q(sqrt(d)) at a."""
    if d < 1 or not is_squarefree(d):
        raise ValueError(f"d = {d} is not a square-free positive integer")
    return kronecker_symbol(fundamental_discriminant(d), a)


# -- chi_n: discrete log base 5 by binary lifting ----------------------------


def _dlog5(a: int, n: int) -> int:
    """e with a = +-5^e mod 2^(n+2), a odd.

    (1+4)^(2^j) = 1 + 2^(j+2) (mod 2^(j+3)), so bit j of e is read off
    from a mod 2^(j+3) and cleared by one multiplication: O(n) work.
    """
    M = 1 << (n + 2)
    x = a % M
    if x % 4 == 3:
        x = M - x
    e = 0
    inv_pow = pow(5, -1, M)
    for j in range(n):
        if x % (1 << (j + 3)) != 1:
            e |= 1 << j
            x = x * inv_pow % M
        inv_pow = inv_pow * inv_pow % M
    if x != 1:
        raise AssertionError("discrete log failed")
    return e


def chi_eval(n: int, a: int) -> CyclotomicNumber:
    """chi_n(a) as a level-n cyclotomic number (0 for even a)."""
    if n < 1:
        raise ValueError("chi_n needs n >= 1")
    if a % 2 == 0:
        return zero(n)
    return monomial(n, _dlog5(a, n))


@lru_cache(maxsize=None)
def _chi_exponent_table(n: int) -> tuple:
    """table[a mod 2^(n+2)] = e with chi_n(a) = zeta_{2^n}^e, None if a even."""
    M = 1 << (n + 2)
    tab = [None] * M
    x = 1
    for e in range(1 << n):
        tab[x] = e
        tab[M - x] = e
        x = x * 5 % M
    return tuple(tab)


@lru_cache(maxsize=None)
def _psi_value_table(d: int) -> tuple:
    disc = fundamental_discriminant(d)
    return tuple(kronecker_symbol(disc, a) for a in range(disc))


# -- character specifications -------------------------------------------------


@dataclass(frozen=True)
class CharSpec:
    """chi_layer * psi_twist^twist_power.

    layer 0 means no chi part; twist 1 (or power 0) means no quadratic
    part.  power 2 is the imprimitive square of psi_twist.  Even twists
    2d (conductor 8d) are allowed only at layer 0, for base-layer
    quadratic L-values.
    """

    layer: int = 0
    twist: int = 1
    twist_power: int = 1
    allow_even_twist: bool = False

    def __post_init__(self):
        if self.layer < 0:
            raise ValueError("layer must be >= 0")
        if self.twist_power not in (0, 1, 2):
            raise ValueError("twist_power must be 0, 1 or 2")
        if self.twist < 1 or not is_squarefree(self.twist):
            raise ValueError(f"twist {self.twist} is not square-free positive")
        if self.twist % 2 == 0 and self.twist_power != 0:
            if not self.allow_even_twist:
                raise ValueError("even twist requires allow_even_twist")
            if self.layer != 0:
                raise ValueError("even twist is supported at layer 0 only")

    # Canonical view: power 0 behaves exactly like twist 1.
    @property
    def effective_twist(self) -> int:
        return 1 if self.twist_power == 0 else self.twist

    @property
    def effective_power(self) -> int:
        return 0 if self.effective_twist == 1 else self.twist_power

    @property
    def is_trivial(self) -> bool:
        return self.layer == 0 and self.effective_twist == 1

    def key(self) -> tuple[int, int, int]:
        return (self.layer, self.effective_twist, self.effective_power)

    @property
    def discriminant(self) -> int:
        return fundamental_discriminant(self.effective_twist)

    @property
    def modulus(self) -> int:
        """Natural defining modulus of the product character."""
        chi_mod = (1 << (self.layer + 2)) if self.layer >= 1 else 1
        psi_mod = self.discriminant if self.effective_power >= 1 else 1
        return lcm(chi_mod, psi_mod)

    def to_dict(self) -> dict:
        return {"n": self.layer, "d": self.effective_twist, "power": self.effective_power}

    @classmethod
    def from_dict(cls, d: dict) -> "CharSpec":
        twist = int(d["d"])
        return cls(int(d["n"]), twist, int(d["power"]), allow_even_twist=twist % 2 == 0)

    def __str__(self) -> str:
        n, d, p = self.key()
        chi = f"chi_{n}" if n else ""
        psi = "" if p == 0 else (f"psi_{d}" if p == 1 else f"psi_{d}^2")
        return (chi + ("*" if chi and psi else "") + psi) or "1"


def char_eval(spec: CharSpec, a: int) -> CyclotomicNumber:
    """Value of the product character at a, at level spec.layer."""
    n = spec.layer
    psi_part = 1
    if spec.effective_power >= 1:
        psi_part = psi_eval(spec.effective_twist, a) ** spec.effective_power
    if n == 0:
        return cyclo_from_rational(psi_part, 0)
    if a % 2 == 0 or psi_part == 0:
        return zero(n)
    return monomial(n, _dlog5(a, n), psi_part)


@lru_cache(maxsize=128)
def char_monomials(spec: CharSpec) -> tuple[int, tuple]:
    """(period, table): table[a % period] is (sign, coeff_index) with value
    sign * zeta_{2^layer}^index already folded negacyclically, or None
    where the character vanishes.  This is the bulk-summation path; it
    must agree with char_eval everywhere (tested)."""
    n = spec.layer
    period = spec.modulus
    chi_tab = _chi_exponent_table(n) if n >= 1 else None
    psi_tab = _psi_value_table(spec.effective_twist) if spec.effective_power >= 1 else None
    half = 1 << (n - 1) if n >= 2 else 1
    out = []
    for a in range(period):
        s = 1
        if psi_tab is not None:
            s = psi_tab[a % len(psi_tab)] ** spec.effective_power
            if s == 0:
                out.append(None)
                continue
        if chi_tab is not None:
            e = chi_tab[a % len(chi_tab)]
            if e is None:
                out.append(None)
                continue
            if n == 1:
                s *= (-1) ** e
                idx = 0
            else:
                if e >= half:
                    s, idx = -s, e - half
                else:
                    idx = e
        else:
            idx = 0
        out.append((s, idx))
    return period, tuple(out)


def conductor(spec: CharSpec) -> int:
    """Exact conductor, found by testing induction from each divisor of
    the modulus rather than by a closed form (catches convention bugs)."""
    return _conductor_cached(spec.key())


@lru_cache(maxsize=None)
def _conductor_cached(key: tuple[int, int, int]) -> int:
    n, d, p = key
    spec = CharSpec(n, d, p, allow_even_twist=(d % 2 == 0))
    period, tab = char_monomials(spec)
    for f in divisors(period):
        ok = True
        for a in range(1 + f, period + 1, f):
            t = tab[a % period]
            if t is None:
                continue
            if t != (1, 0):
                ok = False
                break
        if ok:
            return f
    raise AssertionError("no conductor found")  # pragma: no cover


# -- Frobenius constants -------------------------------------------------------


@dataclass(frozen=True)
class FrobeniusConstant:
    """p* = (-1|p) p and f_p = ord2((p* - 1)/4); f_p controls how long the
    Frobenius at p stays in each tower layer."""

    prime: int
    p_star: int
    f_p: int


def frobenius_constant(p: int) -> FrobeniusConstant:
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    p_star = p if p % 4 == 1 else -p
    q = (p_star - 1) // 4
    f_p = (q & -q).bit_length() - 1
    return FrobeniusConstant(p, p_star, f_p)


def frobenius_exponent_sum(d: int) -> int:
    """sum over p | d of 2^(f_p); 0 for d = 1."""
    return sum(1 << frobenius_constant(p).f_p for p in prime_factors(d))
