"""Exact Dirichlet L-values at non-positive integers.

L(chi, 1-m) = -B_{m,chi}/m, with the generalized Bernoulli number
evaluated over any period D0 of the character:

    B_{m,chi} = D0^(m-1) * sum_{a=1}^{D0} chi(a) B_m(a/D0).

Since every character here takes monomial values (+- a power of zeta),
the big sums accumulate plain integers over a common denominator; the
results are exact rationals in Q(zeta_{2^n}).

Imprimitive values strip Euler factors:
L^(D)(chi, s) = prod_{p | D} (1 - chi(p) p^(-s)) * L(chi, s).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm

from .characters import (
    CharSpec,
    char_eval,
    char_monomials,
    conductor,
    prime_factors,
)
from .cyclotomic import (
    CyclotomicNumber,
    DyadicValuation,
    _dim,
    field_norm,
    mul,
    one,
    ord2,
    sub,
)

SIZE_GUARD_LOG2 = 24


class SizeGuardError(ValueError):
    """Sum length beyond the desk-scale budget without an override."""


class NonPrimitiveError(ValueError):
    """l_value was asked for a non-primitive character."""


def check_size_guard(layer: int, twist: int, force: bool = False) -> None:
    """Refuse layer + log2(twist) > 24 unless forced (sum length 2^(n+1) d)."""
    if force:
        return
    if (twist << layer) > (1 << SIZE_GUARD_LOG2):
        raise SizeGuardError(
            f"n + log2(d) exceeds {SIZE_GUARD_LOG2} for n={layer}, d={twist}; "
            "pass force=True (CLI: --force-large) to override"
        )


# -- Bernoulli numbers and polynomials ----------------------------------------

_bernoulli_lock = threading.Lock()
_bernoulli_table: list[Fraction] = [Fraction(1)]


def bernoulli_number(k: int) -> Fraction:
    """B_k, with B_1 = -1/2; computed by the recurrence
    sum_{j=0}^{k} C(k+1, j) B_j = 0 and cached."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k >= len(_bernoulli_table):
        with _bernoulli_lock:
            while len(_bernoulli_table) <= k:
                i = len(_bernoulli_table)
                acc = sum(comb(i + 1, j) * _bernoulli_table[j] for j in range(i))
                _bernoulli_table.append(-acc / (i + 1))
    return _bernoulli_table[k]


def bernoulli_poly(k: int, x: Fraction | int) -> Fraction:
    """B_k(x) = sum_j C(k, j) B_j x^(k-j)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    x = Fraction(x)
    return sum(
        (comb(k, j) * bernoulli_number(j) * x ** (k - j) for j in range(k + 1)),
        Fraction(0),
    )


def _int_bernoulli_row(m: int, d0: int) -> tuple[int, list[int]]:
    """(L, [K_0..K_m]) with K_j = L * C(m,j) * B_j * d0^j all integers, so
    B_m(a/d0) = (sum_j K_j a^(m-j)) / (L * d0^m)."""
    lden = lcm(*(bernoulli_number(j).denominator for j in range(m + 1)))
    ks = []
    for j in range(m + 1):
        c = lden * comb(m, j) * bernoulli_number(j) * d0**j
        ks.append(int(c))
    return lden, ks


def _chunk_bounds(lo: int, hi: int, chunks: int) -> list[tuple[int, int]]:
    total = hi - lo
    chunks = max(1, min(chunks, total)) if total > 0 else 1
    step = -(-total // chunks)
    return [(lo + i * step, min(lo + (i + 1) * step, hi)) for i in range(chunks) if lo + i * step < hi]


def _monomial_power_sum(
    spec: CharSpec, lo: int, hi: int, power: int, chunks: int = 1
) -> list[int]:
    """Integer coefficient vector of sum_{a=lo}^{hi-1} chi(a) a^power.

    Disjoint chunks accumulate independently and fold in fixed order;
    exact integer addition makes the result partition-independent.
    """
    period, tab = char_monomials(spec)
    dim = _dim(spec.layer)
    total = [0] * dim
    for clo, cend in _chunk_bounds(lo, hi, chunks):
        acc = [0] * dim
        for a in range(clo, cend):
            t = tab[a % period]
            if t is None:
                continue
            s, idx = t
            acc[idx] += s * a**power
        for i in range(dim):
            total[i] += acc[i]
    return total


# -- generalized Bernoulli numbers and primitive L-values ----------------------


def gen_bernoulli(
    spec: CharSpec, m: int, d0: int, *, chunks: int = 1, force: bool = False
) -> CyclotomicNumber:
    """Exact B_{m,chi} summed over the period d0 (any multiple of the
    character's defining modulus gives the same value)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    check_size_guard(spec.layer, spec.effective_twist, force)
    period, tab = char_monomials(spec)
    if d0 < 1 or d0 % period != 0:
        raise ValueError(f"D0 = {d0} is not a positive multiple of the modulus {period}")
    lden, ks = _int_bernoulli_row(m, d0)
    dim = _dim(spec.layer)
    total = [0] * dim
    for clo, cend in _chunk_bounds(1, d0 + 1, chunks):
        acc = [0] * dim
        for a in range(clo, cend):
            t = tab[a % period]
            if t is None:
                continue
            s, idx = t
            v = 0
            for k in ks:
                v = v * a + k
            acc[idx] += s * v
        for i in range(dim):
            total[i] += acc[i]
    # B = D0^(m-1) * sum / (L * D0^m) = sum / (L * D0)
    den = lden * d0
    return CyclotomicNumber(spec.layer, tuple(Fraction(c, den) for c in total))


@dataclass(frozen=True)
class LValueResult:
    """An exact L-value with its 2-adic valuation and provenance."""

    spec: CharSpec
    m: int
    value: CyclotomicNumber
    ord2: DyadicValuation
    euler_factors_removed: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "m": self.m,
            "value": self.value.to_dict(),
            "ord2": str(self.ord2),
            "euler_factors_removed": list(self.euler_factors_removed),
        }


_memo_lock = threading.Lock()
_lvalue_memo: dict[tuple, LValueResult] = {}
_disk_cache = None  # set via use_disk_cache()


def use_disk_cache(cache) -> None:
    """Attach an LValueCache (or None to detach)."""
    global _disk_cache
    _disk_cache = cache


def clear_memo() -> None:
    with _memo_lock:
        _lvalue_memo.clear()


def l_value(spec: CharSpec, m: int, *, force: bool = False) -> LValueResult:
    """L(chi, 1-m) = -B_{m,chi}/m for a primitive (or trivial) spec."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if spec.effective_power == 2 and spec.effective_twist > 1:
        raise NonPrimitiveError(
            f"{spec} is imprimitive; use l_value_imprimitive with an explicit strip"
        )
    key = spec.key() + (m,)
    with _memo_lock:
        hit = _lvalue_memo.get(key)
    if hit is not None:
        return hit
    if _disk_cache is not None:
        hit = _disk_cache.get(key)
        if hit is not None:
            with _memo_lock:
                _lvalue_memo[key] = hit
            return hit
    d0 = conductor(spec)
    bern = gen_bernoulli(spec, m, d0, force=force)
    value = mul(bern, Fraction(-1, m))
    if m % 2 == 0 and value.is_zero():
        raise AssertionError(f"L({spec}, {1 - m}) vanished; arithmetic bug")
    result = LValueResult(spec, m, value, ord2(value))
    with _memo_lock:
        _lvalue_memo.setdefault(key, result)
    if _disk_cache is not None:
        _disk_cache.put(key, result)
    return result


def l_value_minus1_quadsum(
    spec: CharSpec, k: int = 1, *, force: bool = False
) -> CyclotomicNumber:
    """L(chi, -1) by the quadratic sum -(1/(2 k D1)) sum_{a<=k D1} chi(a) a^2
    over the defining modulus D1; valid for any k >= 1 and independent of
    it.  Serves as the oracle against the Bernoulli route at m = 2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if spec.is_trivial:
        raise ValueError("quadratic-sum formula needs a nontrivial even character")
    check_size_guard(spec.layer, spec.effective_twist, force)
    d1 = spec.modulus
    acc = _monomial_power_sum(spec, 1, k * d1 + 1, 2)
    den = 2 * k * d1
    return CyclotomicNumber(spec.layer, tuple(Fraction(-c, den) for c in acc))


def l_value_imprimitive(
    spec: CharSpec, strip: int, m: int, *, force: bool = False
) -> LValueResult:
    """Primitive value times prod_{p | strip} (1 - chi(p) p^(m-1)).

    A power-2 twist is itself a stripped form: its quadratic part is
    absorbed into the strip (through the discriminant, so the prime 2 is
    stripped too when the discriminant is even).
    """
    if strip < 1:
        raise ValueError("strip must be >= 1")
    base_spec = spec
    if spec.effective_power == 2 and spec.effective_twist > 1:
        strip *= spec.discriminant
        base_spec = CharSpec(spec.layer, 1, 0)
    base = l_value(base_spec, m, force=force)
    primes = prime_factors(strip)
    factor = one(base_spec.layer)
    for p in primes:
        factor = mul(factor, sub(1, mul(char_eval(base_spec, p), p ** (m - 1))))
    value = mul(base.value, factor)
    return LValueResult(spec, m, value, ord2(value), primes)


# -- the character sums S and T ------------------------------------------------


@dataclass(frozen=True)
class CharacterSum:
    kind: str  # "S" or "T"
    bound: int
    spec: CharSpec
    m: int
    value: CyclotomicNumber


def char_sum_S(
    spec: CharSpec, n_bound: int, m: int, *, chunks: int = 1, force: bool = False
) -> CharacterSum:
    """S(N) = (1/2) sum_{a=1}^{N} chi(a) a^(m-1).

    When N is one full even period and the character is verified even at
    runtime, the range folds via chi(N - a) = chi(a), halving the work;
    the folded sum is bit-identical to the naive one.
    """
    check_size_guard(spec.layer, spec.effective_twist, force)
    period, tab = char_monomials(spec)
    folded = (
        n_bound == period
        and n_bound % 2 == 0
        and tab[(period - 1) % period] == (1, 0)
    )
    if folded:
        dim = _dim(spec.layer)
        total = [0] * dim
        for clo, cend in _chunk_bounds(1, n_bound // 2, chunks):
            acc = [0] * dim
            for a in range(clo, cend):
                t = tab[a % period]
                if t is None:
                    continue
                s, idx = t
                acc[idx] += s * (a ** (m - 1) + (n_bound - a) ** (m - 1))
            for i in range(dim):
                total[i] += acc[i]
        mid = tab[(n_bound // 2) % period]
        if mid is not None:
            s, idx = mid
            total[idx] += s * (n_bound // 2) ** (m - 1)
        end = tab[0]
        if end is not None:
            s, idx = end
            total[idx] += s * n_bound ** (m - 1)
        acc = total
    else:
        acc = _monomial_power_sum(spec, 1, n_bound + 1, m - 1, chunks)
    value = CyclotomicNumber(spec.layer, tuple(Fraction(c, 2) for c in acc))
    return CharacterSum("S", n_bound, spec, m, value)


def char_sum_S_naive(spec: CharSpec, n_bound: int, m: int) -> CharacterSum:
    """Unfolded reference sum for S(N)."""
    acc = _monomial_power_sum(spec, 1, n_bound + 1, m - 1)
    value = CyclotomicNumber(spec.layer, tuple(Fraction(c, 2) for c in acc))
    return CharacterSum("S", n_bound, spec, m, value)


def char_sum_T(
    spec: CharSpec, d_bound: int, m: int, *, chunks: int = 1, force: bool = False
) -> CharacterSum:
    """T(D) = (2/(mD)) sum_{a=1}^{D/2} chi(a) a^m."""
    if d_bound % 2 != 0:
        raise ValueError("T(D) needs an even D")
    check_size_guard(spec.layer, spec.effective_twist, force)
    acc = _monomial_power_sum(spec, 1, d_bound // 2 + 1, m, chunks)
    den = m * d_bound
    value = CyclotomicNumber(spec.layer, tuple(Fraction(2 * c, den) for c in acc))
    return CharacterSum("T", d_bound, spec, m, value)


# -- Dedekind zeta values over the tower ----------------------------------------


def _require_even_weight(m: int) -> None:
    if m < 2 or m % 2 != 0:
        raise ValueError("m must be an even integer >= 2")


def zeta_Qn(n: int, m: int, *, force: bool = False) -> Fraction:
    """zeta_{Q_n}(1-m): the zeta factor times, per level l <= n, the full
    Galois orbit of L(chi_l, 1-m).  The orbit product is exactly the
    field norm of one representative, which turns 2^(l-1) big sums into
    one (cross-checked against full enumeration in the tests)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _require_even_weight(m)
    val = l_value(CharSpec(0), m, force=force).value.as_rational()
    for level in range(1, n + 1):
        val *= field_norm(l_value(CharSpec(level), m, force=force).value)
    return val


def zeta_Kn(d: int, n: int, m: int, *, force: bool = False) -> Fraction:
    """zeta_{K_n}(1-m) for K = Q(sqrt(d)), d odd square-free >= 3."""
    if d < 3 or d % 2 == 0:
        raise ValueError("d must be odd square-free >= 3")
    _require_even_weight(m)
    val = zeta_Qn(n, m, force=force)
    val *= l_value(CharSpec(0, d), m, force=force).value.as_rational()
    for level in range(1, n + 1):
        val *= field_norm(l_value(CharSpec(level, d), m, force=force).value)
    return val


def zeta_base_even_twist(d2: int, m: int, *, force: bool = False) -> Fraction:
    """zeta_F(1-m) for F = Q(sqrt(2p)) at the base layer: the zeta factor
    times L(psi_{2p}, 1-m), using the even-twist character."""
    if d2 % 2 != 0 or d2 < 6:
        raise ValueError("even-twist base needs d = 2p, p odd")
    _require_even_weight(m)
    spec = CharSpec(0, d2, 1, allow_even_twist=True)
    val = l_value(CharSpec(0), m, force=force).value.as_rational()
    return val * l_value(spec, m, force=force).value.as_rational()
