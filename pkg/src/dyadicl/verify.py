"""Executable congruence checks with re-verifiable witnesses.

Every check compares two exactly computed sides and decides a valuation
inequality (congruences above the prime 2 reduce to ord2(difference) >=
ord2(modulus)) or an exact identity.  A report carries both sides, the
difference and the threshold, so a verdict can be re-derived outside
the harness.  Each check accepts fault=True, which perturbs one side by
+1 and must flip the verdict (negative control against vacuous checks).
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .characters import CharSpec, char_monomials, chi_eval, kronecker_symbol, prime_factors
from .cyclotomic import (
    CyclotomicNumber,
    DyadicValuation,
    _dim,
    add,
    mul,
    neg,
    one,
    ord2,
    root_of_unity,
    sub,
)
from .lvalues import (
    _monomial_power_sum,
    char_sum_S,
    char_sum_T,
    l_value,
    l_value_imprimitive,
)

DEFAULT_NS = (1, 2, 3, 4, 5, 6)
DEFAULT_DS = (1, 3, 5, 7, 15, 17, 21, 33, 105)
DEFAULT_MS = (2, 4, 6)

CHECK_NAMES = (
    "product_form",
    "weight_independence",
    "reflection_identities",
    "sum_identities",
    "stripped_plus_twisted",
    "divisor_sum",
)


@dataclass
class CheckReport:
    check_name: str
    parameters: dict
    passed: bool
    witness: dict

    def to_dict(self) -> dict:
        return {
            "check": self.check_name,
            "parameters": self.parameters,
            "passed": self.passed,
            "witness": self.witness,
        }


def _congruence(
    name: str,
    lhs: CyclotomicNumber,
    rhs: CyclotomicNumber,
    threshold: Fraction | None,
) -> tuple[bool, dict]:
    """threshold None means exact equality (infinite threshold)."""
    diff = sub(lhs, rhs)
    v = ord2(diff)
    if threshold is None:
        passed = diff.is_zero()
        thr = "inf"
    else:
        passed = v >= threshold
        thr = str(DyadicValuation(threshold))
    witness = {
        "name": name,
        "kind": "congruence",
        "lhs": lhs.to_dict(),
        "rhs": rhs.to_dict(),
        "difference": diff.to_dict(),
        "difference_ord2": str(v),
        "threshold": thr,
    }
    return passed, witness


def _valuation(name: str, computed: DyadicValuation, expected: Fraction) -> tuple[bool, dict]:
    passed = computed == expected
    witness = {
        "name": name,
        "kind": "valuation",
        "computed_ord2": str(computed),
        "expected_ord2": str(DyadicValuation(expected)),
    }
    return passed, witness


def _compound(name: str, params: dict, parts: list[tuple[bool, dict]]) -> CheckReport:
    return CheckReport(
        name,
        params,
        all(p for p, _ in parts),
        {"subchecks": [w for _, w in parts]},
    )


def _maybe_fault(value: CyclotomicNumber, fault: bool) -> CyclotomicNumber:
    return add(value, 1) if fault else value


# -- individual checks ---------------------------------------------------------


def check_product_form(n: int, *, fault: bool = False, force: bool = False) -> CheckReport:
    """L(chi_n, -1) is congruent mod 2 to prod_{k=2}^{n} (1 - zeta_{2^k}),
    and its valuation is exactly 1 - 2^(1-n)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    lv = _maybe_fault(l_value(CharSpec(n), 2, force=force).value, fault)
    prod = one(n)
    for k in range(2, n + 1):
        prod = mul(prod, sub(1, root_of_unity(n, k, 1)))
    parts = [
        _congruence("lvalue_vs_product_mod2", lv, prod, Fraction(1)),
        _valuation("lvalue_ord2", ord2(lv), 1 - Fraction(1, 1 << (n - 1))),
    ]
    return _compound("product_form", {"n": n}, parts)


def check_weight_independence(
    n: int, m: int, *, fault: bool = False, force: bool = False
) -> CheckReport:
    """L(chi_n, 1-m) is 2-integral and congruent mod 2 to L(chi_n, -1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if m % 2 != 0 or m < 2:
        raise ValueError("m must be even >= 2")
    lv_m = _maybe_fault(l_value(CharSpec(n), m, force=force).value, fault)
    lv_2 = l_value(CharSpec(n), 2, force=force).value
    zero_n = sub(lv_m, lv_m)
    parts = [
        _congruence("two_integrality", lv_m, zero_n, Fraction(0)),
        _congruence("mod2_weight_independence", lv_m, lv_2, Fraction(1)),
    ]
    return _compound("weight_independence", {"n": n, "m": m}, parts)


def check_stripped_plus_twisted(
    d: int, n: int, m: int, *, fault: bool = False, force: bool = False
) -> CheckReport:
    """The stripped value plus the twisted value vanishes mod 2(1+zeta_4):
    ord2 of the sum is at least 3/2."""
    if d < 3 or d % 2 == 0:
        raise ValueError("d must be odd square-free >= 3")
    if n < 2:
        raise ValueError("n must be >= 2")
    big_d = (1 << (n + 2)) * d
    stripped = l_value_imprimitive(CharSpec(n), big_d, m, force=force).value
    twisted = l_value(CharSpec(n, d), m, force=force).value
    total = _maybe_fault(add(stripped, twisted), fault)
    parts = [
        _congruence("sum_ord2_ge_3_2", total, sub(total, total), Fraction(3, 2)),
    ]
    return _compound("stripped_plus_twisted", {"d": d, "n": n, "m": m}, parts)


def _eta_specs(d: int, n: int) -> list[CharSpec]:
    """chi_n, chi_n psi_d, chi_n psi_d^2, deduplicated for d = 1."""
    specs = [CharSpec(n), CharSpec(n, d, 1), CharSpec(n, d, 2)]
    seen, out = set(), []
    for s in specs:
        if s.key() not in seen:
            seen.add(s.key())
            out.append(s)
    return out


def _eta_value(spec: CharSpec, m: int, force: bool) -> CyclotomicNumber:
    """L(eta, 1-m) where an imprimitive eta means the stripped series."""
    if spec.effective_power == 2 and spec.effective_twist > 1:
        return l_value_imprimitive(spec, 1, m, force=force).value
    return l_value(spec, m, force=force).value


def _eighth_fold_sum(
    spec: CharSpec, bound: int, sign_val: CyclotomicNumber
) -> CyclotomicNumber:
    """sum_{a<=bound} eta(a) a eps_a with eps_a = 1 for a = 1 mod 4 and
    eps_a = sign_val (+- zeta_4) for a = 3 mod 4."""
    period, tab = char_monomials(spec)
    dim = _dim(spec.layer)
    plain = [0] * dim
    folded = [0] * dim
    for a in range(1, bound + 1):
        t = tab[a % period]
        if t is None:
            continue
        s, idx = t
        (plain if a % 4 == 1 else folded)[idx] += s * a
    lhs = CyclotomicNumber(spec.layer, tuple(Fraction(c) for c in plain))
    rhs = CyclotomicNumber(spec.layer, tuple(Fraction(c) for c in folded))
    return add(lhs, mul(sign_val, rhs))


def check_sum_identities(
    d: int, n: int, m: int, *, fault: bool = False, force: bool = False
) -> CheckReport:
    """The character-sum relations behind the congruence machinery, over
    the period D = 2^(n+2) d:

    - the quadratic sum -(1/2D) sum chi(a) a^2 equals (1/2) sum_{a<=D/2}
      chi(a) a exactly;
    - S(D) = (1/2) sum_{a<=D} eta(a) a^(m-1) has ord2 >= 2;
    - T(D) = (2/(mD)) sum_{a<=D/2} eta(a) a^m agrees with S(D/2) mod 4;
    - L(eta, 1-m) agrees mod 4 with the quarter-range sum and with the
      (1 -+ zeta_4)-folded eighth-range sum, the sign read off from
      chi_n(2^n d - 1) = +- zeta_4 at runtime.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if m % 2 != 0 or m < 2:
        raise ValueError("m must be even >= 2")
    big_d = (1 << (n + 2)) * d
    chi_spec = CharSpec(n, d, 1) if d > 1 else CharSpec(n)
    parts: list[tuple[bool, dict]] = []

    # exact identity between the quadratic and linear sums
    acc = _monomial_power_sum(chi_spec, 1, big_d + 1, 2)
    quad = CyclotomicNumber(n, tuple(Fraction(-c, 2 * big_d) for c in acc))
    acc = _monomial_power_sum(chi_spec, 1, big_d // 2 + 1, 1)
    linear = CyclotomicNumber(n, tuple(Fraction(c, 2) for c in acc))
    parts.append(_congruence("quad_sum_identity", _maybe_fault(quad, fault), linear, None))

    # runtime sign: chi_n(2^n d - 1) must be +- zeta_4
    sign_val = chi_eval(n, (1 << n) * d - 1)
    zeta4 = root_of_unity(n, 2, 1)
    if sign_val != zeta4 and sign_val != neg(zeta4):
        raise AssertionError(f"chi_{n}({(1 << n) * d - 1}) is not +-zeta_4")
    fold = sub(1, sign_val)

    for spec in _eta_specs(d, n):
        tag = f"power{spec.effective_power}"
        s_full = char_sum_S(spec, big_d, m, force=force).value
        parts.append(
            _congruence(f"half_period_sum_mod4_{tag}", s_full, sub(s_full, s_full), Fraction(2))
        )
        t_val = char_sum_T(spec, big_d, m, force=force).value
        s_half = char_sum_S(spec, big_d // 2, m, force=force).value
        parts.append(_congruence(f"tail_vs_half_mod4_{tag}", t_val, s_half, Fraction(2)))

        lval = _eta_value(spec, m, force)
        acc = _monomial_power_sum(spec, 1, big_d // 4 + 1, 1)
        quarter = CyclotomicNumber(n, tuple(Fraction(c) for c in acc))
        parts.append(_congruence(f"lvalue_quarter_sum_mod4_{tag}", lval, quarter, Fraction(2)))

        eighth = mul(fold, _eighth_fold_sum(spec, big_d // 8, sign_val))
        parts.append(_congruence(f"lvalue_eighth_fold_mod4_{tag}", lval, eighth, Fraction(2)))

    # the quadratic-sum route to the same eighth-range fold (weight 2)
    eighth_chi = mul(fold, _eighth_fold_sum(chi_spec, big_d // 8, sign_val))
    parts.append(_congruence("quad_sum_eighth_fold_mod4", quad, eighth_chi, Fraction(2)))

    return _compound("sum_identities", {"d": d, "n": n, "m": m}, parts)


def check_reflection_identities(
    n: int, *, fault: bool = False, force: bool = False
) -> CheckReport:
    """chi_n reflection laws, exhaustively over one period:
    chi_n(2^(n+1) - b) = -chi_n(b); chi_n(2^n - b) twists by (-1|b); and
    chi_n(D/2^k - b) = zeta_{2^k} chi_n(b) mod (1 - zeta_{2^(k-1)})."""
    if n < 2:
        raise ValueError("n must be >= 2")
    big_d = 1 << (n + 2)
    chi_mid = chi_eval(n, (1 << n) - 1)
    failures: list[dict] = []
    checked = 0
    first = True
    for b in range(1, big_d + 1):
        chi_b = chi_eval(n, b)
        cases = [
            ("half_shift_antisymmetry", chi_eval(n, (1 << (n + 1)) - b), neg(chi_b), None),
            (
                "quarter_shift_twist",
                chi_eval(n, (1 << n) - b),
                mul(chi_mid, mul(chi_b, kronecker_symbol(-1, b))),
                None,
            ),
        ]
        for k in range(2, n + 1):
            cases.append(
                (
                    f"root_shift_k{k}",
                    chi_eval(n, big_d // (1 << k) - b),
                    mul(root_of_unity(n, k, 1), chi_b),
                    Fraction(1, 1 << (k - 2)),
                )
            )
        for name, lhs, rhs, threshold in cases:
            if fault and first:
                lhs = add(lhs, 1)
                first = False
            ok, wit = _congruence(name, lhs, rhs, threshold)
            checked += 1
            if not ok:
                wit["b"] = b
                failures.append(wit)
    passed = not failures
    witness = {"identities_checked": checked, "failures": failures[:3]}
    return CheckReport("reflection_identities", {"n": n}, passed, witness)


def check_divisor_sum(
    d: int, n: int, *, fault: bool = False, force: bool = False
) -> CheckReport:
    """sum over b | d of the D-stripped L(chi_n psi_b, -1) has
    ord2 >= tau(d) (number of prime divisors); needs tau >= 2."""
    primes = prime_factors(d)
    tau = len(primes)
    if tau < 2:
        raise ValueError("d must have at least two prime divisors")
    if n < 2:
        raise ValueError("n must be >= 2")
    big_d = (1 << (n + 2)) * d
    total = None
    divs = [1]
    for p in primes:
        divs += [x * p for x in divs]
    for b in sorted(divs):
        spec = CharSpec(n, b, 1) if b > 1 else CharSpec(n)
        val = l_value_imprimitive(spec, big_d, 2, force=force).value
        total = val if total is None else add(total, val)
    total = _maybe_fault(total, fault)
    parts = [
        _congruence("divisor_sum_ord2_ge_tau", total, sub(total, total), Fraction(tau)),
    ]
    return _compound("divisor_sum", {"d": d, "n": n}, parts)


# -- grid runner ----------------------------------------------------------------


_CHECK_FUNCS = {
    "product_form": check_product_form,
    "weight_independence": check_weight_independence,
    "reflection_identities": check_reflection_identities,
    "sum_identities": check_sum_identities,
    "stripped_plus_twisted": check_stripped_plus_twisted,
    "divisor_sum": check_divisor_sum,
}


@dataclass
class GridConfig:
    ns: tuple[int, ...] = DEFAULT_NS
    ds: tuple[int, ...] = DEFAULT_DS
    ms: tuple[int, ...] = DEFAULT_MS
    checks: tuple[str, ...] | None = None
    inject_fault: bool = False
    jobs: int = 1
    force: bool = False


def _tasks_for(config: GridConfig) -> list[tuple[str, dict]]:
    selected = config.checks if config.checks is not None else CHECK_NAMES
    for name in selected:
        if name not in _CHECK_FUNCS:
            raise ValueError(f"unknown check {name!r}; available: {', '.join(CHECK_NAMES)}")
    tasks: list[tuple[str, dict]] = []
    ns2 = [n for n in config.ns if n >= 2]
    odd_ds = [d for d in config.ds if d % 2 == 1]
    for name in CHECK_NAMES:
        if name not in selected:
            continue
        if name == "product_form":
            tasks += [(name, {"n": n}) for n in ns2]
        elif name == "weight_independence":
            tasks += [(name, {"n": n, "m": m}) for n in config.ns if n >= 1 for m in config.ms]
        elif name == "reflection_identities":
            tasks += [(name, {"n": n}) for n in ns2]
        elif name == "sum_identities":
            tasks += [
                (name, {"d": d, "n": n, "m": m}) for d in odd_ds for n in ns2 for m in config.ms
            ]
        elif name == "stripped_plus_twisted":
            tasks += [
                (name, {"d": d, "n": n, "m": m})
                for d in odd_ds
                if d >= 3
                for n in ns2
                for m in config.ms
            ]
        elif name == "divisor_sum":
            tasks += [
                (name, {"d": d, "n": n}) for d in odd_ds if len(prime_factors(d)) >= 2 for n in ns2
            ]
    return tasks


def _run_task(args: tuple[str, dict, bool, bool]) -> CheckReport:
    name, params, fault, force = args
    return _CHECK_FUNCS[name](**params, fault=fault, force=force)


def run_all(config: GridConfig) -> list[CheckReport]:
    """Run the configured grid; with inject_fault the first task in the
    deterministic ordering is perturbed and must be the one failure."""
    tasks = _tasks_for(config)
    jobs = [
        (name, params, config.inject_fault and i == 0, config.force)
        for i, (name, params) in enumerate(tasks)
    ]
    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            reports = list(pool.map(_run_task, jobs))
    else:
        reports = [_run_task(j) for j in jobs]
    reports.sort(key=lambda r: (r.check_name, json.dumps(r.parameters, sort_keys=True)))
    return reports
