"""Exact checks of the binomial-sum identities behind the vanishing of c(P).

All sums over i that are formally infinite are truncated at i = a: the factor
binom(j+1, a-i) is zero once a - i < 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .lattice_algebra import binom


class DomainError(ValueError):
    """Parameters outside the range where an identity is stated."""


@dataclass
class IdentityReport:
    identity_name: str
    ranges: dict
    passed: bool = True
    checked: int = 0
    first_failure: dict | None = None
    notes: list = field(default_factory=list)

    def record(self, params: dict, lhs, rhs) -> bool:
        self.checked += 1
        if lhs != rhs and self.passed:
            self.passed = False
            self.first_failure = {"params": params, "lhs": str(lhs), "rhs": str(rhs)}
        return lhs == rhs

    def to_json(self) -> dict:
        return {
            "identity": self.identity_name,
            "ranges": self.ranges,
            "passed": self.passed,
            "checked": self.checked,
            "first_failure": self.first_failure,
            "notes": list(self.notes),
        }


# convolution formula


def convolution_identity(a: int, b: int, c: int) -> tuple[int, int]:
    """sum_q (-1)^q binom(b,q) binom(a-q,c-q) versus binom(a-b, c)."""
    if not (0 <= c <= a and b >= 0):
        raise DomainError(f"need 0 <= c <= a and b >= 0, got a={a}, b={b}, c={c}")
    lhs = sum((-1) ** q * binom(b, q) * binom(a - q, c - q) for q in range(c + 1))
    return lhs, binom(a - b, c)


# main binomial lemma


def _lemma23_check_args(n, d, j, k):
    if not (0 <= d < n and 0 <= k <= d and k <= j <= n):
        raise DomainError(f"need 0 <= d < n, 0 <= k <= d, k <= j <= n; got n={n} d={d} j={j} k={k}")


def lemma23_terms(n: int, d: int, j: int, k: int) -> list[int]:
    a = n - d
    return [(-1) ** (a - i) * i * binom(i + j - k, j) * binom(j + 1, a - i) for i in range(a + 1)]


def lemma23_value(n: int, d: int, j: int, k: int) -> int:
    _lemma23_check_args(n, d, j, k)
    terms = lemma23_terms(n, d, j, k)
    assert terms[0] == 0
    return sum(terms)


def lemma23_expected(n: int, d: int, j: int, k: int) -> int:
    _lemma23_check_args(n, d, j, k)
    a = n - d
    if k < a:
        return j + 1
    if k == a:
        return a
    return 0


# WZ certificate


def wz_F(a: int, j: int, k: int, i: int) -> int:
    return (-1) ** (a - i) * i * binom(i + j - k, j) * binom(j + 1, a - i)


def wz_R(a: int, j: int, k: int, i: int) -> Fraction:
    den = (i + j - k) * i
    if den == 0:
        raise DomainError(f"outside certificate domain: pole of R at a={a} j={j} k={k} i={i}")
    num = (-j - 1 + a - i) * (i - k) * (k * a - i * k * j + a * j * i - k * i - a * j)
    return Fraction(num, den)


def wz_G(a: int, j: int, k: int, i: int) -> Fraction:
    return wz_F(a, j, k, i) * wz_R(a, j, k, i)


def wz_certificate_sides(a: int, j: int, k: int, i: int) -> tuple[Fraction, Fraction]:
    """Both sides of (a-k)(a-1-k)(j+1)(F(k,i) - F(k+1,i)) = G(k,i+1) - G(k,i)."""
    if a < 1 or not (0 <= k <= j):
        raise DomainError(f"need a >= 1 and 0 <= k <= j, got a={a} j={j} k={k}")
    if i < 1 or i + j - k < 1:
        raise DomainError(f"outside certificate domain: a={a} j={j} k={k} i={i}")
    lhs = Fraction((a - k) * (a - 1 - k) * (j + 1) * (wz_F(a, j, k, i) - wz_F(a, j, k + 1, i)))
    rhs = wz_G(a, j, k, i + 1) - wz_G(a, j, k, i)
    return lhs, rhs


def wz_certificate_check(a: int, j: int, k: int, i: int) -> bool:
    lhs, rhs = wz_certificate_sides(a, j, k, i)
    return lhs == rhs


def wz_f(a: int, j: int, k: int) -> int:
    assert wz_F(a, j, k, a + 1) == 0
    return sum(wz_F(a, j, k, i) for i in range(a + 1))


def minus_G0(a: int, j: int, k: int) -> int:
    """The closed form printed for -G(k, 0)."""
    return (-1) ** (a + 1) * binom(j - k, j) * binom(j + 1, a) * (-j - 1 + a) * k * a


def wz_telescoped_check(a: int, j: int, k: int) -> bool:
    """Summed certificate: (a-k)(a-1-k)(j+1)(f(k) - f(k+1)) = -G(k,0), plus f(k+1) = f(k)
    whenever k is not a-1 or a."""
    if a < 1 or not (0 <= k <= j):
        raise DomainError(f"need a >= 1 and 0 <= k <= j, got a={a} j={j} k={k}")
    fk, fk1 = wz_f(a, j, k), wz_f(a, j, k + 1)
    ok = (a - k) * (a - 1 - k) * (j + 1) * (fk - fk1) == minus_G0(a, j, k)
    if k not in (a - 1, a):
        ok = ok and fk == fk1
    return ok


# the three recurrences in j


def _shifted_sum(a: int, j: int, shift: int) -> int:
    def term(i):
        return (-1) ** (a - i) * i * binom(i + j - shift, j) * binom(j + 1, a - i)

    assert term(a + 1) == 0
    return sum(term(i) for i in range(a + 1))


def f1(a: int, j: int) -> int:
    return _shifted_sum(a, j, 0)


def f2(a: int, j: int) -> int:
    return _shifted_sum(a, j, a)


def f3(a: int, j: int) -> int:
    return _shifted_sum(a, j, a + 1)


def f2_second_difference_closed(a: int, j: int) -> Fraction:
    num = (-1) ** (a + 1) * binom(j - a, j) * binom(j + 1, a) * a * (-2 * a * j + a * a - 4 * a + j * j + 4 * j + 3)
    return Fraction(num, (j + 1) * (a - j - 2))


def recurrence_checks(a: int, j_max: int) -> IdentityReport:
    if a < 1 or j_max < a + 2:
        raise DomainError(f"need a >= 1 and j_max >= a + 2, got a={a}, j_max={j_max}")
    rep = IdentityReport("recurrences", {"a": a, "j_max": j_max})
    rep.record({"case": "f1(0)", "a": a}, f1(a, 0), 1)
    for j in range(j_max + 1):
        rep.record({"case": "f1 recurrence", "a": a, "j": j},
                   (-j - 2) * f1(a, j) + (j + 1) * f1(a, j + 1), 0)
        rep.record({"case": "f1 closed", "a": a, "j": j}, f1(a, j), j + 1)
    rep.record({"case": "f2(a)", "a": a}, f2(a, a), a)
    rep.record({"case": "f2(a+1)", "a": a}, f2(a, a + 1), a)
    rep.record({"case": "f3(a+1)", "a": a}, f3(a, a + 1), 0)
    for j in range(a, j_max + 1):
        second = f2(a, j) - 2 * f2(a, j + 1) + f2(a, j + 2)
        rep.record({"case": "f2 second difference", "a": a, "j": j},
                   second, f2_second_difference_closed(a, j))
        rep.record({"case": "f2 second difference vanishes", "a": a, "j": j}, second, 0)
        rep.record({"case": "f2 closed", "a": a, "j": j}, f2(a, j), a)
    for j in range(a + 1, j_max + 1):
        rep.record({"case": "f3 recurrence", "a": a, "j": j},
                   (-j - 2) * f3(a, j) + (j + 1) * f3(a, j + 1), 0)
        rep.record({"case": "f3 closed", "a": a, "j": j}, f3(a, j), 0)
    return rep


# sweeps


def _sweep(name: str, ranges: dict, params: Iterable[dict], sides: Callable) -> IdentityReport:
    rep = IdentityReport(name, ranges)
    for p in params:
        lhs, rhs = sides(**p)
        rep.record(p, lhs, rhs)
    return rep


def convolution_sweep(max_a: int = 20, max_b: int = 20) -> IdentityReport:
    params = ({"a": a, "b": b, "c": c}
              for a in range(max_a + 1) for b in range(max_b + 1) for c in range(a + 1))
    return _sweep("lemma22", {"a": [0, max_a], "b": [0, max_b], "c": "0..a"}, params,
                  convolution_identity)


def alternating_sum_sweep(max_n: int = 12) -> IdentityReport:
    params = ({"n": n, "d": d, "j": j, "k": k}
              for n in range(1, max_n + 1) for d in range(n)
              for k in range(d + 1) for j in range(k, n + 1))
    return _sweep("lemma23", {"n": [1, max_n], "d": "0..n-1", "k": "0..d", "j": "k..n"}, params,
                  lambda **p: (lemma23_value(**p), lemma23_expected(**p)))


def certificate_sweep(max_a: int = 6, max_j: int = 10) -> IdentityReport:
    """Certificate check on every in-domain (a, j, k, i) with 1 <= i <= a+2."""
    params = ({"a": a, "j": j, "k": k, "i": i}
              for a in range(1, max_a + 1) for j in range(max_j + 1)
              for k in range(j + 1) for i in range(1, a + 3) if i + j - k >= 1)
    rep = _sweep("certificate", {"a": [1, max_a], "j": [0, max_j], "k": "0..j", "i": "1..a+2"},
                 params, wz_certificate_sides)
    for a, j, k in itertools.product(range(1, max_a + 1), range(max_j + 1), range(max_j + 1)):
        if k <= j:
            rep.record({"a": a, "j": j, "k": k, "case": "telescoped"},
                       wz_telescoped_check(a, j, k), True)
    rep.notes.append("corner j = k = 0: binom(j-k, j) = 1 there, the vanishing of -G(k,0) "
                     "comes from the factor k alone")
    return rep


def recurrences_sweep(max_a: int = 5, j_max: int = 12) -> IdentityReport:
    rep = IdentityReport("recurrences", {"a": [1, max_a], "j_max": j_max})
    for a in range(1, max_a + 1):
        sub = recurrence_checks(a, j_max)
        rep.checked += sub.checked
        if not sub.passed and rep.passed:
            rep.passed = False
            rep.first_failure = sub.first_failure
    return rep


SUITES = {
    "lemma22": convolution_sweep,
    "lemma23": alternating_sum_sweep,
    "certificate": certificate_sweep,
    "recurrences": recurrences_sweep,
}
