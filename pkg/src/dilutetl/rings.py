"""Exact coefficient rings parameterized by the loop value delta.

Four rings are supported: the integers Z, the rationals Q, prime fields
F_p, and the polynomial ring Z[delta] with delta kept symbolic.  Every
ring designates one element as the loop value ``delta`` (for Z[delta] it
is the indeterminate itself); the diagram algebra multiplies by a power
of it each time a closed loop is discarded.

All arithmetic is exact: Python integers, ``fractions.Fraction`` and
sparse integer polynomials in canonical form.  Floating point appears
nowhere in this package.

Ring descriptors for the CLI and config files are ``"Z"``, ``"Q"``,
``"Fp:<p>"`` and ``"Z[delta]"``; delta descriptors are an integer
literal or ``"generic"`` (the latter only for ``Z[delta]``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class RingError(ValueError):
    """Malformed ring construction or an operand from the wrong ring."""


def _is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond any modulus used here."""
    if m < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if m % q == 0:
            return m == q
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Poly:
    """Sparse integer polynomial in delta.

    ``terms`` is a tuple of (exponent, coefficient) pairs, sorted by
    exponent, with no zero coefficients: the canonical form, so equality
    of polynomials is equality of representations.
    """

    terms: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def from_dict(coeffs: dict[int, int]) -> "Poly":
        return Poly(tuple(sorted((e, c) for e, c in coeffs.items() if c != 0)))

    @staticmethod
    def const(c: int) -> "Poly":
        return Poly(((0, c),)) if c != 0 else Poly()

    def __add__(self, other: "Poly") -> "Poly":
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return Poly.from_dict(acc)

    def __neg__(self) -> "Poly":
        return Poly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        acc: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return Poly.from_dict(acc)

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, x, coerce, add, mul):
        """Evaluate at delta = x using the target ring's operations."""
        total = coerce(0)
        for e, c in self.terms:
            term = coerce(c)
            for _ in range(e):
                term = mul(term, x)
            total = add(total, term)
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "delta" if e == 1 else f"delta^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append(("- " if c < 0 else "+ ") + body)
        head = parts[0].replace("+ ", "").replace("- ", "-")
        return " ".join([head] + parts[1:])


DELTA = Poly(((1, 1),))


@dataclass(frozen=True)
class Ring:
    """One of Z, Q, F_p, Z[delta], together with its designated delta."""

    kind: str
    p: int | None
    delta: object

    # -- constructors ------------------------------------------------

    @staticmethod
    def integers(delta: int = 0) -> "Ring":
        return Ring("Z", None, int(delta))

    @staticmethod
    def rationals(delta=0) -> "Ring":
        return Ring("Q", None, Fraction(delta))

    @staticmethod
    def prime_field(p: int, delta: int = 0) -> "Ring":
        if not _is_prime(p):
            raise RingError(f"modulus {p} is not prime")
        return Ring("Fp", p, int(delta) % p)

    @staticmethod
    def delta_polynomials() -> "Ring":
        return Ring("Zdelta", None, DELTA)

    # -- element plumbing --------------------------------------------

    def _check(self, a):
        k = self.kind
        if k == "Z":
            if not isinstance(a, int):
                raise RingError(f"{a!r} is not an element of Z")
        elif k == "Q":
            if not isinstance(a, (Fraction, int)):
                raise RingError(f"{a!r} is not an element of Q")
        elif k == "Fp":
            if not isinstance(a, int):
                raise RingError(f"{a!r} is not an element of F_{self.p}")
        else:
            if not isinstance(a, Poly):
                raise RingError(f"{a!r} is not an element of Z[delta]")
        return a

    def coerce(self, k: int):
        """Image of the integer k under the canonical map into this ring."""
        if self.kind == "Z":
            return int(k)
        if self.kind == "Q":
            return Fraction(k)
        if self.kind == "Fp":
            return int(k) % self.p
        return Poly.const(int(k))

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    # -- arithmetic ---------------------------------------------------

    def add(self, a, b):
        self._check(a), self._check(b)
        if self.kind == "Fp":
            return (a + b) % self.p
        if self.kind == "Q":
            return Fraction(a) + Fraction(b)
        return a + b

    def neg(self, a):
        self._check(a)
        if self.kind == "Fp":
            return (-a) % self.p
        return -a

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        self._check(a), self._check(b)
        if self.kind == "Fp":
            return (a * b) % self.p
        if self.kind == "Q":
            return Fraction(a) * Fraction(b)
        return a * b

    def eq(self, a, b) -> bool:
        self._check(a), self._check(b)
        if self.kind == "Fp":
            return (a - b) % self.p == 0
        return a == b

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero)

    def delta_power(self, a: int):
        return _delta_power(self, a)

    # -- formatting ---------------------------------------------------

    def descriptor(self) -> str:
        return {"Z": "Z", "Q": "Q", "Zdelta": "Z[delta]"}.get(self.kind) or f"Fp:{self.p}"

    def delta_descriptor(self) -> str:
        return "generic" if self.kind == "Zdelta" else str(self.delta)

    def element_str(self, a) -> str:
        self._check(a)
        return str(a)

    def __repr__(self) -> str:
        return f"Ring({self.descriptor()}, delta={self.delta_descriptor()})"


@lru_cache(maxsize=None)
def _delta_power(ring: Ring, a: int):
    if a < 0:
        raise RingError("negative loop count")
    out = ring.one
    for _ in range(a):
        out = ring.mul(out, ring.delta)
    return out


def specialize(poly: Poly, target: Ring):
    """Evaluate a Z[delta] element at delta = target.delta inside target.

    Specialization is a ring homomorphism; the test suite checks this on
    random polynomials.
    """
    if not isinstance(poly, Poly):
        raise RingError(f"{poly!r} is not an element of Z[delta]")
    return poly.evaluate(target.delta, target.coerce, target.add, target.mul)


def parse_ring(ring_desc: str, delta_desc: str | int = 0) -> Ring:
    """Build a Ring from CLI/config descriptors."""
    ring_desc = ring_desc.strip()
    if ring_desc == "Z[delta]":
        return Ring.delta_polynomials()
    if isinstance(delta_desc, str):
        if delta_desc.strip() == "generic":
            raise RingError("delta 'generic' requires the ring Z[delta]")
        delta = int(delta_desc)
    else:
        delta = int(delta_desc)
    if ring_desc == "Z":
        return Ring.integers(delta)
    if ring_desc == "Q":
        return Ring.rationals(delta)
    if ring_desc.startswith("Fp:"):
        return Ring.prime_field(int(ring_desc[3:]), delta)
    raise RingError(f"unrecognized ring descriptor {ring_desc!r}")
