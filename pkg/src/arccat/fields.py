"""Exact coefficient fields: the rationals and prime fields.

Scalars are plain Python objects (``fractions.Fraction`` for the rationals,
``int`` in ``range(p)`` for a prime field); a :class:`Field` instance bundles
the arithmetic so that all higher layers are field-agnostic and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class Field:
    """Abstract exact field interface."""

    name: str

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return self.name


@dataclass(frozen=True, repr=False)
class RationalField(Field):
    """The field of rational numbers with exact ``Fraction`` scalars."""

    name: str = "QQ"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n: int):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        # almost every scalar in the structure constants is ±1; skipping the
        # generic product avoids gcd renormalization on the hot path
        if b == 1:
            return a
        if a == 1:
            return b
        if b == -1:
            return -a
        if a == -1:
            return -b
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True, repr=False)
class PrimeField(Field):
    """The finite field with ``p`` elements, scalars stored in ``range(p)``."""

    p: int
    name: str = ""

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        object.__setattr__(self, "name", f"GF({self.p})")

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n: int):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0


QQ = RationalField()


def parse_field(text: str) -> Field:
    """Parse a field name: ``"QQ"`` or ``"GF(p)"`` / ``"GF:p"``."""
    t = text.strip()
    if t.upper() in ("QQ", "Q"):
        return QQ
    for prefix, suffix in (("GF(", ")"), ("GF:", ""), ("F(", ")"), ("F:", "")):
        if t.upper().startswith(prefix) and t.endswith(suffix):
            inner = t[len(prefix):len(t) - len(suffix) if suffix else len(t)]
            return PrimeField(int(inner))
    raise ValueError(f"unrecognized field name: {text!r}")
