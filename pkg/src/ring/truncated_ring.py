"""
Exact arithmetic in truncated chain rings k[t]/(t^N) (k = Q or F_p) and Z/p^N (t = p).
"""
import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple, Union

from sympy import isprime

from src.utils.exceptions import NotAUnit, RingMismatch

RATIONAL = "Q"
PRIME_FIELD = "Fp"
P_ADIC = "Zp"

_TERM_PATTERN = re.compile(r'^(?P<coeff>[0-9]+(?:/[0-9]+)?)?\*?(?P<var>[tp])?(?:\^(?P<exp>[0-9]+))?$')


@dataclass(frozen=True)
class TruncatedRing:
    """The local ring R with maximal ideal (t) and t^precision = 0."""
    kind: str
    precision: int
    p: int = 0

    def __post_init__(self):
        if self.kind not in (RATIONAL, PRIME_FIELD, P_ADIC):
            raise ValueError(f"Unknown ring kind: {self.kind}")
        if self.precision < 1:
            raise ValueError(f"Precision must be positive, got {self.precision}")
        if self.kind != RATIONAL and not isprime(self.p):
            raise ValueError(f"{self.p} is not a prime")

    @classmethod
    def rational(cls, precision: int) -> "TruncatedRing":
        return cls(RATIONAL, precision)

    @classmethod
    def prime_field(cls, p: int, precision: int) -> "TruncatedRing":
        return cls(PRIME_FIELD, precision, p)

    @classmethod
    def p_adic(cls, p: int, precision: int) -> "TruncatedRing":
        return cls(P_ADIC, precision, p)

    # Construction

    @property
    def is_finite(self) -> bool:
        return self.kind != RATIONAL

    @property
    def modulus(self) -> int:
        """p^N for Z/p^N."""
        return self.p ** self.precision

    @property
    def zero(self) -> "RingElement":
        return self.from_int(0)

    @property
    def one(self) -> "RingElement":
        return self.from_int(1)

    @property
    def t(self) -> "RingElement":
        return self.t_power(1)

    def t_power(self, k: int) -> "RingElement":
        """t^k, which is zero once k reaches the precision."""
        if k >= self.precision:
            return self.zero
        if self.kind == P_ADIC:
            return RingElement(self, self.p ** k)
        return RingElement(self, tuple(self._scalar(1 if j == k else 0) for j in range(self.precision)))

    def from_int(self, n: int) -> "RingElement":
        if self.kind == P_ADIC:
            return RingElement(self, n % self.modulus)
        return RingElement(self, (self._scalar(n),) + (self._scalar(0),) * (self.precision - 1))

    def element(self, digits: Sequence) -> "RingElement":
        """Element with coefficient digits[j] at t^j; digits beyond the precision are dropped."""
        if self.kind == P_ADIC:
            total = self.zero
            for j, d in enumerate(digits[:self.precision]):
                total = total + self.scalar(d) * self.t_power(j)
            return total
        padded = list(digits[:self.precision]) + [0] * (self.precision - len(digits))
        return RingElement(self, tuple(self._scalar(d) for d in padded))

    def parse(self, raw: Union[int, str, Sequence, "RingElement"]) -> "RingElement":
        """Read an element from an int, a digit list, or text such as '1+t' or '3/2*t^2'."""
        if isinstance(raw, RingElement):
            self.check_same(raw.ring)
            return raw
        if isinstance(raw, bool):
            raise ValueError(f"Cannot read a ring element from {raw!r}")
        if isinstance(raw, int):
            return self.from_int(raw)
        if isinstance(raw, (list, tuple)):
            return self.element(raw)
        if not isinstance(raw, str):
            raise ValueError(f"Cannot read a ring element from {raw!r}")
        text = raw.replace(" ", "")
        if not text:
            raise ValueError("Empty ring element")
        if text[0] not in "+-":
            text = "+" + text
        total = self.zero
        for sign, term in re.findall(r'([+-])([^+-]+)', text):
            match = _TERM_PATTERN.match(term)
            if not match or (match.group("coeff") is None and match.group("var") is None):
                raise ValueError(f"Cannot parse term '{term}' in '{raw}'")
            coeff = Fraction(match.group("coeff") or 1)
            power = 0
            if match.group("var"):
                power = int(match.group("exp") or 1)
            elif match.group("exp"):
                raise ValueError(f"Exponent without variable in '{raw}'")
            piece = self.scalar(coeff) * self.t_power(power)
            total = total + piece if sign == "+" else total - piece
        return total

    def scalar(self, value: Union[int, Fraction]) -> "RingElement":
        """The constant `value`; fractions are only allowed where the denominator is invertible."""
        value = Fraction(value)
        if self.kind == RATIONAL:
            return self.element([value])
        numerator = self.from_int(value.numerator)
        if value.denominator == 1:
            return numerator
        return numerator * invert(self.from_int(value.denominator))

    def elements(self) -> Iterator["RingElement"]:
        """Every element of a finite ring, in digit order."""
        if not self.is_finite:
            raise ValueError("Cannot enumerate an infinite ring")
        for digits in itertools.product(range(self.p), repeat=self.precision):
            yield self.element(list(digits))

    def random_element(self, rng, spread: int = 2) -> "RingElement":
        """Random element from a numpy Generator; rational digits are small integers."""
        if self.is_finite:
            return self.element([int(d) for d in rng.integers(0, self.p, size=self.precision)])
        return self.element([int(d) for d in rng.integers(-spread, spread + 1, size=self.precision)])

    def check_same(self, other: "TruncatedRing"):
        if other != self:
            raise RingMismatch(f"Ring mismatch: {self} vs {other}")

    def to_json(self) -> dict:
        if self.kind == RATIONAL:
            return {"field": "Q", "precision": self.precision}
        if self.kind == PRIME_FIELD:
            return {"field": {"Fp": self.p}, "precision": self.precision}
        return {"Zp": self.p, "precision": self.precision}

    def __str__(self) -> str:
        if self.kind == RATIONAL:
            return f"Q[t]/(t^{self.precision})"
        if self.kind == PRIME_FIELD:
            return f"F{self.p}[t]/(t^{self.precision})"
        return f"Z/{self.p}^{self.precision}"

    # Scalars of the residue field (only used by the polynomial kinds)

    def _scalar(self, value) -> Union[int, Fraction]:
        if self.kind == RATIONAL:
            return Fraction(value)
        value = Fraction(value)
        if value.denominator % self.p == 0:
            raise NotAUnit(f"Denominator {value.denominator} is not invertible mod {self.p}")
        return value.numerator * pow(value.denominator, -1, self.p) % self.p

    def _add(self, a, b):
        return a + b if self.kind == RATIONAL else (a + b) % self.p

    def _mul(self, a, b):
        return a * b if self.kind == RATIONAL else (a * b) % self.p

    def _neg(self, a):
        return -a if self.kind == RATIONAL else (-a) % self.p

    def _inv(self, a):
        return 1 / Fraction(a) if self.kind == RATIONAL else pow(a, -1, self.p)


@dataclass(frozen=True)
class RingElement:
    """An element of a TruncatedRing; `value` is a digit tuple, or an int for Z/p^N."""
    ring: TruncatedRing
    value: Union[Tuple, int]

    @property
    def digits(self) -> Tuple:
        """Coefficients of t^0..t^(N-1) (base-p digits for Z/p^N)."""
        if self.ring.kind == P_ADIC:
            digits, rest = [], self.value
            for _ in range(self.ring.precision):
                rest, digit = divmod(rest, self.ring.p)
                digits.append(digit)
            return tuple(digits)
        return self.value

    def is_zero(self) -> bool:
        if self.ring.kind == P_ADIC:
            return self.value == 0
        return not any(self.value)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_unit(self) -> bool:
        if self.ring.kind == P_ADIC:
            return self.value % self.ring.p != 0
        return self.value[0] != 0

    def valuation(self) -> int:
        """t-adic valuation; the zero element has valuation equal to the precision."""
        if self.is_zero():
            return self.ring.precision
        if self.ring.kind == P_ADIC:
            v, rest = 0, self.value
            while rest % self.ring.p == 0:
                rest //= self.ring.p
                v += 1
            return v
        return next(j for j, d in enumerate(self.value) if d != 0)

    def divide_by_t_power(self, k: int) -> "RingElement":
        """The representative y with zero top digits and t^k * y = self."""
        if k == 0:
            return self
        if self.valuation() < k:
            raise NotAUnit(f"{self} is not divisible by t^{k}")
        if self.ring.kind == P_ADIC:
            return RingElement(self.ring, self.value // self.ring.p ** k)
        zero = self.ring._scalar(0)
        return RingElement(self.ring, self.value[k:] + (zero,) * k)

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatch(f"Ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other) -> "RingElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        if ring.kind == P_ADIC:
            return RingElement(ring, (self.value + other.value) % ring.modulus)
        return RingElement(ring, tuple(ring._add(a, b) for a, b in zip(self.value, other.value)))

    __radd__ = __add__

    def __neg__(self) -> "RingElement":
        ring = self.ring
        if ring.kind == P_ADIC:
            return RingElement(ring, (-self.value) % ring.modulus)
        return RingElement(ring, tuple(ring._neg(a) for a in self.value))

    def __sub__(self, other) -> "RingElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "RingElement":
        return (-self) + other

    def __mul__(self, other) -> "RingElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        if ring.kind == P_ADIC:
            return RingElement(ring, (self.value * other.value) % ring.modulus)
        n = ring.precision
        out = [ring._scalar(0)] * n
        for i, a in enumerate(self.value):
            if a == 0:
                continue
            for j in range(n - i):
                b = other.value[j]
                if b != 0:
                    out[i + j] = ring._add(out[i + j], ring._mul(a, b))
        return RingElement(ring, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RingElement":
        result = self.ring.one
        for _ in range(k):
            result = result * self
        return result

    def to_json(self) -> list:
        """Digit list with rationals rendered as 'a/b' strings."""
        return [str(d) if isinstance(d, Fraction) and d.denominator != 1 else int(d) for d in self.digits]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        if self.ring.kind == P_ADIC:
            return str(self.value)
        terms: List[str] = []
        for j, d in enumerate(self.value):
            if d == 0:
                continue
            coeff = str(d)
            if j == 0:
                terms.append(coeff)
            elif coeff == "1":
                terms.append("t" if j == 1 else f"t^{j}")
            else:
                terms.append(f"{coeff}*t" if j == 1 else f"{coeff}*t^{j}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"RingElement({self})"


def invert(x: RingElement) -> RingElement:
    """Inverse of a unit, by digit recursion (or modular inverse for Z/p^N)."""
    if not x.is_unit():
        raise NotAUnit(f"{x} is not a unit in {x.ring}", witness=x)
    ring = x.ring
    if ring.kind == P_ADIC:
        return RingElement(ring, pow(x.value, -1, ring.modulus))
    a = x.value
    inv_a0 = ring._inv(a[0])
    b = [inv_a0]
    for k in range(1, ring.precision):
        acc = ring._scalar(0)
        for i in range(1, k + 1):
            acc = ring._add(acc, ring._mul(a[i], b[k - i]))
        b.append(ring._neg(ring._mul(inv_a0, acc)))
    return RingElement(ring, tuple(b))


def valuation(x: RingElement) -> int:
    return x.valuation()
