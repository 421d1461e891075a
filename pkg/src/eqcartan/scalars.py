"""Coefficient fields: the rationals or a prime field.

Rational scalars are kept as int or Fraction (ints whenever the value is
integral); prime-field scalars are ints in [0, p).
"""
from fractions import Fraction
import re

_INT = re.compile(r"^[+-]?\d+$")
_RAT = re.compile(r"^[+-]?\d+/\d+$")


class ScalarParseError(ValueError):
    pass


def is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


class Field:
    """Either Q (p is None) or F_p."""

    def __init__(self, p=None):
        if p is not None:
            if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
                raise ScalarParseError(f"field characteristic {p!r} is not a prime")
        self.p = p

    @classmethod
    def rational(cls):
        return cls(None)

    @property
    def kind(self):
        return "rational" if self.p is None else "prime"

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("field", self.p))

    def __repr__(self):
        return "Field(Q)" if self.p is None else f"Field(F_{self.p})"

    def to_json(self):
        if self.p is None:
            return {"kind": "rational"}
        return {"kind": "prime", "p": self.p}

    def reduce(self, x):
        """Canonical representative of an int/Fraction in this field."""
        if self.p is None:
            if isinstance(x, Fraction) and x.denominator == 1:
                return x.numerator
            return x
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        return x % self.p

    def inv(self, x):
        if self.p is None:
            return self.reduce(Fraction(1) / x)
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def div(self, x, y):
        return self.reduce(x * self.inv(y))

    def from_int(self, n):
        return self.reduce(n)

    def order_invertible(self, n):
        return self.p is None or n % self.p != 0

    def parse(self, text):
        """Parse an integer string or a/b string; floats are rejected."""
        if not isinstance(text, str):
            if isinstance(text, int) and not isinstance(text, bool):
                return self.reduce(text)
            raise ScalarParseError(f"coefficient must be a string, got {text!r}")
        s = text.strip()
        if _INT.match(s):
            return self.reduce(int(s))
        if _RAT.match(s):
            num, den = s.split("/")
            if int(den) == 0:
                raise ScalarParseError(f"zero denominator in {text!r}")
            try:
                return self.reduce(Fraction(int(num), int(den)))
            except ZeroDivisionError as exc:
                raise ScalarParseError(str(exc)) from None
        raise ScalarParseError(f"not an exact scalar: {text!r}")

    def format(self, x):
        x = self.reduce(x)
        if isinstance(x, Fraction):
            return f"{x.numerator}/{x.denominator}"
        return str(x)


def field_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ScalarParseError("field must be an object with a 'kind'")
    if obj["kind"] == "rational":
        return Field(None)
    if obj["kind"] == "prime":
        p = obj.get("p")
        if isinstance(p, bool) or not isinstance(p, int):
            raise ScalarParseError("prime field needs an integer 'p'")
        return Field(p)
    raise ScalarParseError(f"unknown field kind {obj['kind']!r}")


QQ = Field(None)
