from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal, Optional

from sympy import isprime

from app.core.errors import InputError

RingKind = Literal["Z", "Q", "Fp"]


@dataclass(frozen=True)
class RingSpec:
    """
    The exact base ring: integers, rationals or a prime field.

    Scalars are Python ints for Z, Fractions for Q and ints in [0, p) for F_p.
    Everything downstream takes its arithmetic from here.
    """

    kind: RingKind
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind == "Fp":
            if self.p is None or not isprime(int(self.p)):
                raise InputError(f"F_p needs a prime p, got {self.p!r}")
        elif self.p is not None:
            raise InputError(f"ring {self.kind} takes no modulus")

    @classmethod
    def integers(cls) -> "RingSpec":
        return cls("Z")

    @classmethod
    def rationals(cls) -> "RingSpec":
        return cls("Q")

    @classmethod
    def prime_field(cls, p: int) -> "RingSpec":
        return cls("Fp", int(p))

    @classmethod
    def parse(cls, label: str) -> "RingSpec":
        text = (label or "").strip()
        if text in ("Z", "ZZ"):
            return cls.integers()
        if text in ("Q", "QQ"):
            return cls.rationals()
        for prefix in ("Fp:", "F_", "GF:"):
            if text.startswith(prefix):
                try:
                    return cls.prime_field(int(text[len(prefix):]))
                except ValueError as exc:
                    raise InputError(f"bad prime in ring label {label!r}") from exc
        raise InputError(f"unknown ring label {label!r}")

    @property
    def label(self) -> str:
        return f"Fp:{self.p}" if self.kind == "Fp" else self.kind

    @property
    def display(self) -> str:
        return f"F_{self.p}" if self.kind == "Fp" else self.kind

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return int(self.p) if self.kind == "Fp" else 0

    # scalar arithmetic

    def reduce(self, value: Any) -> Any:
        if self.kind == "Z":
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise InputError(f"{value} is not an integer")
                return int(value.numerator)
            return int(value)
        if self.kind == "Q":
            return Fraction(value)
        if isinstance(value, Fraction):
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        return int(value) % self.p

    @property
    def zero(self) -> Any:
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self) -> Any:
        return Fraction(1) if self.kind == "Q" else 1

    def add(self, a: Any, b: Any) -> Any:
        return (a + b) % self.p if self.kind == "Fp" else a + b

    def sub(self, a: Any, b: Any) -> Any:
        return (a - b) % self.p if self.kind == "Fp" else a - b

    def mul(self, a: Any, b: Any) -> Any:
        return (a * b) % self.p if self.kind == "Fp" else a * b

    def neg(self, a: Any) -> Any:
        return (-a) % self.p if self.kind == "Fp" else -a

    def is_unit(self, a: Any) -> bool:
        if self.kind == "Z":
            return a in (1, -1)
        return a != 0

    def inverse(self, a: Any) -> Any:
        if self.kind == "Z":
            if a not in (1, -1):
                raise ZeroDivisionError(f"{a} is not a unit in Z")
            return a
        if self.kind == "Q":
            return 1 / Fraction(a)
        return pow(int(a), -1, self.p)

    def size(self, a: Any) -> Any:
        """Pivot size: absolute value over Z, 0/1 over fields."""
        if self.kind == "Z":
            return abs(a)
        return 0 if a == 0 else 1

    def quotient(self, a: Any, b: Any) -> Any:
        """Euclidean quotient a // b (exact over fields)."""
        if self.kind == "Z":
            return a // b
        return self.mul(a, self.inverse(b))

    def normalize_associate(self, a: Any) -> tuple[Any, Any]:
        """Return (canonical associate, unit u) with a*u canonical."""
        if a == 0:
            return a, self.one
        if self.kind == "Z":
            return (abs(a), 1 if a > 0 else -1)
        inv = self.inverse(a)
        return self.one, inv

    def to_text(self, a: Any) -> str:
        return str(a)

    def from_text(self, text: str) -> Any:
        try:
            return self.reduce(Fraction(str(text).strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad scalar {text!r} for ring {self.label}") from exc

    def from_integer_ring(self, value: int) -> Any:
        return self.reduce(int(value))

    def __str__(self) -> str:
        return self.display
