"""The scalar group Z: a finite cyclic group of even order written multiplicatively.

Elements are stored as exponents of a fixed abstract generator g, so the
group law is exponent addition mod order.  The even-order requirement makes
the unique element of order 2 (exponent order/2) available to play the role
of -1; every twist sign and involution sign lands on it.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ScalarGroup:
    """Cyclic group of even order; element k means g**k."""

    order: int

    def __post_init__(self):
        if self.order < 2 or self.order % 2 != 0:
            raise ValueError(
                f"scalar group order must be even and >= 2, got {self.order}"
            )

    @property
    def one(self) -> "Scalar":
        return Scalar(self, 0)

    @property
    def minus_one(self) -> "Scalar":
        return Scalar(self, self.order // 2)

    def scalar(self, exponent: int) -> "Scalar":
        return Scalar(self, exponent % self.order)

    def elements(self) -> list["Scalar"]:
        return [Scalar(self, k) for k in range(self.order)]

    def parse(self, token: str) -> "Scalar":
        """Read a scalar from its CLI spelling.

        Plain integers are exponents; the spellings "+1" and "-1" are
        shorthands for exponents 0 and order/2.  (Exponent -1 itself must be
        written as order-1.)
        """
        token = token.strip()
        if token == "+1":
            return self.one
        if token == "-1":
            return self.minus_one
        try:
            exponent = int(token)
        except ValueError:
            raise ValueError(f"cannot parse scalar token {token!r}") from None
        return self.scalar(exponent)

    def format(self, s: "Scalar") -> str:
        if s.group != self:
            raise ValueError("scalar belongs to a different group")
        if s.exponent == 0:
            return "+1"
        if s.exponent == self.order // 2:
            return "-1"
        return str(s.exponent)


def make_scalar_group(order: int) -> ScalarGroup:
    """Z as the cyclic group of the given even order."""
    return ScalarGroup(order)


@dataclass(frozen=True)
class Scalar:
    group: ScalarGroup
    exponent: int

    def __post_init__(self):
        if not 0 <= self.exponent < self.group.order:
            raise ValueError(
                f"exponent {self.exponent} out of range for order {self.group.order}"
            )

    def __mul__(self, other: "Scalar") -> "Scalar":
        if other.group != self.group:
            raise ValueError("cannot multiply scalars from different groups")
        return Scalar(self.group, (self.exponent + other.exponent) % self.group.order)

    def inv(self) -> "Scalar":
        return Scalar(self.group, (-self.exponent) % self.group.order)

    def __neg__(self) -> "Scalar":
        """Multiplication by -1 (the order-2 element)."""
        return Scalar(
            self.group,
            (self.exponent + self.group.order // 2) % self.group.order,
        )

    @property
    def is_one(self) -> bool:
        return self.exponent == 0

    def __str__(self) -> str:
        return self.group.format(self)


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def scalar_inv(a: Scalar) -> Scalar:
    return a.inv()
