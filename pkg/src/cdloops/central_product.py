"""Central products of Cayley-Dickson loops sharing one scalar group.

The product of loops D_1, ..., D_m glues the factors along Z: inside the
direct product, pairs that differ only by a balanced scalar rearrangement
are identified.  Working in that quotient, every element has a canonical
form (global scalar, mask per factor): factor scalars all fold into one.
Factors multiply independently, so the product of two canonical forms
multiplies the global scalars by every per-factor twist.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .budget import ensure_budget
from .cdloop import CDLoop, LoopElement
from .scalars import Scalar, ScalarGroup


@dataclass(frozen=True)
class CentralProduct:
    """Descriptor of D_1 x ... x D_m glued along the shared scalar group."""

    z: ScalarGroup
    factors: tuple[CDLoop, ...]
    _twist_tables: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("central product needs at least one factor")
        for d in self.factors:
            if d.z != self.z:
                raise ValueError("all factors must share the product's scalar group")
        n = self.factors[0].n
        for d in self.factors:
            if d.n != n:
                raise ValueError(
                    f"factors must have equal length, got {d.n} and {n}"
                )

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def n(self) -> int:
        return self.factors[0].n

    @property
    def coset_count(self) -> int:
        """Number of cosets of Z, i.e. distinct mask tuples."""
        return 1 << (self.m * self.n)

    @property
    def order(self) -> int:
        return self.z.order * self.coset_count

    @property
    def identity(self) -> "ProductElement":
        return ProductElement(self, self.z.one, (0,) * self.m)

    def element(self, scalar: Scalar, masks: tuple[int, ...]) -> "ProductElement":
        return ProductElement(self, scalar, masks)

    # -- canonical-form arithmetic -------------------------------------------

    def pmul(self, x: "ProductElement", y: "ProductElement") -> "ProductElement":
        self._check_member(x)
        self._check_member(y)
        exp = x.scalar.exponent + y.scalar.exponent
        for d, e, f in zip(self.factors, x.masks, y.masks):
            exp += d.twist_exp(e, f)
        masks = tuple(e ^ f for e, f in zip(x.masks, y.masks))
        return ProductElement(self, Scalar(self.z, exp % self.z.order), masks)

    def pinv(self, x: "ProductElement") -> "ProductElement":
        self._check_member(x)
        exp = -x.scalar.exponent
        for d, e in zip(self.factors, x.masks):
            exp -= d.twist_exp(e, e)
        return ProductElement(self, Scalar(self.z, exp % self.z.order), x.masks)

    def pcommutator(self, x: "ProductElement", y: "ProductElement") -> "ProductElement":
        return self.pmul(self.pmul(x, y), self.pinv(self.pmul(y, x)))

    def passociator(
        self, x: "ProductElement", y: "ProductElement", z: "ProductElement"
    ) -> "ProductElement":
        left = self.pmul(self.pmul(x, y), z)
        right = self.pmul(x, self.pmul(y, z))
        return self.pmul(left, self.pinv(right))

    def rank(self, x: "ProductElement") -> int:
        """Number of factors the element meets outside Z."""
        self._check_member(x)
        return sum(1 for e in x.masks if e)

    def embed(self, factor_index: int, x: LoopElement) -> "ProductElement":
        """Canonical image of an element of factor D_i (1-based i)."""
        if not 1 <= factor_index <= self.m:
            raise ValueError(f"factor index {factor_index} out of range 1..{self.m}")
        if x.loop != self.factors[factor_index - 1]:
            raise ValueError(
                f"element belongs to {x.loop.describe()}, not factor {factor_index}"
            )
        masks = tuple(x.mask if i == factor_index - 1 else 0 for i in range(self.m))
        return ProductElement(self, x.scalar, masks)

    def scale(self, s: Scalar, x: "ProductElement") -> "ProductElement":
        if s.group != self.z:
            raise ValueError("scalar belongs to a different group")
        return ProductElement(self, s * x.scalar, x.masks)

    # -- enumeration ----------------------------------------------------------

    def penumerate(self, max_elements: int | None = None) -> list["ProductElement"]:
        """All elements, scalar-major then combined mask (factor 1 in low bits)."""
        ensure_budget(self.order, max_elements, "product enumeration")
        return [
            self.element_at(i) for i in range(self.order)
        ]

    def combined_mask(self, x: "ProductElement") -> int:
        n = self.n
        combined = 0
        for i, e in enumerate(x.masks):
            combined |= e << (n * i)
        return combined

    def split_mask(self, combined: int) -> tuple[int, ...]:
        n = self.n
        low = (1 << n) - 1
        return tuple((combined >> (n * i)) & low for i in range(self.m))

    def element_index(self, x: "ProductElement") -> int:
        self._check_member(x)
        return x.scalar.exponent * self.coset_count + self.combined_mask(x)

    def element_at(self, index: int) -> "ProductElement":
        if not 0 <= index < self.order:
            raise ValueError(f"element index {index} out of range 0..{self.order - 1}")
        exp, combined = divmod(index, self.coset_count)
        return ProductElement(self, Scalar(self.z, exp), self.split_mask(combined))

    def twist_tables(self) -> list[list[list[int]]]:
        """Dense per-factor twist exponent tables t_i[e][f], built once."""
        if not self._twist_tables:
            size = 1 << self.n
            for d in self.factors:
                self._twist_tables.append(
                    [[d.twist_exp(e, f) for f in range(size)] for e in range(size)]
                )
        return self._twist_tables

    def _check_member(self, x: "ProductElement") -> None:
        if x.product is not self and x.product != self:
            raise ValueError("element belongs to a different product")

    def describe(self) -> str:
        return " * ".join(d.describe() for d in self.factors)


@dataclass(frozen=True)
class ProductElement:
    """Canonical form (global scalar, mask per factor) of a product element."""

    product: CentralProduct
    scalar: Scalar
    masks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "masks", tuple(self.masks))
        if self.scalar.group != self.product.z:
            raise ValueError("scalar belongs to a different group")
        if len(self.masks) != self.product.m:
            raise ValueError(
                f"expected {self.product.m} masks, got {len(self.masks)}"
            )
        for d, e in zip(self.product.factors, self.masks):
            if not 0 <= e < (1 << d.n):
                raise ValueError(f"mask {e:#x} does not fit in {d.n} bits")

    @property
    def rank(self) -> int:
        return self.product.rank(self)

    def __mul__(self, other: "ProductElement") -> "ProductElement":
        return self.product.pmul(self, other)

    def inv(self) -> "ProductElement":
        return self.product.pinv(self)

    def __str__(self) -> str:
        parts = []
        for i, e in enumerate(self.masks):
            if e:
                monomial = "".join(
                    f"l{j + 1}" for j in range(self.product.n) if e >> j & 1
                )
                parts.append(f"{monomial}@{i + 1}")
        if not parts:
            return str(self.scalar)
        body = "*".join(parts)
        if self.scalar.is_one:
            return body
        return f"{self.scalar}*{body}"


def make_product(z: ScalarGroup, factors: list[CDLoop] | tuple[CDLoop, ...]) -> CentralProduct:
    """Validate and build the central product of the given factors."""
    return CentralProduct(z, tuple(factors))


def coset_twist_matrix(A: CentralProduct) -> np.ndarray:
    """Twist exponents t(c1, c2) mod |Z| over all pairs of combined masks.

    Extends the per-factor twists to cosets of Z: the scalar picked up when
    multiplying representatives of two cosets is the product of the factor
    twists, so exponents add.
    """
    n, size = A.n, A.coset_count
    combo = np.arange(size)
    low = (1 << n) - 1
    total = np.zeros((size, size), dtype=np.int64)
    for i, table in enumerate(A.twist_tables()):
        per_factor = np.asarray(table, dtype=np.int64)
        masks = (combo >> (n * i)) & low
        total += per_factor[np.ix_(masks, masks)]
    return total % A.z.order
