"""Arithmetic in the prime field F_q and the extension field F_{q^m}.

Base-field elements are plain ints in ``range(q)`` (the ``BaseElement``
alias).  Extension-field elements carry their coordinates in the
polynomial basis 1, a, ..., a^(m-1), constant term first, where ``a`` is
a root of the defining modulus.  ``q`` must be prime in this release.

Multiplication is schoolbook multiply-and-reduce; for small fields a
product table is built lazily as an internal speedup and a test pins it
bit-identical to the schoolbook path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .errors import ParameterError

BaseElement = int

# Largest field size for which dense multiplication/inverse tables are built.
_TABLE_LIMIT = 512

# Default modulus per (q, m): the monic irreducible of degree m over F_q
# with the fewest nonzero terms, ties broken by the ascending list of
# exponents carrying nonzero coefficients, then by coefficient values.
# Listed constant term first (e.g. x^4+x+1 for q=2, m=4).  Overridable
# everywhere a FieldParams is built.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 1, 1, 0, 0, 0, 0, 1, 1),
    (2, 9): (1, 1, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 10): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 1, 0, 0, 0, 0, 1),
    (5, 1): (1, 1),
    (5, 2): (2, 0, 1),
    (5, 3): (1, 1, 0, 1),
    (5, 4): (2, 0, 0, 0, 1),
    (7, 1): (1, 1),
    (7, 2): (1, 0, 1),
    (7, 3): (2, 0, 0, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# --- polynomial helpers over F_q (coefficient lists, constant term first) ---


def _poly_trim(a: Sequence[int]) -> tuple[int, ...]:
    out = list(a)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _poly_mul(a: Sequence[int], b: Sequence[int], q: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], b: Sequence[int], q: int) -> tuple[int, ...]:
    """Remainder of a mod b over F_q; b need not be monic."""
    b = _poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial modulus is zero")
    rem = list(_poly_trim(a))
    inv_lead = pow(b[-1], -1, q)
    while len(rem) >= len(b):
        coef = (rem[-1] * inv_lead) % q
        shift = len(rem) - len(b)
        for i, bi in enumerate(b):
            rem[shift + i] = (rem[shift + i] - coef * bi) % q
        while rem and rem[-1] == 0:
            rem.pop()
    return tuple(rem)


def _irreducible(modulus: Sequence[int], q: int) -> bool:
    """Trial division against all monic polynomials of degree <= m/2."""
    m = len(modulus) - 1
    for deg in range(1, m // 2 + 1):
        for lower in itertools.product(range(q), repeat=deg):
            divisor = tuple(lower) + (1,)
            if not _poly_mod(modulus, divisor, q):
                return False
    return True


@dataclass(frozen=True)
class FieldParams:
    """Defines F_{q^m}: prime q, extension degree m, irreducible modulus.

    The modulus is a degree-m coefficient tuple, constant term first, and
    is normalized to be monic.  Instances are immutable and safe to share
    across workers.
    """

    q: int
    m: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.q < 2 or not is_prime(self.q):
            raise ParameterError(f"q must be prime in this release, got {self.q}")
        if self.m < 1:
            raise ParameterError(f"m must be >= 1, got {self.m}")
        mod = _poly_trim(tuple(c % self.q for c in self.modulus))
        if len(mod) != self.m + 1:
            raise ParameterError(
                f"modulus must have degree exactly {self.m}, got degree {len(mod) - 1}"
            )
        if mod[-1] != 1:
            inv = pow(mod[-1], -1, self.q)
            mod = tuple((c * inv) % self.q for c in mod)
        object.__setattr__(self, "modulus", mod)
        if not _irreducible(mod, self.q):
            raise ParameterError(f"modulus {mod} is reducible over F_{self.q}")

    @classmethod
    def default(cls, q: int, m: int) -> "FieldParams":
        if q < 2 or not is_prime(q):
            raise ParameterError(f"q must be prime in this release, got {q}")
        try:
            modulus = DEFAULT_MODULI[(q, m)]
        except KeyError:
            raise ParameterError(
                f"no built-in modulus for (q={q}, m={m}); supply one explicitly"
            ) from None
        return cls(q, m, modulus)

    @property
    def size(self) -> int:
        return self.q**self.m

    # --- element factories ---

    def element(self, coords: Sequence[int]) -> "ExtFieldElement":
        return ExtFieldElement(self, tuple(c % self.q for c in coords))

    def zero(self) -> "ExtFieldElement":
        return ExtFieldElement(self, (0,) * self.m)

    def one(self) -> "ExtFieldElement":
        return ExtFieldElement(self, (1,) + (0,) * (self.m - 1))

    def alpha(self) -> "ExtFieldElement":
        """The polynomial-basis generator a (requires m >= 2)."""
        if self.m < 2:
            raise ParameterError("alpha is undefined for m = 1")
        coords = [0] * self.m
        coords[1] = 1
        return ExtFieldElement(self, tuple(coords))

    def from_index(self, index: int) -> "ExtFieldElement":
        """Element whose coordinates are the base-q digits of index."""
        if not 0 <= index < self.size:
            raise ParameterError(f"index {index} outside [0, {self.size})")
        coords = []
        for _ in range(self.m):
            coords.append(index % self.q)
            index //= self.q
        return ExtFieldElement(self, tuple(coords))

    def elements(self) -> Iterator["ExtFieldElement"]:
        for i in range(self.size):
            yield self.from_index(i)

    def random_element(self, rng) -> "ExtFieldElement":
        return self.from_index(rng.randbelow(self.size))

    # --- internal arithmetic tables ---

    @cached_property
    def _xpow_reductions(self) -> tuple[tuple[int, ...], ...]:
        """Coordinates of x^e mod modulus for e = m .. 2m-2."""
        out = []
        for e in range(self.m, 2 * self.m - 1):
            poly = [0] * e + [1]
            red = _poly_mod(poly, self.modulus, self.q)
            out.append(tuple(red) + (0,) * (self.m - len(red)))
        return tuple(out)

    def _mul_coords(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        q, m = self.q, self.m
        conv = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] = (conv[i + j] + ai * bj) % q
        out = conv[:m]
        reductions = self._xpow_reductions
        for e in range(m, 2 * m - 1):
            c = conv[e]
            if c:
                red = reductions[e - m]
                for i in range(m):
                    out[i] = (out[i] + c * red[i]) % q
        return tuple(out)

    @cached_property
    def _tables(self) -> tuple[list[list[int]], list[int]] | None:
        """(product table, inverse table) by element index, or None if large."""
        size = self.size
        if size > _TABLE_LIMIT:
            return None
        coords = [tuple(self.from_index(i).coords) for i in range(size)]
        index_of = {c: i for i, c in enumerate(coords)}
        mul = [[0] * size for _ in range(size)]
        inv = [0] * size
        for i in range(size):
            row = mul[i]
            for j in range(i, size):
                p = index_of[self._mul_coords(coords[i], coords[j])]
                row[j] = p
                mul[j][i] = p
            if i:
                # row scan: exactly one j with product 1
                inv[i] = row.index(1)
        return mul, inv

    def _pow_coords(self, coords: tuple[int, ...], n: int) -> tuple[int, ...]:
        result = (1,) + (0,) * (self.m - 1)
        base = coords
        while n:
            if n & 1:
                result = self._mul_coords(result, base)
            base = self._mul_coords(base, base)
            n >>= 1
        return result

    @cached_property
    def _frobenius_maps(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """For i in 0..m-1 the matrix of x -> x^(q^i) in the polynomial basis.

        Applying the map is a matrix-vector product over F_q, valid because
        x -> x^q is F_q-linear.
        """
        q, m = self.q, self.m

        def matmul(a, b):
            return tuple(
                tuple(
                    sum(a[r][i] * b[i][c] for i in range(m)) % q for c in range(m)
                )
                for r in range(m)
            )

        # column j of the one-step map holds the coordinates of (a^j)^q
        cols = []
        for j in range(m):
            e = [0] * m
            e[j] = 1
            cols.append(self._pow_coords(tuple(e), q))
        one_step = tuple(tuple(cols[c][r] for c in range(m)) for r in range(m))

        identity = tuple(
            tuple(1 if r == c else 0 for c in range(m)) for r in range(m)
        )
        maps = [identity]
        for _ in range(m - 1):
            maps.append(matmul(one_step, maps[-1]))
        return tuple(maps)

    def _frobenius_coords(self, coords: tuple[int, ...], i: int) -> tuple[int, ...]:
        q, m = self.q, self.m
        mat = self._frobenius_maps[i % m]
        return tuple(
            sum(mat[r][c] * coords[c] for c in range(m)) % q for r in range(m)
        )


@dataclass(frozen=True)
class ExtFieldElement:
    """An element of F_{q^m} as an m-tuple of base-field coordinates."""

    params: FieldParams
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.params.m:
            raise ParameterError(
                f"expected {self.params.m} coordinates, got {len(self.coords)}"
            )
        q = self.params.q
        if any(not 0 <= c < q for c in self.coords):
            raise ParameterError(f"coordinates must lie in [0, {q})")

    def _check_params(self, other: "ExtFieldElement") -> None:
        if self.params != other.params:
            raise ParameterError("operands belong to different fields")

    def __add__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        self._check_params(other)
        q = self.params.q
        return ExtFieldElement(
            self.params, tuple((a + b) % q for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        self._check_params(other)
        q = self.params.q
        return ExtFieldElement(
            self.params, tuple((a - b) % q for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "ExtFieldElement":
        q = self.params.q
        return ExtFieldElement(self.params, tuple((-a) % q for a in self.coords))

    def __mul__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        self._check_params(other)
        tables = self.params._tables
        if tables is not None:
            mul, _ = tables
            idx = mul[self.to_index()][other.to_index()]
            return self.params.from_index(idx)
        return ExtFieldElement(
            self.params, self.params._mul_coords(self.coords, other.coords)
        )

    def scale_base(self, c: int) -> "ExtFieldElement":
        """Multiply by a base-field scalar (coordinate-wise)."""
        q = self.params.q
        c %= q
        return ExtFieldElement(self.params, tuple((a * c) % q for a in self.coords))

    def inverse(self) -> "ExtFieldElement":
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative inverse")
        tables = self.params._tables
        if tables is not None:
            _, inv = tables
            return self.params.from_index(inv[self.to_index()])
        return self ** (self.params.size - 2)

    def __pow__(self, n: int) -> "ExtFieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.params.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frobenius(self, i: int) -> "ExtFieldElement":
        """Return self^(q^i); F_q-linear in self, periodic with period m."""
        if i < 0:
            raise ParameterError("frobenius exponent must be non-negative")
        return ExtFieldElement(
            self.params, self.params._frobenius_coords(self.coords, i)
        )

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def to_index(self) -> int:
        idx = 0
        for c in reversed(self.coords):
            idx = idx * self.params.q + c
        return idx

    def __repr__(self) -> str:
        return f"Ext({','.join(map(str, self.coords))})"
