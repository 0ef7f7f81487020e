"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial lives in a fixed :class:`VariableSpace` and stores its terms as
a dict mapping exponent tuples to nonzero ``Fraction`` coefficients:

    x1*x2^2 - 7/2  over (x1, x2)  ->  {(1, 2): Fraction(1), (0, 0): Fraction(-7, 2)}

All arithmetic is exact; doubles appear only in :meth:`Polynomial.evaluate`.
Values are immutable after construction (nothing here mutates its inputs), so
they are safe to share freely.

The canonical term order is graded lexicographic over the ambient variable
order: higher total degree first, ties broken by comparing exponent tuples
left to right. Rendering, coefficient-vector indexing and the row reduction
in the lifting module all use this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import SpaceMismatchError

#: Degree of the zero polynomial. Keeps degree arithmetic total:
#: deg(a*b) = deg(a) + deg(b) holds for every pair including zero.
NEG_INF = float("-inf")

Monomial = tuple  # exponent tuple, one entry per variable of the space
Scalar = Union[int, Fraction]


def grlex_key(mono: Monomial):
    """Sort key realizing graded-lex order (ascending; reverse for descending)."""
    return (sum(mono), mono)


@dataclass(frozen=True)
class VariableSpace:
    """Ordered set of distinct variable names; fixes monomial positions."""

    names: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names: {self.names}")

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("space", "terms")

    def __init__(self, space: VariableSpace, terms: Mapping[Monomial, Scalar]):
        n = len(space)
        canon = {}
        for mono, coeff in terms.items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            mono = tuple(mono)
            if len(mono) != n or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent tuple {mono} for space of size {n}")
            canon[mono] = canon.get(mono, Fraction(0)) + coeff
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "terms", {m: c for m, c in canon.items() if c != 0})

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # --- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, space: VariableSpace) -> "Polynomial":
        return cls(space, {})

    @classmethod
    def constant(cls, space: VariableSpace, value: Scalar) -> "Polynomial":
        return cls(space, {(0,) * len(space): Fraction(value)})

    @classmethod
    def variable(cls, space: VariableSpace, index: int) -> "Polynomial":
        if not 0 <= index < len(space):
            raise IndexError(f"variable index {index} out of range for {space.names}")
        mono = [0] * len(space)
        mono[index] = 1
        return cls(space, {tuple(mono): Fraction(1)})

    # --- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        """Total degree; NEG_INF for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(sum(m) for m in self.terms)

    def is_constant(self) -> bool:
        return self.degree() <= 0

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (0 for the zero polynomial)."""
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return next(iter(self.terms.values()), Fraction(0))

    def coefficient(self, mono: Iterable) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # --- arithmetic ---------------------------------------------------------

    def _check_space(self, other: "Polynomial"):
        if self.space != other.space:
            raise SpaceMismatchError(
                f"operands live in different spaces: {self.space.names} vs {other.space.names}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.space, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_space(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = out.get(mono, Fraction(0)) + coeff
            if acc:
                out[mono] = acc
            else:
                out.pop(mono, None)
        return Polynomial(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.space, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Polynomial(self.space, {m: k * c for m, k in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_space(other)
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = tuple(ea + eb for ea, eb in zip(ma, mb))
                acc = out.get(mono, Fraction(0)) + ca * cb
                if acc:
                    out[mono] = acc
                else:
                    del out[mono]
        return Polynomial(self.space, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {exponent!r}")
        result = Polynomial.constant(self.space, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # --- calculus -----------------------------------------------------------

    def differentiate(self, var_index: int) -> "Polynomial":
        """Formal partial derivative with respect to variable ``var_index``."""
        if not 0 <= var_index < len(self.space):
            raise IndexError(
                f"variable index {var_index} out of range for {self.space.names}"
            )
        out = {}
        for mono, coeff in self.terms.items():
            e = mono[var_index]
            if e == 0:
                continue
            lowered = list(mono)
            lowered[var_index] = e - 1
            out[tuple(lowered)] = coeff * e
        return Polynomial(self.space, out)

    def substitute(
        self,
        images: Mapping[int, "Polynomial"],
        target: VariableSpace = None,
    ) -> "Polynomial":
        """Compose with ``images``: replace variable ``i`` by ``images[i]``.

        Every variable actually appearing in the polynomial must have an
        image; all images must share one target space. ``target`` is only
        needed when ``images`` is empty (a constant being re-homed).
        """
        for img in images.values():
            if target is None:
                target = img.space
            elif img.space != target:
                raise SpaceMismatchError("substitution images live in different spaces")
        if target is None:
            target = self.space
        used = set()
        for mono in self.terms:
            used.update(i for i, e in enumerate(mono) if e > 0)
        missing = sorted(used - set(images))
        if missing:
            names = ", ".join(self.space.names[i] for i in missing)
            raise KeyError(f"no substitution image for used variable(s): {names}")

        # Cache image powers; monomials reuse the same small exponents a lot.
        powers = {i: {0: Polynomial.constant(target, 1)} for i in used}
        result = Polynomial.zero(target)
        for mono, coeff in self.terms.items():
            term = Polynomial.constant(target, coeff)
            for i, e in enumerate(mono):
                if e == 0:
                    continue
                cache = powers[i]
                if e not in cache:
                    cache[e] = images[i] ** e
                term = term * cache[e]
            result = result + term
        return result

    def evaluate(self, point: Sequence[float]) -> float:
        """Numeric value at ``point``: direct sum of per-term double products."""
        if len(point) != len(self.space):
            raise ValueError(
                f"point has {len(point)} coordinates, space has {len(self.space)}"
            )
        total = 0.0
        for mono, coeff in self.terms.items():
            value = float(coeff)
            for x, e in zip(point, mono):
                for _ in range(e):
                    value *= x
            total += value
        return total

    def evaluate_exact(self, point: Sequence[Scalar]) -> Fraction:
        """Exact rational value at a rational point."""
        if len(point) != len(self.space):
            raise ValueError(
                f"point has {len(point)} coordinates, space has {len(self.space)}"
            )
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            value = coeff
            for x, e in zip(pt, mono):
                if e:
                    value *= x**e
            total += value
        return total

    # --- rendering ------------------------------------------------------------

    def _render_factors(self, mono: Monomial) -> str:
        parts = []
        for name, e in zip(self.space.names, mono):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def render(self) -> str:
        """Canonical text form: graded-lex descending, explicit ``*`` and ``^``."""
        if not self.terms:
            return "0"
        pieces = []
        for mono in sorted(self.terms, key=grlex_key, reverse=True):
            coeff = self.terms[mono]
            factors = self._render_factors(mono)
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = factors
            else:
                body = f"{mag}*{factors}"
            pieces.append((coeff < 0, body))
        first_neg, first_body = pieces[0]
        out = ("-" if first_neg else "") + first_body
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Polynomial({self.render()!r} over {self.space.names})"


def lie_derivative(p: Polynomial, field: Sequence[Polynomial]) -> Polynomial:
    """Derivative of ``p`` along ``field``: sum_i dp/dx_i * field_i."""
    if len(field) != len(p.space):
        raise ValueError(
            f"field has {len(field)} components, space has {len(p.space)}"
        )
    result = Polynomial.zero(p.space)
    for i, component in enumerate(field):
        if component.space != p.space:
            raise SpaceMismatchError("field component lives in a different space")
        dp = p.differentiate(i)
        if dp.terms:
            result = result + dp * component
    return result


def embed_into(p: Polynomial, space: VariableSpace) -> Polynomial:
    """Re-home ``p`` into ``space``, matching variables by name."""
    positions = []
    for name in p.space.names:
        try:
            positions.append(space.index(name))
        except ValueError:
            raise SpaceMismatchError(
                f"variable {name!r} does not exist in target space {space.names}"
            ) from None
    n = len(space)
    out = {}
    for mono, coeff in p.terms.items():
        new = [0] * n
        for pos, e in zip(positions, mono):
            new[pos] = e
        out[tuple(new)] = coeff
    return Polynomial(space, out)
