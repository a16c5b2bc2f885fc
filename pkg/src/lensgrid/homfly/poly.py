"""Laurent polynomials in ``a`` and ``z`` with integer coefficients."""

from __future__ import annotations

import re
from typing import Iterable, Mapping

Exp = tuple[int, int]


class LaurentPoly:
    """An element of Z[a, a^-1, z, z^-1]; immutable, hashable, exact."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exp, int] | Iterable[tuple[int, int, int]] | None = None):
        clean: dict[Exp, int] = {}
        if terms is None:
            pass
        elif isinstance(terms, Mapping):
            for (i, j), c in terms.items():
                if c:
                    clean[(int(i), int(j))] = int(c)
        else:
            for i, j, c in terms:
                key = (int(i), int(j))
                clean[key] = clean.get(key, 0) + int(c)
            clean = {k: c for k, c in clean.items() if c}
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # --- construction -------------------------------------------------------
    @classmethod
    def monomial(cls, i: int = 0, j: int = 0, c: int = 1) -> LaurentPoly:
        return cls({(i, j): c})

    @classmethod
    def const(cls, c: int) -> LaurentPoly:
        return cls({(0, 0): c})

    @classmethod
    def parse(cls, text: str) -> LaurentPoly:
        return parse_poly(text)

    # --- access -------------------------------------------------------------
    @property
    def terms(self) -> dict[Exp, int]:
        return dict(self._terms)

    def triples(self) -> list[list[int]]:
        return [[i, j, c] for (i, j), c in self._terms.items()]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, i: int, j: int) -> int:
        return self._terms.get((i, j), 0)

    # --- arithmetic ---------------------------------------------------------
    def __add__(self, other: LaurentPoly | int) -> LaurentPoly:
        other = _lift(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: LaurentPoly | int) -> LaurentPoly:
        return self + (-_lift(other))

    def __rsub__(self, other: LaurentPoly | int) -> LaurentPoly:
        return _lift(other) - self

    def __mul__(self, other: LaurentPoly | int) -> LaurentPoly:
        other = _lift(other)
        out: dict[Exp, int] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> LaurentPoly:
        if e < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be inverted")
            ((i, j), c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials can be inverted")
            return LaurentPoly.monomial(-i, -j, c) ** (-e)
        out = LaurentPoly.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift(self, i: int = 0, j: int = 0, c: int = 1) -> LaurentPoly:
        """Multiply by the monomial ``c * a^i * z^j``."""
        return LaurentPoly({(a + i, b + j): v * c for (a, b), v in self._terms.items()})

    # --- comparison / display -----------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        # z-major order, as polynomials are usually written in this field
        for (i, j), c in sorted(self._terms.items(), key=lambda t: (t[0][1], t[0][0])):
            mono = _power("a", i) + ("*" if i and j else "") + _power("z", j)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _power(var: str, e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return var
    return f"{var}^{e}" if e > 0 else f"{var}^({e})"


def _lift(x: LaurentPoly | int) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent polynomial")


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*((?:[az]\s*(?:\^\s*(?:\{\s*-?\d+\s*\}|\(\s*-?\d+\s*\)|-?\d+))?\s*\*?\s*)*)")
_FACTOR = re.compile(r"([az])\s*(?:\^\s*(?:\{\s*(-?\d+)\s*\}|\(\s*(-?\d+)\s*\)|(-?\d+)))?")


def parse_poly(text: str) -> LaurentPoly:
    """Parse sums of terms like ``3a^{24}z^-2``, ``- a^9*z^(-1)`` or ``7``."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial")
    terms: dict[Exp, int] = {}
    pos = 0
    first = True
    while pos < len(s):
        while pos < len(s) and s[pos].isspace():
            pos += 1
        if pos >= len(s):
            break
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (not first and not m.group(1)):
            raise ValueError(f"cannot parse polynomial near {s[pos:pos + 12]!r}")
        sign, coef, body = m.groups()
        if not coef and not body.strip():
            raise ValueError(f"dangling sign near {s[pos:pos + 12]!r}")
        c = int(coef) if coef else 1
        if sign == "-":
            c = -c
        i = j = 0
        for f in _FACTOR.finditer(body):
            e = next((int(g) for g in f.groups()[1:] if g is not None), 1)
            if f.group(1) == "a":
                i += e
            else:
                j += e
        terms[(i, j)] = terms.get((i, j), 0) + c
        pos = m.end()
        first = False
    return LaurentPoly(terms)
