"""Classical HOMFLY-PT polynomials of braid closures via the Hecke algebra.

Independent of the package's skein code: elements of the Hecke algebra H_n
(``T_i^2 = z T_i + 1``) are dicts from permutations to polynomials, and the
Markov trace is computed by the standard coset recursion.  With ``v = a^-1``
and ``delta = (a^-1 - a)/z`` the closure of a braid ``b`` has
``P = a^writhe(b) * X(b)``, normalised so that ``P(unknot) = 1`` and
``a^-1 P(L+) - a P(L-) = z P(L0)``.
"""

from __future__ import annotations

from functools import lru_cache

from lensgrid.homfly.poly import LaurentPoly

Perm = tuple[int, ...]
Z = LaurentPoly.monomial(0, 1)
V = LaurentPoly.monomial(-1, 0)
DELTA = LaurentPoly({(-1, -1): 1, (1, -1): -1})


def _length(w: Perm) -> int:
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def _times_s(w: Perm, i: int) -> Perm:
    # (w s_i)(x) = w(s_i(x)): swap the images of i and i+1
    w = list(w)
    w[i], w[i + 1] = w[i + 1], w[i]
    return tuple(w)


def mul_T(elem: dict[Perm, LaurentPoly], i: int) -> dict[Perm, LaurentPoly]:
    """Right multiplication by T_i."""
    out: dict[Perm, LaurentPoly] = {}

    def add(w: Perm, c: LaurentPoly) -> None:
        out[w] = out.get(w, LaurentPoly()) + c

    for w, c in elem.items():
        ws = _times_s(w, i)
        if _length(ws) > _length(w):
            add(ws, c)
        else:
            add(w, c * Z)
            add(ws, c)
    return {w: c for w, c in out.items() if c}


def mul_Tinv(elem: dict[Perm, LaurentPoly], i: int) -> dict[Perm, LaurentPoly]:
    """Right multiplication by T_i^-1 = T_i - z."""
    a = mul_T(elem, i)
    for w, c in elem.items():
        a[w] = a.get(w, LaurentPoly()) - c * Z
    return {w: c for w, c in a.items() if c}


@lru_cache(maxsize=None)
def trace_basis(w: Perm) -> LaurentPoly:
    n = len(w)
    if n == 1:
        return LaurentPoly.const(1)
    k = w.index(n - 1)
    # w = u * s_{n-2} ... s_k with u fixing n - 1
    u = list(w)
    for i in range(k, n - 1):
        u = list(_times_s(tuple(u), i))
    assert u[n - 1] == n - 1
    elem = {tuple(u[: n - 1]): LaurentPoly.const(1)}
    if k == n - 1:
        return DELTA * trace(elem)
    for i in range(n - 3, k - 1, -1):
        elem = mul_T(elem, i)
    return V * trace(elem)


def trace(elem: dict[Perm, LaurentPoly]) -> LaurentPoly:
    total = LaurentPoly()
    for w, c in elem.items():
        total = total + c * trace_basis(w)
    return total


def homfly_of_braid(n: int, word: list[int]) -> LaurentPoly:
    """HOMFLY-PT of the closure of a braid word; ``+i``/``-i`` is sigma_i^(+-1), 1-based."""
    elem = {tuple(range(n)): LaurentPoly.const(1)}
    for g in word:
        elem = mul_T(elem, abs(g) - 1) if g > 0 else mul_Tinv(elem, abs(g) - 1)
    writhe = sum(1 if g > 0 else -1 for g in word)
    return LaurentPoly.monomial(writhe, 0) * trace(elem)


def unlink(c: int) -> LaurentPoly:
    return homfly_of_braid(c, [])


def hopf() -> LaurentPoly:
    return homfly_of_braid(2, [1, 1])


def full_twist(n: int, sign: int = 1) -> LaurentPoly:
    word = [sign * i for i in range(1, n)] * n
    return homfly_of_braid(n, word)
