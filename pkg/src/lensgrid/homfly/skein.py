"""Skein calculus for the HOMFLY-PT invariant of links in L(p, q).

The invariant is pinned down by

* ``a^-p J(L+) - a^p J(L-) = z J(L0)``,
* ``J(U) = ((a^-1 - a)/z)^(p-1)`` for an unknot bounding a disk,
* ``J(U + L) = ((a^-p - a^p)/z) J(L)`` for a split null-homologous unknot,

together with values on trivial links without null-homologous components,
which are supplied as an assignment table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .poly import LaurentPoly

ROLES = ("+", "-", "0")


class SkeinError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TrivialSymbol:
    """A trivial link, by component count per homology class (ascending)."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        if not counts or any(c < 0 for c in counts) or sum(counts) == 0:
            raise SkeinError(f"invalid trivial-link counts {self.counts!r}")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_display_order(cls, subscript: Iterable[int]) -> TrivialSymbol:
        """Build from the subscript order ``(i_0, i_{p-1}, ..., i_1)``."""
        s = tuple(subscript)
        return cls((s[0],) + tuple(reversed(s[1:])))

    @property
    def p(self) -> int:
        return len(self.counts)

    @property
    def display_order(self) -> tuple[int, ...]:
        return (self.counts[0],) + tuple(reversed(self.counts[1:]))

    def reversed(self) -> TrivialSymbol:
        """The same link with every component's orientation reversed."""
        return TrivialSymbol(self.display_order)

    def render(self) -> str:
        return "U_{" + ",".join(map(str, self.display_order)) + "}"

    def __str__(self) -> str:
        return self.render()


def unknot_value(p: int) -> LaurentPoly:
    if p < 1:
        raise SkeinError(f"p must be positive, got {p}")
    return LaurentPoly({(-1, -1): 1, (1, -1): -1}) ** (p - 1)


def union_multiplier(p: int) -> LaurentPoly:
    if p < 1:
        raise SkeinError(f"p must be positive, got {p}")
    return LaurentPoly({(-p, -1): 1, (p, -1): -1})


class JExpression:
    """Formal combination ``sum c_U * J(U)`` over trivial-link symbols."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[TrivialSymbol, LaurentPoly] | None = None):
        clean = {}
        for sym, c in (terms or {}).items():
            if c:
                clean[sym] = c
        ps = {s.p for s in clean}
        if len(ps) > 1:
            raise SkeinError(f"symbols for different lens spaces mixed: p in {sorted(ps)}")
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def symbol(cls, sym: TrivialSymbol, coeff: LaurentPoly | None = None) -> JExpression:
        return cls({sym: coeff if coeff is not None else LaurentPoly.const(1)})

    @property
    def terms(self) -> dict[TrivialSymbol, LaurentPoly]:
        return dict(self._terms)

    @property
    def p(self) -> int | None:
        return next(iter(self._terms)).p if self._terms else None

    def __add__(self, other: JExpression) -> JExpression:
        out = dict(self._terms)
        for s, c in other._terms.items():
            out[s] = out.get(s, LaurentPoly()) + c
        return JExpression(out)

    def __neg__(self) -> JExpression:
        return JExpression({s: -c for s, c in self._terms.items()})

    def __sub__(self, other: JExpression) -> JExpression:
        return self + (-other)

    def scale(self, c: LaurentPoly | int) -> JExpression:
        return JExpression({s: v * c for s, v in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, JExpression) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c}) J({s})" for s, c in self._terms.items())

    def __repr__(self) -> str:
        return f"JExpression({self})"


def reverse_expression(e: JExpression) -> JExpression:
    return JExpression({s.reversed(): c for s, c in e.terms.items()})


def solve_skein(p: int, known: Mapping[str, JExpression]) -> tuple[str, JExpression]:
    """Given two of the roles ``+``, ``-``, ``0``, return the missing role and its value."""
    roles = set(known)
    if len(roles) != 2 or not roles <= set(ROLES):
        raise SkeinError(f"need exactly two distinct roles among {ROLES}, got {sorted(roles)}")
    (missing,) = set(ROLES) - roles
    az = lambda i, j: LaurentPoly.monomial(i, j)  # noqa: E731
    if missing == "+":
        value = known["-"].scale(az(2 * p, 0)) + known["0"].scale(az(p, 1))
    elif missing == "-":
        value = known["+"].scale(az(-2 * p, 0)) - known["0"].scale(az(-p, 1))
    else:
        value = (known["+"].scale(az(-p, 0)) - known["-"].scale(az(p, 0))).scale(az(0, -1))
    return missing, value


# --- evaluation ---------------------------------------------------------------

Table = Mapping[TrivialSymbol, LaurentPoly]


def symbol_value(sym: TrivialSymbol, table: Table) -> LaurentPoly | None:
    """Value of ``J(sym)``; null-homologous components are split off by the axioms."""
    if sym in table:
        return table[sym]
    k = sym.counts[0]
    if k == 0:
        return None
    rest = (0,) + sym.counts[1:]
    if sum(rest) == 0:
        return union_multiplier(sym.p) ** (k - 1) * unknot_value(sym.p)
    inner = symbol_value(TrivialSymbol(rest), table)
    return None if inner is None else union_multiplier(sym.p) ** k * inner


def evaluate(e: JExpression, table: Table) -> tuple[LaurentPoly | None, list[TrivialSymbol]]:
    """Numeric value of ``e`` and the symbols the table could not resolve."""
    total = LaurentPoly()
    missing = []
    for sym, c in e.terms.items():
        v = symbol_value(sym, table)
        if v is None:
            missing.append(sym)
        else:
            total = total + c * v
    return (None if missing else total), missing


@dataclass
class ScriptResult:
    expression: JExpression
    value: LaurentPoly | None
    missing: list[TrivialSymbol]


def _script_node(node: Any, p: int | None) -> JExpression:
    if not isinstance(node, dict):
        raise SkeinError(f"script node must be an object, got {type(node).__name__}")
    if "children" in node:
        role = node.get("role")
        if role not in ROLES:
            raise SkeinError(f"internal node needs a role in {ROLES}, got {role!r}")
        children = node["children"]
        if not isinstance(children, list) or len(children) != 2:
            raise SkeinError("internal node needs exactly two children")
        others = [r for r in ROLES if r != role]
        known = {}
        for r, child in zip(others, children):
            declared = child.get("as") if isinstance(child, dict) else None
            if declared is not None and declared != r:
                raise SkeinError(f"child declared as {declared!r} but sits in the {r!r} slot under {role!r}")
            known[r] = _script_node(child, p)
        ps = {e.p for e in known.values() if e.p is not None}
        pp = p if p is not None else (ps.pop() if ps else None)
        if pp is None:
            raise SkeinError("cannot determine p for an all-zero subtree; give \"p\" in the script")
        _, value = solve_skein(pp, known)
        return value
    if "symbol" in node:
        sym = TrivialSymbol(tuple(node["symbol"]))
        if p is not None and sym.p != p:
            raise SkeinError(f"symbol {sym.counts} does not have {p} classes")
        coeff = parse_coeff(node.get("coeff", 1))
        u = int(node.get("unknots", 0))
        if u < 0:
            raise SkeinError("unknots must be nonnegative")
        return JExpression.symbol(sym, coeff * union_multiplier(sym.p) ** u)
    if "expr" in node:
        e = expression_from_json(node["expr"])
        u = int(node.get("unknots", 0))
        return e.scale(union_multiplier(e.p) ** u) if e.p and u else e
    if node.get("zero"):
        return JExpression()
    raise SkeinError(f"unrecognised script node with keys {sorted(node)}")


def eval_script(script: Mapping[str, Any], table: Table | None = None) -> ScriptResult:
    """Fold a skein tree into a JExpression, then evaluate it against ``table``."""
    p = script.get("p") if isinstance(script, Mapping) else None
    root = script.get("tree", script) if isinstance(script, Mapping) else script
    expr = _script_node(root, p)
    if table is None:
        return ScriptResult(expr, None, list(expr.terms))
    value, missing = evaluate(expr, table)
    return ScriptResult(expr, value, missing)


# --- JSON ---------------------------------------------------------------------

def parse_coeff(c: Any) -> LaurentPoly:
    if isinstance(c, LaurentPoly):
        return c
    if isinstance(c, bool):
        raise SkeinError("boolean is not a coefficient")
    if isinstance(c, int):
        return LaurentPoly.const(c)
    if isinstance(c, str):
        return LaurentPoly.parse(c)
    if isinstance(c, list):
        return LaurentPoly([tuple(t) for t in c])
    raise SkeinError(f"cannot read coefficient {c!r}")


def expression_from_json(obj: Any) -> JExpression:
    terms = obj["terms"] if isinstance(obj, dict) else obj
    out = JExpression()
    for t in terms:
        out = out + JExpression.symbol(TrivialSymbol(tuple(t["symbol"])), parse_coeff(t.get("coeff", 1)))
    return out


def expression_to_json(e: JExpression) -> dict:
    return {
        "p": e.p,
        "terms": [{"symbol": list(s.counts), "coeff": c.triples()} for s, c in e.terms.items()],
    }


def table_from_json(obj: Any) -> dict[TrivialSymbol, LaurentPoly]:
    entries = obj["entries"] if isinstance(obj, dict) else obj
    table = {}
    for entry in entries:
        sym = TrivialSymbol(tuple(entry["symbol"]))
        if sym in table:
            raise SkeinError(f"duplicate table entry for {sym.counts}")
        table[sym] = parse_coeff(entry["value"])
    return table


def table_to_json(table: Table) -> list[dict]:
    return [{"symbol": list(s.counts), "value": v.triples()} for s, v in sorted(table.items())]


def load_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
