"""Renormalization over exact truncated Laurent series in a regulator eps.

The target algebra is the ring of Laurent series with rational coefficients,
stored on a fixed exponent window.  A product whose support leaves the window
cannot be represented exactly; the result is kept but flagged ``dirty`` and
every later result computed from it stays dirty.  :func:`renormalize` refuses
dirty values with :class:`TruncationError`.

Characters are determined by their values on canonical keys of connected 1PI
graphs and extended multiplicatively over monomials.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping

from .canon import CanonicalKey, canonical_key, graph_from_key
from .graph import FeynmanGraph, GraphError, SubgraphSel, is_one_particle_irreducible, subgraph_graph
from .hopf import UNIT, AlgebraElement, HopfAlgebra, Monomial, key_loops
from .surgery import Theory, contract, is_superficially_divergent

DEFAULT_WINDOW = (-8, 8)


class WindowError(ValueError):
    """Series on different windows, or a coefficient placed outside the window."""


class TruncationError(ArithmeticError):
    """An exact result was needed but the arithmetic left the window."""


def parse_window(text: str) -> tuple[int, int]:
    """``"MIN:MAX"`` to a window tuple."""
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise WindowError(f"window must look like MIN:MAX, got {text!r}") from None
    if lo > 0 or hi < 0:
        raise WindowError(f"window {lo}:{hi} must contain the exponent 0")
    return lo, hi


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class LaurentSeries:
    """Finite Laurent series ``sum c_k eps^k`` with ``k`` in ``window``."""

    __slots__ = ("coeffs", "window", "dirty")

    def __init__(self, coeffs: Mapping[int, object] | None = None, window: tuple[int, int] = DEFAULT_WINDOW,
                 dirty: bool = False):
        lo, hi = window
        clean = {}
        for k, c in (coeffs or {}).items():
            c = _frac(c)
            if not c:
                continue
            if not lo <= k <= hi:
                raise WindowError(f"exponent {k} outside window [{lo}, {hi}]")
            clean[int(k)] = c
        self.coeffs: dict[int, Fraction] = dict(sorted(clean.items()))
        self.window = (lo, hi)
        self.dirty = dirty

    @classmethod
    def constant(cls, c=1, window: tuple[int, int] = DEFAULT_WINDOW) -> LaurentSeries:
        return cls({0: c}, window)

    @classmethod
    def monomial(cls, k: int, c=1, window: tuple[int, int] = DEFAULT_WINDOW) -> LaurentSeries:
        """``c * eps**k``."""
        return cls({k: c}, window)

    def _lift(self, other) -> LaurentSeries:
        if isinstance(other, LaurentSeries):
            if other.window != self.window:
                raise WindowError(f"window mismatch {self.window} vs {other.window}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentSeries.constant(other, self.window)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentSeries(out, self.window, self.dirty or other.dirty)

    __radd__ = __add__

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries({k: -c for k, c in self.coeffs.items()}, self.window, self.dirty)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        lo, hi = self.window
        out: dict[int, Fraction] = {}
        dirty = self.dirty or other.dirty
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if lo <= k <= hi:
                    out[k] = out.get(k, 0) + a * b
                else:
                    dirty = True
        return LaurentSeries(out, self.window, dirty)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentSeries:
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = LaurentSeries.constant(1, self.window)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        other = self._lift(other) if isinstance(other, (int, Fraction, LaurentSeries)) else NotImplemented
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((tuple(self.coeffs.items()), self.window))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs.get(k, Fraction(0))

    @property
    def pole_order(self) -> int:
        """Largest ``n`` with a nonzero ``eps**-n`` coefficient (0 if none)."""
        return max([-k for k in self.coeffs if k < 0], default=0)

    def has_poles(self) -> bool:
        return any(k < 0 for k in self.coeffs)

    def to_json(self) -> dict[str, str]:
        return {str(k): _fmt(c) for k, c in self.coeffs.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, object], window: tuple[int, int] = DEFAULT_WINDOW) -> LaurentSeries:
        return cls({int(k): Fraction(str(v)) for k, v in data.items()}, window)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in sorted(self.coeffs.items()):
            if k == 0:
                parts.append(_fmt(c))
            elif k < 0:
                parts.append(f"{_fmt(c)}/e^{-k}" if k < -1 else f"{_fmt(c)}/e")
            else:
                parts.append(f"{_fmt(c)}*e^{k}" if k > 1 else f"{_fmt(c)}*e")
        return " + ".join(parts) + (" (dirty)" if self.dirty else "")


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# -- projections ---------------------------------------------------------------

Projection = Callable[[LaurentSeries], LaurentSeries]


def ms_project(a: LaurentSeries) -> LaurentSeries:
    """Minimal subtraction: the pole part (strictly negative exponents)."""
    return LaurentSeries({k: c for k, c in a.coeffs.items() if k < 0}, a.window, a.dirty)


def rota_baxter_defect(T: Projection, a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """``T(a)T(b) + T(ab) - T(aT(b)) - T(T(a)b)``; zero for a Rota-Baxter operator."""
    ta, tb = T(a), T(b)
    return ta * tb + T(a * b) - T(a * tb) - T(ta * b)


# -- Feynman rules -------------------------------------------------------------

def toy_rule(loops: int, window: tuple[int, int] = DEFAULT_WINDOW) -> LaurentSeries:
    """``((1 + eps) / eps) ** loops``."""
    return LaurentSeries({-1: 1, 0: 1}, window) ** loops


def pure_pole_rule(loops: int, window: tuple[int, int] = DEFAULT_WINDOW) -> LaurentSeries:
    """``eps ** -loops``; renormalizes every graph with subdivergences to zero."""
    lo, _ = window
    if -loops < lo:
        return LaurentSeries({}, window, dirty=True)
    return LaurentSeries.monomial(-loops, 1, window)


@dataclass
class FeynmanRules:
    """Values on connected 1PI graphs, with an optional rule by loop number.

    ``assignment`` is keyed by canonical key of any kind; lookups compare by
    the key of the theory in use, so ribbon and plain keys may be mixed.
    """

    assignment: dict[CanonicalKey, LaurentSeries] = field(default_factory=dict)
    default: Callable[[int, tuple[int, int]], LaurentSeries] | None = toy_rule
    window: tuple[int, int] = DEFAULT_WINDOW

    def __post_init__(self):
        self._by_theory: dict[bool, dict[CanonicalKey, LaurentSeries]] = {}

    def assign(self, graph_or_key: FeynmanGraph | CanonicalKey, value: LaurentSeries) -> None:
        key = graph_or_key if isinstance(graph_or_key, bytes) else canonical_key(graph_or_key)
        if value.window != self.window:
            raise WindowError(f"rule on window {value.window}, rules use {self.window}")
        self.assignment[key] = value
        self._by_theory.clear()

    def _table(self, ribbon: bool) -> dict[CanonicalKey, LaurentSeries]:
        if ribbon not in self._by_theory:
            self._by_theory[ribbon] = {
                canonical_key(graph_from_key(k), ribbon=ribbon): v for k, v in self.assignment.items()
            }
        return self._by_theory[ribbon]

    def value(self, key: CanonicalKey) -> LaurentSeries:
        hit = self._table(key[:1] == b"R").get(key)
        if hit is not None:
            return hit
        if self.default is None:
            raise KeyError(f"no Feynman rule for {key.decode('ascii')}")
        return self.default(key_loops(key), self.window)

    @classmethod
    def from_json(cls, data: Mapping[str, Mapping[str, object]], *, names: Mapping[str, FeynmanGraph] | None = None,
                  window: tuple[int, int] = DEFAULT_WINDOW, default=toy_rule) -> FeynmanRules:
        """Rules from ``{graph name or canonical key: {exponent: "p/q"}}``."""
        rules = cls(default=default, window=window)
        for ref, series in data.items():
            if names and ref in names:
                target: FeynmanGraph | CanonicalKey = names[ref]
            elif ref[:1] in ("R", "P"):
                target = ref.encode("ascii")
                graph_from_key(target)  # rejects malformed keys early
            else:
                raise KeyError(f"rules refer to unknown graph {ref!r}")
            rules.assign(target, LaurentSeries.from_json(series, window))
        return rules

    @classmethod
    def load(cls, path, **kw) -> FeynmanRules:
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh), **kw)


# -- characters ----------------------------------------------------------------

Character = Callable[[Monomial], LaurentSeries]


def eval_rules(rules: FeynmanRules, m: Monomial) -> LaurentSeries:
    """Feynman rules on a monomial: the product over its factors, 1 on the unit."""
    out = LaurentSeries.constant(1, rules.window)
    for k in m:
        out = out * rules.value(k)
    return out


def counit_character(window: tuple[int, int] = DEFAULT_WINDOW) -> Character:
    """``u o counit``: 1 on the unit monomial, 0 on every other."""
    def eps(m: Monomial) -> LaurentSeries:
        return LaurentSeries.constant(1 if m == UNIT else 0, window)
    return eps


def evaluate(f: Character, a: AlgebraElement, window: tuple[int, int]) -> LaurentSeries:
    out = LaurentSeries({}, window)
    for m, c in a.items():
        out = out + f(m) * c
    return out


def convolve(f: Character, g: Character, x, algebra: HopfAlgebra, window: tuple[int, int] = DEFAULT_WINDOW
             ) -> LaurentSeries:
    """``(f * g)(x) = m o (f (x) g) o Delta (x)``."""
    out = LaurentSeries({}, window)
    for (left, right), c in algebra.coproduct(x).items():
        out = out + f(left) * g(right) * c
    return out


class Renormalizer:
    """Twisted antipode and renormalized values for one theory, rule set and projection.

    The twisted antipode is memoised per canonical key.  Its recursion runs
    over the reduced coproduct, whose terms have strictly lower loop number.
    """

    def __init__(self, rules: FeynmanRules | None = None, T: Projection = ms_project,
                 theory: Theory | str = Theory.PHI4, algebra: HopfAlgebra | None = None):
        self.rules = rules or FeynmanRules()
        self.T = T
        self.theory = Theory(theory)
        self.algebra = algebra or HopfAlgebra(self.theory)
        self.window = self.rules.window
        self._minus: dict[CanonicalKey, LaurentSeries] = {}
        self._minus_direct: dict[Monomial, LaurentSeries] = {}

    def key(self, graph: FeynmanGraph) -> CanonicalKey:
        return self.algebra.key(graph)

    def _generator(self, graph: FeynmanGraph | CanonicalKey) -> CanonicalKey:
        if isinstance(graph, bytes):
            return graph
        if not is_one_particle_irreducible(graph):
            raise GraphError("renormalization is defined on connected 1PI graphs")
        return self.key(graph)

    def phi(self, m: Monomial) -> LaurentSeries:
        return eval_rules(self.rules, m)

    def bar_r(self, graph: FeynmanGraph | CanonicalKey) -> LaurentSeries:
        """``phi(G) + sum phi_-(g) phi(G/g)`` over the reduced coproduct."""
        key = self._generator(graph)
        out = self.phi((key,))
        for (left, right), c in self.algebra.generator_coproduct(key).items():
            if left and right:
                out = out + self.minus_monomial(left) * self.phi(right) * c
        return out

    def twisted_antipode(self, graph: FeynmanGraph | CanonicalKey) -> LaurentSeries:
        key = self._generator(graph)
        hit = self._minus.get(key)
        if hit is None:
            hit = -self.T(self.bar_r(key))
            self._minus[key] = hit
        return hit

    def minus_monomial(self, m: Monomial) -> LaurentSeries:
        """``phi_-`` extended multiplicatively."""
        out = LaurentSeries.constant(1, self.window)
        for k in m:
            out = out * self.twisted_antipode(k)
        return out

    def minus_direct(self, m: Monomial) -> LaurentSeries:
        """``phi_-`` of a monomial by the recursion applied to the monomial itself.

        Not multiplicative by construction: agreement with :meth:`minus_monomial`
        on products is the character property, which rests on ``T`` being
        Rota-Baxter.
        """
        if m == UNIT:
            return LaurentSeries.constant(1, self.window)
        hit = self._minus_direct.get(m)
        if hit is not None:
            return hit
        acc = self.phi(m)
        for (left, right), c in self.algebra.monomial_coproduct(m).items():
            if left and right:
                acc = acc + self.minus_direct(left) * self.phi(right) * c
        hit = -self.T(acc)
        self._minus_direct[m] = hit
        return hit

    def renormalize(self, graph: FeynmanGraph | CanonicalKey, *, strict: bool = True) -> LaurentSeries:
        """``phi_+ = (id - T) bar_r``; raises :class:`TruncationError` on dirty arithmetic."""
        r = self.bar_r(graph)
        out = r - self.T(r)
        if strict and out.dirty:
            raise TruncationError(f"arithmetic left the window {self.window}; widen it")
        return out

    def convolution_plus(self, graph: FeynmanGraph | CanonicalKey) -> LaurentSeries:
        """``(phi_- * phi)(G)`` through the full coproduct."""
        key = self._generator(graph)
        return convolve(self.minus_monomial, self.phi, AlgebraElement.of(key), self.algebra, self.window)


# -- forest formula ------------------------------------------------------------

def _connected_divergent(graph: FeynmanGraph, theory: Theory) -> list[frozenset[int]]:
    out = []
    for size in range(1, graph.I + 1):
        for es in combinations(range(graph.I), size):
            sel = SubgraphSel.of(graph, es)
            if not sel.is_proper(graph) or len(sel.components(graph)) != 1:
                continue
            sub, _ = subgraph_graph(graph, sel)
            if is_one_particle_irreducible(sub) and is_superficially_divergent(sub, theory):
                out.append(sel.edges)
    return out


def _compatible(graph: FeynmanGraph, a: frozenset[int], b: frozenset[int]) -> bool:
    if a <= b or b <= a:
        return True
    va = SubgraphSel.of(graph, a).vertices
    vb = SubgraphSel.of(graph, b).vertices
    return not (va & vb)


def forests(graph: FeynmanGraph, theory: Theory | str = Theory.PHI4) -> list[tuple[frozenset[int], ...]]:
    """All sets of connected divergent proper subgraphs that are pairwise nested or vertex-disjoint."""
    theory = Theory(theory)
    cands = _connected_divergent(graph, theory)
    out: list[tuple[frozenset[int], ...]] = []

    def grow(start: int, chosen: list[frozenset[int]]) -> None:
        out.append(tuple(chosen))
        for i in range(start, len(cands)):
            if all(_compatible(graph, cands[i], c) for c in chosen):
                chosen.append(cands[i])
                grow(i + 1, chosen)
                chosen.pop()

    grow(0, [])
    return out


def forest_formula(graph: FeynmanGraph, rules: FeynmanRules | None = None, T: Projection = ms_project,
                   theory: Theory | str = Theory.PHI4) -> LaurentSeries:
    """Renormalized value by Zimmermann's forest sum, without the Hopf algebra.

    Each forest contributes ``phi(G / maximal) * prod over maximal g of w(g)``
    with ``w(g) = -T(phi(g / its maximal children) * prod w(child))``.  The
    sum over forests is then projected with ``id - T``.
    """
    theory = Theory(theory)
    rules = rules or FeynmanRules()
    ribbon = theory is Theory.GW
    to_vertex = theory is Theory.CORE
    whole = frozenset(range(graph.I))

    def quotient_value(outer: frozenset[int], inner: list[frozenset[int]]) -> LaurentSeries:
        if outer == whole:
            host, order = graph, list(range(graph.I))
        else:
            host, _ = subgraph_graph(graph, SubgraphSel.of(graph, outer))
            order = sorted(outer)
        if inner:
            pos = {e: i for i, e in enumerate(order)}
            host = contract(host, [pos[e] for g in inner for e in g], to_vertex=to_vertex)
        if host.I == 0:
            return LaurentSeries.constant(1, rules.window)
        # the quotient of a 1PI graph is connected
        return rules.value(canonical_key(host, ribbon=ribbon))

    total = LaurentSeries({}, rules.window)
    for forest in forests(graph, theory):
        def children(g: frozenset[int]) -> list[frozenset[int]]:
            inside = [h for h in forest if h < g]
            return [h for h in inside if not any(h < k for k in inside)]

        def weight(g: frozenset[int]) -> LaurentSeries:
            kids = children(g)
            acc = quotient_value(g, kids)
            for h in kids:
                acc = acc * weight(h)
            return -T(acc)

        top = children(whole)
        term = quotient_value(whole, top)
        for g in top:
            term = term * weight(g)
        total = total + term
    return total - T(total)


# -- module-level conveniences ---------------------------------------------------

def twisted_antipode(rules: FeynmanRules, T: Projection, graph: FeynmanGraph,
                     mode: Theory | str = Theory.PHI4) -> LaurentSeries:
    return Renormalizer(rules, T, mode).twisted_antipode(graph)


def renormalize(rules: FeynmanRules, T: Projection, graph: FeynmanGraph,
                mode: Theory | str = Theory.PHI4) -> LaurentSeries:
    return Renormalizer(rules, T, mode).renormalize(graph)
