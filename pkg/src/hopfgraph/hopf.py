"""The free commutative algebra on 1PI graphs and its Connes-Kreimer coproduct.

Generators are canonical keys (plain keys for the commutative ``phi4`` and
``core`` theories, ribbon keys for ``gw``).  A monomial is a sorted tuple of
keys, the empty tuple being the unit.  Coefficients are exact
:class:`fractions.Fraction` values throughout.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterator, Mapping, Union

from .canon import CanonicalKey, canonical_key, graph_from_key
from .graph import (
    FeynmanGraph,
    GraphError,
    SubgraphSel,
    components,
    is_one_particle_irreducible,
    loop_number,
    subgraph_graph,
)
from .surgery import Theory, contract, divergent_subgraphs, is_superficially_divergent

Monomial = tuple[CanonicalKey, ...]
UNIT: Monomial = ()

SubgraphFilter = Callable[[FeynmanGraph, list[SubgraphSel]], list[SubgraphSel]]


class _Linear:
    """Finitely supported map from basis labels to non-zero rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms: dict = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[k] = c

    def _new(self, terms: dict):
        out = object.__new__(type(self))
        out.terms = {k: c for k, c in terms.items() if c}
        return out

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return self._new(terms)

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "_Linear":
        c = Fraction(c)
        return self._new({k: c * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.terms == other.terms

    __hash__ = None  # mutable-looking container semantics

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> list:
        return sorted(self.terms.items())

    def __iter__(self) -> Iterator:
        return iter(self.items())

    def coefficient(self, k) -> Fraction:
        return self.terms.get(k, Fraction(0))


class AlgebraElement(_Linear):
    """Element of the graph algebra: monomial -> coefficient."""

    @classmethod
    def unit(cls) -> AlgebraElement:
        return cls({UNIT: 1})

    @classmethod
    def zero(cls) -> AlgebraElement:
        return cls()

    @classmethod
    def of(cls, *keys: CanonicalKey, coeff=1) -> AlgebraElement:
        return cls({tuple(sorted(keys)): coeff})

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return self._new(terms)

    def __rmul__(self, c):
        return self.scale(c)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{_fmt(m)}" for m, c in self.items())


class TensorElement(_Linear):
    """Element of a tensor power of the algebra: tuple of monomials -> coefficient."""

    @classmethod
    def pure(cls, *monomials: Monomial, coeff=1) -> TensorElement:
        return cls({tuple(tuple(sorted(m)) for m in monomials): coeff})

    def __mul__(self, other):
        if not isinstance(other, TensorElement):
            return self.scale(other)
        terms: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(tuple(sorted(a + b)) for a, b in zip(k1, k2))
                terms[k] = terms.get(k, 0) + c1 * c2
        return self._new(terms)

    def __rmul__(self, c):
        return self.scale(c)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*" + "(x)".join(_fmt(m) for m in k) for k, c in self.items())


def _fmt(m: Monomial) -> str:
    if not m:
        return "1"
    return "{" + ", ".join(k.decode() for k in m) + "}"


def product(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def counit(a: AlgebraElement) -> Fraction:
    return a.coefficient(UNIT)


@lru_cache(maxsize=None)
def key_loops(key: CanonicalKey) -> int:
    return loop_number(graph_from_key(key))


def monomial_degree(m: Monomial) -> int:
    return sum(key_loops(k) for k in m)


def grade(a: AlgebraElement) -> dict[int, AlgebraElement]:
    """Split by total loop number."""
    parts: dict[int, dict] = {}
    for m, c in a.terms.items():
        parts.setdefault(monomial_degree(m), {})[m] = c
    return {d: AlgebraElement(parts[d]) for d in sorted(parts)}


Element = Union[FeynmanGraph, CanonicalKey, AlgebraElement]


class HopfAlgebra:
    """Coproduct, antipode and axiom checks for one subgraph class.

    Results are memoised per canonical key.  The memo tables are the only shared
    state; concurrent use may recompute an entry but never stores a wrong one.
    ``subgraph_filter`` post-processes every subgraph list and exists so tests
    can corrupt the coproduct on purpose.
    """

    def __init__(self, theory: Theory | str = Theory.PHI4, *, subgraph_filter: SubgraphFilter | None = None):
        self.theory = Theory(theory)
        self.ribbon = self.theory is Theory.GW
        self.subgraph_filter = subgraph_filter
        self._delta: dict[CanonicalKey, TensorElement] = {}
        self._s_left: dict[CanonicalKey, AlgebraElement] = {}
        self._s_right: dict[CanonicalKey, AlgebraElement] = {}

    # -- elements -------------------------------------------------------------
    def key(self, graph: FeynmanGraph) -> CanonicalKey:
        return canonical_key(graph, ribbon=self.ribbon)

    def monomial(self, graph: FeynmanGraph) -> Monomial:
        """Keys of the components that carry at least one internal edge."""
        keys = []
        for verts in components(graph):
            es = [i for i, e in enumerate(graph.edges) if e.a.vertex in verts]
            if not es:
                continue
            if len(verts) == graph.V and len(es) == graph.I:
                keys.append(self.key(graph))
            else:
                sub, _ = subgraph_graph(graph, SubgraphSel.of(graph, es))
                keys.append(self.key(sub))
        return tuple(sorted(keys))

    def element(self, x: Element) -> AlgebraElement:
        if isinstance(x, AlgebraElement):
            return x
        if isinstance(x, bytes):
            return AlgebraElement.of(x)
        return AlgebraElement({self.monomial(x): 1})

    def subgraphs(self, graph: FeynmanGraph) -> list[SubgraphSel]:
        sels = divergent_subgraphs(graph, self.theory)
        if self.subgraph_filter is not None:
            sels = self.subgraph_filter(graph, sels)
        return sels

    def cograph(self, graph: FeynmanGraph, sel: SubgraphSel) -> FeynmanGraph:
        return contract(graph, sel, to_vertex=self.theory is Theory.CORE)

    def selection_monomial(self, graph: FeynmanGraph, sel: SubgraphSel) -> Monomial:
        return tuple(sorted(self.key(subgraph_graph(graph, c)[0]) for c in sel.components(graph)))

    # -- coproduct ------------------------------------------------------------
    def generator_coproduct(self, key: CanonicalKey) -> TensorElement:
        hit = self._delta.get(key)
        if hit is not None:
            return hit
        graph = graph_from_key(key)
        if not is_one_particle_irreducible(graph):
            raise GraphError("coproduct generators must be connected 1PI graphs")
        terms: dict = {((key,), UNIT): Fraction(1)}
        terms[(UNIT, (key,))] = terms.get((UNIT, (key,)), 0) + 1
        for sel in self.subgraphs(graph):
            t = (self.selection_monomial(graph, sel), self.monomial(self.cograph(graph, sel)))
            terms[t] = terms.get(t, 0) + 1
        out = TensorElement(terms)
        self._delta[key] = out
        return out

    def monomial_coproduct(self, m: Monomial) -> TensorElement:
        out = TensorElement.pure(UNIT, UNIT)
        for k in m:
            out = out * self.generator_coproduct(k)
        return out

    def coproduct(self, x: Element) -> TensorElement:
        """Coproduct, extended multiplicatively over monomials and linearly over sums."""
        out = TensorElement()
        for m, c in self.element(x).terms.items():
            out = out + self.monomial_coproduct(m).scale(c)
        return out

    def reduced_coproduct(self, x: Element) -> TensorElement:
        a = self.element(x)
        full = self.coproduct(a)
        prim = TensorElement()
        for m, c in a.terms.items():
            prim = prim + TensorElement({(m, UNIT): c}) + TensorElement({(UNIT, m): c})
        unit_part = TensorElement({(UNIT, UNIT): counit(a)})
        # the unit is group-like, not primitive: keep its single 1(x)1 term out of both sides
        return full - prim + unit_part

    def coproduct_of_graph(self, graph: FeynmanGraph) -> TensorElement:
        """Coproduct of a possibly disconnected graph by direct subgraph enumeration.

        Sums over edge sets whose pieces are each either a whole connected
        component or an admissible proper subgraph of one; used to test
        multiplicativity independently of :meth:`coproduct`.
        """
        comps = []
        for verts in components(graph):
            es = frozenset(i for i, e in enumerate(graph.edges) if e.a.vertex in verts)
            if es:
                comps.append(es)
        whole = set(comps)
        terms: dict = {}
        n = graph.I
        for size in range(0, n + 1):
            for es in combinations(range(n), size):
                sel = SubgraphSel.of(graph, es)
                pieces = sel.components(graph)
                full = [p for p in pieces if p.edges in whole]
                rest = [p for p in pieces if p.edges not in whole]
                if not all(self._admissible(graph, p) for p in rest):
                    continue
                left = tuple(sorted(self.key(subgraph_graph(graph, p)[0]) for p in pieces))
                keep = sorted(i for c in comps if c not in {p.edges for p in full} for i in c)
                if not keep:
                    right = UNIT
                else:
                    host, _ = subgraph_graph(graph, SubgraphSel.of(graph, keep))
                    pos = {i: j for j, i in enumerate(keep)}
                    inner = [pos[i] for p in rest for i in p.edges]
                    if inner:
                        host = self.cograph(host, SubgraphSel.of(host, inner))
                    right = self.monomial(host)
                t = (left, right)
                terms[t] = terms.get(t, 0) + 1
        return TensorElement(terms)

    def _admissible(self, graph: FeynmanGraph, piece: SubgraphSel) -> bool:
        sub, _ = subgraph_graph(graph, piece)
        return is_one_particle_irreducible(sub) and is_superficially_divergent(sub, self.theory)

    # -- antipode -------------------------------------------------------------
    def _reduced_terms(self, key: CanonicalKey):
        for (left, right), c in self.generator_coproduct(key).items():
            if left and right:
                yield left, right, c

    def generator_antipode(self, key: CanonicalKey, side: str = "left") -> AlgebraElement:
        memo = self._s_left if side == "left" else self._s_right
        hit = memo.get(key)
        if hit is not None:
            return hit
        out = -AlgebraElement.of(key)
        for left, right, c in self._reduced_terms(key):
            if side == "left":
                out = out - self.monomial_antipode(left, side) * AlgebraElement({right: c})
            else:
                out = out - AlgebraElement({left: c}) * self.monomial_antipode(right, side)
        memo[key] = out
        return out

    def monomial_antipode(self, m: Monomial, side: str = "left") -> AlgebraElement:
        out = AlgebraElement.unit()
        for k in m:
            out = out * self.generator_antipode(k, side)
        return out

    def antipode(self, x: Element, side: str = "left") -> AlgebraElement:
        """Antipode by the recursion through the left (or right) reduced coproduct."""
        out = AlgebraElement()
        for m, c in self.element(x).terms.items():
            out = out + self.monomial_antipode(m, side).scale(c)
        return out

    # -- axiom checks -----------------------------------------------------------
    def check_coassociativity(self, x: Element) -> tuple[bool, tuple | None]:
        """Compare both iterated coproducts; return a differing term on failure."""
        delta = self.coproduct(x)
        lhs = TensorElement()
        rhs = TensorElement()
        for (left, right), c in delta.items():
            for (a, b), d in self.monomial_coproduct(left).items():
                lhs = lhs + TensorElement({(a, b, right): c * d})
            for (a, b), d in self.monomial_coproduct(right).items():
                rhs = rhs + TensorElement({(left, a, b): c * d})
        if lhs == rhs:
            return True, None
        diff = lhs - rhs
        term, coeff = diff.items()[0]
        return False, (term, lhs.coefficient(term), rhs.coefficient(term))

    def check_counit(self, x: Element) -> bool:
        a = self.element(x)
        delta = self.coproduct(a)
        left = AlgebraElement()
        right = AlgebraElement()
        for (l, r), c in delta.items():
            if not l:
                left = left + AlgebraElement({r: c})
            if not r:
                right = right + AlgebraElement({l: c})
        return left == a and right == a

    def check_antipode_axiom(self, x: Element) -> bool:
        a = self.element(x)
        target = AlgebraElement.unit().scale(counit(a))
        delta = self.coproduct(a)
        s_id = AlgebraElement()
        id_s = AlgebraElement()
        for (l, r), c in delta.items():
            s_id = s_id + self.monomial_antipode(l) * AlgebraElement({r: c})
            id_s = id_s + AlgebraElement({l: c}) * self.monomial_antipode(r)
        return s_id == target and id_s == target

    def check_antipode_sides(self, x: Element) -> bool:
        return self.antipode(x, "left") == self.antipode(x, "right")

    def check_grading(self, x: Element) -> bool:
        """Coproduct respects loop degree and no generator sits in degree 0."""
        a = self.element(x)
        for m in a.terms:
            n = monomial_degree(m)
            for (l, r), _ in self.monomial_coproduct(m).items():
                if monomial_degree(l) + monomial_degree(r) != n:
                    return False
                if any(key_loops(k) < 1 for k in l + r):
                    return False
        return True


_ALGEBRAS: dict[Theory, HopfAlgebra] = {}


def algebra(theory: Theory | str = Theory.PHI4) -> HopfAlgebra:
    """Shared memoising instance for a theory."""
    theory = Theory(theory)
    if theory not in _ALGEBRAS:
        _ALGEBRAS[theory] = HopfAlgebra(theory)
    return _ALGEBRAS[theory]


def coproduct(graph: Element, mode: Theory | str = Theory.PHI4) -> TensorElement:
    return algebra(mode).coproduct(graph)


def reduced_coproduct(graph: Element, mode: Theory | str = Theory.PHI4) -> TensorElement:
    return algebra(mode).reduced_coproduct(graph)


def antipode(graph: Element, mode: Theory | str = Theory.PHI4) -> AlgebraElement:
    return algebra(mode).antipode(graph)


def check_coassociativity(graph: Element, mode: Theory | str = Theory.PHI4):
    return algebra(mode).check_coassociativity(graph)


def check_antipode_axiom(graph: Element, mode: Theory | str = Theory.PHI4) -> bool:
    return algebra(mode).check_antipode_axiom(graph)


def _ref(key: CanonicalKey, names: Mapping[CanonicalKey, str] | None) -> str:
    if names and key in names:
        return names[key]
    return key.decode("ascii")


def tensor_to_json(t: TensorElement, names: Mapping[CanonicalKey, str] | None = None) -> list[dict]:
    out = []
    for (left, right), c in t.items():
        out.append({
            "left": [_ref(k, names) for k in left],
            "right": [_ref(k, names) for k in right],
            "coeff": f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator),
        })
    return out


def element_to_json(a: AlgebraElement, names: Mapping[CanonicalKey, str] | None = None) -> list[dict]:
    return [
        {
            "monomial": [_ref(k, names) for k in m],
            "coeff": f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator),
        }
        for m, c in a.items()
    ]
