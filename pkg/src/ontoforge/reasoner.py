"""EL classifier.

Axioms are normalised into the four EL normal forms plus role inclusions and
saturated with the completion rules below, using a work queue and per-atom
rule indexes:

    CR1    B in S(A), B <= C                      =>  C in S(A)
    CR2    B1, B2 in S(A), B1 and B2 <= C         =>  C in S(A)
    CR3    B in S(A), B <= r some C               =>  edge A -r-> C
    CR4    edge A -r-> C, D in S(C), r some D <= E =>  E in S(A)
    CRrole edge A -r-> C, r <= s                  =>  edge A -s-> C
    CRbot  edge A -r-> C, Bottom in S(C)          =>  Bottom in S(A)
"""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict, deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import IncoherentOntology, UnsupportedConstruct
from .model import (
    IS_INFERRED,
    OWL_NOTHING,
    OWL_THING,
    Annotation,
    Axiom,
    Bottom,
    ClassExpression,
    DisjointClasses,
    EquivalentClasses,
    IntersectionOf,
    Literal,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    Top,
    class_signature,
    expr_key,
)

logger = logging.getLogger(__name__)

AUX_NAMESPACE = "urn:ontoforge:aux:"
THING = OWL_THING
NOTHING = OWL_NOTHING
INFERRED = Annotation(IS_INFERRED, Literal("true"))


@dataclass
class NormalizedAxiomSet:
    """EL normal forms over atoms (named classes, Top, Bottom, aux names).

    ``nf1``: A <= B; ``nf2``: A1 and A2 <= B; ``nf3``: A <= r some B;
    ``nf4``: r some A <= B stored as (r, A, B); ``roles``: r <= s.
    """

    nf1: set[tuple[str, str]] = field(default_factory=set)
    nf2: set[tuple[str, str, str]] = field(default_factory=set)
    nf3: set[tuple[str, str, str]] = field(default_factory=set)
    nf4: set[tuple[str, str, str]] = field(default_factory=set)
    roles: set[tuple[str, str]] = field(default_factory=set)
    classes: set[str] = field(default_factory=set)
    aux: set[str] = field(default_factory=set)

    def atoms(self) -> set[str]:
        out = set(self.classes) | self.aux | {THING, NOTHING}
        for a, b in self.nf1:
            out.update((a, b))
        for a, b, c in self.nf2:
            out.update((a, b, c))
        for a, _, b in self.nf3:
            out.update((a, b))
        for _, a, b in self.nf4:
            out.update((a, b))
        return out


def _atom(e: ClassExpression) -> str | None:
    if isinstance(e, Named):
        return e.iri
    if isinstance(e, Top):
        return THING
    if isinstance(e, Bottom):
        return NOTHING
    return None


class _Normalizer:
    def __init__(self) -> None:
        self.out = NormalizedAxiomSet()
        self.counter = itertools.count(1)
        self.left_cache: dict[tuple, str] = {}
        self.right_cache: dict[tuple, str] = {}

    def fresh(self) -> str:
        name = f"{AUX_NAMESPACE}{next(self.counter)}"
        self.out.aux.add(name)
        return name

    def left_atom(self, e: ClassExpression) -> str:
        """An atom X with e <= X."""
        a = _atom(e)
        if a is not None:
            return a
        key = expr_key(e)
        if key not in self.left_cache:
            x = self.fresh()
            self.left_cache[key] = x
            self.sub(e, Named(x))
        return self.left_cache[key]

    def right_atom(self, e: ClassExpression) -> str:
        """An atom X with X <= e."""
        a = _atom(e)
        if a is not None:
            return a
        key = expr_key(e)
        if key not in self.right_cache:
            x = self.fresh()
            self.right_cache[key] = x
            self.sub(Named(x), e)
        return self.right_cache[key]

    def sub(self, c: ClassExpression, d: ClassExpression) -> None:
        if isinstance(d, IntersectionOf):
            for conj in d.conjuncts:
                self.sub(c, conj)
            return
        if isinstance(d, Top) or isinstance(c, Bottom):
            return
        ca = _atom(c)
        if ca is None:
            if isinstance(d, SomeValuesFrom):
                self.sub(Named(self.left_atom(c)), d)
                return
            da = _atom(d)
            if da is None:
                raise UnsupportedConstruct(f"unsupported class expression {d!r}")
            if isinstance(c, IntersectionOf):
                atoms = [self.left_atom(conj) for conj in c.conjuncts]
                cur = atoms[0]
                for i, a in enumerate(atoms[1:], start=1):
                    target = da if i == len(atoms) - 1 else self.fresh()
                    self.out.nf2.add((cur, a, target))
                    cur = target
            elif isinstance(c, SomeValuesFrom):
                self.out.nf4.add((c.property, self.left_atom(c.filler), da))
            else:
                raise UnsupportedConstruct(f"unsupported class expression {c!r}")
            return
        if isinstance(d, SomeValuesFrom):
            self.out.nf3.add((ca, d.property, self.right_atom(d.filler)))
            return
        da = _atom(d)
        if da is None:
            raise UnsupportedConstruct(f"unsupported class expression {d!r}")
        self.out.nf1.add((ca, da))

    def axiom(self, ax: Axiom) -> None:
        if isinstance(ax, SubClassOf):
            self.sub(ax.sub, ax.sup)
        elif isinstance(ax, EquivalentClasses):
            exprs = ax.exprs
            for a, b in zip(exprs, exprs[1:] + exprs[:1]):
                self.sub(a, b)
        elif isinstance(ax, DisjointClasses):
            for a, b in itertools.combinations(ax.exprs, 2):
                self.sub(IntersectionOf((a, b)), Bottom())
        elif isinstance(ax, SubObjectPropertyOf):
            self.out.roles.add((ax.sub, ax.sup))


def normalize(o: Ontology) -> NormalizedAxiomSet:
    n = _Normalizer()
    n.out.classes = class_signature(o)
    for ax in o.logical_axioms:
        n.axiom(ax)
    return n.out


def _role_closure(roles: Iterable[tuple[str, str]]) -> dict[str, set[str]]:
    graph: dict[str, set[str]] = defaultdict(set)
    for r, s in roles:
        graph[r].add(s)
    closure: dict[str, set[str]] = {}
    for r in list(graph):
        seen = {r}
        stack = [r]
        while stack:
            for s in graph.get(stack.pop(), ()):
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
        closure[r] = seen
    return closure


def saturate(ns: NormalizedAxiomSet) -> dict[str, set[str]]:
    """Least fixpoint of the completion rules; returns S(A) for every atom."""
    nf1 = defaultdict(list)
    for a, b in ns.nf1:
        nf1[a].append(b)
    nf2 = defaultdict(list)
    for a, b, c in ns.nf2:
        nf2[a].append((b, c))
        nf2[b].append((a, c))
    nf3 = defaultdict(list)
    for a, r, b in ns.nf3:
        nf3[a].append((r, b))
    nf4 = defaultdict(list)
    for r, a, b in ns.nf4:
        nf4[(r, a)].append(b)
    supers_of_role = _role_closure(ns.roles)

    atoms = ns.atoms()
    S: dict[str, set[str]] = {a: set() for a in atoms}
    pred: dict[str, set[tuple[str, str]]] = {a: set() for a in atoms}
    queue: deque = deque()
    for a in sorted(atoms):
        queue.append((a, a))
        queue.append((a, THING))

    while queue:
        item = queue.popleft()
        if len(item) == 2:
            a, x = item
            if x in S[a]:
                continue
            S[a].add(x)
            for b in nf1.get(x, ()):
                queue.append((a, b))
            for other, c in nf2.get(x, ()):
                if other in S[a]:
                    queue.append((a, c))
            for r, b in nf3.get(x, ()):
                queue.append((a, r, b))
            for p, r in pred[a]:
                for e in nf4.get((r, x), ()):
                    queue.append((p, e))
                if x == NOTHING:
                    queue.append((p, NOTHING))
        else:
            a, r, b = item
            for s in supers_of_role.get(r, (r,)):
                if (a, s) in pred[b]:
                    continue
                pred[b].add((a, s))
                for x in S[b]:
                    for e in nf4.get((s, x), ()):
                        queue.append((a, e))
                if NOTHING in S[b]:
                    queue.append((a, NOTHING))
    return S


@dataclass(frozen=True)
class Taxonomy:
    """Subsumption over the named classes of an ontology plus Top and Bottom.

    ``supers[A]`` is every class subsuming A (reflexive, transitive). An
    unsatisfiable class is subsumed by every class.
    """

    classes: frozenset[str]
    supers: Mapping[str, frozenset[str]]
    unsatisfiable: frozenset[str]
    equivalence_classes: tuple[frozenset[str], ...]

    @classmethod
    def from_supers(cls, supers: Mapping[str, Iterable[str]]) -> Taxonomy:
        classes = frozenset(supers)
        fixed = {a: frozenset(s) for a, s in supers.items()}
        unsat = frozenset(a for a, s in fixed.items() if NOTHING in s and a not in (NOTHING, THING))
        groups: dict[frozenset[str], set[str]] = {}
        for a in sorted(classes):
            members = frozenset(b for b in fixed[a] if a in fixed.get(b, ()))
            groups.setdefault(members, set()).update(members)
        eq = tuple(sorted((frozenset(g) for g in groups.values()), key=lambda g: min(g)))
        return cls(classes, fixed, unsat, eq)

    def subsumes(self, sup: str, sub: str) -> bool:
        return sup in self.supers.get(sub, ())

    def equivalent(self, a: str, b: str) -> bool:
        return self.subsumes(a, b) and self.subsumes(b, a)

    def equivalents(self, a: str) -> frozenset[str]:
        return frozenset(b for b in self.supers.get(a, ()) if self.subsumes(a, b))

    def representative(self, a: str) -> str:
        members = [m for m in self.equivalents(a) if m not in (THING, NOTHING)]
        return min(members) if members else a

    def strict_supers(self, a: str) -> set[str]:
        return {b for b in self.supers.get(a, ()) if not self.subsumes(a, b)}

    def direct_supers(self, a: str) -> list[str]:
        """Representatives of the minimal strict subsumers of ``a``, excluding Top."""
        strict = {b for b in self.strict_supers(a) if not self.equivalent(b, THING)}
        candidates = set(strict)
        for c in strict:
            candidates -= self.strict_supers(c)
        return sorted({self.representative(b) for b in candidates})

    def named(self) -> list[str]:
        return sorted(self.classes - {THING, NOTHING})

    def pairs(self) -> set[tuple[str, str]]:
        return {(a, b) for a, sups in self.supers.items() for b in sups}

    def restricted(self, classes: Iterable[str]) -> set[tuple[str, str]]:
        keep = set(classes)
        return {(a, b) for a in keep for b in self.supers.get(a, {a, THING}) if b in keep}


def taxonomy_from_saturation(S: Mapping[str, set[str]], named: Iterable[str]) -> Taxonomy:
    universe = set(named) | {THING, NOTHING}
    supers = {}
    for a in universe:
        s = S.get(a, {a, THING})
        supers[a] = set(universe) if NOTHING in s else (s & universe)
    return Taxonomy.from_supers(supers)


def classify(o: Ontology) -> Taxonomy:
    ns = normalize(o)
    S = saturate(ns)
    return taxonomy_from_saturation(S, ns.classes)


def unsatisfiable_classes(t: Taxonomy) -> list[str]:
    return sorted(t.unsatisfiable)


def unintended_equivalences(t: Taxonomy, o: Ontology) -> list[tuple[str, str]]:
    sanctioned = set()
    for ax in o.axioms:
        if isinstance(ax, EquivalentClasses):
            members = sorted({e.iri for e in ax.exprs if isinstance(e, Named)})
            sanctioned.update(itertools.combinations(members, 2))
    out = []
    for group in t.equivalence_classes:
        members = sorted(m for m in group if m not in (THING, NOTHING) and m not in t.unsatisfiable)
        if THING in group or NOTHING in group:
            continue
        for pair in itertools.combinations(members, 2):
            if pair not in sanctioned:
                out.append(pair)
    return sorted(out)


def _require_coherent(t: Taxonomy) -> None:
    if t.unsatisfiable:
        raise IncoherentOntology(sorted(t.unsatisfiable))


def _named_edges(o: Ontology) -> list[SubClassOf]:
    return [
        ax
        for ax in o.axioms
        if isinstance(ax, SubClassOf) and isinstance(ax.sub, Named) and isinstance(ax.sup, Named)
    ]


def assert_inferred(o: Ontology, t: Taxonomy) -> Ontology:
    _require_coherent(t)
    asserted = {(ax.sub.iri, t.representative(ax.sup.iri)) for ax in _named_edges(o)}
    added: list[Axiom] = []
    for a in t.named():
        for b in t.direct_supers(a):
            if (a, b) not in asserted:
                added.append(SubClassOf(Named(a), Named(b), (INFERRED,)))
    if not added:
        return o
    return o.with_axioms(o.axioms + tuple(added))


def _agrees(reference: Taxonomy, candidate: Taxonomy) -> bool:
    classes = reference.classes
    for a in classes:
        expected = reference.supers[a]
        got = candidate.supers.get(a, frozenset({a, THING}))
        if (got & classes) != expected:
            return False
    return True


def transitive_reduction(o: Ontology, t: Taxonomy) -> Ontology:
    """Drop asserted named-named subsumptions implied through an intermediate class."""
    _require_coherent(t)
    inner = t.classes - {THING, NOTHING}
    redundant = []
    for ax in _named_edges(o):
        a, c = ax.sub.iri, ax.sup.iri
        if a == c or t.equivalent(a, c):
            continue
        for b in t.strict_supers(a):
            if b in inner and not t.equivalent(b, c) and c in t.strict_supers(b):
                redundant.append(ax)
                break
    if not redundant:
        return o
    drop = set(redundant)
    reduced = o.with_axioms(ax for ax in o.axioms if ax not in drop)
    if _agrees(t, classify(reduced)):
        return reduced
    # an edge can be needed to derive the intermediate subsumption itself;
    # fall back to removing candidates one at a time
    logger.debug("bulk reduction changed entailments; reducing edge by edge")
    current = o
    for ax in sorted(redundant, key=lambda x: (x.sub.iri, x.sup.iri)):
        trial = current.with_axioms(x for x in current.axioms if x != ax)
        if _agrees(t, classify(trial)):
            current = trial
    return current


__all__ = [
    "AUX_NAMESPACE",
    "NormalizedAxiomSet",
    "Taxonomy",
    "assert_inferred",
    "classify",
    "normalize",
    "saturate",
    "transitive_reduction",
    "unintended_equivalences",
    "unsatisfiable_classes",
]
