"""Reference implementations used only by the tests.

``dense_classify`` applies subexpression-level EL rules to exhaustion with no
normalization, indexing or work queue, so it shares no machinery with the
production classifier. ``random_ontology`` builds seeded random inputs.
"""

from __future__ import annotations

import itertools
import random

from ontoforge.model import (
    BOTTOM,
    CLASS,
    OBJECT_PROPERTY,
    OWL_NOTHING,
    OWL_THING,
    TOP,
    Declaration,
    DisjointClasses,
    EquivalentClasses,
    IntersectionOf,
    Named,
    Ontology,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    class_signature,
)


def _told(o: Ontology):
    gcis = []
    roles = set()
    for ax in o.axioms:
        if isinstance(ax, SubClassOf):
            gcis.append((ax.sub, ax.sup))
        elif isinstance(ax, EquivalentClasses):
            for c, d in itertools.permutations(ax.exprs, 2):
                gcis.append((c, d))
        elif isinstance(ax, DisjointClasses):
            for c, d in itertools.combinations(ax.exprs, 2):
                gcis.append((IntersectionOf((c, d)) if c != d else c, BOTTOM))
        elif isinstance(ax, SubObjectPropertyOf):
            roles.add((ax.sub, ax.sup))
    return gcis, roles


def _subexpressions(e, out: set) -> None:
    out.add(e)
    if isinstance(e, IntersectionOf):
        for c in e.conjuncts:
            _subexpressions(c, out)
    elif isinstance(e, SomeValuesFrom):
        _subexpressions(e.filler, out)


def _role_supers(roles, r):
    found = {r}
    changed = True
    while changed:
        changed = False
        for a, b in roles:
            if a in found and b not in found:
                found.add(b)
                changed = True
    return found


def dense_closure(o: Ontology) -> dict:
    """S(X) for every context X: subexpressions subsuming X."""
    gcis, roles = _told(o)
    subs: set = {TOP, BOTTOM}
    for c, d in gcis:
        _subexpressions(c, subs)
        _subexpressions(d, subs)
    for iri in class_signature(o):
        if iri not in (OWL_THING, OWL_NOTHING):
            subs.add(Named(iri))
    intersections = [e for e in subs if isinstance(e, IntersectionOf)]
    existentials = [e for e in subs if isinstance(e, SomeValuesFrom)]
    contexts = {e for e in subs if isinstance(e, Named)}
    S = {x: {x, TOP} for x in contexts}
    edges: set = set()
    changed = True
    while changed:
        changed = False
        for x in list(S):
            sx = S[x]
            new = set()
            for c, d in gcis:
                if c in sx:
                    new.add(d)
            for e in list(sx):
                if isinstance(e, IntersectionOf):
                    new.update(e.conjuncts)
                elif isinstance(e, SomeValuesFrom):
                    if (x, e.property, e.filler) not in edges:
                        edges.add((x, e.property, e.filler))
                        changed = True
                    if e.filler not in S:
                        S[e.filler] = {e.filler, TOP}
                        changed = True
            for e in intersections:
                if all(c in sx for c in e.conjuncts):
                    new.add(e)
            if not new <= sx:
                sx |= new
                changed = True
        for x, r, y in list(edges):
            sy = S[y]
            sx = S[x]
            if BOTTOM in sy and BOTTOM not in sx:
                sx.add(BOTTOM)
                changed = True
            ups = _role_supers(roles, r)
            for e in existentials:
                if e.property in ups and e.filler in sy and e not in sx:
                    sx.add(e)
                    changed = True
    return S


def dense_subsumptions(o: Ontology) -> set[tuple[str, str]]:
    """Pairs (A, B) with A subsumed by B over named classes plus Thing and Nothing."""
    S = dense_closure(o)
    named = sorted(class_signature(o) - {OWL_THING, OWL_NOTHING})
    universe = set(named) | {OWL_THING, OWL_NOTHING}
    pairs = set()
    for a in named:
        sa = S[Named(a)]
        if BOTTOM in sa:
            pairs.update((a, b) for b in universe)
            continue
        pairs.add((a, OWL_THING))
        pairs.update((a, e.iri) for e in sa if isinstance(e, Named))
    return pairs


def named_pairs(t, classes) -> set[tuple[str, str]]:
    keep = set(classes) | {OWL_THING, OWL_NOTHING}
    return {(a, b) for a in classes for b in t.supers[a] if b in keep}


# random inputs

NS = "http://example.org/r/"


def _expr(rng: random.Random, classes, roles, depth: int):
    roll = rng.random()
    if depth <= 0 or roll < 0.55:
        pick = rng.random()
        if pick < 0.02:
            return TOP
        if pick < 0.025:
            return BOTTOM
        return Named(rng.choice(classes))
    if roll < 0.8:
        return SomeValuesFrom(rng.choice(roles), _expr(rng, classes, roles, depth - 1))
    parts = list(dict.fromkeys(_expr(rng, classes, roles, depth - 1) for _ in range(rng.randint(2, 3))))
    if len(parts) < 2:
        return parts[0]
    return IntersectionOf(tuple(parts))


def random_ontology(seed: int, max_classes: int = 30, max_axioms: int = 60, disjoint_rate: float = 0.02) -> Ontology:
    rng = random.Random(seed)
    n_classes = rng.randint(3, max_classes)
    n_roles = rng.randint(1, 4)
    classes = [f"{NS}C{i}" for i in range(n_classes)]
    roles = [f"{NS}r{i}" for i in range(n_roles)]
    axioms = [Declaration(CLASS, c) for c in classes] + [Declaration(OBJECT_PROPERTY, r) for r in roles]
    for _ in range(rng.randint(1, max_axioms)):
        roll = rng.random()
        if roll < 0.6:
            sub = Named(rng.choice(classes)) if rng.random() < 0.7 else _expr(rng, classes, roles, 2)
            sup = _expr(rng, classes, roles, 2)
            axioms.append(SubClassOf(sub, sup))
        elif roll < 0.75:
            axioms.append(EquivalentClasses((Named(rng.choice(classes)), _expr(rng, classes, roles, 2))))
        elif roll < 0.75 + disjoint_rate:
            members = tuple(Named(c) for c in rng.sample(classes, min(len(classes), rng.randint(2, 3))))
            axioms.append(DisjointClasses(members))
        elif len(roles) > 1:
            a, b = rng.sample(roles, 2)
            axioms.append(SubObjectPropertyOf(a, b))
    return Ontology(ontology_iri=NS + "o", axioms=tuple(axioms))


__all__ = ["dense_closure", "dense_subsumptions", "named_pairs", "random_ontology"]
