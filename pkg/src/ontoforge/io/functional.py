"""OWL functional-syntax subset: lossless reader and deterministic writer."""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass

from ..errors import ParseError
from ..model import (
    ANNOTATION_PROPERTY,
    BOTTOM,
    CLASS,
    DEFAULT_PREFIXES,
    OBJECT_PROPERTY,
    OWL_NOTHING,
    OWL_THING,
    TOP,
    Annotation,
    AnnotationAssertion,
    Axiom,
    Bottom,
    ClassExpression,
    Declaration,
    DisjointClasses,
    EquivalentClasses,
    IntersectionOf,
    Literal,
    Named,
    Ontology,
    PrefixMap,
    SomeValuesFrom,
    SubClassOf,
    SubObjectPropertyOf,
    Top,
    is_absolute_iri,
)

# prefixes resolvable even when a document does not declare them
_BUILTIN = {k: DEFAULT_PREFIXES[k] for k in ("owl", "rdf", "rdfs", "xsd")}
_SAFE_LOCAL = re.compile(r"^[A-Za-z0-9_\-.]*$")
_DELIMS = set("()\"<")


@dataclass
class _Token:
    kind: str  # "(" ")" iri name literal eof
    value: object
    line: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n, line = 0, len(text), 1
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
        elif c.isspace():
            i += 1
        elif c == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            tokens.append(_Token(c, c, line))
            i += 1
        elif c == "<":
            end = text.find(">", i)
            if end < 0:
                raise ParseError("unterminated IRI", line)
            iri = text[i + 1 : end]
            if any(ch.isspace() for ch in iri):
                raise ParseError(f"whitespace in IRI <{iri}>", line)
            tokens.append(_Token("iri", iri, line))
            i = end + 1
        elif c == '"':
            start_line = line
            i += 1
            buf = []
            while True:
                if i >= n:
                    raise ParseError("unterminated string literal", start_line)
                ch = text[i]
                if ch == "\\" and i + 1 < n:
                    buf.append(text[i + 1])
                    i += 2
                    continue
                if ch == '"':
                    i += 1
                    break
                if ch == "\n":
                    line += 1
                buf.append(ch)
                i += 1
            lexical = "".join(buf)
            lang = datatype = None
            if text.startswith("^^", i):
                i += 2
                if i < n and text[i] == "<":
                    end = text.find(">", i)
                    if end < 0:
                        raise ParseError("unterminated datatype IRI", line)
                    datatype = ("iri", text[i + 1 : end])
                    i = end + 1
                else:
                    j = i
                    while j < n and not text[j].isspace() and text[j] not in _DELIMS:
                        j += 1
                    if j == i:
                        raise ParseError("expected datatype after '^^'", line)
                    datatype = ("name", text[i:j])
                    i = j
            elif text.startswith("@", i):
                j = i + 1
                while j < n and (text[j].isalnum() or text[j] == "-"):
                    j += 1
                lang = text[i + 1 : j]
                if not lang:
                    raise ParseError("empty language tag", line)
                i = j
            tokens.append(_Token("literal", (lexical, datatype, lang), start_line))
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in _DELIMS:
                j += 1
            tokens.append(_Token("name", text[i:j], line))
            i = j
    tokens.append(_Token("eof", None, line))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.pos = 0
        self.prefixes: dict[str, str] = {}

    # -- token helpers
    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {what or repr(kind)}, found {self._show(tok)}", tok.line)
        return tok

    def expect_keyword(self, word: str) -> None:
        tok = self.next()
        if tok.kind != "name" or tok.value != word:
            raise ParseError(f"expected {word!r}, found {self._show(tok)}", tok.line)

    @staticmethod
    def _show(tok: _Token) -> str:
        if tok.kind == "eof":
            return "end of input"
        if tok.kind == "literal":
            return "string literal"
        return repr(tok.value)

    def at_keyword(self, word: str | None = None) -> bool:
        tok = self.peek()
        if tok.kind != "name" or self.peek(1).kind != "(":
            return False
        return word is None or tok.value == word

    def resolve(self, tok: _Token) -> str:
        if tok.kind == "iri":
            return tok.value
        if tok.kind != "name":
            raise ParseError(f"expected IRI, found {self._show(tok)}", tok.line)
        name = tok.value
        if is_absolute_iri(name):
            raise ParseError(f"absolute IRI must be enclosed in <>: {name}", tok.line)
        prefix, sep, local = name.partition(":")
        if not sep:
            raise ParseError(f"expected IRI, found {name!r}", tok.line)
        if prefix in self.prefixes:
            return self.prefixes[prefix] + local
        if prefix in _BUILTIN:
            return _BUILTIN[prefix] + local
        raise ParseError(f"undeclared prefix {prefix!r}", tok.line)

    def iri(self) -> str:
        return self.resolve(self.next())

    # -- grammar
    def document(self) -> Ontology:
        while self.at_keyword("Prefix"):
            self.prefix_decl()
        self.expect_keyword("Ontology")
        self.expect("(")
        ontology_iri = version_iri = None
        if self.peek().kind == "iri" or (self.peek().kind == "name" and self.peek(1).kind != "("):
            ontology_iri = self.iri()
            if self.peek().kind == "iri" or (self.peek().kind == "name" and self.peek(1).kind != "("):
                version_iri = self.iri()
        imports = []
        while self.at_keyword("Import"):
            self.next()
            self.expect("(")
            imports.append(self.iri())
            self.expect(")")
        annotations = []
        while self.at_keyword("Annotation"):
            annotations.append(self.annotation())
        axioms = []
        while self.peek().kind != ")":
            axioms.append(self.axiom())
        self.expect(")")
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected {self._show(tok)} after ontology", tok.line)
        if version_iri is not None and version_iri == ontology_iri:
            raise ParseError("version IRI equals ontology IRI", tok.line)
        return Ontology(
            ontology_iri=ontology_iri,
            version_iri=version_iri,
            imports=tuple(imports),
            prefix_map=PrefixMap(self.prefixes),
            axioms=tuple(axioms),
            ontology_annotations=tuple(annotations),
        )

    def prefix_decl(self) -> None:
        self.next()
        self.expect("(")
        tok = self.expect("name", "prefix name")
        name = tok.value
        if name.endswith(":="):
            name = name[:-2]
        elif name.endswith(":"):
            name = name[:-1]
            eq = self.expect("name", "'='")
            if eq.value != "=":
                raise ParseError("expected '=' in prefix declaration", eq.line)
        else:
            raise ParseError(f"malformed prefix name {tok.value!r}", tok.line)
        if ":" in name:
            raise ParseError(f"malformed prefix name {tok.value!r}", tok.line)
        iri = self.expect("iri", "prefix IRI").value
        if name in self.prefixes:
            raise ParseError(f"duplicate prefix {name!r}", tok.line)
        self.prefixes[name] = iri
        self.expect(")")

    def value(self) -> Literal | str:
        tok = self.next()
        if tok.kind == "literal":
            lexical, datatype, lang = tok.value
            dt = None
            if datatype is not None:
                kind, raw = datatype
                dt = raw if kind == "iri" else self.resolve(_Token("name", raw, tok.line))
            return Literal(lexical, dt, lang)
        return self.resolve(tok)

    def annotation(self) -> Annotation:
        self.expect_keyword("Annotation")
        self.expect("(")
        if self.at_keyword("Annotation"):
            raise ParseError("nested annotations are not supported", self.peek().line)
        prop = self.iri()
        value = self.value()
        self.expect(")")
        return Annotation(prop, value)

    def axiom_annotations(self) -> tuple[Annotation, ...]:
        out = []
        while self.at_keyword("Annotation"):
            out.append(self.annotation())
        return tuple(out)

    def class_expression(self) -> ClassExpression:
        tok = self.peek()
        if self.at_keyword():
            self.next()
            self.expect("(")
            if tok.value == "ObjectIntersectionOf":
                conjuncts = []
                while self.peek().kind != ")":
                    conjuncts.append(self.class_expression())
                self.expect(")")
                if len(conjuncts) < 2:
                    raise ParseError("ObjectIntersectionOf needs at least two operands", tok.line)
                return IntersectionOf(tuple(conjuncts))
            if tok.value == "ObjectSomeValuesFrom":
                prop = self.iri()
                filler = self.class_expression()
                self.expect(")")
                return SomeValuesFrom(prop, filler)
            raise ParseError(f"unsupported class expression {tok.value!r}", tok.line)
        iri = self.iri()
        if iri == OWL_THING:
            return TOP
        if iri == OWL_NOTHING:
            return BOTTOM
        return Named(iri)

    def axiom(self) -> Axiom:
        tok = self.peek()
        if not self.at_keyword():
            raise ParseError(f"expected axiom, found {self._show(tok)}", tok.line)
        keyword = tok.value
        self.next()
        self.expect("(")
        anns = self.axiom_annotations()
        if keyword == "Declaration":
            kind_tok = self.expect("name", "entity kind")
            if kind_tok.value not in (CLASS, OBJECT_PROPERTY, ANNOTATION_PROPERTY):
                raise ParseError(f"unsupported declaration kind {kind_tok.value!r}", kind_tok.line)
            self.expect("(")
            entity = self.iri()
            self.expect(")")
            ax: Axiom = Declaration(kind_tok.value, entity, anns)
        elif keyword == "SubClassOf":
            sub = self.class_expression()
            sup = self.class_expression()
            ax = SubClassOf(sub, sup, anns)
        elif keyword in ("EquivalentClasses", "DisjointClasses"):
            exprs = []
            while self.peek().kind != ")":
                exprs.append(self.class_expression())
            if len(exprs) < 2:
                raise ParseError(f"{keyword} needs at least two operands", tok.line)
            cls = EquivalentClasses if keyword == "EquivalentClasses" else DisjointClasses
            ax = cls(tuple(exprs), anns)
        elif keyword == "SubObjectPropertyOf":
            sub_p = self.iri()
            sup_p = self.iri()
            ax = SubObjectPropertyOf(sub_p, sup_p, anns)
        elif keyword == "AnnotationAssertion":
            prop = self.iri()
            subject = self.iri()
            value = self.value()
            ax = AnnotationAssertion(subject, Annotation(prop, value), anns)
        else:
            raise ParseError(f"unsupported axiom type {keyword!r}", tok.line)
        self.expect(")")
        return ax


def parse_functional(text: str, source: str | None = None) -> Ontology:
    try:
        return _Parser(text).document()
    except ParseError as exc:
        if source and exc.source is None:
            raise ParseError(exc.reason, exc.line, source) from None
        raise


# -- writer -----------------------------------------------------------------


class _Writer:
    def __init__(self, pm: Mapping[str, str]) -> None:
        self.pm = dict(pm)

    def iri(self, iri: str) -> str:
        best = None
        for name, prefix in self.pm.items():
            if prefix and iri.startswith(prefix) and (best is None or len(prefix) > len(best[1])):
                best = (name, prefix)
        if best is not None:
            local = iri[len(best[1]) :]
            if _SAFE_LOCAL.match(local):
                return f"{best[0]}:{local}"
        return f"<{iri}>"

    def literal(self, lit: Literal) -> str:
        body = lit.lexical.replace("\\", "\\\\").replace('"', '\\"')
        out = f'"{body}"'
        if lit.lang is not None:
            out += "@" + lit.lang
        elif lit.datatype is not None:
            out += "^^" + self.iri(lit.datatype)
        return out

    def value(self, value: Literal | str) -> str:
        return self.literal(value) if isinstance(value, Literal) else self.iri(value)

    def annotation(self, ann: Annotation) -> str:
        return f"Annotation({self.iri(ann.property)} {self.value(ann.value)})"

    def expr(self, e: ClassExpression) -> str:
        if isinstance(e, Top):
            return self.iri(OWL_THING)
        if isinstance(e, Bottom):
            return self.iri(OWL_NOTHING)
        if isinstance(e, Named):
            return self.iri(e.iri)
        if isinstance(e, SomeValuesFrom):
            return f"ObjectSomeValuesFrom({self.iri(e.property)} {self.expr(e.filler)})"
        if isinstance(e, IntersectionOf):
            return "ObjectIntersectionOf(" + " ".join(self.expr(c) for c in e.conjuncts) + ")"
        raise TypeError(e)

    def axiom(self, ax: Axiom) -> str:
        parts = [self.annotation(a) for a in ax.annotations]
        if isinstance(ax, Declaration):
            parts.append(f"{ax.kind}({self.iri(ax.entity)})")
            name = "Declaration"
        elif isinstance(ax, SubClassOf):
            parts += [self.expr(ax.sub), self.expr(ax.sup)]
            name = "SubClassOf"
        elif isinstance(ax, (EquivalentClasses, DisjointClasses)):
            parts += [self.expr(e) for e in ax.exprs]
            name = type(ax).__name__
        elif isinstance(ax, SubObjectPropertyOf):
            parts += [self.iri(ax.sub), self.iri(ax.sup)]
            name = "SubObjectPropertyOf"
        elif isinstance(ax, AnnotationAssertion):
            parts += [self.iri(ax.property), self.iri(ax.subject), self.value(ax.value)]
            name = "AnnotationAssertion"
        else:
            raise TypeError(ax)
        return f"{name}({' '.join(parts)})"


def emit_functional(o: Ontology) -> str:
    w = _Writer(o.prefix_map)
    lines = [f"Prefix({name}:=<{o.prefix_map[name]}>)" for name in sorted(o.prefix_map)]
    if lines:
        lines.append("")
    header = [f"<{i}>" for i in (o.ontology_iri, o.version_iri) if i]
    body = [f"Import(<{i}>)" for i in o.imports]
    body += [w.annotation(a) for a in o.ontology_annotations]
    if body and o.axioms:
        body.append("")
    body += [w.axiom(ax) for ax in o.axioms]
    if not body:
        lines.append(f"Ontology({' '.join(header)})")
    else:
        lines.append(f"Ontology({' '.join(header)}".rstrip())
        lines.extend(body)
        lines.append(")")
    return "\n".join(lines) + "\n"
