"""Exception hierarchy shared by every ontoforge module."""

from __future__ import annotations


class OntoforgeError(Exception):
    """Base class for all toolkit errors."""


class UnknownPrefix(OntoforgeError):
    def __init__(self, prefix: str, curie: str = "") -> None:
        self.prefix = prefix
        self.curie = curie
        super().__init__(f"unknown prefix {prefix!r}" + (f" in {curie!r}" if curie else ""))


class ParseError(OntoforgeError):
    """Malformed input; ``line`` is 1-based, 0 when unknown."""

    def __init__(self, reason: str, line: int = 0, source: str | None = None) -> None:
        self.reason = reason
        self.line = line
        self.source = source
        where = source or "<input>"
        if line:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {reason}")


class DuplicateId(ParseError):
    pass


class Inexpressible(OntoforgeError):
    """Axioms that have no representation in the target format."""

    def __init__(self, axioms: list) -> None:
        self.axioms = list(axioms)
        preview = "; ".join(str(a) for a in self.axioms[:3])
        more = f" (+{len(self.axioms) - 3} more)" if len(self.axioms) > 3 else ""
        super().__init__(f"{len(self.axioms)} axiom(s) not expressible: {preview}{more}")


class UnsupportedConstruct(OntoforgeError):
    pass


class IncoherentOntology(OntoforgeError):
    def __init__(self, unsatisfiable: list[str]) -> None:
        self.unsatisfiable = sorted(unsatisfiable)
        super().__init__("unsatisfiable classes: " + ", ".join(self.unsatisfiable))


class MissingTaxonomy(OntoforgeError):
    pass


class MirrorUnavailable(OntoforgeError):
    pass


class UnknownImportId(OntoforgeError):
    pass


class InvalidConfig(OntoforgeError):
    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class TargetNotEmpty(OntoforgeError):
    pass


class NotAProject(OntoforgeError):
    pass


class TemplateError(OntoforgeError):
    """Template compilation failure; row/column are 1-based when known."""

    def __init__(self, reason: str, row: int | None = None, column: str | None = None) -> None:
        self.reason = reason
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = (", ".join(where) + ": ") if where else ""
        super().__init__(prefix + reason)


class UnboundVariable(TemplateError):
    pass


class ExpressionSyntaxError(TemplateError):
    pass


class UnknownTemplateString(TemplateError):
    pass


class PatternError(TemplateError):
    pass


class QCGateFailed(OntoforgeError):
    def __init__(self, report) -> None:
        self.report = report
        n = sum(1 for row in report.rows if row.severity == "ERROR")
        super().__init__(f"QC gate failed with {n} ERROR row(s)")


class ReleaseStepError(OntoforgeError):
    def __init__(self, step: int, cause: Exception) -> None:
        self.step = step
        self.cause = cause
        super().__init__(f"release step {step} failed: {cause}")


class SeedNotFound(OntoforgeError):
    def __init__(self, iri: str) -> None:
        self.iri = iri
        super().__init__(f"seed term not found in source: {iri}")
