"""Project configuration (``project.yaml``)."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import InvalidConfig
from .model import OBO, PrefixMap, default_prefix_map
from .qc import BUILTIN_CHECKS, SEVERITIES, CheckConfig, CustomCheck

logger = logging.getLogger(__name__)

FORMATS = ("ofn", "obo", "json")
PRODUCTS = ("base", "full", "simple")
METHODS = ("mireot", "slme_bot", "relation")
DEFAULT_LICENSE = "https://creativecommons.org/licenses/by/4.0/"
ID_PATTERN = re.compile(r"^[a-z][a-z0-9_]*$")
TOP_KEYS = (
    "id",
    "title",
    "license",
    "contact",
    "base_iri",
    "export_formats",
    "release_products",
    "imports",
    "checks",
    "prefixes",
)
IMPORT_KEYS = ("id", "source", "method", "relations")
CHECK_KEYS = ("enabled", "disabled", "severity_overrides", "custom")


@dataclass(frozen=True)
class ImportConfig:
    id: str
    source: str
    method: str = "slme_bot"
    relations: tuple[str, ...] = ()


@dataclass(frozen=True)
class ChecksConfig:
    enabled: tuple[str, ...] = ()
    disabled: tuple[str, ...] = ()
    severity_overrides: tuple[tuple[str, str], ...] = ()
    custom: tuple[CustomCheck, ...] = ()


@dataclass(frozen=True)
class ProjectConfig:
    id: str
    title: str = ""
    license: str = DEFAULT_LICENSE
    contact: str = ""
    base_iri: str = ""
    export_formats: tuple[str, ...] = FORMATS
    release_products: tuple[str, ...] = PRODUCTS
    imports: tuple[ImportConfig, ...] = ()
    checks: ChecksConfig = field(default_factory=ChecksConfig)
    prefixes: tuple[tuple[str, str], ...] = ()

    @property
    def id_prefix(self) -> str:
        return self.id.upper()

    @property
    def ontology_iri(self) -> str:
        return f"{OBO}{self.id}.owl"

    @property
    def edit_file(self) -> str:
        return f"src/ontology/{self.id}-edit.ofn"

    def import_by_id(self, import_id: str) -> ImportConfig | None:
        for imp in self.imports:
            if imp.id == import_id:
                return imp
        return None

    def prefix_map(self) -> PrefixMap:
        """Defaults, one OBO-style prefix per import and the project, then user entries."""
        entries = {imp.id.upper(): f"{OBO}{imp.id.upper()}_" for imp in self.imports}
        entries[self.id_prefix] = self.base_iri
        entries.update(dict(self.prefixes))
        return default_prefix_map(entries)

    def check_config(self) -> CheckConfig:
        return CheckConfig(
            enabled=list(self.checks.enabled),
            disabled=list(self.checks.disabled),
            severity_overrides=dict(self.checks.severity_overrides),
            base_iri_prefixes=[self.base_iri],
            custom_checks=list(self.checks.custom),
        )


def _string_list(value, path: str) -> tuple[str, ...]:
    if value is None:
        return ()
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InvalidConfig(path, "expected a list of strings")
    return tuple(value)


def _subset(value, path: str, allowed: tuple[str, ...]) -> tuple[str, ...]:
    items = _string_list(value, path)
    if not items:
        raise InvalidConfig(path, "must not be empty")
    bad = [v for v in items if v not in allowed]
    if bad:
        raise InvalidConfig(path, f"unknown value(s) {bad}; allowed: {list(allowed)}")
    # keep canonical order, drop duplicates
    return tuple(v for v in allowed if v in items)


def _warn_unknown(data: dict, allowed: tuple[str, ...], path: str, warnings: list[str]) -> None:
    for key in data:
        if key not in allowed:
            msg = f"{path}{key}: unknown key ignored"
            warnings.append(msg)
            logger.warning(msg)


def _parse_import(item, n: int, warnings: list[str]) -> ImportConfig:
    path = f"imports[{n}]"
    if not isinstance(item, dict):
        raise InvalidConfig(path, "expected a mapping")
    _warn_unknown(item, IMPORT_KEYS, path + ".", warnings)
    imp_id = item.get("id")
    if not isinstance(imp_id, str) or not ID_PATTERN.match(imp_id):
        raise InvalidConfig(path + ".id", f"invalid import id {imp_id!r}")
    source = item.get("source")
    if not isinstance(source, str) or not source:
        raise InvalidConfig(path + ".source", "a source URL or path is required")
    method = item.get("method", "slme_bot")
    if method not in METHODS:
        raise InvalidConfig(path + ".method", f"unknown method {method!r}; allowed: {list(METHODS)}")
    relations = _string_list(item.get("relations"), path + ".relations")
    if method == "relation" and not relations:
        raise InvalidConfig(path + ".relations", "the relation method needs at least one relation")
    if method != "relation" and relations:
        raise InvalidConfig(path + ".relations", f"relations are only allowed for the relation method, not {method}")
    return ImportConfig(imp_id, source, method, relations)


def _parse_checks(data, warnings: list[str]) -> ChecksConfig:
    if data is None:
        return ChecksConfig()
    if not isinstance(data, dict):
        raise InvalidConfig("checks", "expected a mapping")
    _warn_unknown(data, CHECK_KEYS, "checks.", warnings)
    customs = []
    for n, item in enumerate(data.get("custom") or []):
        if not isinstance(item, dict):
            raise InvalidConfig(f"checks.custom[{n}]", "expected a mapping")
        try:
            customs.append(CustomCheck(**item))
        except (TypeError, ValueError) as exc:
            raise InvalidConfig(f"checks.custom[{n}]", str(exc)) from None
    enabled = _string_list(data.get("enabled"), "checks.enabled")
    disabled = _string_list(data.get("disabled"), "checks.disabled")
    overrides = data.get("severity_overrides") or {}
    if not isinstance(overrides, dict):
        raise InvalidConfig("checks.severity_overrides", "expected a mapping")
    known = set(BUILTIN_CHECKS) | {c.id for c in customs}
    for key, ids in (("enabled", enabled), ("disabled", disabled), ("severity_overrides", list(overrides))):
        unknown = sorted(set(ids) - known)
        if unknown:
            raise InvalidConfig(f"checks.{key}", f"unknown check id(s) {unknown}")
    for check, sev in overrides.items():
        if sev not in SEVERITIES:
            raise InvalidConfig(f"checks.severity_overrides.{check}", f"unknown severity {sev!r}")
    try:
        CheckConfig(list(enabled), list(disabled), dict(overrides), [], customs)
    except ValueError as exc:
        raise InvalidConfig("checks", str(exc)) from None
    return ChecksConfig(enabled, disabled, tuple(sorted(overrides.items())), tuple(customs))


def parse_config(yaml_text: str, warnings: list[str] | None = None) -> ProjectConfig:
    warnings = warnings if warnings is not None else []
    try:
        data = yaml.safe_load(yaml_text)
    except yaml.YAMLError as exc:
        line = getattr(getattr(exc, "problem_mark", None), "line", None)
        raise InvalidConfig(f"line {line + 1}" if line is not None else "<document>", "invalid YAML") from exc
    if not isinstance(data, dict):
        raise InvalidConfig("<document>", "expected a YAML mapping")
    _warn_unknown(data, TOP_KEYS, "", warnings)

    pid = data.get("id")
    if not isinstance(pid, str) or not ID_PATTERN.match(pid):
        raise InvalidConfig("id", f"{pid!r} does not match {ID_PATTERN.pattern}")
    for key in ("title", "license", "contact", "base_iri"):
        if key in data and not isinstance(data[key], str):
            raise InvalidConfig(key, "expected a string")

    base_iri = data.get("base_iri") or f"{OBO}{pid.upper()}_"
    imports_raw = data.get("imports") or []
    if not isinstance(imports_raw, list):
        raise InvalidConfig("imports", "expected a list")
    imports = tuple(_parse_import(item, n, warnings) for n, item in enumerate(imports_raw))
    seen: set[str] = set()
    for n, imp in enumerate(imports):
        if imp.id in seen:
            raise InvalidConfig(f"imports[{n}].id", f"duplicate import id {imp.id!r}")
        seen.add(imp.id)

    prefixes_raw = data.get("prefixes") or {}
    if not isinstance(prefixes_raw, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in prefixes_raw.items()
    ):
        raise InvalidConfig("prefixes", "expected a mapping of prefix name to IRI prefix")

    return ProjectConfig(
        id=pid,
        title=data.get("title") or pid,
        license=data.get("license") or DEFAULT_LICENSE,
        contact=data.get("contact") or "",
        base_iri=base_iri,
        export_formats=_subset(data.get("export_formats", list(FORMATS)), "export_formats", FORMATS),
        release_products=_subset(data.get("release_products", list(PRODUCTS)), "release_products", PRODUCTS),
        imports=imports,
        checks=_parse_checks(data.get("checks"), warnings),
        prefixes=tuple(sorted(prefixes_raw.items())),
    )


def config_to_dict(cfg: ProjectConfig) -> dict:
    imports = []
    for imp in cfg.imports:
        entry = {"id": imp.id, "source": imp.source, "method": imp.method}
        if imp.relations:
            entry["relations"] = list(imp.relations)
        imports.append(entry)
    checks: dict = {
        "enabled": list(cfg.checks.enabled),
        "disabled": list(cfg.checks.disabled),
        "severity_overrides": dict(cfg.checks.severity_overrides),
    }
    if cfg.checks.custom:
        checks["custom"] = [
            {
                "id": c.id,
                "severity": c.severity,
                "property": c.property,
                "mode": c.mode,
                "kind": c.kind,
                "pattern": c.pattern,
                "native_only": c.native_only,
                "skip_obsolete": c.skip_obsolete,
                "message": c.message,
            }
            for c in cfg.checks.custom
        ]
    return {
        "id": cfg.id,
        "title": cfg.title,
        "license": cfg.license,
        "contact": cfg.contact,
        "base_iri": cfg.base_iri,
        "export_formats": list(cfg.export_formats),
        "release_products": list(cfg.release_products),
        "imports": imports,
        "checks": checks,
        "prefixes": dict(cfg.prefixes),
    }


def to_yaml(cfg: ProjectConfig) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False, allow_unicode=True)


def load_config(path: str | Path) -> ProjectConfig:
    path = Path(path)
    try:
        return parse_config(path.read_text(encoding="utf-8"))
    except InvalidConfig as exc:
        raise InvalidConfig(f"{path}: {exc.path}", exc.reason) from None
