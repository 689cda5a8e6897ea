"""Build a dependency network from Java-style sources by scanning text.

No parser is involved: comments and literals are blanked out, then the
``package``, ``import`` and type-declaration headers are matched with regular
expressions. Every top-level type becomes one node; nested types count as
part of the file's primary unit.

Resolution rules for a supertype name written in a file:

* a qualified name (``q.B``) is looked up as is;
* a simple name matches the single-type import ending in ``.B``;
* otherwise it resolves to ``<same package>.B`` if that unit was scanned.

Imports become ``imports`` edges when they name a scanned unit. Wildcard
imports never produce edges; they are only counted. Supertype edges are added
before import edges, so a class that both imports and extends B keeps the
``extends`` kind.
"""

from __future__ import annotations

import fnmatch
import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import DuplicateNodeError
from .network import DependencyEdge, DependencyNetwork, EdgeKind, ElementKind, ProgramElement

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtractionConfig:
    exclude_prefixes: tuple[str, ...] = ("java.", "javax.")
    drop_unused_imports: bool = True
    include_package_nodes: bool = False

    def __post_init__(self):
        if any(not p for p in self.exclude_prefixes):
            raise ValueError("exclude prefixes must be non-empty strings")


@dataclass(frozen=True)
class SourceUnit:
    path: str
    package: str
    unit_name: str
    imports: tuple[str, ...] = ()
    extends: tuple[str, ...] = ()
    implements: tuple[str, ...] = ()
    wildcard_imports: tuple[str, ...] = ()
    kind: ElementKind = ElementKind.CLASS
    body: str = ""

    @property
    def supertypes(self) -> list[str]:
        return list(self.extends) + list(self.implements)

    @property
    def qualified_name(self) -> str:
        return f"{self.package}.{self.unit_name}" if self.package else self.unit_name


@dataclass
class ExtractionReport:
    units: int = 0
    wildcard_imports: list[tuple[str, str]] = field(default_factory=list)
    unresolved: list[tuple[str, str]] = field(default_factory=list)
    excluded: int = 0
    unused_dropped: int = 0
    unscannable: list[str] = field(default_factory=list)

    def summary(self) -> str:
        lines = [f"scanned units: {self.units}",
                 f"wildcard imports skipped: {len(self.wildcard_imports)}",
                 f"unresolved names: {len(self.unresolved)}",
                 f"platform imports excluded: {self.excluded}",
                 f"unused imports dropped: {self.unused_dropped}"]
        if self.unscannable:
            lines.append(f"files without a type declaration: {len(self.unscannable)}")
        for unit, name in self.wildcard_imports:
            lines.append(f"  wildcard {name} in {unit}")
        for unit, name in self.unresolved:
            lines.append(f"  unresolved {name} in {unit}")
        return "\n".join(lines)


_STRIP = re.compile(r'''
    (?P<block>/\*.*?\*/)
  | (?P<line>//[^\n]*)
  | (?P<text>""".*?""")
  | (?P<string>"(?:\\.|[^"\\\n])*")
  | (?P<char>'(?:\\.|[^'\\\n])*')
''', re.VERBOSE | re.DOTALL)


def strip_comments_and_literals(text: str) -> str:
    """Blank out comments and string/char literals, keeping line breaks."""
    def blank(m: re.Match) -> str:
        kept = re.sub(r"[^\n]", " ", m.group())
        if m.lastgroup in ("string", "text", "char"):
            return m.group()[0] + kept[1:-1] + m.group()[-1]
        return kept
    return _STRIP.sub(blank, text)


_PACKAGE = re.compile(r"\bpackage\s+([\w.]+)\s*;")
_IMPORT = re.compile(r"\bimport\s+(static\s+)?([\w.]+?)(\s*\.\s*\*)?\s*;")
_TYPE_DECL = re.compile(
    r"(?<![\w.$])(?P<kw>@\s*interface|class|interface|enum|record)\s+(?P<name>[A-Za-z_$][\w$]*)")
_IDENT = re.compile(r"[A-Za-z_$][\w$]*")


def _header(text: str, start: int) -> str:
    end = text.find("{", start)
    return text[start:end if end >= 0 else len(text)]


def _strip_generics(text: str) -> str:
    previous = None
    while previous != text:
        previous = text
        text = re.sub(r"<[^<>]*>", " ", text)
    return text


def _type_list(header: str, keyword: str, stops: tuple[str, ...]) -> list[str]:
    m = re.search(rf"\b{keyword}\b(.*)", header, re.DOTALL)
    if not m:
        return []
    rest = m.group(1)
    for stop in stops:
        rest = re.split(rf"\b{stop}\b", rest)[0]
    names = []
    for part in rest.split(","):
        part = re.sub(r"@\s*[\w.]+(\([^)]*\))?", " ", part)   # type annotations
        part = re.sub(r"\s*\.\s*", ".", part.strip())
        m2 = re.match(r"[A-Za-z_$][\w$.]*", part)
        if m2:
            names.append(m2.group().rstrip("."))
    return names


def _depths(text: str) -> list[int]:
    depth = 0
    out = []
    for ch in text:
        out.append(depth)
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth = max(depth - 1, 0)
    return out


def scan_source(text: str, path: str = "<source>") -> SourceUnit:
    """Read package, imports and type headers from one source file."""
    code = strip_comments_and_literals(text)

    package_match = _PACKAGE.search(code)
    package = package_match.group(1) if package_match else ""

    imports, wildcards = [], []
    for m in _IMPORT.finditer(code):
        name = re.sub(r"\s+", "", m.group(2))
        if m.group(1):
            # import static p.C.member / p.C.*: the dependency is on type p.C
            if not m.group(3):
                name = name.rsplit(".", 1)[0] if "." in name else name
            imports.append(name)
        elif m.group(3):
            wildcards.append(name + ".*")
        else:
            imports.append(name)

    depth = _depths(code)
    declarations = []
    for m in _TYPE_DECL.finditer(code):
        kw = re.sub(r"\s+", "", m.group("kw"))
        if kw == "record" and not re.match(r"\s*[(<]", code[m.end():]):
            continue
        declarations.append((depth[m.start()], kw, m.group("name"), m.end()))

    top_level = [d for d in declarations if d[0] == 0]
    stem = Path(path).stem
    if not top_level:
        log.warning("%s: no type declaration found", path)
        return SourceUnit(path, package, stem or "<unnamed>", body="")

    def is_public(decl):
        head = code[max(0, code.rfind("\n", 0, decl[3]) + 1):decl[3]]
        return re.search(r"\bpublic\b", head) is not None

    primary = next((d for d in top_level if d[2] == stem), None) \
        or next((d for d in top_level if is_public(d)), None) or top_level[0]

    extends, implements = [], []
    for _, kw, _name, end in declarations:
        header = _strip_generics(_header(code, end))
        stops = ("implements", "permits") if kw != "interface" else ("permits",)
        for name in _type_list(header, "extends", stops):
            if name not in extends:
                extends.append(name)
        for name in _type_list(header, "implements", ("permits",)):
            if name not in implements:
                implements.append(name)

    kind = ElementKind.INTERFACE if primary[1] in ("interface", "@interface") else ElementKind.CLASS
    body = _IMPORT.sub(" ", _PACKAGE.sub(" ", code))
    return SourceUnit(path=path, package=package, unit_name=primary[2],
                      imports=tuple(dict.fromkeys(imports)), extends=tuple(extends),
                      implements=tuple(implements), wildcard_imports=tuple(wildcards),
                      kind=kind, body=body)


def filter_unused_imports(unit: SourceUnit, body_text: str) -> SourceUnit:
    """Keep an import ``p.q.C`` only if ``C`` occurs as a token in the body.

    ``body_text`` must already have comments and literals removed and should
    not contain the import statements themselves.
    """
    tokens = set(_IDENT.findall(body_text))
    kept = tuple(name for name in unit.imports if name.rsplit(".", 1)[-1] in tokens)
    return replace(unit, imports=kept)


def _excluded(name: str, prefixes) -> bool:
    return any(name.startswith(p) or name == p.rstrip(".") for p in prefixes)


def build_network(units, config: ExtractionConfig | None = None,
                  report: ExtractionReport | None = None) -> DependencyNetwork:
    """One node per unit (id and name = qualified name), edges between scanned units."""
    config = config or ExtractionConfig()
    report = report if report is not None else ExtractionReport()
    units = sorted(units, key=lambda u: (u.qualified_name, u.path))
    if not units:
        raise ValueError("no source units to build a network from")

    by_name: dict[str, SourceUnit] = {}
    for unit in units:
        if unit.qualified_name in by_name:
            raise DuplicateNodeError(f"two units named {unit.qualified_name!r}: "
                                     f"{by_name[unit.qualified_name].path}, {unit.path}")
        by_name[unit.qualified_name] = unit
    report.units = len(units)

    net = DependencyNetwork()
    for unit in units:
        net.add_node(ProgramElement(unit.qualified_name, unit.qualified_name, unit.kind))

    def link(source: str, target: str, kind: EdgeKind):
        if target != source:
            net.add_edge(DependencyEdge(source, target, kind))

    for unit in units:
        me = unit.qualified_name
        for name in unit.wildcard_imports:
            report.wildcard_imports.append((me, name))
        imports = [i for i in unit.imports if not _excluded(i, config.exclude_prefixes)]
        report.excluded += len(unit.imports) - len(imports)
        if config.drop_unused_imports:
            kept = filter_unused_imports(replace(unit, imports=tuple(imports)), unit.body).imports
            report.unused_dropped += len(imports) - len(kept)
            imports = list(kept)
        simple = {i.rsplit(".", 1)[-1]: i for i in unit.imports}

        for names, kind in ((unit.extends, EdgeKind.EXTENDS), (unit.implements, EdgeKind.IMPLEMENTS)):
            for name in names:
                target = _resolve_type(name, unit, simple, by_name)
                if target is None:
                    if not _excluded(simple.get(name.split(".")[0], name), config.exclude_prefixes):
                        report.unresolved.append((me, name))
                    continue
                if _excluded(target, config.exclude_prefixes):
                    continue
                link(me, target, kind)

        for name in imports:
            target = _resolve_import(name, by_name)
            if target is None:
                report.unresolved.append((me, name))
                continue
            link(me, target, EdgeKind.IMPORTS)

    if config.include_package_nodes:
        _add_package_nodes(net, units)
    return net


def _resolve_import(name: str, by_name: dict[str, SourceUnit]) -> str | None:
    # Nested type imports (p.Outer.Inner) fall back to their top-level unit.
    while name:
        if name in by_name:
            return name
        if "." not in name:
            return None
        name = name.rsplit(".", 1)[0]
    return None


def _resolve_type(name: str, unit: SourceUnit, simple: dict[str, str],
                  by_name: dict[str, SourceUnit]) -> str | None:
    head = name.split(".")[0]
    if head in simple:
        return _resolve_import(simple[head] + name[len(head):], by_name)
    if unit.package:
        local = f"{unit.package}.{name}"
        found = _resolve_import(local, by_name)
        if found and found != unit.qualified_name:
            return found
    if "." in name:
        return _resolve_import(name, by_name)
    return None


def _add_package_nodes(net: DependencyNetwork, units) -> None:
    packages = sorted({u.package for u in units if u.package})
    owner = {u.qualified_name: u.package for u in units}
    for package in packages:
        pid = f"package:{package}"
        net.add_node(ProgramElement(pid, package, ElementKind.PACKAGE))
    for edge in list(net.edges):
        a, b = owner.get(edge.source), owner.get(edge.target)
        if a and b and a != b:
            net.add_edge(DependencyEdge(f"package:{a}", f"package:{b}", EdgeKind.IMPORTS))


def find_sources(root: str | Path, include: tuple[str, ...] = ("*.java",),
                 exclude: tuple[str, ...] = ()) -> list[Path]:
    root = Path(root)
    found = []
    for path in sorted(root.rglob("*")):
        if not path.is_file():
            continue
        rel = path.relative_to(root).as_posix()
        if not any(fnmatch.fnmatch(path.name, pat) or fnmatch.fnmatch(rel, pat) for pat in include):
            continue
        if any(fnmatch.fnmatch(rel, pat) or fnmatch.fnmatch(path.name, pat) for pat in exclude):
            continue
        found.append(path)
    return found


def scan_tree(root: str | Path, include: tuple[str, ...] = ("*.java",),
              exclude: tuple[str, ...] = (), report: ExtractionReport | None = None) -> list[SourceUnit]:
    root = Path(root)
    units = []
    for path in find_sources(root, include, exclude):
        text = path.read_text(encoding="utf-8", errors="replace")
        unit = scan_source(text, path.relative_to(root).as_posix())
        if not unit.body and report is not None:
            report.unscannable.append(unit.path)
        units.append(unit)
    return units


def extract(root: str | Path, config: ExtractionConfig | None = None,
            include: tuple[str, ...] = ("*.java",), exclude: tuple[str, ...] = ()
            ) -> tuple[DependencyNetwork, ExtractionReport]:
    report = ExtractionReport()
    units = [u for u in scan_tree(root, include, exclude, report) if u.body]
    if not units:
        return DependencyNetwork(), report
    return build_network(units, config, report), report
