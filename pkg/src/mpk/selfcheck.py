"""Self-verification of a bootstrapped store."""

from __future__ import annotations

from typing import NamedTuple, Optional

from .constraints.check import check_element
from .errors import MpkError
from .kernel.bootstrap import bootstrap
from .kernel.store import Store


class Finding(NamedTuple):
    name: str
    passed: bool
    detail: str = ""


def _of_chain_reaches_class(store: Store, eid: int) -> bool:
    cls = store.builtin("Class")
    seen = set()
    cur = eid
    while cur not in seen:
        seen.add(cur)
        cur = store.of(cur)
        if cur == cls:
            return True
        if cur not in store:
            return False
    return False


def selfcheck(store: Optional[Store] = None) -> list[Finding]:
    """Bootstrap invariants plus every constraint over every element."""
    s = store if store is not None else bootstrap()
    b = s.builtin
    out: list[Finding] = []

    def expect(name, ok, detail=""):
        out.append(Finding(name, bool(ok), "" if ok else detail))

    expect("ClassFixpoint", s.of(b("Class")) == b("Class"), "of(Class) is not Class")
    expect("PackageOfClass", s.of(b("Package")) == b("Class"), "of(Package) is not Class")
    expect("XCoreOfPackage", s.of(b("XCore")) == b("Package"), "of(XCore) is not Package")
    expect("XCoreMetaPackage", s.meta_package(b("XCore")) == b("XCore"),
           "metaPackage(XCore) is not XCore")

    broken = [e for e in sorted(s.elements) if not _of_chain_reaches_class(s, e)]
    expect("OfChains", not broken, f"of-chains not reaching Class: {broken}")

    bad_parents = []
    for name in sorted(s.builtins, key=s.builtins.get):
        eid = s.builtins[name]
        if s.is_class(eid) and not s.is_package(eid):
            try:
                if b("Element") not in s.all_parents(eid):
                    bad_parents.append(name)
            except MpkError:
                bad_parents.append(name)
    expect("ParentsReachElement", not bad_parents,
           f"classes not inheriting from Element: {bad_parents}")

    stray = []
    for e in sorted(s.elements):
        schema = s.schema(s.of(e))
        stray.extend(f"{e}.{slot}" for slot in sorted(s.element(e).slots) if slot not in schema)
    expect("SlotDiscipline", not stray, f"slots outside the class schema: {stray}")

    expect("BeansInheritsXCore", b("XCore") in s.parents(b("Beans")),
           "Beans does not inherit from XCore")
    expect("BeansIsMetaPackage", s.is_meta_package(b("Beans")), "Beans is not a meta-package")

    failing = []
    for e in sorted(s.elements):
        report = check_element(s, e)
        failing.extend(f"{report.name or e}: {c.name}"
                       for c in report.constraints if not c.passed)
    expect("Constraints", not failing, f"failing constraints: {failing}")
    return out
