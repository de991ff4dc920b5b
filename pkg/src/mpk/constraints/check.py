"""Well-formedness checking and report trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from ..errors import MpkError
from ..kernel.store import Store
from ..kernel.values import Ref, ids_of
from .evaluate import eval_expr
from .expr import Expr, parse_expr

NON_BOOLEAN = "non-boolean constraint result"


@dataclass(frozen=True)
class ConstraintDef:
    name: str
    body: Expr
    fail_msg: str

    def __post_init__(self):
        if not self.fail_msg:
            raise ValueError(f"constraint {self.name} needs a failure message")


@dataclass(frozen=True)
class ConstraintResult:
    name: str
    passed: bool
    message: Optional[str] = None


@dataclass
class CheckReport:
    subject: int
    name: str
    constraints: list[ConstraintResult] = field(default_factory=list)
    children: list["CheckReport"] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.constraints) and all(ch.passed for ch in self.children)

    def find(self, name: str) -> Optional["CheckReport"]:
        """Depth-first search for the node whose subject has this name."""
        if self.name == name:
            return self
        for ch in self.children:
            hit = ch.find(name)
            if hit is not None:
                return hit
        return None

    def result(self, constraint: str) -> ConstraintResult:
        for c in self.constraints:
            if c.name == constraint:
                return c
        raise KeyError(constraint)

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "name": self.name,
            "passed": self.passed,
            "constraints": [
                {"name": c.name, "passed": c.passed, **({"message": c.message} if c.message else {})}
                for c in self.constraints
            ],
            "children": [ch.to_json() for ch in self.children],
        }

    def to_text(self, indent: int = 0) -> str:
        pad = "  " * indent
        lines = [f"{pad}{'✓' if self.passed else '✗'} {self.name or '#' + str(self.subject)}"]
        for c in self.constraints:
            if c.passed:
                lines.append(f"{pad}  ✓ {c.name}")
            else:
                lines.append(f"{pad}  ✗ {c.name}: {c.message}")
        for ch in self.children:
            lines.append(ch.to_text(indent + 1))
        return "\n".join(lines)


@lru_cache(maxsize=None)
def compile_body(text: str) -> Expr:
    return parse_expr(text)


def constraint_defs(store: Store, cid: int) -> list[ConstraintDef]:
    """Constraints declared directly on a class, in declaration (id) order."""
    out = []
    for k in ids_of(store.get_slot(cid, "constraints")):
        slots = store.element(k).slots
        out.append(ConstraintDef(slots["name"], compile_body(slots["body"]), slots["failMsg"]))
    return out


def add_constraint(store: Store, cid: int, name: str, body: str, fail_msg: str) -> int:
    """Attach a new constraint to a class; the body is validated eagerly."""
    ConstraintDef(name, compile_body(body), fail_msg)
    k = store.new_instance(store.builtin("Constraint"))
    store.set_slot(k, "name", name)
    store.set_slot(k, "body", body)
    store.set_slot(k, "failMsg", fail_msg)
    store.add_to(cid, "constraints", k)
    return k


def evaluate_constraint(store: Store, c: ConstraintDef, eid: int) -> ConstraintResult:
    try:
        v = eval_expr(store, c.body, {}, Ref(eid))
    except MpkError as exc:
        return ConstraintResult(c.name, False, f"evaluation error: {exc}")
    if not isinstance(v, bool):
        return ConstraintResult(c.name, False, NON_BOOLEAN)
    return ConstraintResult(c.name, v, None if v else c.fail_msg)


def check_element(store: Store, eid: int) -> CheckReport:
    """Apply every constraint of the element's class and its ancestors."""
    return _check(store, eid, frozenset())


def _check(store: Store, eid: int, open_: frozenset) -> CheckReport:
    report = CheckReport(eid, store.name(eid))
    try:
        classes = sorted(store.all_parents(store.of(eid)) | {store.builtin("Element")})
    except MpkError as exc:
        report.constraints.append(ConstraintResult("<classes>", False, str(exc)))
        return report
    for cid in classes:
        for c in constraint_defs(store, cid):
            report.constraints.append(evaluate_constraint(store, c, eid))
    if store.is_package(eid) and eid not in open_:
        inner = open_ | {eid}
        report.children = [_check(store, m, inner) for m in ids_of(store.get_slot(eid, "elements"))]
    return report


def check_container(store: Store, pid: int) -> CheckReport:
    """Report for a package whose children are reports on its members."""
    store._require_package(pid)
    return check_element(store, pid)
