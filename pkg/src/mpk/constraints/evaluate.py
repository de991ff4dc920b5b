"""Strict evaluation of expressions over a store.

Navigation over a collection maps the slot across its members and flattens
one level; ``and``/``or``/``implies`` short-circuit left to right; sets are
always walked in ascending :func:`~mpk.kernel.values.sort_key` order.
"""

from __future__ import annotations

import itertools
from typing import Callable, Mapping, Optional

from ..errors import EvalError, EvalTypeError, MpkError, UnboundVar, UnknownSlot
from ..kernel.store import Store
from ..kernel.values import Ref, Value, is_collection, ordered, refs, same, show
from .expr import Bin, Call, Expr, Lit, Nav, Not, SelfRef, Var

# host-level helper: (store, target, *args) -> Value
ExtraOp = Callable[..., Value]


class Evaluator:
    def __init__(self, store: Store, extra_ops: Optional[Mapping[str, ExtraOp]] = None):
        self.store = store
        self.extra_ops = dict(extra_ops or {})

    def run(self, expr: Expr, env: Mapping[str, Value], self_val: Value) -> Value:
        return self._eval(expr, dict(env), self_val)

    # -- helpers ----------------------------------------------------------

    def _ref(self, v, expr) -> int:
        if not isinstance(v, Ref):
            raise EvalTypeError(f"expected an element, got {show(v)}", expr)
        if v.id not in self.store:
            raise EvalError(f"dangling reference {show(v)}", expr)
        return v.id

    def _coll(self, v, expr) -> list:
        if not is_collection(v):
            raise EvalTypeError(f"expected a collection, got {show(v)}", expr)
        return ordered(v)

    def _bool(self, v, expr) -> bool:
        if not isinstance(v, bool):
            raise EvalTypeError(f"expected a boolean, got {show(v)}", expr)
        return v

    def _slot(self, v, slot, expr) -> Value:
        if v is None:
            return None
        eid = self._ref(v, expr)
        if slot == "of":
            return Ref(self.store.of(eid))
        try:
            return self.store.get_slot(eid, slot)
        except UnknownSlot:
            raise UnknownSlot(eid, slot, expr) from None

    # -- evaluation -------------------------------------------------------

    def _eval(self, e: Expr, env: dict, self_val: Value) -> Value:
        if isinstance(e, Lit):
            return e.value
        if isinstance(e, SelfRef):
            return self_val
        if isinstance(e, Var):
            return self._lookup(e, env, self_val)
        if isinstance(e, Nav):
            target = self._eval(e.target, env, self_val)
            if is_collection(target):
                return self._collect(target, e.slot, e)
            return self._slot(target, e.slot, e)
        if isinstance(e, Not):
            return not self._bool(self._eval(e.operand, env, self_val), e)
        if isinstance(e, Bin):
            return self._binary(e, env, self_val)
        if isinstance(e, Call):
            return self._call(e, env, self_val)
        raise EvalError(f"not an expression: {e!r}")

    def _lookup(self, e: Var, env, self_val):
        if e.name in env:
            return env[e.name]
        # implicit self navigation, then builtin class names
        if isinstance(self_val, Ref) and self_val.id in self.store:
            if e.name == "of":
                return Ref(self.store.of(self_val.id))
            if self.store.has_slot(self_val.id, e.name):
                return self.store.get_slot(self_val.id, e.name)
        if e.name in self.store.builtins:
            return Ref(self.store.builtins[e.name])
        raise UnboundVar(f"unbound variable {e.name!r}", e)

    def _collect(self, coll, slot, expr):
        out = []
        for member in ordered(coll):
            v = self._slot(member, slot, expr)
            if is_collection(v):
                out.extend(ordered(v))
            else:
                out.append(v)
        return frozenset(out) if isinstance(coll, frozenset) else tuple(out)

    def _binary(self, e: Bin, env, self_val):
        op = e.op
        lhs = self._eval(e.lhs, env, self_val)
        if op == "and":
            return self._bool(lhs, e) and self._bool(self._eval(e.rhs, env, self_val), e)
        if op == "or":
            return self._bool(lhs, e) or self._bool(self._eval(e.rhs, env, self_val), e)
        if op == "implies":
            return (not self._bool(lhs, e)) or self._bool(self._eval(e.rhs, env, self_val), e)
        rhs = self._eval(e.rhs, env, self_val)
        if op == "=":
            return same(lhs, rhs)
        if op == "<>":
            return not same(lhs, rhs)
        if op == "+":
            if isinstance(lhs, frozenset) and isinstance(rhs, frozenset):
                return lhs | rhs
            if isinstance(lhs, tuple) and isinstance(rhs, tuple):
                return lhs + rhs
            if isinstance(lhs, str) and isinstance(rhs, str):
                return lhs + rhs
            if (isinstance(lhs, int) and isinstance(rhs, int)
                    and not isinstance(lhs, bool) and not isinstance(rhs, bool)):
                return lhs + rhs
            raise EvalTypeError(f"cannot add {show(lhs)} and {show(rhs)}", e)
        raise EvalError(f"unknown operator {op!r}", e)

    def _bind_all(self, e: Call, env, self_val):
        """Yield environments for every k-tuple of members (Cartesian product)."""
        members = self._coll(self._eval(e.target, env, self_val), e)
        for combo in itertools.product(members, repeat=len(e.binders)):
            inner = dict(env)
            inner.update(zip(e.binders, combo))
            yield combo, inner

    def _call(self, e: Call, env, self_val):
        op = e.op
        s = self.store
        if op == "forAll":
            return all(self._bool(self._eval(e.args[0], inner, self_val), e)
                       for _, inner in self._bind_all(e, env, self_val))
        if op == "exists":
            return any(self._bool(self._eval(e.args[0], inner, self_val), e)
                       for _, inner in self._bind_all(e, env, self_val))
        if op == "select":
            target = self._eval(e.target, env, self_val)
            kept = []
            for member in self._coll(target, e):
                inner = dict(env)
                inner[e.binders[0]] = member
                if self._bool(self._eval(e.args[0], inner, self_val), e):
                    kept.append(member)
            return frozenset(kept) if isinstance(target, frozenset) else tuple(kept)
        if op == "iterate":
            item, acc_name = e.binders
            members = self._coll(self._eval(e.target, env, self_val), e)
            acc = self._eval(e.args[0], env, self_val)
            for member in members:
                inner = dict(env)
                inner[item] = member
                inner[acc_name] = acc
                acc = self._eval(e.args[1], inner, self_val)
            return acc

        target = self._eval(e.target, env, self_val)
        args = [self._eval(a, env, self_val) for a in e.args]
        if op in self.extra_ops:
            try:
                return self.extra_ops[op](s, target, *args)
            except EvalError:
                raise
            except MpkError as exc:
                raise EvalError(str(exc), e) from exc
        try:
            if op == "size":
                if isinstance(target, str):
                    return len(target)
                return len(self._coll(target, e))
            if op == "includes":
                self._need(args, 1, e)
                return any(same(x, args[0]) for x in self._coll(target, e))
            if op == "subSet":
                self._need(args, 1, e)
                sup = self._coll(args[0], e)
                return all(any(same(x, y) for y in sup) for x in self._coll(target, e))
            if op == "of":
                return None if target is None else Ref(s.of(self._ref(target, e)))
            if op == "name":
                return self._slot(target, "name", e)
            if op == "attributes":
                return self._slot(target, "attributes", e)
            if op == "isKindOf":
                self._need(args, 1, e)
                return s.is_kind_of(self._ref(target, e), self._ref(args[0], e))
            if op == "tag":
                self._need(args, 1, e)
                return s.tag(self._ref(target, e), self._ref(args[0], e))
            if op == "allParents":
                return refs(s.all_parents(self._ref(target, e)))
            if op in ("modellingElements", "classes"):
                return refs(s.modelling_elements(self._ref(target, e)))
            if op == "nodes":
                nodes = getattr(target, "nodes", None)
                if nodes is None:
                    raise EvalTypeError(f"{show(target)} has no nodes", e)
                return tuple(nodes)
        except EvalError:
            raise
        except MpkError as exc:
            raise EvalError(str(exc), e) from exc
        raise EvalError(f"unknown operation {op!r}", e)

    @staticmethod
    def _need(args, n, e):
        if len(args) != n:
            raise EvalError(f"{e.op} takes {n} argument(s)", e)


def eval_expr(store: Store, expr: Expr, env: Optional[Mapping[str, Value]] = None,
              self_val: Value = None, extra_ops: Optional[Mapping[str, ExtraOp]] = None) -> Value:
    """Evaluate ``expr`` with ``self`` bound to ``self_val``. Never mutates the store."""
    return Evaluator(store, extra_ops).run(expr, env or {}, self_val)
