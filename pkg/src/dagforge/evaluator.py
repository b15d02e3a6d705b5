"""Expression evaluation against a set of node bindings."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, EvalError
from .expr import Binary, Call, Expr, IfElse, Lit, ListLit, Ref, Unary
from .registry import FunctionRegistry
from .rng import RandomStream
from .values import Value, type_name, values_equal

__all__ = ["EvalEnv", "evaluate"]


@dataclass
class EvalEnv:
    bindings: dict[str, Value] = field(default_factory=dict)
    rng: RandomStream | None = None
    registry: FunctionRegistry | None = None


def _is_number(v: Value) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _require_bool(v: Value, span, side: str) -> bool:
    if isinstance(v, bool):
        return v
    raise EvalError(span, f"{side} must be a boolean, got {type_name(v)}")


def evaluate(e: Expr, env: EvalEnv) -> Value:
    """Evaluate an expression; every referenced name must be bound in env."""
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Ref):
        try:
            return env.bindings[e.name]
        except KeyError:
            raise EvalError(e.span, f"unbound reference {e.name!r}") from None
    if isinstance(e, Call):
        entry = env.registry.lookup(e.name) if env.registry is not None else None
        if entry is None:
            raise EvalError(e.span, f"unknown function {e.name!r}")
        if not entry.arity.accepts(len(e.args)):
            raise EvalError(
                e.span,
                f"{e.name} expects {entry.arity.describe()} argument(s), got {len(e.args)}",
            )
        args = [evaluate(a, env) for a in e.args]
        try:
            return entry.call(env.rng, args)
        except DomainError as err:
            raise EvalError(e.span, str(err)) from err
    if isinstance(e, Binary):
        return _binary(e, env)
    if isinstance(e, Unary):
        v = evaluate(e.operand, env)
        if e.op == "not":
            return not _require_bool(v, e.span, "operand of 'not'")
        if _is_number(v):
            return -v
        raise EvalError(e.span, f"cannot negate a {type_name(v)}")
    if isinstance(e, IfElse):
        cond = evaluate(e.cond, env)
        taken = e.then if _require_bool(cond, e.span, "if condition") else e.otherwise
        return evaluate(taken, env)
    if isinstance(e, ListLit):
        return [evaluate(el, env) for el in e.elements]
    raise EvalError(e.span, f"cannot evaluate node of type {type(e).__name__}")


def _binary(e: Binary, env: EvalEnv) -> Value:
    op = e.op
    if op == "and":
        lhs = _require_bool(evaluate(e.lhs, env), e.span, "left operand of 'and'")
        if not lhs:
            return False
        return _require_bool(evaluate(e.rhs, env), e.span, "right operand of 'and'")
    if op == "or":
        lhs = _require_bool(evaluate(e.lhs, env), e.span, "left operand of 'or'")
        if lhs:
            return True
        return _require_bool(evaluate(e.rhs, env), e.span, "right operand of 'or'")

    a = evaluate(e.lhs, env)
    b = evaluate(e.rhs, env)
    if op == "==":
        return values_equal(a, b)
    if op == "!=":
        return not values_equal(a, b)
    if op in ("<", "<=", ">", ">="):
        ordered = (_is_number(a) and _is_number(b)) or (isinstance(a, str) and isinstance(b, str))
        if not ordered:
            raise EvalError(e.span, f"cannot order {type_name(a)} and {type_name(b)}")
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        return a >= b

    if not (_is_number(a) and _is_number(b)):
        raise EvalError(e.span, f"arithmetic {op!r} needs numbers, got {type_name(a)} and {type_name(b)}")
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise EvalError(e.span, "division by zero")
        return a / b
    if op == "%":
        if b == 0:
            raise EvalError(e.span, "modulo by zero")
        return a % b
    raise EvalError(e.span, f"unknown operator {op!r}")
