"""Forward sampling: per-sample evaluation, selection, plates, missing values,
interventions, stratum labels.

Each node draws from its own random sub-stream keyed by ``(seed,
sample_index, hash(node name))``.  Because the key depends only on the
node's name, structural edits elsewhere (adding, deleting, or intervening
on other nodes) can never shift this node's draws, and samples with
distinct indices may be evaluated in any order or in parallel.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import CoercionError, EvalError, SelectionStarvation, ValidationError
from .evaluator import EvalEnv, evaluate
from .expr import Expr
from .graph import CompiledModel
from .modelspec import compile_nodes
from .registry import FunctionRegistry
from .rng import RandomStream, node_stream_key
from .values import MISSING, Value, csv_cell, type_name

__all__ = ["RunConfig", "SampleRow", "Dataset", "apply_interventions", "sample_one", "apply_missing", "simulate"]

_UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class RunConfig:
    num_samples: int
    seed: int = 0
    interventions: dict[str, Expr] = field(default_factory=dict)
    max_rejection_factor: int = 1000

    def __post_init__(self):
        if self.num_samples < 1:
            raise ValueError(f"num_samples must be >= 1, got {self.num_samples}")
        if not 0 <= self.seed <= _UINT64_MAX:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.max_rejection_factor < 1:
            raise ValueError(f"max_rejection_factor must be >= 1, got {self.max_rejection_factor}")


@dataclass(frozen=True)
class SampleRow:
    values: dict[str, Value]
    stratum: str | None = None


@dataclass(frozen=True)
class Dataset:
    rows: list[SampleRow]
    column_order: list[str]  # topological order restricted to observed nodes
    attempts: int


def apply_interventions(
    model: CompiledModel,
    interventions: dict[str, Expr],
    registry: FunctionRegistry | None = None,
) -> CompiledModel:
    """Replace each target node's generating expression and recompile.

    Severs the target's previous parent edges; the result is re-checked for
    acyclicity and reference/function resolution.
    """
    if not interventions:
        return model
    problems = []
    for target in interventions:
        decl = model.by_name.get(target)
        if decl is None:
            problems.append(f"intervention target {target!r} is not a declared node")
        elif decl.kind != "standard":
            problems.append(f"intervention target {target!r} is a {decl.kind} node; only standard nodes can be intervened on")
    if problems:
        raise ValidationError(problems)
    nodes = tuple(
        dataclasses.replace(n, expr=interventions[n.name]) if n.name in interventions else n
        for n in model.nodes
    )
    return compile_nodes(nodes, registry)


def _as_flag(v: Value, node: str, what: str) -> bool:
    if isinstance(v, bool):
        return v
    if isinstance(v, int) and v in (0, 1):
        return bool(v)
    raise CoercionError(f"node {node}: {what} must be a boolean or 0/1, got {type_name(v)} {v!r}")


def _as_label(v: Value, node: str) -> str:
    if isinstance(v, (bool, int, float, str)):
        return v if isinstance(v, str) else csv_cell(v)
    raise CoercionError(f"node {node}: stratum label must be a scalar, got {type_name(v)}")


def sample_one(
    model: CompiledModel,
    sample_index: int,
    seed: int,
    registry: FunctionRegistry,
) -> tuple[dict[str, Value], bool]:
    """Evaluate one sample in topological order.

    Returns the row (every node except the selection node) and whether the
    selection predicate accepted it.  Plate nodes (``size: k``) evaluate
    their expression k times into a list.
    """
    env = EvalEnv(bindings={}, rng=None, registry=registry)
    row: dict[str, Value] = {}
    selected = True
    for name in model.topo_order:
        decl = model.by_name[name]
        env.rng = RandomStream(seed, sample_index, node_stream_key(name))
        try:
            if decl.kind == "standard":
                if decl.size is not None:
                    value: Value = [evaluate(decl.expr, env) for _ in range(decl.size)]
                else:
                    value = evaluate(decl.expr, env)
                env.bindings[name] = row[name] = value
            elif decl.kind == "selection":
                selected = _as_flag(evaluate(decl.expr, env), name, "selection value")
                env.bindings[name] = selected
            elif decl.kind == "missing":
                flag = _as_flag(evaluate(decl.expr, env), name, "missing indicator")
                value = MISSING if flag else env.bindings[decl.underlying]
                env.bindings[name] = row[name] = value
            else:  # stratify
                label = _as_label(evaluate(decl.expr, env), name)
                env.bindings[name] = row[name] = label
        except EvalError as err:
            if err.node is None:
                raise EvalError(err.span, err.message, node=name) from err
            raise
    return row, selected


def apply_missing(row: dict[str, Value], model: CompiledModel) -> dict[str, Value]:
    """Resolve missing-node indicators in a row into masked values.

    Expects each missing node's entry to currently hold its indicator;
    returns a new row where it holds the underlying value or MISSING.
    """
    out = dict(row)
    for underlying, missing_node in model.missing_map.items():
        flag = _as_flag(out[missing_node], missing_node, "missing indicator")
        out[missing_node] = MISSING if flag else out[underlying]
    return out


def _observed_columns(model: CompiledModel) -> list[str]:
    return [
        name for name in model.topo_order
        if model.by_name[name].kind != "selection" and model.by_name[name].observed
    ]


def simulate(
    model: CompiledModel,
    config: RunConfig,
    registry: FunctionRegistry,
    threads: int = 1,
) -> Dataset:
    """Draw rows at consecutive sample indices until num_samples are kept.

    Rejected indices stay consumed, so the kept rows depend only on the
    seed, never on the acceptance pattern.  With ``threads > 1`` a block of
    indices is evaluated in parallel; the keyed streams make the merged,
    index-ordered result identical to sequential execution.
    """
    model = apply_interventions(model, config.interventions, registry)
    needed = config.num_samples
    limit = needed * config.max_rejection_factor
    kept: list[SampleRow] = []
    attempts = 0
    next_index = 0

    def eval_index(i: int) -> tuple[dict[str, Value], bool]:
        return sample_one(model, i, config.seed, registry)

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while len(kept) < needed and next_index < limit:
            block = range(next_index, min(limit, next_index + max(64, needed)))
            results = pool.map(eval_index, block) if pool else map(eval_index, block)
            for i, (row, selected) in zip(block, results):
                if selected and len(kept) < needed:
                    stratum = row[model.stratify] if model.stratify else None
                    kept.append(SampleRow(values=row, stratum=stratum))
                    if len(kept) == needed:
                        attempts = i + 1
                        break
            next_index = block.stop
    finally:
        if pool is not None:
            pool.shutdown(wait=False, cancel_futures=True)

    if len(kept) < needed:
        raise SelectionStarvation(attempts=limit, kept=len(kept), limit=limit)
    return Dataset(rows=kept, column_order=_observed_columns(model), attempts=attempts)
