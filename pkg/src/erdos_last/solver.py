"""End-to-end solve: Baker bound, reduction, then the sharded search.

Work is split into units, one per value of the outermost loop variable.  A
checkpoint file records finished units with their solutions so that an
interrupted run can resume without redoing them.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path

from .baker import baker_bound
from .enumerator import (
    SearchSpace,
    enumerate_solutions,
    enumerate_trivial,
    loop_plan,
    outer_values,
    partition_work,
)
from .model import SCHEMA_VERSION, Solution, canonical_order, make_instance
from .reducer import BoundSet, reduce_bounds

log = logging.getLogger(__name__)

THREADS_ENV = "ERDOS_SOLVER_THREADS"


class CheckpointMismatch(ValueError):
    pass


@dataclass
class SolveResult:
    x_n: int
    solutions: list[Solution]
    manifest: dict = field(default_factory=dict)

    def max_n(self) -> int | None:
        return max((s.n for s in self.solutions), default=None)


def worker_count(shards: int) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer")
        return n
    return max(1, min(shards, os.cpu_count() or 1))


def _bounds_key(bs: BoundSet) -> dict:
    return {"x_n": bs.instance.x_n, "total_bound": bs.total_bound, "per_prime": list(bs.per_prime)}


class Checkpoint:
    """Finished outer-loop values and their solutions, rewritten atomically."""

    def __init__(self, path: Path | str, bounds: BoundSet):
        self.path = Path(path)
        self.key = _bounds_key(bounds)
        self.completed: dict[int, list[str]] = {}
        self.leaves: dict[int, int] = {}
        if self.path.exists():
            data = json.loads(self.path.read_text())
            if data.get("bounds") != self.key:
                raise CheckpointMismatch(f"checkpoint {self.path} was written for different bounds")
            self.completed = {int(k): v for k, v in data["completed"].items()}
            self.leaves = {int(k): v for k, v in data.get("leaves", {}).items()}

    def solutions(self) -> list[Solution]:
        return [Solution.from_json(line) for lines in self.completed.values() for line in lines]

    def record(self, outer: int, sols: list[Solution], leaves: int) -> None:
        self.completed[outer] = [s.to_json() for s in sols]
        self.leaves[outer] = leaves
        self.save()

    def save(self) -> None:
        data = {
            "schema_version": SCHEMA_VERSION,
            "bounds": self.key,
            "completed": {str(k): v for k, v in sorted(self.completed.items())},
            "leaves": {str(k): v for k, v in sorted(self.leaves.items())},
        }
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=self.path.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh)
        os.replace(tmp, self.path)


def _run_unit(space: SearchSpace, outer: int, backend: str) -> tuple[int, list[Solution], int]:
    leaves = [0]

    def count(_value, _sols, n):
        leaves[0] += n

    sols = enumerate_solutions(
        SearchSpace(space.instance, space.bounds, space.order, (outer,)), backend=backend, on_unit=count
    )
    return outer, sols, leaves[0]


def compute_bounds(x_n: int, mode: str = "auto", digits: int | None = None) -> tuple[int, BoundSet]:
    inst = make_instance(x_n)
    baker = baker_bound(inst) if digits is None else baker_bound(inst, digits)
    return baker.B0, reduce_bounds(inst, baker.B0 if mode == "auto" else None, mode)


def solve(
    x_n: int,
    mode: str = "auto",
    shards: int = 1,
    checkpoint: Path | str | None = None,
    backend: str = "auto",
    order: str = "weight",
    bounds: BoundSet | None = None,
    digits: int | None = None,
    workers: int | None = None,
) -> SolveResult:
    start = time.monotonic()
    if x_n < 1:
        raise ValueError("x_n must be >= 1")
    if x_n < 3:
        sols = enumerate_trivial(x_n)
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "x_n": x_n,
            "path": "trivial",
            "solution_count": len(sols),
            "max_n": str(max(s.n for s in sols)) if sols else None,
            "wall_time_s": round(time.monotonic() - start, 3),
        }
        return SolveResult(x_n, sols, manifest)

    B0 = None
    if bounds is None:
        B0, bounds = compute_bounds(x_n, mode, digits)
    space = SearchSpace(make_instance(x_n), bounds, order)
    slices = partition_work(space, shards)
    layout = [outer_values(sl) for sl in slices]
    ckpt = Checkpoint(checkpoint, bounds) if checkpoint else None
    done = set(ckpt.completed) if ckpt else set()
    found: list[Solution] = ckpt.solutions() if ckpt else []
    leaves: dict[int, int] = dict(ckpt.leaves) if ckpt else {}
    units = [v for values in layout for v in values if v not in done]

    n_workers = workers or worker_count(shards)

    def finish(outer: int, sols: list[Solution], n_leaves: int) -> None:
        found.extend(sols)
        leaves[outer] = n_leaves
        if ckpt:
            ckpt.record(outer, sols, n_leaves)
        log.info("x_n=%d outer=%d: %d solutions, %d leaves", x_n, outer, len(sols), n_leaves)

    if n_workers <= 1 or len(units) <= 1:
        for outer in units:
            finish(*_run_unit(space, outer, backend))
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = [pool.submit(_run_unit, space, outer, backend) for outer in units]
            for fut in as_completed(futures):
                finish(*fut.result())

    sols = canonical_order(found)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "x_n": x_n,
        "path": "search",
        "mode": bounds.mode,
        "B0": B0,
        "bounds": {k: v for k, v in bounds.to_dict().items() if k != "provenance"},
        "loop_order": list(loop_plan(space).order),
        "shards": shards,
        "shard_layout": layout,
        "workers": n_workers,
        "backend": backend,
        "resumed_units": sorted(done),
        "leaves": sum(leaves.values()),
        "solution_count": len(sols),
        "max_n": str(max(s.n for s in sols)) if sols else None,
        "wall_time_s": round(time.monotonic() - start, 3),
    }
    return SolveResult(x_n, sols, manifest)

