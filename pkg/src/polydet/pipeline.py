"""End-to-end exact determinant pipeline.

Planning sizes the interpolation grid from the determinant's degree
bound, picks enough primes to cover twice the coefficient bound, and
the executor then runs evaluate / solve / interpolate per prime
followed by one reconstruction pass. Every work unit
(prime x unique-entry transform, node-chunk determinant, coefficient
reconstruction) is pure, and results merge in unit order, so output is
bit-identical across worker counts, chunk sizes, and interrupt/resume
patterns.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Callable

import numpy as np

from .crt import combine_tensor
from .determinant import det_grid
from .errors import StaleWorkspaceError
from .modular import PrimeSpec, find_fourier_primes
from .parallel import map_streamed
from .tensor import (
    CoeffTensor,
    ModTensor,
    PolyMatrix,
    pad_shape,
    pad_to,
    reduce_mod,
    residue_dtype,
)
from .transform import TwiddleTable, ntt_forward_multi, ntt_inverse_multi
from .workspace import Workspace, digest_of

INPUT_FILE = "input.json"
PLAN_FILE = "plan.json"


@dataclass
class PipelineConfig:
    """Knobs for planning and execution.

    workers and chunk_size never change results, only scheduling;
    prime_start defaults to the 9-digit convention so the int64 fast
    path applies.
    """

    prime_start: int = 10**9
    min_primes: int = 2
    scan_limit: int = 1_000_000
    workers: int = 1
    chunk_size: int = 4096
    progress: Callable[[str], None] | None = None

    def _notify(self, unit: str):
        if self.progress is not None:
            self.progress(unit)


@dataclass(frozen=True)
class Plan:
    """Everything `run` decides up front: sizes, bound, and primes."""

    r: int
    variables: tuple[str, ...]
    entry_degrees: tuple[int, ...]
    det_degrees: tuple[int, ...]
    shape: tuple[int, ...]
    q_max: int
    boundary: int
    primes: tuple[PrimeSpec, ...]
    unique_count: int

    def __post_init__(self):
        for n in self.shape:
            if n & (n - 1):
                raise ValueError(f"node shape {self.shape} is not power-of-two padded")
        for spec in self.primes:
            if self.q_max > spec.q:
                raise ValueError(f"prime {spec.p} cannot host length 2^{self.q_max}")
        if self.prime_product < 2 * self.boundary + 1:
            raise ValueError("prime product does not cover the signed coefficient range")
        if not 0 < self.unique_count <= self.r * self.r:
            raise ValueError(f"unique entry count {self.unique_count} out of range")

    @property
    def node_count(self) -> int:
        return math.prod(self.shape)

    @property
    def prime_count(self) -> int:
        return len(self.primes)

    @property
    def prime_product(self) -> int:
        out = 1
        for spec in self.primes:
            out *= spec.p
        return out

    @property
    def mu(self) -> Fraction:
        return Fraction(self.unique_count, self.r * self.r)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "variables": list(self.variables),
            "entry_degrees": list(self.entry_degrees),
            "det_degrees": list(self.det_degrees),
            "shape": list(self.shape),
            "q_max": self.q_max,
            "boundary": self.boundary,
            "primes": [[s.p, s.c, s.q, s.omega] for s in self.primes],
            "unique_count": self.unique_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Plan":
        return cls(
            r=int(data["r"]),
            variables=tuple(data["variables"]),
            entry_degrees=tuple(data["entry_degrees"]),
            det_degrees=tuple(data["det_degrees"]),
            shape=tuple(data["shape"]),
            q_max=int(data["q_max"]),
            boundary=int(data["boundary"]),
            primes=tuple(PrimeSpec(*spec) for spec in data["primes"]),
            unique_count=int(data["unique_count"]),
        )

    def digest(self) -> str:
        return digest_of(self.to_dict())


@dataclass
class StageTimings:
    """Wall seconds spent per stage, accumulated across primes."""

    fft: float = 0.0
    det: float = 0.0
    ifft: float = 0.0
    crt: float = 0.0

    def as_dict(self) -> dict:
        return {"fft": self.fft, "det": self.det, "ifft": self.ifft, "crt": self.crt}


@dataclass(frozen=True)
class Prediction:
    """Runtime forecast from sampled per-entry transform times."""

    prime_count: int
    order: int
    unique_count: int
    replication: Fraction
    sample_seconds: tuple[float, ...]
    mean_rounded: Decimal
    total_seconds: float


def coefficient_bound(m: PolyMatrix) -> int:
    """Provable bound on |any coefficient| of det(m).

    r! times the product over rows of the largest entry 1-norm: every
    expansion term is a product of r entries, one per row.
    """
    bound = math.factorial(m.r)
    for i in range(m.r):
        row_max = 0
        for j in range(m.r):
            norm = sum(abs(c) for c in m.entry(i, j).coeffs)
            row_max = max(row_max, norm)
        bound *= row_max
    return bound


def degree_bound(m: PolyMatrix) -> tuple[int, ...]:
    """Per-variable degree bound on det(m): row sums of entry maxima."""
    vn = len(m.variables)
    totals = [0] * vn
    for i in range(m.r):
        row_max = [0] * vn
        for j in range(m.r):
            degs = m.entry(i, j).degrees()
            for k in range(vn):
                row_max[k] = max(row_max[k], degs[k])
        for k in range(vn):
            totals[k] += row_max[k]
    return tuple(totals)


def plan(m: PolyMatrix, config: PipelineConfig | None = None) -> Plan:
    """Choose grid shape and primes for an exact determinant run."""
    cfg = config or PipelineConfig()
    det_degrees = degree_bound(m)
    shape, q_max = pad_shape(tuple(d + 1 for d in det_degrees))
    boundary = coefficient_bound(m)
    primes = find_fourier_primes(
        q_max,
        2 * boundary + 1,
        cfg.prime_start,
        min_count=cfg.min_primes,
        scan_limit=cfg.scan_limit,
    )
    return Plan(
        r=m.r,
        variables=m.variables,
        entry_degrees=m.max_degrees(),
        det_degrees=det_degrees,
        shape=shape,
        q_max=q_max,
        boundary=boundary,
        primes=tuple(primes),
        unique_count=m.k,
    )


def _round_half_up(x: float) -> Decimal:
    return Decimal(repr(float(x))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)


def predicted_total(prime_count: int, order: int, unique_count: int, mean_seconds) -> float:
    """Total-seconds forecast: primes * order^2 * round(mean, 2) * (k / order^2).

    order^2 and the replication factor k / order^2 cancel exactly, so
    the product is computed as primes * k * rounded mean to keep the
    arithmetic in exact decimals.
    """
    if order < 1 or not 0 < unique_count <= order * order:
        raise ValueError(f"unique_count {unique_count} out of range for order {order}")
    rounded = _round_half_up(mean_seconds)
    return float(rounded * prime_count * unique_count)


def predict(m: PolyMatrix, pl: Plan, sample_size: int = 3) -> Prediction:
    """Time a few unique-entry transforms under one prime and extrapolate."""
    if sample_size < 1:
        raise ValueError("sample_size must be positive")
    prime = pl.primes[0]
    table = TwiddleTable(prime)
    samples = []
    for i in range(sample_size):
        entry = m.unique_entries[i % m.k]
        grid = pad_to(reduce_mod(entry, prime), pl.shape)
        start = time.perf_counter()
        ntt_forward_multi(grid, table)
        samples.append(time.perf_counter() - start)
    mean = sum(samples) / len(samples)
    return Prediction(
        prime_count=pl.prime_count,
        order=pl.r,
        unique_count=pl.unique_count,
        replication=pl.mu,
        sample_seconds=tuple(samples),
        mean_rounded=_round_half_up(mean),
        total_seconds=predicted_total(pl.prime_count, pl.r, pl.unique_count, mean),
    )


def run(m: PolyMatrix, config: PipelineConfig | None = None, workspace=None) -> CoeffTensor:
    """Exact signed-integer determinant of a polynomial matrix."""
    return run_report(m, config, workspace)[0]


def run_report(
    m: PolyMatrix, config: PipelineConfig | None = None, workspace=None
) -> tuple[CoeffTensor, StageTimings, Plan]:
    """Like `run`, also returning stage timings and the plan used."""
    cfg = config or PipelineConfig()
    pl = plan(m, cfg)
    ws = None
    if workspace is not None:
        ws = Workspace(workspace)
        header = {"input_sha256": digest_of(m.to_dict()), "plan_sha256": pl.digest()}
        if ws.exists():
            stored = ws.open()
            if stored != header:
                raise StaleWorkspaceError(
                    "stale workspace: manifest belongs to a different input or plan"
                )
        else:
            # named files land before the manifest: the manifest is the
            # commit point a resume trusts
            ws.write_named(INPUT_FILE, m.to_dict())
            ws.write_named(PLAN_FILE, pl.to_dict())
            ws.create(header)
    result, timings = _execute(m, pl, cfg, ws)
    return result, timings, pl


def resume(workspace, config: PipelineConfig | None = None) -> CoeffTensor:
    """Continue (or just reload) a checkpointed run from its workspace."""
    return resume_report(workspace, config)[0]


def resume_report(
    workspace, config: PipelineConfig | None = None
) -> tuple[CoeffTensor, StageTimings, Plan]:
    cfg = config or PipelineConfig()
    ws = Workspace(workspace)
    header = ws.open()
    ws.verify()
    m = PolyMatrix.from_dict(ws.read_named(INPUT_FILE))
    pl = Plan.from_dict(ws.read_named(PLAN_FILE))
    if header.get("input_sha256") != digest_of(m.to_dict()) or header.get(
        "plan_sha256"
    ) != pl.digest():
        raise StaleWorkspaceError("stale workspace: stored input or plan was altered")
    result, timings = _execute(m, pl, cfg, ws)
    return result, timings, pl


# -- executor ----------------------------------------------------------------


def _execute(m, pl, cfg, ws):
    timings = StageTimings()
    if ws is not None and ws.has("crt"):
        return _tensor_from_payload(ws.load_json("crt")), timings

    residue_tensors = []
    for pi, prime in enumerate(pl.primes):
        table = TwiddleTable(prime)
        ifft_unit = f"p{pi}/ifft"
        if ws is not None and ws.has(ifft_unit):
            # completed primes are reloaded, never recomputed
            residue_tensors.append(_load_tensor(ws, ifft_unit, prime, pl))
            continue
        grids = _fft_stage(m, pl, cfg, ws, pi, prime, table, timings)
        values = _det_stage(m, pl, cfg, ws, pi, prime, grids, timings)
        residue_tensors.append(_ifft_stage(pl, cfg, ws, pi, prime, table, values, timings))

    start = time.perf_counter()
    result = combine_tensor(residue_tensors)
    timings.crt += time.perf_counter() - start
    if ws is not None:
        ws.store_json("crt", _payload_from_tensor(result))
    cfg._notify("crt")
    return result, timings


def _fft_stage(m, pl, cfg, ws, pi, prime, table, timings):
    start = time.perf_counter()
    grids: list = [None] * m.k
    todo = []
    for eid in range(m.k):
        unit = f"p{pi}/fft/e{eid}"
        if ws is not None and ws.has(unit):
            grids[eid] = _load_grid(ws, unit, prime, pl)
        else:
            todo.append(eid)

    def transform(eid):
        entry = pad_to(reduce_mod(m.unique_entries[eid], prime), pl.shape)
        return ntt_forward_multi(entry, table).residues

    for eid, grid in zip(todo, map_streamed(transform, todo, cfg.workers)):
        unit = f"p{pi}/fft/e{eid}"
        grids[eid] = grid
        if ws is not None:
            ws.store_array(unit, grid, pl.shape)
        cfg._notify(unit)
    timings.fft += time.perf_counter() - start
    return grids


def _det_stage(m, pl, cfg, ws, pi, prime, grids, timings):
    start = time.perf_counter()
    unit = f"p{pi}/det"
    if ws is not None and ws.has(unit):
        values = _load_grid(ws, unit, prime, pl)
    else:
        values = det_grid(
            grids,
            m.r,
            prime,
            entry_ids=m.entry_ids,
            chunk_size=cfg.chunk_size,
            workers=cfg.workers,
        )
        if ws is not None:
            ws.store_array(unit, values, pl.shape)
        cfg._notify(unit)
    timings.det += time.perf_counter() - start
    return values


def _ifft_stage(pl, cfg, ws, pi, prime, table, values, timings):
    start = time.perf_counter()
    unit = f"p{pi}/ifft"
    grid = ModTensor(pl.shape, np.asarray(values), prime, pl.variables)
    tensor = ntt_inverse_multi(grid, table)
    if ws is not None:
        ws.store_array(unit, tensor.residues, pl.shape)
    cfg._notify(unit)
    timings.ifft += time.perf_counter() - start
    return tensor


def _load_grid(ws, unit, prime, pl):
    values, shape = ws.load_array(unit)
    if shape != pl.shape:
        raise StaleWorkspaceError(f"stale workspace: artifact shape {shape} != {pl.shape}")
    return values.astype(residue_dtype(prime), copy=False)


def _load_tensor(ws, unit, prime, pl) -> ModTensor:
    return ModTensor(pl.shape, _load_grid(ws, unit, prime, pl), prime, pl.variables)


def _payload_from_tensor(t: CoeffTensor) -> dict:
    return {
        "variables": list(t.axis_vars),
        "shape": list(t.shape),
        "coeffs": list(t.coeffs),
    }


def _tensor_from_payload(payload) -> CoeffTensor:
    return CoeffTensor(
        tuple(payload["shape"]),
        tuple(int(c) for c in payload["coeffs"]),
        tuple(payload["variables"]),
    )
