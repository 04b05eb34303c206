"""Random generators F of <G> and the dataset pipeline around them.

The elementary backend draws U = U1 ... Us from the elementary matrices of
size m and returns F = U [E_n; O] G. The Bruhat backend draws
A = U1 S [U2; O] with unitriangular U1, U2 and a permutation S. Either way A
has a polynomial left inverse B, so <F> = <G>.
"""

import hashlib
import json
import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from .field import QQ, FieldConfig
from .groebner import DEFAULT_MAX_PAIRS, ideal_equal
from .poly import MonomialOrder, Ring
from .polymat import (
    ADDROW, PERMUTE, SCALE, ElementaryOp, PolyMatrix, apply_elementary, bruhat_compose,
    left_inverse_from_trace, mat_mul, matrix_from_trace,
)
from .shape import CoeffDistribution, ShapeConfig, random_poly
from .tokens import encode_pair

ELEMENTARY, BRUHAT = "elementary", "bruhat"


class ResampleExhausted(RuntimeError):
    pass


class VerificationError(RuntimeError):
    pass


class RecordError(RuntimeError):
    """A failure while producing record ``idx``."""

    def __init__(self, idx, cause):
        super().__init__(f"record {idx}: {cause}")
        self.idx = idx
        self.cause = cause


def derive_seed(master_seed, *labels):
    """64-bit seed from a master seed and labels (blake2b of their repr)."""
    data = repr((master_seed,) + labels).encode()
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "big")


@dataclass(frozen=True)
class GenConfig:
    n: int = 2
    m: int = 3
    backend: str = ELEMENTARY
    s_min: int = 1
    s_max: int = 10
    op_mix: tuple = ((ADDROW, 0.6), (PERMUTE, 0.3), (SCALE, 0.1))
    addrow_degree_max: int = 1
    degree_cap: int | None = None
    coeffs: CoeffDistribution | None = None  # None: same default as the shape sampler
    forbid_zero_rows: bool = True
    verify: bool = True
    order: str = "lex"
    max_retries: int = 20
    max_record_attempts: int = 1000
    max_pairs: int = DEFAULT_MAX_PAIRS

    def __post_init__(self):
        if self.n < 1 or self.m < self.n:
            raise ValueError(f"m >= n >= 1 required, got n={self.n}, m={self.m}")
        if self.backend not in (ELEMENTARY, BRUHAT):
            raise ValueError(f"unknown backend {self.backend!r}")
        if not 1 <= self.s_min <= self.s_max:
            raise ValueError(f"need 1 <= s_min <= s_max, got {self.s_min}, {self.s_max}")
        mix = dict(self.op_mix)
        if set(mix) - {ADDROW, PERMUTE, SCALE} or any(w < 0 for w in mix.values()):
            raise ValueError(f"bad op_mix {self.op_mix}")
        if abs(sum(mix.values()) - 1) > 1e-9:
            raise ValueError("op_mix probabilities must sum to 1")
        if (mix.get(PERMUTE) or mix.get(ADDROW)) and self.m < 2:
            raise ValueError("row swaps and additions need m >= 2")
        if self.addrow_degree_max < 0 or (self.degree_cap is not None and self.degree_cap < 0):
            raise ValueError("degree bounds must be >= 0")
        MonomialOrder(self.order)

    @property
    def monomial_order(self):
        return MonomialOrder(self.order)

    def distribution(self, field):
        if self.coeffs is not None:
            return self.coeffs
        return ShapeConfig().distribution(field)


@dataclass
class DatasetRecord:
    G: list
    F: list
    ring: Ring
    backend: str
    trace: object  # list of ElementaryOp, or dict(U1=, S=, U2=) for Bruhat
    seed: int
    idx: int | None = None
    order: str = "lex"
    stats: dict = dc_field(default_factory=dict)

    @property
    def n(self):
        return len(self.G)

    @property
    def m(self):
        return len(self.F)

    def matrix(self):
        """A with F = A G, rebuilt from the trace."""
        if self.backend == ELEMENTARY:
            return matrix_from_trace(self.trace, self.ring, self.m, self.n)
        return bruhat_compose(self.trace["U1"], self.trace["S"], self.trace["U2"])[0]

    def left_inverse(self):
        if self.backend == ELEMENTARY:
            return left_inverse_from_trace(self.trace, self.ring, self.m, self.n)
        return bruhat_compose(self.trace["U1"], self.trace["S"], self.trace["U2"])[1]

    def to_json(self, emit_tokens=False):
        if self.backend == ELEMENTARY:
            trace = [op.to_json() for op in self.trace]
        else:
            trace = {"U1": self.trace["U1"].to_json(), "S": list(self.trace["S"]),
                     "U2": self.trace["U2"].to_json()}
        order = MonomialOrder(self.order)
        obj = {
            "idx": self.idx,
            "seed": f"{self.seed:016x}",
            "G": [g.render(order) for g in self.G],
            "F": [f.render(order) for f in self.F],
            "order": self.order,
            "field": self.ring.field.to_json(),
            "nvars": self.ring.nvars,
            "backend": self.backend,
            "trace": trace,
            "stats": self.stats,
        }
        if emit_tokens:
            obj["tokens"] = encode_pair(self.F, self.G, order)
        return obj

    @classmethod
    def from_json(cls, obj):
        ring = Ring(int(obj["nvars"]), FieldConfig.from_json(obj["field"]))
        G = [ring.parse(s) for s in obj["G"]]
        F = [ring.parse(s) for s in obj["F"]]
        backend = obj.get("backend", ELEMENTARY)
        if backend == ELEMENTARY:
            trace = [ElementaryOp.from_json(op, len(F), ring) for op in obj["trace"]]
        else:
            t = obj["trace"]
            trace = {"U1": PolyMatrix.from_json(ring, t["U1"]), "S": list(t["S"]),
                     "U2": PolyMatrix.from_json(ring, t["U2"])}
        return cls(G, F, ring, backend, trace, int(obj["seed"], 16), obj.get("idx"),
                   obj.get("order", "lex"), obj.get("stats", {}))


def check_record(rec, max_pairs=DEFAULT_MAX_PAIRS):
    """Re-verify a record; returns the list of failed checks (empty if sound)."""
    failures = []
    order = MonomialOrder(rec.order)
    if not ideal_equal(rec.F, rec.G, order, max_pairs=max_pairs):
        failures.append("ideal_mismatch")
    try:
        a = rec.matrix()
        b = rec.left_inverse()
    except ValueError:
        return failures + ["trace_invalid"]
    if a.shape != (rec.m, rec.n) or mat_mul(a, PolyMatrix.column(rec.ring, rec.G)).column_list() != rec.F:
        failures.append("trace_mismatch")
    if not mat_mul(b, a).is_identity():
        failures.append("witness_failed")
    return failures


def _stats(F, s):
    return {
        "s": s,
        "max_deg_F": max((f.degree() for f in F if f), default=-1),
        "max_coeff_bits": max((f.max_coeff_bits() for f in F), default=0),
        "zero_rows": sum(1 for f in F if not f),
    }


def _sample_op(rng, cfg, ring, dist):
    kinds, weights = zip(*cfg.op_mix)
    kind = rng.choices(kinds, weights)[0]
    m = cfg.m
    if kind == PERMUTE:
        i, j = rng.sample(range(m), 2)
        return ElementaryOp.permute(m, i, j)
    if kind == SCALE:
        return ElementaryOp.scale_row(m, rng.randrange(m), dist.sample_nonzero(rng, ring.field))
    i, j = rng.sample(range(m), 2)
    while True:
        f = random_poly(ring, cfg.addrow_degree_max, dist, rng)
        if f:
            return ElementaryOp.addrow(m, i, j, f)


def _within_cap(col, cap):
    return cap is None or all(f.degree() <= cap for f in col.column_list())


def _finish(G, F, ring, cfg, backend, trace, seed, s):
    rec = DatasetRecord(list(G), F, ring, backend, trace, seed, order=cfg.order)
    rec.stats = _stats(F, s)
    if cfg.verify:
        failures = check_record(rec, cfg.max_pairs)
        if failures:
            raise VerificationError(f"record with seed {seed:016x} failed {failures}")
    rec.stats["verified"] = cfg.verify
    return rec


def generate_record(G, cfg, record_seed, ops=None, s=None):
    """One (F, G) pair with F = U1 ... Us [E_n; O] G.

    ``ops`` (an explicit trace U1..Us) and ``s`` (a forced step count, 0
    allowed) are test hooks. Ops are drawn in application order, Us first;
    an op that pushes a row above ``degree_cap`` is redrawn up to
    ``max_retries`` times.
    """
    G = list(G)
    ring = G[0].ring
    if len(G) != cfg.n:
        raise ValueError(f"config expects n={cfg.n} polynomials, got {len(G)}")
    if not all(G):
        raise ValueError("G must consist of nonzero polynomials")
    rng = random.Random(record_seed)
    dist = cfg.distribution(ring.field)
    start = PolyMatrix.column(ring, G + [ring.zero()] * (cfg.m - cfg.n))

    if ops is not None:
        col = start
        for op in reversed(ops):
            col = apply_elementary(op, col)
        return _finish(G, col.column_list(), ring, cfg, ELEMENTARY, list(ops), record_seed, len(ops))

    for _ in range(cfg.max_record_attempts):
        steps = s if s is not None else rng.randint(cfg.s_min, cfg.s_max)
        col = start
        applied = []
        for _ in range(steps):
            for _ in range(cfg.max_retries + 1):
                op = _sample_op(rng, cfg, ring, dist)
                new = apply_elementary(op, col)
                if _within_cap(new, cfg.degree_cap):
                    break
            else:
                raise ResampleExhausted(f"no op within degree cap {cfg.degree_cap} after {cfg.max_retries} retries")
            col = new
            applied.append(op)
        F = col.column_list()
        if cfg.forbid_zero_rows and not all(F):
            continue
        applied.reverse()
        return _finish(G, F, ring, cfg, ELEMENTARY, applied, record_seed, steps)
    raise ResampleExhausted(f"every row nonzero not reached in {cfg.max_record_attempts} attempts")


def _random_unitriangular(ring, size, cfg, dist, rng):
    one, zero = ring.one(), ring.zero()
    rows = []
    for i in range(size):
        rows.append([
            one if i == j else zero if j < i else random_poly(ring, cfg.addrow_degree_max, dist, rng)
            for j in range(size)
        ])
    return PolyMatrix(ring, rows)


def generate_record_bruhat(G, cfg, record_seed, triple=None):
    """One (F, G) pair with F = U1 S [U2; O] G.

    ``triple=(U1, perm, U2)`` fixes the factors (test hook).
    """
    G = list(G)
    ring = G[0].ring
    if len(G) != cfg.n:
        raise ValueError(f"config expects n={cfg.n} polynomials, got {len(G)}")
    rng = random.Random(record_seed)
    dist = cfg.distribution(ring.field)
    gcol = PolyMatrix.column(ring, G)

    def build(u1, perm, u2):
        a, b = bruhat_compose(u1, perm, u2)
        if not mat_mul(b, a).is_identity():
            raise VerificationError("Bruhat left inverse check failed")
        return a, b, mat_mul(a, gcol)

    if triple is not None:
        u1, perm, u2 = triple
        a, b, fcol = build(u1, list(perm), u2)
        trace = {"U1": u1, "S": list(perm), "U2": u2}
        return _finish(G, fcol.column_list(), ring, cfg, BRUHAT, trace, record_seed, 0)

    for _ in range(cfg.max_record_attempts):
        for _ in range(cfg.max_retries + 1):
            u1 = _random_unitriangular(ring, cfg.m, cfg, dist, rng)
            perm = list(range(cfg.m))
            rng.shuffle(perm)
            u2 = _random_unitriangular(ring, cfg.n, cfg, dist, rng)
            a, b, fcol = build(u1, perm, u2)
            if _within_cap(fcol, cfg.degree_cap):
                break
        else:
            raise ResampleExhausted(f"no Bruhat triple within degree cap {cfg.degree_cap}")
        F = fcol.column_list()
        if cfg.forbid_zero_rows and not all(F):
            continue
        trace = {"U1": u1, "S": perm, "U2": u2}
        return _finish(G, F, ring, cfg, BRUHAT, trace, record_seed, 0)
    raise ResampleExhausted(f"every row nonzero not reached in {cfg.max_record_attempts} attempts")


# ---------------------------------------------------------------------------
# datasets
# ---------------------------------------------------------------------------

def make_record(idx, cfg, shape_cfg, master_seed, field=QQ):
    seed = derive_seed(master_seed, idx)
    basis = shape_cfg.sample(cfg.n, derive_seed(seed, "shape"), field)
    gen = generate_record if cfg.backend == ELEMENTARY else generate_record_bruhat
    try:
        rec = gen(basis.polys(), cfg, seed)
    except (ResampleExhausted, VerificationError) as exc:
        raise RecordError(idx, exc) from exc
    rec.idx = idx
    rec.stats["d"] = basis.d
    return rec


def _record_line(args):
    idx, cfg, shape_cfg, master_seed, field, emit_tokens = args
    rec = make_record(idx, cfg, shape_cfg, master_seed, field)
    return json.dumps(rec.to_json(emit_tokens)), rec.stats


def _hist(counter):
    return {str(k): counter[k] for k in sorted(counter)}


def default_jobs():
    return int(os.environ.get("IDEALGEN_JOBS", "1"))


def generate_dataset(count, cfg, shape_cfg, master_seed, sink, field=QQ, jobs=None, emit_tokens=False):
    """Write ``count`` records as JSON lines to ``sink`` (a path or text file).

    Output is identical for any ``jobs`` value: records are written in index
    order. Returns summary statistics.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    jobs = default_jobs() if jobs is None else jobs
    tasks = ((i, cfg, shape_cfg, master_seed, field, emit_tokens) for i in range(count))
    own = isinstance(sink, (str, os.PathLike))
    out = open(sink, "w", encoding="utf-8") if own else sink
    hists = {k: Counter() for k in ("max_deg_F", "max_coeff_bits", "s", "d")}
    verified = 0
    try:
        if jobs > 1:
            pool = ProcessPoolExecutor(jobs)
            results = pool.map(_record_line, tasks, chunksize=8)
        else:
            pool = None
            results = map(_record_line, tasks)
        try:
            for idx, (line, stats) in enumerate(results):
                try:
                    out.write(line + "\n")
                except OSError as exc:
                    raise RecordError(idx, exc) from exc
                verified += bool(stats.get("verified"))
                for k, h in hists.items():
                    h[stats[k]] += 1
        finally:
            if pool is not None:
                pool.shutdown(cancel_futures=True)
    finally:
        if own:
            out.close()
    return {
        "count": count,
        "verified": verified,
        "pass_rate": verified / count if cfg.verify else None,
        "histograms": {k: _hist(h) for k, h in hists.items()},
    }


def coverage_growth(G, s_values=(1, 2, 3, 4), records=10_000, seed=0, m=3,
                    coeffs=CoeffDistribution("int", -1, 1, zero_weight=None), addrow_degree_max=1):
    """Distinct F (as rendered strings) among ``records`` draws, per s_max."""
    G = list(G)
    out = {}
    for s_max in s_values:
        cfg = GenConfig(n=len(G), m=m, s_max=s_max, coeffs=coeffs, addrow_degree_max=addrow_degree_max,
                        forbid_zero_rows=False, verify=False)
        seen = set()
        for i in range(records):
            rec = generate_record(G, cfg, derive_seed(seed, s_max, i))
            seen.add(tuple(str(f) for f in rec.F))
        out[s_max] = len(seen)
    return out
