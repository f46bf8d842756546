"""Seeded Monte Carlo property campaigns.

Sample ``i`` draws everything from ``RandomSpec(seed, stream=i)``, so results
do not depend on how samples are split across worker processes.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from . import measures, monogamy, qmat
from .errors import SpectrumViolation
from .states import DensityMatrix, RandomSpec, haar_vector, induced_from_rng, partial_trace

KINDS = ("properties", "monogamy", "corollary")

# name -> tolerance; a sample violates a check when its excess exceeds the tolerance
CHECKS = {
    "properties": {
        "route_agreement": 1e-9,
        "envelope_lo": 1e-9,
        "envelope_hi": 1e-9,
        "dominance": 1e-9,
        "lambda_sum": 1e-9,
        "zero_set": 0.0,
        "rho_rho_tilde_nonneg": 1e-8,
    },
    "monogamy": {
        "residual": 1e-9,
        "proof_chain": 1e-9,
        "tangle_identity": 1e-9,
        "two_nonzero_lambdas": 1e-8,
        "corollary": 1e-9,
    },
    "corollary": {
        "corollary": 1e-9,
        "decomposition_bound": 1e-9,
    },
}

COLUMNS = {
    "properties": ["row", "sample", "rank", "harmony", "disharmony", "concurrence",
                   "lambda1", "lambda2", "lambda3", "lambda4", "lambda_sum",
                   "route_discrepancy", "envelope_lo_excess", "envelope_hi_excess",
                   "dominance_excess"],
    "monogamy": ["row", "sample", "pivot", "h_xy", "h_xz", "h_x_yz", "residual_pure",
                 "corollary_lhs", "proof_chain_excess", "tangle_identity_gap",
                 "small_lambda_max"],
    "corollary": ["row", "sample", "rank", "pivot", "h_xy", "h_xz", "corollary_lhs",
                  "decomposition_bound"],
}
SUMMARY_COLUMNS = ["check", "worst", "tolerance", "violations"]

ZERO_TOL = 1e-9

Outcome = Tuple[dict, Dict[str, float]]


def _properties(i: int, seed: int, rank: Optional[int]) -> List[Outcome]:
    rng = RandomSpec(seed, i).rng()
    r = int(rng.integers(1, 5)) if rank is None else rank
    rho = DensityMatrix(induced_from_rng(rng, 4, r))
    ex = {}
    mu = qmat.gen_eigvals(measures.rho_rho_tilde(rho))
    ex["rho_rho_tilde_nonneg"] = max(0.0, -float(mu.real.min()), float(np.abs(mu.imag).max()))
    try:
        lam = measures.lambda_spectrum(rho)
        rlam = measures.r_spectrum(rho)
    except SpectrumViolation:
        row = {"row": "sample", "sample": i, "rank": r}
        return [(row, {**ex, "route_agreement": math.inf})]
    d_poly = measures.disharmony_poly(rho)
    routes = {
        "polynomial": d_poly,
        "spectrum": measures.disharmony_from_spectrum(lam),
        "hermitian_r": measures.disharmony_from_spectrum(rlam),
    }
    h = max(0.0, -d_poly)
    c = lam.concurrence
    lo, hi = measures.harmony_bounds(min(c, 1.0))
    disc = measures.route_discrepancy(routes)
    ex["route_agreement"] = disc
    ex["envelope_lo"] = lo - h
    ex["envelope_hi"] = h - hi
    ex["dominance"] = h - c
    ex["lambda_sum"] = max(lam.total, rlam.total) - 1.0
    # H >= C^4, so "H is zero" can only imply C <= H^(1/4); C <= tol does imply H <= tol
    h_zero, c_zero = h <= ZERO_TOL, c <= ZERO_TOL
    c_small = c <= ZERO_TOL ** 0.25
    ex["zero_set"] = float((c_zero and not h_zero) or (h_zero and not c_small))
    row = {"row": "sample", "sample": i, "rank": r, "harmony": h, "disharmony": d_poly,
           "concurrence": c, "lambda_sum": lam.total, "route_discrepancy": disc,
           "envelope_lo_excess": ex["envelope_lo"], "envelope_hi_excess": ex["envelope_hi"],
           "dominance_excess": ex["dominance"]}
    for k, v in enumerate(lam, 1):
        row[f"lambda{k}"] = v
    return [(row, ex)]


def _monogamy(i: int, seed: int, rank: Optional[int]) -> List[Outcome]:
    rng = RandomSpec(seed, i).rng()
    psi = haar_vector(rng, 8)
    rho = DensityMatrix(np.outer(psi, psi.conj()))
    out = []
    for pivot in range(3):
        rxy, rxz = monogamy.pair_marginals(rho, pivot)
        h_xy, h_xz = measures.harmony(rxy), measures.harmony(rxz)
        h_x_yz = monogamy.harmony_x_yz(rho, pivot)
        t_xy, t_xz = monogamy.trace_term(rxy), monogamy.trace_term(rxz)
        det_x = qmat.det(partial_trace(rho, [pivot]).mat).real
        small = max(max(measures.lambda_spectrum(m)[2:]) for m in (rxy, rxz))
        residual = h_x_yz - h_xy - h_xz
        ex = {
            "residual": -residual,
            "proof_chain": max(h_xy - t_xy ** 2, h_xz - t_xz ** 2),
            "tangle_identity": abs(t_xy + t_xz - 4 * det_x),
            "two_nonzero_lambdas": small,
            "corollary": h_xy ** 2 + h_xz ** 2 - 1.0,
        }
        row = {"row": "sample", "sample": i, "pivot": pivot, "h_xy": h_xy, "h_xz": h_xz,
               "h_x_yz": h_x_yz, "residual_pure": residual,
               "corollary_lhs": h_xy ** 2 + h_xz ** 2,
               "proof_chain_excess": ex["proof_chain"],
               "tangle_identity_gap": ex["tangle_identity"], "small_lambda_max": small}
        out.append((row, ex))
    return out


def _corollary(i: int, seed: int, rank: Optional[int], decompositions: int = 0) -> List[Outcome]:
    rng = RandomSpec(seed, i).rng()
    r = int(rng.integers(1, 9)) if rank is None else rank
    rho = DensityMatrix(induced_from_rng(rng, 8, r))
    out = []
    for pivot in range(3):
        h_xy, h_xz = monogamy.marginal_harmonies(rho, pivot)
        lhs = h_xy ** 2 + h_xz ** 2
        ex = {"corollary": lhs - 1.0}
        bound = None
        if decompositions:
            # independent stream family for the decomposition draws
            spec = RandomSpec(seed, (1 << 40) + 3 * i + pivot)
            bound = monogamy.decomposition_min_upper_bound(rho, pivot, decompositions, spec)
            ex["decomposition_bound"] = bound - 1.0
        row = {"row": "sample", "sample": i, "rank": r, "pivot": pivot, "h_xy": h_xy,
               "h_xz": h_xz, "corollary_lhs": lhs, "decomposition_bound": bound}
        out.append((row, ex))
    return out


_SAMPLERS = {"properties": _properties, "monogamy": _monogamy, "corollary": _corollary}


@dataclass
class CampaignSummary:
    kind: str
    worst: Dict[str, float] = field(default_factory=dict)
    violations: Dict[str, int] = field(default_factory=dict)
    samples: int = 0

    def add(self, excess: Dict[str, float]):
        tols = CHECKS[self.kind]
        for name, v in excess.items():
            self.worst[name] = max(self.worst.get(name, -math.inf), v)
            if v > tols[name]:
                self.violations[name] = self.violations.get(name, 0) + 1

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def rows(self):
        for name, tol in CHECKS[self.kind].items():
            if name not in self.worst:
                continue
            yield {"row": "summary", "check": name, "worst": self.worst[name],
                   "tolerance": tol, "violations": self.violations.get(name, 0)}


def _chunk(indices, kind, seed, rank, kwargs):
    fn = _SAMPLERS[kind]
    return [fn(i, seed, rank, **kwargs) for i in indices]


def iter_campaign(kind: str, n: int, seed: int, rank: Optional[int] = None, jobs: int = 1,
                  summary: Optional[CampaignSummary] = None, **kwargs) -> Iterator[dict]:
    """Yield per-sample rows in sample order while folding excesses into ``summary``."""
    if kind not in _SAMPLERS:
        raise ValueError(f"unknown campaign {kind!r}; choose from {KINDS}")
    if summary is None:
        summary = CampaignSummary(kind)

    def consume(outcomes):
        for row, ex in outcomes:
            summary.add(ex)
            yield row
        summary.samples += 1

    if jobs <= 1:
        fn = _SAMPLERS[kind]
        for i in range(n):
            yield from consume(fn(i, seed, rank, **kwargs))
        return
    size = max(1, min(500, n // (4 * jobs) or 1))
    chunks = [range(s, min(n, s + size)) for s in range(0, n, size)]
    work = partial(_chunk, kind=kind, seed=seed, rank=rank, kwargs=kwargs)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for block in pool.map(work, chunks):
            for outcomes in block:
                yield from consume(outcomes)


def run_campaign(kind: str, n: int, seed: int, rank: Optional[int] = None, jobs: int = 1,
                 keep_rows: bool = False, **kwargs):
    """Run a campaign to completion. Returns ``(summary, rows)``."""
    summary = CampaignSummary(kind)
    rows = []
    for row in iter_campaign(kind, n, seed, rank, jobs, summary, **kwargs):
        if keep_rows:
            rows.append(row)
    return summary, rows
