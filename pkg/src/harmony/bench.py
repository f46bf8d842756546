"""Timing harness: polynomial harmony vs. eigenvalue-based concurrence."""

import datetime as _dt
import platform
import time
from dataclasses import dataclass, field

import numpy as np

from . import measures
from .errors import ConfigError
from .states import RANDOM_SPEC_DEFAULT, RNG_ALGORITHM, RandomSpec
from .verify import random_two_qubit_state

ROUTES = {
    "polynomial": measures.harmony,
    "eigenvalue": measures.concurrence,
    "hermitian_r": measures.concurrence_via_r,
}


@dataclass
class BenchReport:
    batch_size: int
    repetitions: int
    routes: dict
    correctness_max_discrepancy: float
    checked_states: int
    polynomial_faster: bool
    environment: dict = field(default_factory=dict)

    def rows(self):
        for name, st in self.routes.items():
            yield {"route": name, "batch_size": self.batch_size,
                   "repetitions": self.repetitions, **st,
                   "correctness_max_discrepancy": self.correctness_max_discrepancy,
                   "polynomial_faster": int(self.polynomial_faster)}


def make_batch(batch_size: int, spec: RandomSpec):
    return [random_two_qubit_state(spec.child(i).rng()) for i in range(batch_size)]


def _time_route(fn, batch) -> float:
    t0 = time.perf_counter_ns()
    for rho in batch:
        fn(rho)
    return (time.perf_counter_ns() - t0) / len(batch)


def run_bench(batch_size: int, spec: RandomSpec = RANDOM_SPEC_DEFAULT,
              repetitions: int = 3) -> BenchReport:
    """Time every route over the same pre-generated batch.

    One warm-up pass per route is discarded; each timed repetition covers the
    whole batch and contributes one per-state figure (total / batch_size).
    """
    if batch_size < 1:
        raise ConfigError("batch_size must be >= 1")
    if repetitions < 3:
        raise ConfigError("repetitions must be >= 3")
    batch = make_batch(batch_size, spec)

    stats = {}
    for name, fn in ROUTES.items():
        _time_route(fn, batch)
        per_state = np.array([_time_route(fn, batch) for _ in range(repetitions)])
        stats[name] = {
            "mean_ns": float(per_state.mean()),
            "median_ns": float(np.median(per_state)),
            "p95_ns": float(np.percentile(per_state, 95)),
        }

    # route agreement on a 1% sample, evenly spaced so it is reproducible
    picks = range(0, batch_size, 100)
    disc = max(measures.route_discrepancy(measures.disharmony_routes(batch[i])) for i in picks)

    return BenchReport(
        batch_size=batch_size,
        repetitions=repetitions,
        routes=stats,
        correctness_max_discrepancy=disc,
        checked_states=len(picks),
        polynomial_faster=stats["polynomial"]["mean_ns"] < stats["eigenvalue"]["mean_ns"],
        environment={
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "seed": spec.seed,
            "stream": spec.stream,
            "rng": RNG_ALGORITHM,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "machine": platform.machine(),
        },
    )
