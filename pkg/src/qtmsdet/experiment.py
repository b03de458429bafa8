"""Reproducible Monte Carlo experiment harness.

A SimulationPlan fully describes one detector experiment.  Scores are produced
in fixed-size chunks, each chunk seeded from (master seed, plan index,
hypothesis, chunk index) via a counter-based Philox stream.  Results are
therefore bit-identical regardless of how many workers run the chunks.
"""

from __future__ import annotations

import concurrent.futures
import multiprocessing
from dataclasses import dataclass, replace

import numpy as np

from . import detectors
from .detectors import DetectorKind
from .sigmodel import CovarianceParams, RadarKind, sample_stats_batch

CHUNK = 1 << 16

H1_STREAM = 0
H0_STREAM = 1


@dataclass(frozen=True)
class SimulationPlan:
    """Everything needed to rerun one experiment bit-identically."""

    n: int
    rho: float
    trials: int
    seed: int
    detector: DetectorKind = DetectorKind.LR_EXACT
    sigma1: float = 1.0
    sigma2: float = 1.0
    phi: float = 0.0
    kind: RadarKind = RadarKind.QTMS

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        self.params()  # validate the covariance parameters eagerly

    def params(self, rho: float | None = None) -> CovarianceParams:
        return CovarianceParams(
            self.sigma1, self.sigma2, self.phi,
            self.rho if rho is None else rho, self.kind,
        )


_PLAN_FIELDS = ("n", "rho", "trials", "seed", "detector",
                "sigma1", "sigma2", "phi", "kind")


def plan_to_config(plan: SimulationPlan) -> str:
    lines = []
    for name in _PLAN_FIELDS:
        value = getattr(plan, name)
        if isinstance(value, (DetectorKind, RadarKind)):
            value = value.value
        lines.append(f"{name} = {value!r}" if isinstance(value, str) else f"{name} = {value}")
    return "\n".join(lines) + "\n"


def plan_from_config(text: str, **overrides) -> SimulationPlan:
    """Parse the flat key = value config format; overrides win."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip().strip("'\"")
        if key not in _PLAN_FIELDS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        values[key] = val
    values.update({k: v for k, v in overrides.items() if v is not None})
    return _coerce_plan(values)


def _coerce_plan(values: dict) -> SimulationPlan:
    def get(name, conv, default=None):
        if name not in values:
            if default is None:
                raise ValueError(f"missing plan field {name!r}")
            return default
        v = values[name]
        return v if not isinstance(v, str) else conv(v)

    return SimulationPlan(
        n=get("n", int),
        rho=get("rho", float),
        trials=get("trials", int),
        seed=get("seed", int),
        detector=get("detector", DetectorKind, DetectorKind.LR_EXACT),
        sigma1=get("sigma1", float, 1.0),
        sigma2=get("sigma2", float, 1.0),
        phi=get("phi", float, 0.0),
        kind=get("kind", RadarKind, RadarKind.QTMS),
    )


def chunk_rng(seed: int, plan_index: int, stream: int, chunk_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(plan_index, stream, chunk_index))
    return np.random.Generator(np.random.Philox(ss))


def _score_chunk(plan: SimulationPlan, null: bool, plan_index: int, chunk_index: int,
                 trials: int):
    """Score one chunk; returns (scores, approx-fallback count)."""
    stream = H0_STREAM if null else H1_STREAM
    rng = chunk_rng(plan.seed, plan_index, stream, chunk_index)
    params = plan.params(rho=0.0) if null else plan.params()
    p_tot, d1 = sample_stats_batch(params, plan.n, trials, rng)
    return score_stats(plan.detector, p_tot, d1, plan.n)


def score_stats(kind: DetectorKind, p_tot, d1, n):
    """Vectorized detector scores from statistic arrays.

    The approximate LR detector is undefined at p_tot <= 2; those trials fall
    back to the exact detector and are counted, mirroring the CLI contract.
    """
    if kind is DetectorKind.D1:
        return np.asarray(d1, dtype=float).copy(), 0
    if kind is DetectorKind.LR_EXACT:
        value, _ = detectors.lr_scores(p_tot, d1, n)
        return value, 0
    p_tot = np.asarray(p_tot, dtype=float)
    bad = p_tot <= 2.0
    scores = np.where(bad, 0.0, detectors.lr_approx_scores(np.where(bad, 3.0, p_tot), d1, n))
    n_bad = int(np.count_nonzero(bad))
    if n_bad:
        exact, _ = detectors.lr_scores(p_tot[bad], np.asarray(d1, dtype=float)[bad], n)
        scores[bad] = exact
    return scores, n_bad


def simulate_scores(plan: SimulationPlan, null: bool = False, workers: int = 1,
                    plan_index: int = 0):
    """All detector scores for one plan and hypothesis.

    Returns (scores, fallback_count).  Chunked seeding makes the output a pure
    function of the plan, independent of the worker count.
    """
    n_chunks = (plan.trials + CHUNK - 1) // CHUNK
    sizes = [min(CHUNK, plan.trials - i * CHUNK) for i in range(n_chunks)]
    jobs = [(plan, null, plan_index, i, sizes[i]) for i in range(n_chunks)]
    if workers <= 1 or n_chunks == 1:
        results = [_score_chunk(*job) for job in jobs]
    else:
        ctx = multiprocessing.get_context("fork")
        with concurrent.futures.ProcessPoolExecutor(
            max_workers=workers, mp_context=ctx
        ) as pool:
            results = list(pool.map(_score_chunk, *zip(*jobs)))
    scores = np.concatenate([r[0] for r in results])
    fallbacks = sum(r[1] for r in results)
    return scores, fallbacks


def simulate_score_pair(plan: SimulationPlan, workers: int = 1, plan_index: int = 0):
    """(h0_scores, h1_scores, fallback_count) for one plan."""
    h1, fb1 = simulate_scores(plan, null=False, workers=workers, plan_index=plan_index)
    h0, fb0 = simulate_scores(plan, null=True, workers=workers, plan_index=plan_index)
    return h0, h1, fb0 + fb1


def with_detector(plan: SimulationPlan, detector: DetectorKind) -> SimulationPlan:
    return replace(plan, detector=detector)
