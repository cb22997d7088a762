"""Monte Carlo experiments: many independent (graph, labels, channel) draws."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..ensemble import EnsembleSpec
from .graph import sample_graph, sample_labels, transmit_bec
from .probvec_bp import bp_decode_probvec
from .subspace_bp import bp_decode_subspace

__all__ = ["TrialResult", "ExperimentResult", "run_trial", "run_experiment"]

_DECODERS = {"subspace": bp_decode_subspace, "probvec": bp_decode_probvec}


@dataclass(frozen=True)
class TrialResult:
    trial: int
    iterations: int
    success: bool
    symbol_erasure_rate: float
    bit_erasure_rate: float
    hist_counts: np.ndarray  # (max_iter, m + 1) message-dimension counts
    n_edges: int

    @property
    def hist(self) -> np.ndarray:
        return self.hist_counts / self.n_edges


@dataclass
class ExperimentResult:
    ensemble: EnsembleSpec
    n: int
    epsilon: float
    max_iter: int
    seed: int
    trials: list[TrialResult]

    def _stat(self, name):
        x = np.array([getattr(t, name) for t in self.trials], dtype=float)
        se = x.std(ddof=1) / np.sqrt(len(x)) if len(x) > 1 else 0.0
        return float(x.mean()), float(se)

    @property
    def symbol_erasure(self) -> tuple[float, float]:
        """(mean, standard error) of the terminal symbol-erasure rate."""
        return self._stat("symbol_erasure_rate")

    @property
    def bit_erasure(self) -> tuple[float, float]:
        return self._stat("bit_erasure_rate")

    @property
    def failure(self) -> tuple[float, float]:
        x = np.array([not t.success for t in self.trials], dtype=float)
        se = x.std(ddof=1) / np.sqrt(len(x)) if len(x) > 1 else 0.0
        return float(x.mean()), float(se)

    @property
    def hist_total(self) -> np.ndarray:
        """Message-dimension counts per round summed over trials."""
        return np.sum([t.hist_counts for t in self.trials], axis=0)

    @property
    def hist_mean(self) -> np.ndarray:
        return np.mean([t.hist for t in self.trials], axis=0)

    @property
    def hist_stderr(self) -> np.ndarray:
        if len(self.trials) < 2:
            return np.zeros_like(self.hist_mean)
        h = np.array([t.hist for t in self.trials])
        return h.std(axis=0, ddof=1) / np.sqrt(len(h))


def run_trial(
    e: EnsembleSpec,
    n: int,
    eps: float,
    max_iter: int,
    seed: np.random.SeedSequence,
    trial: int = 0,
    decoder: str = "subspace",
) -> TrialResult:
    rng = np.random.default_rng(seed)
    g = sample_labels(sample_graph(n, e, rng), e, rng)
    erased = transmit_bec(g.n_var, e.m, eps, rng)
    tr = _DECODERS[decoder](g, erased, max_iter=max_iter, stop_on_success=False)
    hist = tr.hist
    if len(hist) < max_iter:
        # decoding reached a fixed point; later rounds repeat the last one
        last = hist[-1:] if len(hist) else g.n_edges * np.eye(1, e.m + 1, dtype=np.int64)
        hist = np.vstack([hist, np.repeat(last, max_iter - len(hist), axis=0)])
    return TrialResult(
        trial=trial,
        iterations=tr.iterations,
        success=tr.success,
        symbol_erasure_rate=tr.symbol_erasure_rate,
        bit_erasure_rate=tr.bit_erasure_rate,
        hist_counts=hist,
        n_edges=g.n_edges,
    )


def run_experiment(
    e: EnsembleSpec,
    n: int,
    eps: float,
    trials: int,
    max_iter: int = 100,
    seed: int = 0,
    decoder: str = "subspace",
    workers: int = 1,
) -> ExperimentResult:
    """Independent trials with seeds spawned from ``seed``.

    Results depend only on the arguments, not on ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if decoder not in _DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}")
    seeds = np.random.SeedSequence(seed).spawn(trials)
    args = [(e, n, eps, max_iter, s, i, decoder) for i, s in enumerate(seeds)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_trial, *zip(*args)))
    else:
        results = [run_trial(*a) for a in args]
    results.sort(key=lambda t: t.trial)
    return ExperimentResult(e, n, eps, max_iter, seed, results)
