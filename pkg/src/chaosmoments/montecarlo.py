"""
Sampling of classical second-chaos variables and GUE proxies for free ones.

Randomness is drawn from counter-based Philox streams. The draws are cut
into fixed-size chunks and chunk ``j`` uses the stream keyed by
``(seed, j)``, so a batch is a pure function of ``(seed, count, lambdas)``
however many worker threads produce it.
"""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, UnsupportedKindError
from .spectral import ChaosKind, MomentSequence

__all__ = [
    "DEFAULT_SEED",
    "SampleBatch",
    "GueEstimate",
    "sample_classical",
    "empirical_moments",
    "moment_standard_errors",
    "empirical_wasserstein2",
    "gue_free_moment_estimate",
    "gue_free_moments",
    "gue_matrix",
]

DEFAULT_SEED = 0xC0FFEE
CHUNK_SIZE = 1 << 16


def _stream(seed, *key):
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray
    seed: int
    count: int
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.values) != self.count:
            raise InvalidInputError("count must equal the number of values")

    def to_csv(self):
        buf = io.StringIO()
        buf.write(f"# seed={self.seed} count={self.count} params={json.dumps(self.params)}\n")
        buf.write("F\n")
        np.savetxt(buf, self.values, fmt="%.17g")
        return buf.getvalue()


@dataclass(frozen=True)
class GueEstimate:
    order: int
    estimate: float
    matrix_size: int
    replicas: int
    std_error: float

    def to_dict(self):
        return {
            "order": self.order,
            "estimate": self.estimate,
            "matrix_size": self.matrix_size,
            "replicas": self.replicas,
            "std_error": self.std_error,
        }


def _chunk_values(lam, seed, j, size):
    normals = _stream(seed, j).standard_normal((size, lam.size))
    return (normals**2 - 1.0) @ lam / math.sqrt(2.0)


def sample_classical(seq, count, seed=DEFAULT_SEED, workers=1):
    """
    Draw ``count`` independent copies of ``sum lam_i (N_i^2 - 1) / sqrt 2``.

    Parameters
    ----------
    seq : CoefficientSequence
        Classical coefficients.
    count : int
        Number of draws.
    seed : int
        Root seed of the Philox streams.
    workers : int
        Threads used to fill the chunks; does not affect the values.
    """
    if seq.kind is not ChaosKind.CLASSICAL:
        raise UnsupportedKindError(
            "no classical sampler exists for free chaos; use gue_free_moment_estimate"
        )
    if count < 1:
        raise InvalidInputError(f"count must be positive, got {count}")
    lam = seq.as_array()
    sizes = [min(CHUNK_SIZE, count - start) for start in range(0, count, CHUNK_SIZE)]
    if lam.size == 0:
        values = np.zeros(count)
    elif workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda js: _chunk_values(lam, seed, *js), enumerate(sizes)))
        values = np.concatenate(parts)
    else:
        values = np.concatenate([_chunk_values(lam, seed, j, s) for j, s in enumerate(sizes)])
    params = {"kind": "classical", "lambda": list(seq.lambdas)}
    return SampleBatch(values, int(seed), int(count), params)


def _values(batch):
    return batch.values if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float)


def empirical_moments(batch, R):
    """Raw sample moments of orders ``1..R``."""
    if R < 2:
        raise InvalidInputError(f"max order must be >= 2, got {R}")
    x = _values(batch)
    return MomentSequence(
        ChaosKind.CLASSICAL, tuple(float(np.mean(x**r)) for r in range(1, R + 1))
    )


def moment_standard_errors(batch, R):
    """Standard errors ``std(x**r) / sqrt(n)`` of the raw sample moments."""
    x = _values(batch)
    return np.array([np.std(x**r) / math.sqrt(x.size) for r in range(1, R + 1)])


def empirical_wasserstein2(a, b):
    """Exact W2 between two equal-size empirical measures on the line."""
    x, y = _values(a), _values(b)
    if x.size != y.size:
        raise InvalidInputError(f"batches must have equal size, got {x.size} and {y.size}")
    return float(np.sqrt(np.mean((np.sort(x) - np.sort(y)) ** 2)))


def gue_matrix(rng, size):
    """GUE matrix whose spectral law tends to the unit-variance semicircle."""
    a = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    return (a + a.conj().T) / (2.0 * math.sqrt(size))


def _replica_traces(lam, orders, size, seed, replica):
    rng = _stream(seed, replica)
    m = np.zeros((size, size), dtype=complex)
    eye = np.eye(size)
    for x in lam:
        g = gue_matrix(rng, size)
        m += x * (g @ g - eye)
    eig = np.linalg.eigvalsh(m)
    return [float(np.mean(eig**p)) for p in orders]


def gue_free_moments(seq, orders, matrix_size=512, replicas=32, seed=DEFAULT_SEED, workers=1):
    """
    Normalized-trace moments of ``sum lam_z (G_z^2 - I)`` for independent
    GUE matrices, averaged over replicas. Returns one :class:`GueEstimate`
    per requested order; all orders share the same matrices.
    """
    if seq.kind is not ChaosKind.FREE:
        raise UnsupportedKindError("GUE estimates approximate free chaos only")
    orders = [int(p) for p in orders]
    for p in orders:
        if p % 2 or p < 2 or p > 12:
            raise InvalidInputError(f"order must be even and in 2..12, got {p}")
    if matrix_size < 64:
        raise InvalidInputError(f"matrix_size must be >= 64, got {matrix_size}")
    if replicas < 2:
        raise InvalidInputError("at least two replicas are needed for a standard error")
    lam = seq.as_array()

    def run(rep):
        return _replica_traces(lam, orders, matrix_size, seed, rep)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, range(replicas)))
    else:
        rows = [run(rep) for rep in range(replicas)]
    table = np.array(rows)
    out = []
    for i, p in enumerate(orders):
        col = table[:, i]
        out.append(
            GueEstimate(p, float(col.mean()), matrix_size, replicas,
                        float(col.std(ddof=1) / math.sqrt(replicas)))
        )
    return out


def gue_free_moment_estimate(seq, order, matrix_size=512, replicas=32, seed=DEFAULT_SEED, workers=1):
    """Single-order version of :func:`gue_free_moments`."""
    if order % 2:
        raise InvalidInputError(f"order must be even, got {order}")
    return gue_free_moments(seq, [order], matrix_size, replicas, seed, workers)[0]
