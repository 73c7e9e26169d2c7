"""
Reproducible random streams for DR Impute Sim.

Every stochastic step (data generation, missingness, posterior draws) pulls
from an RngStream keyed by (master seed, cell id, replication, purpose).
Streams are built on numpy's counter-based Philox generator seeded through a
SeedSequence, so the draws depend only on the key and never on which worker
process or in which order a replication runs.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from utils.errors import ArgumentError
from utils.helpers import stable_hash32

logger = logging.getLogger(__name__)

LAWS = ('standard_normal', 'bernoulli', 'chi_squared', 'uniform')

_MASK32 = 0xFFFFFFFF


@dataclass(frozen=True)
class RngStream:
    """Seed material plus the lazily created generator it keys.

    Two streams with equal seed material produce bit-identical sequences.
    Draws advance the underlying generator, so consumers that need an
    independent sequence should take a child() rather than share a stream.
    """

    seed: int
    cell_id: str = ""
    rep: int = 0
    purpose: str = "root"
    _generator: Optional[np.random.Generator] = field(
        default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.seed < 0:
            raise ArgumentError(f"master seed must be non-negative, got {self.seed}")
        if self.rep < 0:
            raise ArgumentError(f"replication index must be non-negative, got {self.rep}")

    def entropy(self) -> List[int]:
        """Integer words fed to the SeedSequence."""
        return [
            self.seed & _MASK32,
            (self.seed >> 32) & _MASK32,
            stable_hash32(self.cell_id),
            self.rep,
            stable_hash32(self.purpose),
        ]

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            bit_generator = np.random.Philox(np.random.SeedSequence(self.entropy()))
            object.__setattr__(self, '_generator', np.random.Generator(bit_generator))
        return self._generator

    def child(self, purpose: str) -> 'RngStream':
        """Independent stream for a sub-task, tagged with a nested purpose."""
        return RngStream(self.seed, self.cell_id, self.rep, f"{self.purpose}/{purpose}")


def draw(stream: RngStream,
         law: str,
         size: Optional[Union[int, tuple]] = None,
         p: Optional[Union[float, np.ndarray]] = None,
         df: Optional[float] = None) -> Union[float, np.ndarray]:
    """Draw from one of the supported laws.

    Args:
        stream: Source stream (advanced by the draw)
        law: One of 'standard_normal', 'bernoulli', 'chi_squared', 'uniform'
        size: Output shape; a scalar is returned when omitted. For bernoulli
            with an array p the shape defaults to p's shape.
        p: Success probability (scalar or per-row array) for bernoulli
        df: Degrees of freedom for chi_squared

    Returns:
        A float, or an array of the requested shape (bernoulli draws are 0/1
        integers)

    Raises:
        ArgumentError: Unknown law or invalid parameters
    """
    rng = stream.generator

    if law == 'standard_normal':
        return rng.standard_normal(size)

    if law == 'uniform':
        return rng.random(size)

    if law == 'chi_squared':
        if df is None or not np.isfinite(df) or df < 1:
            raise ArgumentError(f"chi_squared requires df >= 1, got {df}")
        return rng.chisquare(df, size)

    if law == 'bernoulli':
        if p is None:
            raise ArgumentError("bernoulli requires p")
        prob = np.asarray(p, dtype=float)
        if not np.all(np.isfinite(prob)) or np.any(prob < 0.0) or np.any(prob > 1.0):
            raise ArgumentError("bernoulli probabilities must lie in [0, 1]")
        if size is None:
            size = prob.shape if prob.ndim else None
        # uniform in [0, 1) so p = 0 never fires and p = 1 always does
        result = (rng.random(size) < prob).astype(np.int8)
        return int(result) if np.ndim(result) == 0 else result

    raise ArgumentError(f"Unknown law '{law}'. Valid laws: {', '.join(LAWS)}")


__all__ = ['RngStream', 'draw', 'LAWS']
