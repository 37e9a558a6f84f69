"""Entanglement monotones, optimal conversion probability and the ratio ladder.

The d monotones of a spectrum are its suffix sums.  The best single-copy
conversion probability from a source to a target spectrum is the minimum
ratio of their monotones; iterating the minimization on the leading segment
produces the ladder of ratios r_1 < ... < r_k with block boundaries
l_1 > ... > l_k = 1, from which the deterministically reachable intermediate
state is assembled block by block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_epsilon
from .errors import RankDeficit
from .schmidt import ProbVec, effective_rank, pad_pair


@dataclass(frozen=True)
class MonotoneProfile:
    """Suffix sums E_l = sum of the entries from position l on (1-indexed l)."""

    values: tuple[float, ...]

    def at(self, l: int) -> float:
        return self.values[l - 1]


@dataclass(frozen=True)
class RatioLadder:
    """Minimized monotone-ratio sequence of a source -> target conversion.

    ``ratios[j]`` belongs to block j+1 covering entries
    [indices[j], indices[j-1] - 1] (1-indexed, with the virtual index l_0 =
    d + 1).  The first ratio is the conversion probability; the last block
    always starts at 1.
    """

    source: ProbVec
    target: ProbVec
    ratios: tuple[float, ...]
    indices: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.ratios)

    @property
    def dim(self) -> int:
        return self.source.dim

    @property
    def l0(self) -> int:
        return self.dim + 1


def _suffix_sums(entries: np.ndarray) -> np.ndarray:
    return np.cumsum(entries[::-1])[::-1]


def monotones(p: ProbVec) -> MonotoneProfile:
    return MonotoneProfile(tuple(float(x) for x in _suffix_sums(p.as_array())))


def _check_ranks(source: ProbVec, target: ProbVec) -> None:
    rs, rt = effective_rank(source), effective_rank(target)
    if rt > rs:
        raise RankDeficit(
            f"target needs {rt} non-zero coefficients but source has {rs}; "
            "conversion probability is 0"
        )


def _min_ratio(es: np.ndarray, et: np.ndarray, eps: float) -> tuple[float, int]:
    """Smallest-index minimizer of es/et over positions with et > eps."""
    ratios = np.full(et.shape, np.inf)
    admissible = et > eps
    ratios[admissible] = es[admissible] / et[admissible]
    l = int(np.argmin(ratios))
    return min(float(ratios[l]), 1.0), l + 1


def p_max(source: ProbVec, target: ProbVec) -> float:
    """Optimal probability of converting the source into the target spectrum.

    Equals 1 exactly when the source is majorized by the target (the
    deterministic case).  Raises ``RankDeficit`` when the conversion is
    impossible even probabilistically.
    """
    _check_ranks(source, target)
    s, t = pad_pair(source, target)
    r, _ = _min_ratio(_suffix_sums(s), _suffix_sums(t), get_epsilon())
    return r


def ratio_ladder(source: ProbVec, target: ProbVec) -> RatioLadder:
    """Full ratio ladder of the optimal source -> target conversion."""
    _check_ranks(source, target)
    s, t = pad_pair(source, target)
    d = s.size
    es, et = _suffix_sums(s), _suffix_sums(t)
    r1, l1 = _min_ratio(es, et, get_epsilon())
    ratios = [r1]
    indices = [l1]
    while indices[-1] != 1:
        lp = indices[-1]
        numer = es[: lp - 1] - es[lp - 1]
        denom = et[: lp - 1] - et[lp - 1]
        # positive for canonical targets: entries up to lp-1 are non-zero
        assert np.all(denom > 0), "non-canonical target in ratio ladder"
        block_ratios = numer / denom
        j = int(np.argmin(block_ratios))  # first minimum = smallest index
        ratios.append(float(block_ratios[j]))
        indices.append(j + 1)
    return RatioLadder(
        source=ProbVec(tuple(float(x) for x in s)),
        target=ProbVec(tuple(float(x) for x in t)),
        ratios=tuple(ratios),
        indices=tuple(indices),
    )


def r_vector(ladder: RatioLadder) -> tuple[float, ...]:
    """Block-constant, non-increasing vector carrying ratio j on block j."""
    rv = np.empty(ladder.dim)
    hi = ladder.l0  # exclusive 1-indexed upper bound of the current block
    for r, lo in zip(ladder.ratios, ladder.indices):
        rv[lo - 1 : hi - 1] = r
        hi = lo
    return tuple(float(x) for x in rv)


def intermediate_state(source: ProbVec, target: ProbVec) -> ProbVec:
    """Most target-like spectrum deterministically reachable from the source.

    The entrywise product of the ladder's block-constant ratio vector with
    the target spectrum; it majorizes the target and is majorized by the
    source.
    """
    ladder = ratio_ladder(source, target)
    rv = np.asarray(r_vector(ladder))
    chi = rv * ladder.target.as_array()
    return ProbVec(tuple(float(x) for x in chi))
