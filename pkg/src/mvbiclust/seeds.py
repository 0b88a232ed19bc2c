"""Deterministic RNG derivation.

Every random draw in the package comes from a generator built here. Streams
are identified by short tuples of non-negative integers (seed first, then
context tags such as the candidate count or view index), so independent parts
of the pipeline get independent, reproducible streams without sharing state.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np


def _flatten(tags) -> list[int]:
    out = []
    for t in tags:
        if isinstance(t, (list, tuple, np.ndarray)):
            out.extend(_flatten(t))
        else:
            out.append(int(t))
    return out


def rng_for(*tags) -> np.random.Generator:
    """Generator for the stream identified by the given integer tags.

    Tags may be ints or nested sequences of ints; they are flattened in order
    into the seed sequence entropy.
    """
    entropy = _flatten(tags)
    if not entropy:
        raise ValueError("at least one tag is required")
    if any(t < 0 for t in entropy):
        raise ValueError(f"seed tags must be non-negative, got {entropy}")
    return np.random.default_rng(entropy)
