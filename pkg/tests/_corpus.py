"""Shared corpus access with cached models, so expensive builds happen once."""
from __future__ import annotations

import functools
import glob
import os
from typing import List, Optional

from ainfext import AInftyModel, load_presentation, parse_presentation

CORPUS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus")


def corpus_files() -> List[str]:
    return sorted(glob.glob(os.path.join(CORPUS_DIR, "*.txt")))


def corpus_names() -> List[str]:
    return [os.path.splitext(os.path.basename(p))[0] for p in corpus_files()]


@functools.lru_cache(maxsize=None)
def presentation(name: str):
    return load_presentation(os.path.join(CORPUS_DIR, name + ".txt"))


@functools.lru_cache(maxsize=None)
def model(name: str, N: Optional[int] = None, S: Optional[int] = None) -> AInftyModel:
    P = presentation(name)
    return AInftyModel(P, N if N is not None else P.cutoff_hom, S if S is not None else P.cutoff_adams)


@functools.lru_cache(maxsize=None)
def model_from_text(text: str, N: int, S: int) -> AInftyModel:
    return AInftyModel(parse_presentation(text), N, S)
