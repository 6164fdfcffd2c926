"""Ordered enumeration of regular languages: each word reached from the previous one by a short edit script."""

from .automata import Dfa, build_dfa, from_regex, load_dfa, parse_dfa
from .enumerator import StreamConfig, enumerate_finite, enumerate_language, enumerate_part
from .interchange import build_partition, interchangeability_classes

__all__ = [
    "Dfa",
    "StreamConfig",
    "build_dfa",
    "build_partition",
    "enumerate_finite",
    "enumerate_language",
    "enumerate_part",
    "from_regex",
    "interchangeability_classes",
    "load_dfa",
    "parse_dfa",
]
