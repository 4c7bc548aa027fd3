"""Sphere-embedded multigraphs, carving decompositions, embedded relations."""

from .planegraph import Dart, Face, PlaneGraph, build_graph
from .plg import load_plg, parse_plg, serialize_plg
from .canonical import canonical_form, equivalent, reflect
from .cuts import connectivity_profile, cut, m_cut, m_cut_brute
from .ops import Op, apply_embedded_op, parse_script, replay, serialize_script

__all__ = [
    "Dart",
    "Face",
    "PlaneGraph",
    "build_graph",
    "load_plg",
    "parse_plg",
    "serialize_plg",
    "canonical_form",
    "equivalent",
    "reflect",
    "connectivity_profile",
    "cut",
    "m_cut",
    "m_cut_brute",
    "Op",
    "apply_embedded_op",
    "parse_script",
    "replay",
    "serialize_script",
]
