"""Python bindings for the food delivery dispatch library.

Instances and schedules are plain dicts in the JSON document layout used by
the command line tool.
"""

import json
from fractions import Fraction

from . import _fdp
from ._fdp import InputError, InvariantViolation, ParseError, UnsupportedError

__all__ = [
    "InputError",
    "InvariantViolation",
    "ParseError",
    "UnsupportedError",
    "base_instance",
    "certify_base_tour",
    "cli",
    "generate",
    "optimal_max_flow",
    "run_doubling",
    "run_speeding",
    "run_tree",
    "to_fraction",
    "validate",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def to_fraction(value):
    """Times are ints or "p/q" strings."""
    return Fraction(value) if isinstance(value, str) else Fraction(value)


def generate(seed, vertices=12, k=1, capacity=None, requests=20, f_target=10, chords=0):
    inst, witness = _fdp.generate(seed, vertices, k, capacity, requests, f_target, chords)
    return json.loads(inst), json.loads(witness)


def validate(instance, schedule, speed="1"):
    return json.loads(_fdp.validate(_text(instance), _text(schedule), str(speed)))


def run_tree(instance, F, online=False):
    return json.loads(_fdp.run_tree(_text(instance), str(F), online))


def run_speeding(instance, F, eps="1/2", mode="exact"):
    return json.loads(_fdp.run_speeding(_text(instance), str(F), str(eps), mode))


def run_doubling(instance):
    return json.loads(_fdp.run_doubling(_text(instance)))


def optimal_max_flow(instance, limit=6):
    return json.loads(_fdp.optimal_max_flow(_text(instance), limit))


def base_instance(p, lean="L"):
    return json.loads(_fdp.base_instance(p, lean))


def certify_base_tour(p, lean="L"):
    return _fdp.certify_base_tour(p, lean)


def cli(*args):
    return _fdp.cli([str(a) for a in args])
