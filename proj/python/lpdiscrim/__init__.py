"""Exact evaluation of local protocols for distinguishing orthogonal states.

Ensembles, protocols and reports travel as the same JSON documents the
``repro`` command line tool reads and writes; this module decodes them into
plain dicts.
"""

import json

from . import _lpdiscrim
from ._lpdiscrim import SearchFailure, case_ids, copy_bound, negativity

__all__ = [
    "SearchFailure",
    "case_ids",
    "construct_schedule",
    "copy_bound",
    "evaluate",
    "family",
    "grid_search",
    "negativity",
    "protocol",
    "run_case",
]


def _doc(x):
    return x if isinstance(x, str) else json.dumps(x)


def family(family_id, allow_coincident=False, **params):
    return json.loads(_lpdiscrim.family(family_id, params, allow_coincident))


def protocol(name, resource="mes", a=0.0, alpha_prime=0.0, theta=0.0):
    return json.loads(_lpdiscrim.protocol(name, resource, a, alpha_prime, theta))


def evaluate(ensemble, protocol):
    return json.loads(_lpdiscrim.evaluate(_doc(ensemble), _doc(protocol)))


def grid_search(ensemble, copies=1, resolution=1e-3, seed=0):
    return json.loads(_lpdiscrim.grid_search(_doc(ensemble), copies, resolution, seed))


def construct_schedule(ensemble):
    return json.loads(_lpdiscrim.construct_schedule(_doc(ensemble)))


def run_case(case_id, **options):
    return json.loads(_lpdiscrim.run_case(case_id, **options))
