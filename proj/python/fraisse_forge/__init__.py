"""Universal graphs, their endomorphism monoids and Green's relations.

Structures are plain dicts in the JSON layout used by the ``forge`` tool::

    {"kind": "graph", "vertices": ["a", "b"], "edges": [["a", "b"]]}
"""

import json

from . import _core
from ._core import CapExceeded, CoverageError, ForgeError, ParseError, PreconditionError

__all__ = [
    "CapExceeded",
    "CoverageError",
    "ForgeError",
    "ParseError",
    "PreconditionError",
    "count_automorphisms",
    "green_counts",
    "isomorphic",
    "run",
    "stage",
    "verify_monoid_claims",
]


def _dump(structure):
    return structure if isinstance(structure, str) else json.dumps(structure)


def run(*args):
    """Run a forge subcommand in-process and return (code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])


def count_automorphisms(structure, vertex_cap=16):
    return _core.count_automorphisms(_dump(structure), vertex_cap)


def isomorphic(a, b, vertex_cap=16):
    return _core.isomorphic(_dump(a), _dump(b), vertex_cap)


def green_counts(structure):
    """Sizes of End and the number of L, R, H, D, J classes and idempotents."""
    return json.loads(_core.green_counts(_dump(structure)))


def verify_monoid_claims(structure):
    return json.loads(_core.verify_monoid_claims(_dump(structure)))


def stage(seed, stages=1, subset_cap=None):
    """The finite structure after the given number of witness stages."""
    return json.loads(_core.stage(_dump(seed), stages, subset_cap))
