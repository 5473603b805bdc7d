"""Perturbative knot invariants: diagram algebra, configuration-space
integrals, and framing corrections over explicit knot embeddings."""

import json as _json

try:  # installed wheel: the extension lives inside the package
    from ._knotcs import *  # noqa: F401,F403
    from ._knotcs import invariant_report as _invariant_report
except ImportError:  # build tree: the extension sits next to the package
    from _knotcs import *  # noqa: F401,F403
    from _knotcs import invariant_report as _invariant_report

__version__ = "0.1.0"


def invariant(knot, order=2, samples=1 << 16, seed=1, threads=0, grid=512):
    """Corrected invariant of a framed knot, as a dict.

    `knot` is a knot description dict ({"type": "torus", ...} etc.), optionally
    wrapped as {"knot": ..., "framing": ...}.
    """
    report = _invariant_report(_json.dumps(knot), order, samples, seed, threads, grid)
    return _json.loads(report)
