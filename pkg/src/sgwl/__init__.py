"""sgwl: dynamical semigroups of positive maps on bipartite systems.

Build generators from Kossakowski data, evolve them, decide positivity,
complete positivity and decomposability, and certify bound entanglement
through the duality pairing.
"""

from . import cli, decomp, gksl, matcore, posmap, scenarios

__all__ = ["cli", "decomp", "gksl", "matcore", "posmap", "scenarios"]
__version__ = "0.1.0"
