"""Exact flag-algebra toolkit for subtournament density bounds.

Modules:
    arith         exact rational matrices, char polys, PSD decisions, Q(sqrt d)
    tournaments   representation, canonical labeling, enumeration, generators
    counting      induced-subtournament censuses (exact and Monte Carlo)
    flags         types, flags, densities, products, downward operator
    certificates  semidefinite certificate loading and verification
    structures    cyclic decomposability, forbidden patterns, limit runs
    cli           the `tourflag` command
"""

__version__ = "0.1.0"
