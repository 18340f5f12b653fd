"""Verification condition generation for acyclic core Boogie.

Typical use goes through :func:`boogievc.cli.run_pipeline`; the stages are
importable on their own (``frontend``, ``flowgraph``, ``passivation``,
``vcgen``, ``unshare``, ``prover``, ``incremental``, ``reachability``).
"""

__version__ = "0.1.0"
