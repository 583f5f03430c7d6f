"""Jackson networks with unreliable servers: simulation and heavy-traffic
reflected-Brownian-motion approximation.

Thin wrapper over the compiled extension; see the README for the JSON config
schema and the CLI."""

try:
    from ._jacksim import *  # noqa: F401,F403  (installed package layout)
except ImportError:
    from _jacksim import *  # noqa: F401,F403  (build-tree layout)
