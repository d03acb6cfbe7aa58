"""Enhanced hydrodynamic near-cloak design for electro-osmotic Hele-Shaw flow."""

import os

try:
    from ._hncloak import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # build-tree layout used by the ctest smoke run
    from _hncloak import *  # noqa: F401,F403


def cli_path():
    """Path of the bundled command-line executable, if installed."""
    return os.path.join(os.path.dirname(__file__), "bin", "hncloak")
