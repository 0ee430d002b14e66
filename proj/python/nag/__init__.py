"""Distributed Nash-equilibrium seeking for networked aggregative games."""

try:
    from ._nag import *  # noqa: F401,F403
except ImportError:  # in-tree builds put the extension on sys.path directly
    from _nag import *  # noqa: F401,F403
