"""Classical simulation of entangled-state outcome statistics.

Thin wrapper around the compiled ``_core`` extension: modular arithmetic,
k-th root enumeration, the closed-form outcome distribution with its
enumeration oracle, and the session pipeline.
"""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
    from ._core import __version__  # noqa: F401
except ImportError:  # build-tree layout: _core.so sits on sys.path
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
