"""ETPA experiment feasibility toolkit.

Thin re-export of the compiled core; see the C++ headers for the physics
conventions (SI everywhere, spectral sigma in STD-angular form).
"""

try:
    from ._etpa import *  # noqa: F401,F403
except ImportError:  # flat layout: compiled module sits next to the package
    from _etpa import *  # noqa: F401,F403
