"""Extra-gradient solvers with player sampling for convex quadratic games."""

try:
    from ._dseg import *  # noqa: F401,F403
    from ._dseg import __version__  # noqa: F401
except ImportError:  # running against a build tree
    from _dseg import *  # noqa: F401,F403
    from _dseg import __version__  # noqa: F401
