"""Radiation-reaction position-shift laboratory.

Thin wrapper over the compiled _radshift core.  When installed as a wheel the
extension lives inside this package; during in-tree development it sits on
PYTHONPATH next to the build directory, so fall back to a top-level import.
"""

try:
    from ._radshift import *  # noqa: F401,F403
    from ._radshift import __doc__  # noqa: F401
except ImportError:
    from _radshift import *  # noqa: F401,F403
    from _radshift import __doc__  # noqa: F401
