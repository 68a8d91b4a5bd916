"""RBF network classification toolkit for tabular clinical records.

Thin wrapper over the compiled _rbfn extension. When installed as a wheel
the extension lives inside this package; in a plain CMake build tree it is
importable from the build directory instead.
"""

try:
    from rbfn._rbfn import *  # noqa: F401,F403
    from rbfn._rbfn import __doc__ as _doc
except ImportError:  # build-tree layout: extension on sys.path, not in the package
    from _rbfn import *  # noqa: F401,F403
    from _rbfn import __doc__ as _doc

__doc__ = _doc
__version__ = "0.1.0"
