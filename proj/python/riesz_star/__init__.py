"""Python interface to the riesz_star simulation core.

The compiled extension ``_riesz_star`` is looked up first inside this package
(wheel layout) and then on ``sys.path`` (in-tree builds put it on
``PYTHONPATH`` next to the test driver).
"""

try:
    from ._riesz_star import *  # noqa: F401,F403
    from ._riesz_star import __doc__ as _core_doc
except ImportError:
    from _riesz_star import *  # noqa: F401,F403
    from _riesz_star import __doc__ as _core_doc

__doc__ = (__doc__ or "") + "\n\n" + (_core_doc or "")
__version__ = "0.1.0"
