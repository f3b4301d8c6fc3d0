"""Max-stable dependence models, stochastic orders and projections."""

try:
    from ._maxstab import *  # noqa: F401,F403
    from ._maxstab import __doc__  # noqa: F401
except ImportError:  # build-tree layout: extension sits next to the package
    from _maxstab import *  # noqa: F401,F403
    from _maxstab import __doc__  # noqa: F401
