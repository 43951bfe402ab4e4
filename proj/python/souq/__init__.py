"""Total, aleatoric, and epistemic uncertainty from second-order distributions."""

try:
    from ._souq import *  # noqa: F401,F403
    from ._souq import __doc__ as _core_doc  # noqa: F401
except ImportError:  # development layout: extension built next to the package
    from _souq import *  # noqa: F401,F403

__version__ = "0.1.0"
