"""Numerical operator calculus for Kolmogorov operators with singular drift."""

try:
    from opcalc._opcalc import *  # noqa: F401,F403  (installed layout)
    from opcalc import _opcalc as _core  # noqa: F401
except ImportError:  # build-tree layout: the extension sits on PYTHONPATH
    from _opcalc import *  # noqa: F401,F403
    import _opcalc as _core  # noqa: F401

__all__ = [n for n in dir(_core) if not n.startswith("_")]
