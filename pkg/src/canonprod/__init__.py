"""Numerics for canonical products W_s and F_s.

Evaluation of the products and their log-derivatives, the Littlewood
expansion of log F_s, the phi/omega decomposition of W_s'/W_s, the Laplace
antiderivative of phi_s, and numeric probes of tame versus wild behaviour.
"""

__version__ = "0.1.0"

from .products import ShapeParam, eval_F, eval_W, log_F, log_W, logderiv_F, logderiv_W
from .special import DomainError, EvalResult, RangeError, TruncationPolicy

__all__ = [
    "ShapeParam",
    "eval_W",
    "log_W",
    "logderiv_W",
    "eval_F",
    "log_F",
    "logderiv_F",
    "EvalResult",
    "TruncationPolicy",
    "DomainError",
    "RangeError",
    "__version__",
]
