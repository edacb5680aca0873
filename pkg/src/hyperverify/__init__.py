"""Generalized hypergeometric and Meijer G functions with an identity-verification harness."""
__version__ = "0.1.0"

from .config import DEFAULT, Tolerances
from .pfq import hspec, hyp, pfq, pfq_continued, cut_values, jump_closed_form, mean_closed_form
from .meijerg import GFunctionSpec, gspec, meijer_g, g_slater, mellin_barnes_oracle

__all__ = [
    "DEFAULT", "Tolerances", "hspec", "hyp", "pfq", "pfq_continued", "cut_values",
    "jump_closed_form", "mean_closed_form", "GFunctionSpec", "gspec", "meijer_g", "g_slater",
    "mellin_barnes_oracle",
]
