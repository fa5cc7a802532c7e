"""Exception and warning types.

Every error carries a stable ``code`` string that the command-line driver
writes into reports.
"""


class HermitexError(Exception):
    code = "HERMITEX_ERROR"


class BlockMismatch(HermitexError, ValueError):
    code = "BLOCK_MISMATCH"


class DimMismatch(HermitexError, ValueError):
    code = "DIM_MISMATCH"


class DegreeCap(HermitexError, ValueError):
    code = "DEGREE_CAP"


class BadPermutation(HermitexError, ValueError):
    code = "BAD_PERMUTATION"


class ZeroWindow(HermitexError, ValueError):
    code = "ZERO_WINDOW"


class TailNotNegligible(HermitexError, ValueError):
    code = "TAIL_NOT_NEGLIGIBLE"


class DegenerateFit(HermitexError, ValueError):
    code = "DEGENERATE_FIT"


class DegenerateSamples(HermitexError, ValueError):
    code = "DEGENERATE_SAMPLES"


class UnknownFunctionSpec(HermitexError, ValueError):
    code = "UNKNOWN_FUNCTION_SPEC"


class QuadratureUnderResolved(UserWarning):
    """Top-degree coefficients of an analysis exceed the declared tolerance."""


class InsufficientDecay(UserWarning):
    """Coefficients grow faster than every candidate distribution law."""
