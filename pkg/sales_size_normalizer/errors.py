"""
sales_size_normalizer/errors.py

Exception hierarchy shared by every pipeline stage.
The CLI maps these onto exit codes (see cli.py).
"""


class SizeNormalizerError(Exception):
    """Base class for all errors raised by this package."""


class EmptyInput(SizeNormalizerError):
    """A size string (or an input file) had no usable content."""


class PartitionDefect(SizeNormalizerError):
    """
    A clustered size type contained a pair the comparator could not order.
    
    Raised only in strict mode; by default the cluster is split into
    singletons and the defect is recorded as a warning.
    """
    
    def __init__(self, brand, sizes, pair):
        self.brand = brand
        self.sizes = list(sizes)
        self.pair = pair
        super().__init__(
            f"Brand '{brand}': cannot order {pair[0]!r} against {pair[1]!r} "
            f"in cluster {self.sizes}"
        )


class UnknownSizeType(SizeNormalizerError, KeyError):
    """A size type id was not present in the frequency matrix index."""


class MissingKey(SizeNormalizerError, KeyError):
    """A (size_type_id, size) key had no normalized value."""


class SolverNotConverged(SizeNormalizerError):
    """
    The QP residual stayed above tolerance after the iteration limit.
    
    The unconverged (still feasible) map is kept on .result.
    """
    
    def __init__(self, info, result=None):
        self.info = info
        self.result = result
        super().__init__(
            f"QP solver stopped after {info.iterations} iterations with "
            f"projected-gradient norm {info.residual:.3e}"
        )


class NonFiniteLoss(SizeNormalizerError):
    """Gradient descent produced a NaN or infinite loss."""
    
    def __init__(self, stage, iteration, learning_rate, loss):
        self.stage = stage
        self.iteration = iteration
        self.learning_rate = learning_rate
        self.loss = loss
        super().__init__(
            f"Loss became {loss} at iteration {iteration} of stage {stage} "
            f"(learning rate {learning_rate})"
        )


class ConfigInvalid(SizeNormalizerError, ValueError):
    """A configuration value is outside its documented range."""


class RecordFormatError(SizeNormalizerError, ValueError):
    """An interchange file had a wrong header tag or a malformed row."""

# End of file #
