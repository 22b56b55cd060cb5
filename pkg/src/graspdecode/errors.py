"""Exception types shared across the pipeline.

``DataError`` covers everything wrong with inputs on disk or with data
shapes/values (missing files, malformed manifests, channel mismatches,
degenerate channels).  ``NumericError`` covers algorithmic failures on
otherwise valid data (non-convergence, singular matrices, unstable
filters).  The CLI maps them to distinct exit codes.
"""


class DataError(Exception):
    """Invalid or inconsistent input data."""


class NumericError(Exception):
    """A numerical procedure failed (singularity, non-convergence, instability)."""
