"""Array invariant inference by translation to scalar programs."""

__version__ = "0.1.0"
