"""Semi-supervised sequence labelling with output-space hints."""

__version__ = "0.1.0"
