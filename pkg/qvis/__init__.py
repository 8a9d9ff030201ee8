"""One- and two-body visibilities of two-qubit pure states."""

__version__ = "1.0.0"
