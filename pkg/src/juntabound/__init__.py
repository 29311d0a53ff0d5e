"""Boolean-function complexity measures and certified junta-size bounds."""

__version__ = "0.1.0"
