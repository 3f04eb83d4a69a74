"""hybsel: hybrid bitvectors with rank and select, plus PLCP and BWT-select applications."""

__version__ = "0.1.0"
