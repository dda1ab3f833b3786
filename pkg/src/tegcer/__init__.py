"""Compilation-error feedback engine.

Learns, from (buggy, repaired) C program pairs, to classify compiler errors
into error-repair classes and to suggest frequency-ranked example fixes.
"""

__version__ = "0.1.0"
