"""Figure scripts for cfmlab CSV outputs.

One command per figure kind; each takes CSV path(s) and output path(s) as
positional arguments and exits 0 on success, 1 on any error.  Figures display
CSV values only; no quantity is recomputed here.
"""

__version__ = "0.1.0"
