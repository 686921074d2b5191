"""Pin BLAS to one thread: the arrays here are small-k GEMMs where thread
fan-out costs more than it saves, and single-threaded runs are deterministic.
Must run before numpy is imported anywhere in the session."""
import os
import sys

os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")

sys.path.insert(0, os.path.dirname(__file__))
