"""Pin BLAS to one thread before numpy loads so results are bitwise
reproducible regardless of how many worker processes a test uses."""

import os

os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")
os.environ.setdefault("MKL_NUM_THREADS", "1")
