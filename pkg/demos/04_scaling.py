"""
Runtime against graph size
==========================

Time the full pipeline on Erdős–Rényi graphs with average degree 30 and
fit a line in log-log space. Pass sizes on the command line to go
bigger, e.g. ``python 04_scaling.py 100 300 1000 3000 30000``.
"""

import sys

from core2vec import scaling_benchmark

sizes = [int(a) for a in sys.argv[1:]] or [100, 300, 1000]
res = scaling_benchmark(sizes, k_hat=30, repeats=1)
print(res.to_tsv(), end="")
print(f"runtime grows like n^{res.slope:.2f}")
