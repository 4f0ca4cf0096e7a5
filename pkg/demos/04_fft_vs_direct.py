"""Direct O(N^2) field sums against the zero-padded FFT convolution."""
import time

import numpy as np

from dipolecone import FieldKernel, field_direct, field_fft

rng = np.random.default_rng(0)
print("    N   max rel. dev.   direct [ms]   fft [ms]")
for n in (64, 256, 1024, 4096):
    s = rng.normal(size=(n, 3))
    s /= np.linalg.norm(s, axis=1, keepdims=True)
    kernel = FieldKernel(n)
    t0 = time.perf_counter()
    ref = field_direct(s)
    t1 = time.perf_counter()
    fast = field_fft(s, kernel)
    t2 = time.perf_counter()
    dev = np.abs(fast - ref).max() / np.abs(ref).max()
    print(f"{n:5d}   {dev:.2e}        {1e3 * (t1 - t0):8.2f}   {1e3 * (t2 - t1):8.3f}")
