"""
Making every 8x8 square of a 16x16 array distinct
=================================================

Random payloads almost never repeat a square, so the codec leaves them
alone.  Constant payloads are the hard case.
"""
import numpy as np

from mdcodes.core import NdArray
from mdcodes.oracles import find_identical_cubes
from mdcodes.squares_unique import SquaresUniqueCodec, params

for n in (8, 16, 24, 32):
    print(f"n={n}: block k, square L =", params(n))

codec = SquaresUniqueCodec(16)

rng = np.random.default_rng(1)
W = NdArray(codec.in_domain, rng.integers(0, 2, 255), 2)
trace = []
codec.encode(W, trace=trace)
print("random payload, operations:", len(trace))

# the all-zero payload repeats every square
W = NdArray(codec.in_domain, np.zeros(255, dtype=int), 2)
print("repeats before:", len(find_identical_cubes(W.to_dense(fill=0), codec.L)))
trace = []
X = codec.encode(W, trace=trace)
print("operations:", len(trace))
print("\n".join(trace[:6]), "\n...")
print("repeats after:", len(find_identical_cubes(X, codec.L)))
print(X.to_dense())
print("round trip:", codec.decode(X) == W)
