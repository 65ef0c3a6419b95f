"""
Eliminating zero squares from a 7x7 binary array
================================================

A short tour of the zero-cubes codec on the smallest interesting case.
"""
import numpy as np

from mdcodes.core import NdArray, format_array
from mdcodes.oracles import find_zero_cubes
from mdcodes.zero_cubes import ZeroCubesCodec

# n=7, d=2, q=2 gives squares of side L=3 and a 3x3 lookup corner
codec = ZeroCubesCodec(7, 2, 2)
print("L =", codec.L, " lookup cube starts at", (codec.n - codec.L,) * 2)

# a payload of 48 bits with two zero regions in it
W = np.ones(48, dtype=int)
W[7:9] = W[14:16] = W[21:23] = 0  # a 3x2 patch, too narrow to count
W[23:26] = W[30:33] = W[37:40] = 0
W = NdArray(codec.in_domain, W, 2)

print("payload (hole at the corner):")
print(format_array(W))
print("zero squares before encoding:", len(find_zero_cubes(W.to_dense(fill=1), codec.L)))

# each elimination writes the cube's rank into the lookup corner
for v, X in codec.encode_steps(W):
    if v is not None:
        print(f"eliminated {v}; corner now")
        print(X[-codec.L:, -codec.L:])

trace = []
X = codec.encode(W, trace=trace)
print("\n".join(trace))
print("encoded array is zero-square free:", find_zero_cubes(X, codec.L).ok)

# decoding undoes the eliminations in reverse order
back = codec.decode(X)
print("round trip:", back == W)
