"""
Zero boxes of volume at least V
===============================

The box family is the antichain of minimal shapes; the codec removes one
zero box at a time and records its corner and shape.
"""
import numpy as np

from mdcodes.boxes import enumerate_minimal, f2_closed_form, f2_exact
from mdcodes.core import NdArray
from mdcodes.oracles import find_zero_boxes
from mdcodes.zero_boxes import ZeroBoxesCodec, param_V

fam = enumerate_minimal(2, 15)
print("minimal shapes for V=15:", [str(s) for s in fam])
# (4,4) is minimal too, which is why the short formula undercounts here
print("count", len(fam), "exact", f2_exact(15), "short formula", f2_closed_form(15))

print("V for n=32, 64, 128:", [param_V(n, 2, 2) for n in (32, 64, 128)])

codec = ZeroBoxesCodec(32, 2, 2)
rng = np.random.default_rng(3)
W = NdArray(codec.in_domain, (rng.random(1023) < 0.2).astype(int), 2)
print("zero boxes in the sparse payload:", len(find_zero_boxes(W.to_dense(fill=0), codec.V)))

trace = []
X = codec.encode(W, trace=trace)
print("eliminations:", len(trace), trace[:3])
print("zero-box free:", find_zero_boxes(X, codec.V).ok)
print("round trip:", codec.decode(X) == W)
