import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdcodes.core import NdArray, to_digits
from mdcodes.errors import CorruptionError, DomainError, UnsupportedSizeError
from mdcodes.oracles import find_zero_boxes
from mdcodes.zero_boxes import ZeroBoxesCodec, param_C, param_V


@pytest.mark.parametrize(
    "n,d,q,V",
    [(32, 2, 2, 15), (4, 2, 2, 8), (16, 3, 2, 21), (8, 2, 2, 10), (16, 2, 3, 10), (6, 1, 2, 4)],
)
def test_param_V(n, d, q, V):
    assert param_V(n, d, q) == V


def test_param_C_d2():
    assert param_C(2, 2) == 2


def test_widths_at_32():
    codec = ZeroBoxesCodec(32, 2, 2)
    assert (codec.V, codec.pos_width, codec.shape_width, codec.prefix) == (15, 10, 3, 14)


def test_unsupported_sizes():
    with pytest.raises(UnsupportedSizeError):
        param_V(3, 2, 2)
    # payload 1 + 4 + 3 does not fit a volume-7 box
    with pytest.raises(UnsupportedSizeError):
        ZeroBoxesCodec(4, 2, 2, V=7)


def test_all_ones_untouched():
    codec = ZeroBoxesCodec(8, 2, 2)
    W = NdArray(codec.in_domain, np.ones(63, dtype=int), 2)
    X = codec.encode(W)
    assert X.values[0] == 0 and X.values[1:].all()
    assert codec.decode(X) == W


@pytest.mark.parametrize("n,d,q", [(32, 2, 2), (16, 3, 2), (16, 2, 3), (12, 1, 2)])
def test_all_zero_payload(n, d, q):
    codec = ZeroBoxesCodec(n, d, q)
    W = NdArray(codec.in_domain, np.zeros(n**d - 1, dtype=int), q)
    trace = []
    X = codec.encode(W, trace=trace)
    assert trace and trace[0].startswith("ELIM u=(")
    assert find_zero_boxes(X, codec.V).ok
    assert codec.decode(X) == W


@settings(max_examples=100, deadline=None)
@given(
    st.sampled_from([(32, 2, 2), (8, 2, 2), (16, 2, 3), (8, 3, 2), (20, 1, 2)]),
    st.floats(0, 1),
    st.integers(0, 2**32 - 1),
)
def test_roundtrip_and_constraint(cfg, density, seed):
    n, d, q = cfg
    codec = ZeroBoxesCodec(n, d, q)
    rng = np.random.default_rng(seed)
    N = n**d - 1
    vals = np.where(rng.random(N) < density, rng.integers(1, q, N), 0)
    W = NdArray(codec.in_domain, vals, q)
    X = codec.encode(W)
    assert len(X) == n**d
    assert find_zero_boxes(X, codec.V).ok
    assert codec.decode(X) == W


def test_decode_trace_mirrors_encode():
    codec = ZeroBoxesCodec(8, 2, 2)
    W = NdArray(codec.in_domain, np.zeros(63, dtype=int), 2)
    enc, dec = [], []
    codec.decode(codec.encode(W, trace=enc), trace=dec)
    assert [t.replace("ELIM", "UNDO") for t in reversed(enc)] == dec


def test_domain_checks():
    codec = ZeroBoxesCodec(8, 2, 2)
    with pytest.raises(DomainError):
        codec.encode(NdArray(codec.cube, np.ones(64, dtype=int), 2))
    with pytest.raises(DomainError):
        codec.decode(NdArray(codec.in_domain, np.ones(63, dtype=int), 2))


def _forged(codec, u, shape_rank, pad):
    x = np.ones(codec.n**codec.d, dtype=int)
    x[1 : 1 + codec.pos_width] = to_digits(codec.cube.rank(u), 2, codec.pos_width)
    x[1 + codec.pos_width : codec.prefix] = to_digits(shape_rank, 2, codec.shape_width)
    x[codec.prefix : codec.V] = pad
    return NdArray(codec.cube, x, 2)


def test_decoder_rejects_box_leaving_array():
    codec = ZeroBoxesCodec(8, 2, 2)
    last = len(codec.family) - 1  # widest shape, (V, 1)
    with pytest.raises(CorruptionError):
        codec.decode(_forged(codec, (7, 0), last, 1))


def test_decoder_rejects_bad_padding():
    codec = ZeroBoxesCodec(32, 2, 2)
    with pytest.raises(CorruptionError):
        codec.decode(_forged(codec, (0, 0), 3, 0))


def test_decoder_rejects_unknown_leading_symbol():
    codec = ZeroBoxesCodec(8, 2, 3)
    x = np.full(64, 2)
    with pytest.raises(CorruptionError):
        codec.decode(NdArray(codec.cube, x, 3))
