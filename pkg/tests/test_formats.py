import pytest
from hypothesis import given, strategies as st

from crsemi.cipher import SymmetricKey
from crsemi.errors import MagicMismatch, TruncatedStream, UnsupportedFormat
from crsemi.formats import (
    Mode,
    Pgm,
    StreamHeader,
    block_bits,
    decode_sidecar,
    decode_stream,
    dump_key,
    encode_sidecar,
    encode_stream,
    load_key,
    pack_blocks,
    read_pgm,
    residue_width,
    unpack_blocks,
)


def test_key_round_trip():
    key = SymmetricKey.from_exponent(257, 75, 0xDEADBEEF, index_bits=12)
    again = load_key(dump_key(key))
    assert (again.modulus.value, again.encrypt_exp, again.decrypt_exp, again.secret, again.index_bits) == (
        257, 75, key.decrypt_exp, 0xDEADBEEF, 12)


def test_key_errors():
    with pytest.raises(MagicMismatch):
        load_key("RSAKEY\n1\n")
    with pytest.raises(TruncatedStream):
        load_key("CRSKEY1\n257\n75\n")


def test_widths():
    assert residue_width(257) == 2
    assert residue_width(256) == 1
    assert residue_width(2) == 1
    assert block_bits(257) == 8
    assert block_bits(1009) == 9
    with pytest.raises(UnsupportedFormat):
        block_bits(2)


@pytest.mark.parametrize("mode,index_bits", [(Mode.GROUP, 32), (Mode.CS, 32), (Mode.CS, 4), (Mode.CRRSA, 32)])
def test_stream_round_trip(mode, index_bits):
    header = StreamHeader(mode, 65537, index_bits)
    first = [0, 1, 2**index_bits - 1] if mode is not Mode.GROUP else [0, 0, 0]
    if mode is Mode.CRRSA:
        first = [0, 5, 65536]
    blocks = list(zip(first, [0, 65536, 1234]))
    data = encode_stream(header, blocks)
    assert data[:4] == b"CRS1" and data[4] == int(mode)
    assert len(data) == 14 + 3 * header.block_size
    h2, b2 = decode_stream(data)
    assert h2 == header and b2 == blocks


def test_stream_errors():
    header = StreamHeader(Mode.CS, 257, 32)
    data = encode_stream(header, [(7, 200)])
    with pytest.raises(MagicMismatch):
        decode_stream(b"XXXX" + data[4:])
    with pytest.raises(TruncatedStream):
        decode_stream(data[:-1])
    with pytest.raises(TruncatedStream):
        decode_stream(data[:10])
    with pytest.raises(UnsupportedFormat):
        decode_stream(data[:4] + b"\x09" + data[5:])


def test_empty_stream():
    header = StreamHeader(Mode.GROUP, 257, 32)
    assert decode_stream(encode_stream(header, [])) == (header, [])


def test_sidecar():
    idx = [0, 3, 2**20 - 1]
    data = encode_sidecar(idx, 20)
    assert decode_sidecar(data, 20) == idx
    with pytest.raises(TruncatedStream):
        decode_sidecar(data[:-1], 20)
    with pytest.raises(MagicMismatch):
        decode_sidecar(b"nope" + data, 20)


@given(st.binary(max_size=40), st.integers(1, 39))
def test_pack_unpack(data, bits):
    blocks = pack_blocks(data, bits)
    assert all(0 <= v < 2**bits for v in blocks)
    assert unpack_blocks(blocks, bits) == data


def test_pack_bytes_at_eight_bits():
    assert pack_blocks(b"\x01\xff", 8) == [1, 255]


def test_pgm_round_trip():
    img = Pgm(3, 2, bytes(range(6)))
    assert read_pgm(img.to_bytes()) == img


def test_pgm_comments_and_whitespace():
    data = b"P5 # a comment\n3\n# another\n 2 255\n" + bytes(6)
    img = read_pgm(data)
    assert (img.width, img.height, img.pixels) == (3, 2, bytes(6))


@pytest.mark.parametrize("data", [
    b"P2\n1 1\n255\n0",
    b"P5\n1 1\n65535\n\0\0",
    b"P5\n2 2\n255\n\0",
    b"P5\n2",
    b"P5\nx 2\n255\n\0\0",
])
def test_pgm_rejects(data):
    with pytest.raises(UnsupportedFormat):
        read_pgm(data)
