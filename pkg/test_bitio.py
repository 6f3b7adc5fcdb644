"""
비트 입출력 테스트
MSB-first 패킹, 0 패딩, 스트림 끝 처리, 왕복 속성
"""

import random

import pytest

from bitio import BitReader, BitWriter, EndOfStreamError


def test_write_three_bits():
    w = BitWriter().write_code(0b101, 3)
    assert w.bit_position == 3
    assert w.flush() == bytes([0b10100000])


def test_write_two_nine_bit_codes():
    """001100001 001100010 + 0 패딩 6비트"""
    w = BitWriter()
    w.write_code(97, 9).write_code(98, 9)
    assert w.flush() == bytes([0x30, 0x98, 0x80])


def test_write_all_ones():
    assert BitWriter().write_code(511, 9).flush() == bytes([0xFF, 0x80])


@pytest.mark.parametrize("bits, expected_len", [(0, 0), (9, 2), (16, 2)])
def test_flush_length(bits, expected_len):
    w = BitWriter()
    for _ in range(bits):
        w.write_code(1, 1)
    assert len(w.flush()) == expected_len


def test_code_too_wide_rejected():
    with pytest.raises(ValueError):
        BitWriter().write_code(8, 3)


@pytest.mark.parametrize("width", [0, 33])
def test_width_out_of_range(width):
    with pytest.raises(ValueError):
        BitWriter().write_code(0, width)
    with pytest.raises(ValueError):
        BitReader(b"\x00" * 8).read_code(width)


def test_writer_unusable_after_flush():
    w = BitWriter()
    w.write_code(1, 1)
    w.flush()
    with pytest.raises(ValueError):
        w.write_code(1, 1)


def test_pad_bits_are_zero():
    assert BitWriter().write_code(0b111, 3).flush() == b"\xe0"


def test_read_examples():
    assert BitReader(bytes([0xFF, 0x80])).read_code(9) == 511

    r = BitReader(bytes([0x30, 0x98, 0x80]))
    assert r.read_code(9) == 97
    assert r.read_code(9) == 98
    assert r.bit_position == 18


def test_read_past_end():
    r = BitReader(b"\xff")
    with pytest.raises(EndOfStreamError):
        r.read_code(9)
    # 실패한 읽기는 위치를 바꾸지 않음
    assert r.bit_position == 0
    assert r.read_code(8) == 0xFF


def test_take_bytes_matches_flush():
    rng = random.Random(7)
    codes = [(rng.randrange(1 << w), w) for w in (rng.randint(1, 16) for _ in range(500))]

    whole = BitWriter()
    for code, width in codes:
        whole.write_code(code, width)

    streamed = BitWriter()
    parts = []
    for code, width in codes:
        streamed.write_code(code, width)
        parts.append(streamed.take_bytes())
    parts.append(streamed.flush())

    assert b"".join(parts) == whole.flush()


@pytest.mark.parametrize("seed", range(20))
def test_round_trip_random_schedule(seed):
    rng = random.Random(seed)
    schedule = [rng.randint(1, 16) for _ in range(rng.randint(0, 300))]
    codes = [rng.randrange(1 << w) for w in schedule]

    w = BitWriter()
    for code, width in zip(codes, schedule):
        w.write_code(code, width)
    data = w.flush()
    assert len(data) == (sum(schedule) + 7) // 8

    r = BitReader(data)
    assert [r.read_code(width) for width in schedule] == codes
    assert r.bit_position <= 8 * len(data)


def test_reader_fed_in_chunks():
    rng = random.Random(3)
    schedule = [rng.randint(1, 32) for _ in range(200)]
    codes = [rng.randrange(1 << w) for w in schedule]
    w = BitWriter()
    for code, width in zip(codes, schedule):
        w.write_code(code, width)
    data = w.flush()

    r = BitReader()
    out = []
    pos = 0
    for width in schedule:
        while r.bits_remaining < width:
            r.feed(data[pos:pos + 3])
            pos += 3
        out.append(r.read_code(width))
    assert out == codes
