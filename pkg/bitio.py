"""
비트 입출력 모듈
가변 폭 포인터를 MSB-first 로 바이트열에 기록/판독
"""

from typing import Optional

MAX_CODE_WIDTH = 32


class EndOfStreamError(EOFError):
    """요청한 폭만큼의 비트가 남아 있지 않음"""


def _check_width(width: int) -> None:
    if not 1 <= width <= MAX_CODE_WIDTH:
        raise ValueError(f"비트 폭은 1~{MAX_CODE_WIDTH} 사이여야 합니다: {width}")


class BitWriter:
    """
    가변 폭 코드를 MSB-first 로 이어 붙이는 writer

    완성된 바이트는 buffer 에 쌓이고, take_bytes() 로 중간에 비워낼 수 있다
    (스트리밍 출력용). flush() 이후에는 더 이상 쓸 수 없다.
    """

    def __init__(self):
        self.buffer = bytearray()
        self.bit_position = 0
        self._acc = 0
        self._pending = 0
        self._closed = False

    def write_code(self, code: int, width: int) -> "BitWriter":
        """
        code 의 하위 width 비트를 상위 비트부터 기록

        Args:
            code: 부호 없는 정수 (code < 2**width)
            width: 비트 폭 (1~32)

        Returns:
            BitWriter: self (연쇄 호출용)
        """
        if self._closed:
            raise ValueError("flush 이후의 BitWriter 에는 쓸 수 없습니다.")
        _check_width(width)
        if code < 0 or code >> width:
            raise ValueError(f"코드 {code} 가 {width} 비트 폭을 초과합니다.")

        acc = (self._acc << width) | code
        pending = self._pending + width
        while pending >= 8:
            pending -= 8
            self.buffer.append((acc >> pending) & 0xFF)
        self._acc = acc & ((1 << pending) - 1)
        self._pending = pending
        self.bit_position += width
        return self

    def take_bytes(self) -> bytes:
        """지금까지 완성된 바이트를 꺼내고 buffer 를 비움 (마지막 미완성 바이트는 유지)"""
        out = bytes(self.buffer)
        self.buffer.clear()
        return out

    def flush(self) -> bytes:
        """마지막 미완성 바이트를 0 비트로 채워 남은 바이트 전체를 반환"""
        if not self._closed:
            if self._pending:
                self.buffer.append((self._acc << (8 - self._pending)) & 0xFF)
                self._acc = 0
                self._pending = 0
            self._closed = True
        return self.take_bytes()


class BitReader:
    """
    바이트열에서 가변 폭 코드를 MSB-first 로 읽는 reader

    feed() 로 소스를 이어 붙일 수 있어 청크 단위 디코딩에 사용된다.
    bit_position 은 생성 이후 소비한 전체 비트 수.
    """

    # 소비된 앞부분을 잘라내는 기준 (바이트)
    _COMPACT_AT = 1 << 16

    def __init__(self, source: Optional[bytes] = None):
        self.source = bytearray(source or b"")
        self.bit_position = 0
        self._offset = 0          # source 내 다음에 읽을 바이트
        self._fed_bytes = len(self.source)
        self._acc = 0
        self._pending = 0

    def feed(self, data: bytes) -> None:
        """소스 끝에 바이트를 추가"""
        if self._offset >= self._COMPACT_AT:
            del self.source[:self._offset]
            self._offset = 0
        self.source.extend(data)
        self._fed_bytes += len(data)

    @property
    def bits_remaining(self) -> int:
        return 8 * self._fed_bytes - self.bit_position

    def read_code(self, width: int) -> int:
        """
        다음 width 비트를 MSB-first 정수로 읽음

        Raises:
            EndOfStreamError: 남은 비트가 width 보다 적을 때 (위치는 변하지 않음)
        """
        _check_width(width)
        if self.bits_remaining < width:
            raise EndOfStreamError(
                f"{width} 비트가 필요하지만 {self.bits_remaining} 비트만 남아 있습니다."
            )

        acc = self._acc
        pending = self._pending
        while pending < width:
            acc = (acc << 8) | self.source[self._offset]
            self._offset += 1
            pending += 8
        pending -= width
        code = acc >> pending
        self._acc = acc & ((1 << pending) - 1)
        self._pending = pending
        self.bit_position += width
        return code
