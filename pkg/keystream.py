"""
키스트림 생성 모듈
Vernam XOR 에 쓰이는 PRBS 생성기 (LFSR32 / RC4 / ZERO) 및 초기 순열 유도
"""

from abc import ABC, abstractmethod
from enum import IntEnum
from functools import reduce
from operator import xor
from typing import List, Sequence

from bitio import MAX_CODE_WIDTH

MAX_KEY_LENGTH = 256

# x^32 + x^22 + x^2 + x + 1 (최대 주기 다항식)
LFSR32_TAPS = (32, 22, 2, 1)

# 초기 순열용 RC4 도메인 분리 접두 바이트
PERMUTATION_DOMAIN = b"\x50"


class InvalidKeyError(ValueError):
    """생성기에 사용할 수 없는 키"""


class GeneratorKind(IntEnum):
    """컨테이너 헤더에 기록되는 생성기 종류 코드"""
    ZERO = 0
    LFSR32 = 1
    RC4 = 2


def validate_key(key: bytes) -> bytes:
    """
    키 길이 검증 (1~256 바이트)

    Returns:
        bytes: 검증된 키 (bytes 로 정규화)
    """
    if key is None or not 1 <= len(key) <= MAX_KEY_LENGTH:
        length = 0 if key is None else len(key)
        raise InvalidKeyError(f"키 길이는 1~{MAX_KEY_LENGTH} 바이트여야 합니다 (입력: {length})")
    return bytes(key)


class KeystreamGenerator(ABC):
    """키스트림 생성기 공통 계약: 요청한 비트 수만큼 MSB-first 로 반환"""

    kind: GeneratorKind

    @abstractmethod
    def next_bits(self, width: int) -> int:
        ...


def _check_width(width: int) -> None:
    if not 1 <= width <= MAX_CODE_WIDTH:
        raise ValueError(f"비트 폭은 1~{MAX_CODE_WIDTH} 사이여야 합니다: {width}")


class ZeroGenerator(KeystreamGenerator):
    """항상 0 을 내보내는 시험용 생성기 (압축기 자체를 노출)"""

    kind = GeneratorKind.ZERO

    def next_bits(self, width: int) -> int:
        _check_width(width)
        return 0


class LfsrGenerator(KeystreamGenerator):
    """
    Fibonacci 선형 귀환 시프트 레지스터

    출력 비트는 레지스터 최하위 비트(가장 오래된 비트), 귀환 비트는 각 탭 t 에 대해
    (length - t) 번째 비트의 XOR 이며 오른쪽 시프트 후 최상위 자리로 들어간다.
    탭 번호는 입력 쪽에서 센 위치로, 통상의 최대 주기 탭 표와 같은 표기.
    """

    kind = GeneratorKind.LFSR32

    def __init__(self, register: int, length: int = 32, taps: Sequence[int] = LFSR32_TAPS):
        if not 0 < register < (1 << length):
            raise InvalidKeyError("LFSR 레지스터는 0 이 아닌 값이어야 합니다.")
        self.length = length
        self.taps = tuple(taps)
        self.register = register

    def step(self) -> int:
        """레지스터를 한 칸 진행하고 출력 비트를 반환"""
        reg = self.register
        out = reg & 1
        feedback = 1 & reduce(xor, [reg >> (self.length - t) for t in self.taps])
        self.register = (feedback << (self.length - 1)) | (reg >> 1)
        return out

    def next_bits(self, width: int) -> int:
        _check_width(width)
        value = 0
        for _ in range(width):
            value = (value << 1) | self.step()
        return value


class Rc4Generator(KeystreamGenerator):
    """RC4 (drop 없음). 출력 바이트의 상위 비트부터 소비하고 남는 비트는 버퍼링"""

    kind = GeneratorKind.RC4

    def __init__(self, key: bytes):
        # 순열 유도 시 접두 바이트가 붙어 257 바이트가 될 수 있으므로 길이 상한은 make_generator 에서 검사
        if not key:
            raise InvalidKeyError("RC4 키가 비어 있습니다.")
        key = bytes(key)
        s = list(range(256))
        j = 0
        klen = len(key)
        for i in range(256):
            j = (j + s[i] + key[i % klen]) % 256
            s[i], s[j] = s[j], s[i]
        self.s = s
        self.i = 0
        self.j = 0
        self._acc = 0
        self._pending = 0

    def next_byte(self) -> int:
        s = self.s
        i = (self.i + 1) % 256
        j = (self.j + s[i]) % 256
        s[i], s[j] = s[j], s[i]
        self.i, self.j = i, j
        return s[(s[i] + s[j]) % 256]

    def keystream(self, n: int) -> bytes:
        """RC4 출력 바이트 n 개 (비트 버퍼와는 별개로 직접 진행)"""
        return bytes(self.next_byte() for _ in range(n))

    def next_bits(self, width: int) -> int:
        _check_width(width)
        acc = self._acc
        pending = self._pending
        while pending < width:
            acc = (acc << 8) | self.next_byte()
            pending += 8
        pending -= width
        value = acc >> pending
        self._acc = acc & ((1 << pending) - 1)
        self._pending = pending
        return value


def lfsr32_seed(key: bytes) -> int:
    """키 앞 4바이트를 big-endian 으로 읽음 (짧으면 뒤를 0 으로 채움)"""
    return int.from_bytes(key[:4].ljust(4, b"\x00"), "big")


def make_generator(kind: GeneratorKind, key: bytes) -> KeystreamGenerator:
    """
    종류와 키로 생성기 생성

    Args:
        kind: 생성기 종류 (ZERO 는 키를 무시)
        key: 비밀 키

    Returns:
        KeystreamGenerator: 비트 0 부터 시작하는 새 생성기

    Raises:
        InvalidKeyError: 키 길이 오류 또는 LFSR 시드가 0 인 경우
    """
    kind = GeneratorKind(kind)
    if kind == GeneratorKind.ZERO:
        return ZeroGenerator()

    key = validate_key(key)
    if kind == GeneratorKind.LFSR32:
        seed = lfsr32_seed(key)
        if seed == 0:
            raise InvalidKeyError("LFSR32 시드(키 앞 4바이트)가 모두 0 입니다.")
        return LfsrGenerator(seed)
    return Rc4Generator(key)


def derive_permutation(key: bytes) -> List[int]:
    """
    키 의존 초기 순열 (0~255 의 전단사)

    도메인 분리 접두 0x50 을 붙인 키로 RC4 를 돌려 Fisher-Yates 셔플.
    j 는 바이트 단위 거부 표본추출로 [0, i] 에서 균등하게 뽑는다.
    """
    key = validate_key(key)
    rc4 = Rc4Generator(PERMUTATION_DOMAIN + key)
    perm = list(range(256))
    for i in range(255, 0, -1):
        span = i + 1
        limit = 256 - (256 % span)
        r = rc4.next_byte()
        while r >= limit:
            r = rc4.next_byte()
        j = r % span
        perm[i], perm[j] = perm[j], perm[i]
    return perm
