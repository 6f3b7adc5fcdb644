"""
압축-암호화 엔진
LZ78/LZW 계열 성장 사전 압축과 포인터 단위 Vernam XOR 를 한 번에 수행하는 인코더/디코더
"""

import logging
import struct
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from bitio import BitReader, BitWriter, EndOfStreamError
from keystream import GeneratorKind, derive_permutation, make_generator

logger = logging.getLogger(__name__)

INITIAL_WIDTH = 9
BASE_ENTRIES = 256
MIN_MAX_WIDTH = 10
MAX_MAX_WIDTH = 20
DEFAULT_MAX_WIDTH = 12
DEFAULT_RATIO_WINDOW = 4096
DEFAULT_SAVINGS_THRESHOLD = 50  # 퍼밀 (5%)

# 컨테이너 헤더 (평문, XOR 하지 않음)
MAGIC = b"CCX1"
VERSION = 1
HEADER_FORMAT = ">4sBBBBIHQ"
HEADER_SIZE = struct.calcsize(HEADER_FORMAT)
FLAG_PERMUTE = 0x01
FLAG_RESET_AT_LIMIT = 0x02


class CorruptStreamError(ValueError):
    """복원한 포인터가 사전 범위를 벗어남 (잘못된 키의 전형적 증상)"""


class ContainerFormatError(ValueError):
    """컨테이너 헤더 형식 오류"""


class ResetPolicy(str, Enum):
    RATIO_MONITOR = "ratio"
    RESET_AT_LIMIT = "at-limit"


@dataclass(frozen=True)
class CodecParams:
    """
    사용자 조정 파라미터

    max_width: 포인터 최대 비트 폭 (10~20)
    reset_policy: 압축률 감시(ratio) 또는 한계 도달 즉시 초기화(at-limit)
    ratio_window: 감시 구간 크기 (평문 바이트)
    savings_threshold: 구간 절감률 하한 (퍼밀, 0~1000)
    permute_initial: 기본 256 엔트리에 키 유도 순열 적용 여부
    generator_kind: 키스트림 생성기 종류
    """
    max_width: int = DEFAULT_MAX_WIDTH
    reset_policy: ResetPolicy = ResetPolicy.RATIO_MONITOR
    ratio_window: int = DEFAULT_RATIO_WINDOW
    savings_threshold: int = DEFAULT_SAVINGS_THRESHOLD
    permute_initial: bool = False
    generator_kind: GeneratorKind = GeneratorKind.RC4
    initial_width: int = INITIAL_WIDTH

    def __post_init__(self):
        object.__setattr__(self, "reset_policy", ResetPolicy(self.reset_policy))
        object.__setattr__(self, "generator_kind", GeneratorKind(self.generator_kind))

        if self.initial_width != INITIAL_WIDTH:
            raise ValueError(f"초기 포인터 폭은 {INITIAL_WIDTH} 비트로 고정입니다.")
        if not MIN_MAX_WIDTH <= self.max_width <= MAX_MAX_WIDTH:
            raise ValueError(f"max_width 는 {MIN_MAX_WIDTH}~{MAX_MAX_WIDTH} 사이여야 합니다: {self.max_width}")
        if not 1 <= self.ratio_window < (1 << 32):
            raise ValueError(f"ratio_window 범위 오류: {self.ratio_window}")
        if not 0 <= self.savings_threshold <= 1000:
            raise ValueError(f"savings_threshold 는 0~1000 퍼밀이어야 합니다: {self.savings_threshold}")


def width_of(k: int, max_width: int) -> int:
    """
    리셋 이후 k 번째 포인터의 비트 폭

    min(max_width, max(9, ceil(log2(257 + k)))).
    ceil(log2(x)) 는 (x - 1).bit_length() 와 같다.
    """
    return min(max_width, max(INITIAL_WIDTH, (256 + k).bit_length()))


class Dictionary:
    """
    성장 사전

    인덱스 0~255 는 단일 바이트 base_permutation[i] 를 뜻하고,
    256 이상은 (prefix_index, symbol) 엔트리. 2**max_width 에 도달하면 고정.
    """

    def __init__(self, max_width: int, base_permutation: Optional[List[int]] = None):
        self.limit = 1 << max_width
        self.base_permutation = list(base_permutation) if base_permutation is not None else list(range(256))
        self.symbol_index = [0] * 256
        for index, symbol in enumerate(self.base_permutation):
            self.symbol_index[symbol] = index
        # (prefix << 8) | symbol -> index
        self.table: Dict[int, int] = {}
        self.entries: List[Tuple[int, int]] = []
        self.next_index = BASE_ENTRIES

    @property
    def frozen(self) -> bool:
        return self.next_index >= self.limit

    def reset(self) -> None:
        # 인코더 루프가 table 참조를 잡고 있으므로 객체를 바꾸지 않고 비움
        self.table.clear()
        self.entries.clear()
        self.next_index = BASE_ENTRIES

    def lookup(self, prefix: int, symbol: int) -> Optional[int]:
        return self.table.get((prefix << 8) | symbol)

    def insert(self, prefix: int, symbol: int) -> Optional[int]:
        if self.frozen:
            return None
        index = self.next_index
        self.table[(prefix << 8) | symbol] = index
        self.entries.append((prefix, symbol))
        self.next_index += 1
        if self.frozen:
            logger.debug("사전 고정: %d 엔트리 사용", self.next_index)
        return index

    def phrase(self, index: int) -> bytes:
        """인덱스가 가리키는 구절을 복원"""
        out = bytearray()
        entries = self.entries
        while index >= BASE_ENTRIES:
            prefix, symbol = entries[index - BASE_ENTRIES]
            out.append(symbol)
            index = prefix
        out.append(self.base_permutation[index])
        out.reverse()
        return bytes(out)

    def check_invariants(self) -> None:
        """디버그용: 인덱스 범위와 prefix-closure 검사"""
        assert BASE_ENTRIES <= self.next_index <= self.limit, self.next_index
        assert len(self.entries) == self.next_index - BASE_ENTRIES
        assert len(self.table) == len(self.entries)
        for offset, (prefix, symbol) in enumerate(self.entries):
            index = BASE_ENTRIES + offset
            assert prefix < index, f"엔트리 {index} 의 prefix {prefix} 가 아직 할당되지 않음"
            assert self.table[(prefix << 8) | symbol] == index


@dataclass
class RatioMonitor:
    """사전이 고정된 동안 구간별 절감률(퍼밀) 감시"""
    ratio_window: int
    savings_threshold: int
    window_bytes_in: int = 0
    window_bits_out: int = 0
    active: bool = False
    last_savings: Optional[int] = None

    def clear(self) -> None:
        self.window_bytes_in = 0
        self.window_bits_out = 0

    def record(self, phrase_length: int, width: int) -> bool:
        """
        고정 상태에서 내보낸 구절 하나를 반영

        비활성(사전이 고정되지 않은) 상태에서는 아무것도 누적하지 않는다.

        Returns:
            bool: 완료된 구간의 절감률이 임계값 미만이면 True (사전 초기화 필요)
        """
        if not self.active:
            return False
        self.window_bytes_in += phrase_length
        self.window_bits_out += width
        if self.window_bytes_in < self.ratio_window:
            return False

        savings = 1000 - (1000 * self.window_bits_out) // (8 * self.window_bytes_in)
        self.last_savings = savings
        self.clear()
        return savings < self.savings_threshold


@dataclass(frozen=True)
class ContainerHeader:
    generator_kind: GeneratorKind
    max_width: int
    reset_policy: ResetPolicy
    ratio_window: int
    savings_threshold: int
    permute_initial: bool
    plaintext_length: int
    version: int = VERSION

    @classmethod
    def from_params(cls, params: CodecParams, plaintext_length: int) -> "ContainerHeader":
        return cls(
            generator_kind=params.generator_kind,
            max_width=params.max_width,
            reset_policy=params.reset_policy,
            ratio_window=params.ratio_window,
            savings_threshold=params.savings_threshold,
            permute_initial=params.permute_initial,
            plaintext_length=plaintext_length,
        )

    @property
    def params(self) -> CodecParams:
        return CodecParams(
            max_width=self.max_width,
            reset_policy=self.reset_policy,
            ratio_window=self.ratio_window,
            savings_threshold=self.savings_threshold,
            permute_initial=self.permute_initial,
            generator_kind=self.generator_kind,
        )

    def pack(self) -> bytes:
        flags = 0
        if self.permute_initial:
            flags |= FLAG_PERMUTE
        if self.reset_policy is ResetPolicy.RESET_AT_LIMIT:
            flags |= FLAG_RESET_AT_LIMIT
        return struct.pack(
            HEADER_FORMAT, MAGIC, self.version, int(self.generator_kind), flags,
            self.max_width, self.ratio_window, self.savings_threshold, self.plaintext_length,
        )

    @classmethod
    def unpack(cls, data: bytes) -> "ContainerHeader":
        """
        헤더 22 바이트 해석

        Raises:
            EndOfStreamError: 헤더가 잘린 경우
            ContainerFormatError: magic/version/필드 값 오류
        """
        if len(data) < HEADER_SIZE:
            raise EndOfStreamError(f"헤더가 잘렸습니다 ({len(data)}/{HEADER_SIZE} 바이트)")
        magic, version, kind, flags, max_width, window, threshold, length = struct.unpack(
            HEADER_FORMAT, bytes(data[:HEADER_SIZE])
        )
        if magic != MAGIC:
            raise ContainerFormatError(f"알 수 없는 magic: {magic!r}")
        if version != VERSION:
            raise ContainerFormatError(f"지원하지 않는 버전: {version}")
        if kind not in GeneratorKind._value2member_map_:
            raise ContainerFormatError(f"알 수 없는 생성기 종류: {kind}")
        if flags & ~(FLAG_PERMUTE | FLAG_RESET_AT_LIMIT):
            raise ContainerFormatError(f"알 수 없는 플래그 비트: {flags:#04x}")

        try:
            header = cls(
                generator_kind=GeneratorKind(kind),
                max_width=max_width,
                reset_policy=ResetPolicy.RESET_AT_LIMIT if flags & FLAG_RESET_AT_LIMIT else ResetPolicy.RATIO_MONITOR,
                ratio_window=window,
                savings_threshold=threshold,
                permute_initial=bool(flags & FLAG_PERMUTE),
                plaintext_length=length,
                version=version,
            )
            header.params  # CodecParams 범위 검증
        except ValueError as e:
            raise ContainerFormatError(f"헤더 필드 값 오류: {e}") from e

        logger.debug("헤더 해석: %s", header)
        return header


@dataclass
class Container:
    header: ContainerHeader
    payload: bytes

    def to_bytes(self) -> bytes:
        return self.header.pack() + self.payload

    @classmethod
    def from_bytes(cls, data: bytes) -> "Container":
        header = ContainerHeader.unpack(data)
        return cls(header, bytes(data[HEADER_SIZE:]))


class _CodecState:
    """인코더/디코더가 공유하는 상태 기계 (사전, 폭 스케줄 카운터, 감시기, 키스트림)"""

    def __init__(self, key: Optional[bytes], params: CodecParams, debug: bool = False):
        self.params = params
        self.generator = make_generator(params.generator_kind, key)
        permutation = derive_permutation(key) if params.permute_initial else None
        self.dictionary = Dictionary(params.max_width, permutation)
        self.monitor = RatioMonitor(params.ratio_window, params.savings_threshold)
        self.debug = debug

        self.k = 0
        self.codes_emitted = 0
        self.payload_bits = 0
        self.reset_positions: List[int] = []

    def _finish_step(self, was_frozen: bool, phrase_length: int, width: int, next_index: int) -> bool:
        """
        포인터 하나를 처리한 뒤 카운터 갱신 및 초기화 규칙 적용

        Args:
            was_frozen: 이 포인터를 내보낼 때 사전이 고정 상태였는지
            phrase_length: 포인터가 가리킨 구절 길이
            width: 사용한 비트 폭
            next_index: 인코더 기준, 이번 단계 삽입 이후의 next_index

        Returns:
            bool: 사전이 초기화되었으면 True
        """
        self.k += 1
        self.codes_emitted += 1
        self.payload_bits += width
        self.monitor.active = was_frozen

        if self.params.reset_policy is ResetPolicy.RESET_AT_LIMIT:
            if next_index >= self.dictionary.limit:
                self._reset("한계 도달")
                return True
        elif self.monitor.record(phrase_length, width):
            self._reset(f"절감률 {self.monitor.last_savings}‰")
            return True
        return False

    def _reset(self, reason: str) -> None:
        # 키스트림은 초기화하지 않음 (패드 재사용 방지)
        self.dictionary.reset()
        self.k = 0
        self.monitor.clear()
        self.monitor.active = False
        self.reset_positions.append(self.codes_emitted)
        logger.debug("사전 초기화 (%s): 포인터 %d 번째 이후", reason, self.codes_emitted)


class StreamEncoder(_CodecState):
    """
    스트리밍 인코더

    update() 로 평문 청크를 넣으면 완성된 페이로드 바이트를 돌려주고,
    finish() 가 마지막 구절과 패딩을 내보낸다. 헤더는 header() 로 따로 만든다.
    """

    def __init__(self, key: Optional[bytes], params: CodecParams = CodecParams(),
                 trace: Optional[List[int]] = None, debug: bool = False):
        super().__init__(key, params, debug)
        self.writer = BitWriter()
        self.trace = trace
        self.bytes_in = 0
        self._word = -1
        self._word_length = 0
        self._finished = False

    def header(self, plaintext_length: int) -> ContainerHeader:
        return ContainerHeader.from_params(self.params, plaintext_length)

    def update(self, data: bytes) -> bytes:
        if self._finished:
            raise ValueError("finish 이후에는 입력을 추가할 수 없습니다.")
        table = self.dictionary.table
        symbol_index = self.dictionary.symbol_index
        word = self._word
        length = self._word_length

        for symbol in data:
            if word < 0:
                word = symbol_index[symbol]
                length = 1
                continue
            extended = table.get((word << 8) | symbol)
            if extended is not None:
                word = extended
                length += 1
                continue
            self._emit(word, length, symbol)
            word = symbol_index[symbol]
            length = 1

        self._word = word
        self._word_length = length
        self.bytes_in += len(data)
        return self.writer.take_bytes()

    def _emit(self, word: int, length: int, symbol: Optional[int]) -> None:
        width = width_of(self.k, self.params.max_width)
        if self.trace is not None:
            self.trace.append(word)
        self.writer.write_code(word ^ self.generator.next_bits(width), width)

        dictionary = self.dictionary
        was_frozen = dictionary.frozen
        if symbol is not None and not was_frozen:
            dictionary.insert(word, symbol)
            next_index = dictionary.next_index
        else:
            # 마지막 구절: 디코더가 보는 가상의 삽입을 맞춰 초기화 기록을 동일하게 유지
            next_index = dictionary.next_index + (0 if was_frozen else 1)
        self._finish_step(was_frozen, length, width, next_index)

        if self.debug:
            dictionary.check_invariants()

    def finish(self) -> bytes:
        if not self._finished:
            if self._word >= 0:
                self._emit(self._word, self._word_length, None)
                self._word = -1
            self._finished = True
        return self.writer.flush()


class StreamDecoder(_CodecState):
    """
    스트리밍 디코더

    인코더와 같은 사전/폭 스케줄/감시기를 재현한다. 대기 엔트리(이전 구절 +
    현재 구절 첫 바이트)는 인코더보다 한 단계 늦게 삽입된다.
    """

    def __init__(self, header: ContainerHeader, key: Optional[bytes], debug: bool = False):
        super().__init__(key, header.params, debug)
        self.header = header
        self.reader = BitReader()
        self.bytes_out = 0
        self._pending: Optional[int] = None
        self._previous = b""

    @property
    def done(self) -> bool:
        return self.bytes_out >= self.header.plaintext_length

    def update(self, data: bytes) -> bytes:
        self.reader.feed(data)
        out = bytearray()
        target = self.header.plaintext_length
        max_width = self.params.max_width

        while self.bytes_out < target:
            width = width_of(self.k, max_width)
            if self.reader.bits_remaining < width:
                break
            pointer = self.reader.read_code(width) ^ self.generator.next_bits(width)
            phrase = self._expand(pointer)
            if self.bytes_out + len(phrase) > target:
                raise CorruptStreamError(
                    f"구절이 평문 길이를 초과합니다 (포인터 {self.codes_emitted})"
                )
            out += phrase
            self.bytes_out += len(phrase)

            dictionary = self.dictionary
            was_frozen = dictionary.frozen
            self._pending = None if was_frozen else pointer
            self._previous = phrase
            next_index = dictionary.next_index + (0 if was_frozen else 1)
            if self._finish_step(was_frozen, len(phrase), width, next_index):
                # 초기화 시 대기 엔트리는 버림
                self._pending = None

            if self.debug:
                dictionary.check_invariants()

        return bytes(out)

    def _expand(self, pointer: int) -> bytes:
        dictionary = self.dictionary
        if pointer < dictionary.next_index:
            phrase = dictionary.phrase(pointer)
            if self._pending is not None:
                dictionary.insert(self._pending, phrase[0])
            return phrase
        if pointer == dictionary.next_index and self._pending is not None:
            # 자기 참조: 방금 만들어질 엔트리를 가리킴
            first = self._previous[0]
            dictionary.insert(self._pending, first)
            return self._previous + bytes((first,))
        raise CorruptStreamError(
            f"잘못된 포인터 {pointer} (next_index {dictionary.next_index}, 포인터 {self.codes_emitted})"
        )

    def finish(self) -> bytes:
        if not self.done:
            raise EndOfStreamError(
                f"페이로드가 잘렸습니다 ({self.bytes_out}/{self.header.plaintext_length} 바이트 복원)"
            )
        return b""


def encode(data: bytes, key: Optional[bytes], params: CodecParams = CodecParams()) -> Container:
    """
    평문 전체를 압축-암호화

    Args:
        data: 평문
        key: 비밀 키 (ZERO 생성기이고 순열을 쓰지 않으면 None 가능)
        params: 코덱 파라미터

    Returns:
        Container: 평문 헤더 + XOR 된 포인터 페이로드
    """
    encoder = StreamEncoder(key, params)
    payload = encoder.update(data) + encoder.finish()
    return Container(encoder.header(len(data)), payload)


def decode(container: Container, key: Optional[bytes]) -> bytes:
    """encode 의 역변환. 페이로드가 잘렸으면 EndOfStreamError, 포인터 오류는 CorruptStreamError"""
    decoder = StreamDecoder(container.header, key)
    return decoder.update(container.payload) + decoder.finish()
