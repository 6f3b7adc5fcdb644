"""
데이터 로더 모듈
키 소스(직접 입력/파일/환경변수), 입력 스트림 길이 측정 및 청크 읽기, 파라미터 검증
"""

import os
import stat
import sys
import tempfile
from contextlib import contextmanager, suppress
from typing import BinaryIO, Iterator, List, Optional, Tuple

from codec import CodecParams, ResetPolicy
from keystream import GeneratorKind

CHUNK_SIZE = 65536
DEFAULT_KEY_ENV = "CCX_KEY"
# 파이프 입력은 이 크기까지 메모리, 넘으면 임시 파일로 넘김
SPOOL_MAX_MEMORY = 8 * 1024 * 1024


def load_key(literal: Optional[str] = None, key_file: Optional[str] = None,
             key_env: Optional[str] = None) -> Optional[bytes]:
    """
    키 로드 (우선순위: 직접 입력 > 파일 > 환경변수 > CCX_KEY)

    Args:
        literal: 명령행 키 문자열 (UTF-8)
        key_file: 키 파일 경로 (원본 바이트, 끝의 개행 1개 제거)
        key_env: 키를 담은 환경변수 이름

    Returns:
        bytes or None: 키 바이트 (어디에도 없으면 None)
    """
    if literal is not None:
        return literal.encode("utf-8")

    if key_file is not None:
        with open(key_file, "rb") as f:
            key = f.read()
        if key.endswith(b"\r\n"):
            key = key[:-2]
        elif key.endswith(b"\n"):
            key = key[:-1]
        return key

    if key_env is not None:
        value = os.environ.get(key_env)
        if value is None:
            raise KeyError(f"환경변수 {key_env} 가 설정되어 있지 않습니다.")
        return value.encode("utf-8")

    value = os.environ.get(DEFAULT_KEY_ENV)
    return value.encode("utf-8") if value is not None else None


def open_input(path: Optional[str]) -> BinaryIO:
    """'-' 또는 None 이면 표준입력"""
    if path in (None, "-"):
        return sys.stdin.buffer
    return open(path, "rb")


@contextmanager
def open_output(path: Optional[str]) -> Iterator[BinaryIO]:
    """
    출력 스트림 ('-' 또는 None 이면 표준출력)

    파일 경로면 같은 디렉터리의 임시 파일에 쓰고, 블록이 예외 없이 끝났을 때만
    os.replace 로 대상 경로에 옮긴다. 실패하면 임시 파일을 지우고 기존 대상은 그대로 둔다.
    """
    if path in (None, "-"):
        yield sys.stdout.buffer
        return

    directory = os.path.dirname(os.path.abspath(path))
    staged = tempfile.NamedTemporaryFile(dir=directory, prefix=".ccx-", suffix=".part", delete=False)
    try:
        with staged:
            yield staged
        os.replace(staged.name, path)
    except BaseException:
        with suppress(FileNotFoundError):
            os.unlink(staged.name)
        raise


def measure_input(stream: BinaryIO) -> Tuple[BinaryIO, int]:
    """
    헤더에 기록할 평문 길이 측정

    일반 파일은 fstat 으로 남은 길이를 구하고, 파이프처럼 길이를 모르는 입력은
    SpooledTemporaryFile 로 옮겨 담은 뒤 처음으로 되감는다.

    Returns:
        (stream, length): 처음부터 읽을 수 있는 스트림과 바이트 길이
    """
    try:
        info = os.fstat(stream.fileno())
        if stat.S_ISREG(info.st_mode):
            return stream, info.st_size - stream.tell()
    except (AttributeError, OSError, ValueError):
        pass

    spool = tempfile.SpooledTemporaryFile(max_size=SPOOL_MAX_MEMORY)
    length = 0
    for chunk in read_chunks(stream):
        spool.write(chunk)
        length += len(chunk)
    spool.seek(0)
    return spool, length


def read_chunks(stream: BinaryIO, size: int = CHUNK_SIZE) -> Iterator[bytes]:
    while True:
        chunk = stream.read(size)
        if not chunk:
            break
        yield chunk


def read_exact(stream: BinaryIO, size: int) -> bytes:
    """size 바이트를 읽되, 스트림이 먼저 끝나면 읽은 만큼만 반환"""
    parts = []
    remaining = size
    while remaining > 0:
        chunk = stream.read(remaining)
        if not chunk:
            break
        parts.append(chunk)
        remaining -= len(chunk)
    return b"".join(parts)


def params_warnings(params: CodecParams) -> List[str]:
    """
    코덱 파라미터 조합 경고

    범위 오류는 CodecParams 가 이미 거부하므로 여기서는 실행을 막지 않는 참고 사항만 모은다.
    """
    warnings = []

    if params.generator_kind == GeneratorKind.ZERO:
        warnings.append("참고: ZERO 키스트림은 암호화를 하지 않습니다 (시험용)")
    elif params.generator_kind == GeneratorKind.LFSR32:
        warnings.append("참고: LFSR32 는 선형 생성기로, 통계 검정 비교용입니다")

    if params.reset_policy is ResetPolicy.RESET_AT_LIMIT:
        if (params.ratio_window, params.savings_threshold) != (CodecParams().ratio_window, CodecParams().savings_threshold):
            warnings.append("참고: at-limit 정책에서는 --window / --threshold 가 사용되지 않습니다")
    elif params.savings_threshold == 0:
        warnings.append("참고: 임계값 0‰ 은 압축 결과가 팽창할 때만 사전을 초기화합니다")

    return warnings
