"""
압축-암호화 명령행 도구
encode / decode / analyze / hist 를 파일 또는 표준 스트림에 대해 수행
"""

import argparse
import logging
import sys
import time
from contextlib import ExitStack
from dataclasses import dataclass, field
from typing import BinaryIO, List, Optional, Tuple

from analysis import FIPS_BYTES, Histogram256, InsufficientDataError, analyze_bytes
from bitio import EndOfStreamError
from codec import (
    DEFAULT_MAX_WIDTH, DEFAULT_RATIO_WINDOW, DEFAULT_SAVINGS_THRESHOLD, HEADER_SIZE,
    CodecParams, ContainerFormatError, ContainerHeader, CorruptStreamError,
    ResetPolicy, StreamDecoder, StreamEncoder,
)
from data_loader import (
    load_key, measure_input, open_input, open_output, read_chunks, read_exact, params_warnings,
)
from keystream import GeneratorKind, InvalidKeyError, validate_key
from report_components import render_analysis_report, render_encode_summary, save_histogram_chart

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_KEY = 3
EXIT_INSUFFICIENT = 4

PRBS_CHOICES = {
    "lfsr32": GeneratorKind.LFSR32,
    "rc4": GeneratorKind.RC4,
    "zero": GeneratorKind.ZERO,
}
RESET_CHOICES = {
    "ratio": ResetPolicy.RATIO_MONITOR,
    "at-limit": ResetPolicy.RESET_AT_LIMIT,
}


class UsageError(Exception):
    """명령행 사용법 오류 및 안전장치 위반"""


class _Parser(argparse.ArgumentParser):
    # argparse 기본 종료코드(2)는 형식 오류와 겹치므로 예외로 바꿔 1 로 처리
    def error(self, message):
        raise UsageError(message)


@dataclass
class CliConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    key_literal: Optional[str] = None
    key_file: Optional[str] = None
    key_env: Optional[str] = None
    params: CodecParams = field(default_factory=CodecParams)
    insecure: bool = False
    raw: bool = False
    chart: Optional[str] = None
    verbose: bool = False


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", default="-", help="입력 경로 (기본: 표준입력)")
    common.add_argument("-o", "--output", default="-", help="출력 경로 (기본: 표준출력)")
    common.add_argument("-v", "--verbose", action="store_true", help="디버그 로그 출력")

    keyed = argparse.ArgumentParser(add_help=False)
    source = keyed.add_mutually_exclusive_group()
    source.add_argument("--key", dest="key_literal", help="키 문자열 (UTF-8)")
    source.add_argument("--key-file", help="키 파일 경로")
    source.add_argument("--key-env", help="키를 담은 환경변수 이름 (기본: CCX_KEY)")
    keyed.add_argument("--insecure", action="store_true", help="ZERO 키스트림 허용")

    parser = _Parser(prog="ccx", description="LZ 사전 압축 + Vernam 포인터 암호화")
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", parents=[common, keyed], help="압축-암호화")
    enc.add_argument("--prbs", choices=sorted(PRBS_CHOICES), default="rc4")
    enc.add_argument("--max-width", type=int, default=DEFAULT_MAX_WIDTH)
    enc.add_argument("--reset-policy", choices=sorted(RESET_CHOICES), default="ratio")
    enc.add_argument("--window", type=int, default=DEFAULT_RATIO_WINDOW, help="감시 구간 (바이트)")
    enc.add_argument("--threshold", type=int, default=DEFAULT_SAVINGS_THRESHOLD, help="절감률 하한 (퍼밀)")
    enc.add_argument("--permute", action="store_true", help="초기 256 엔트리 순열 적용")

    sub.add_parser("decode", parents=[common, keyed], help="복호-해제")

    ana = sub.add_parser("analyze", parents=[common], help="χ² / FIPS 난수성 분석")
    ana.add_argument("--raw", action="store_true", help="컨테이너가 아닌 원본 파일 전체를 분석")

    hist = sub.add_parser("hist", parents=[common], help="바이트 빈도 CSV")
    hist.add_argument("--raw", action="store_true", help="컨테이너가 아닌 원본 파일 전체를 분석")
    hist.add_argument("--chart", help="차트 저장 경로 (.html / .json)")

    return parser


def config_from_args(args: argparse.Namespace) -> CliConfig:
    params = CodecParams()
    if args.command == "encode":
        try:
            params = CodecParams(
                max_width=args.max_width,
                reset_policy=RESET_CHOICES[args.reset_policy],
                ratio_window=args.window,
                savings_threshold=args.threshold,
                permute_initial=args.permute,
                generator_kind=PRBS_CHOICES[args.prbs],
            )
        except ValueError as e:
            raise UsageError(str(e)) from e

    return CliConfig(
        command=args.command,
        input=args.input,
        output=args.output,
        key_literal=getattr(args, "key_literal", None),
        key_file=getattr(args, "key_file", None),
        key_env=getattr(args, "key_env", None),
        params=params,
        insecure=getattr(args, "insecure", False),
        raw=getattr(args, "raw", False),
        chart=getattr(args, "chart", None),
        verbose=args.verbose,
    )


def _resolve_key(config: CliConfig, kind: GeneratorKind, permute: bool) -> Optional[bytes]:
    """생성기 종류에 맞춰 키를 확보 (ZERO 는 --insecure 필수)"""
    if kind == GeneratorKind.ZERO and not config.insecure:
        raise UsageError("ZERO 키스트림은 암호화를 하지 않습니다. --insecure 를 함께 지정하세요.")

    try:
        key = load_key(config.key_literal, config.key_file, config.key_env)
    except KeyError as e:
        raise InvalidKeyError(e.args[0]) from e

    if key is None:
        if kind == GeneratorKind.ZERO and not permute:
            return None
        raise InvalidKeyError("키가 필요합니다 (--key / --key-file / --key-env 또는 CCX_KEY)")
    return validate_key(key)


def _output(stack: ExitStack, path: Optional[str]) -> BinaryIO:
    # 파일 출력은 블록이 성공적으로 끝날 때만 대상 경로에 나타남
    return stack.enter_context(open_output(path))


def _input(stack: ExitStack, path: Optional[str]) -> BinaryIO:
    inp = open_input(path)
    if path not in (None, "-"):
        stack.enter_context(inp)
    return inp


def _run_encode(config: CliConfig) -> int:
    params = config.params
    key = _resolve_key(config, params.generator_kind, params.permute_initial)
    for message in params_warnings(params):
        print(f"⚠️ {message}", file=sys.stderr)

    with ExitStack() as stack:
        inp = _input(stack, config.input)
        stream, length = measure_input(inp)
        if stream is not inp:
            stack.enter_context(stream)
        encoder = StreamEncoder(key, params)
        out = _output(stack, config.output)

        start = time.perf_counter()
        out.write(encoder.header(length).pack())
        for chunk in read_chunks(stream):
            out.write(encoder.update(chunk))
        out.write(encoder.finish())
        out.flush()
        elapsed = time.perf_counter() - start

        if encoder.bytes_in != length:
            raise UsageError(f"입력 길이가 읽는 도중 바뀌었습니다 ({length} → {encoder.bytes_in})")

    print(render_encode_summary(
        encoder.bytes_in, encoder.payload_bits, encoder.codes_emitted,
        len(encoder.reset_positions), elapsed,
    ), file=sys.stderr)
    return EXIT_OK


def _run_decode(config: CliConfig) -> int:
    with ExitStack() as stack:
        inp = _input(stack, config.input)
        header = ContainerHeader.unpack(read_exact(inp, HEADER_SIZE))
        key = _resolve_key(config, header.generator_kind, header.permute_initial)
        decoder = StreamDecoder(header, key)
        out = _output(stack, config.output)

        start = time.perf_counter()
        for chunk in read_chunks(inp):
            out.write(decoder.update(chunk))
            if decoder.done:
                break
        out.write(decoder.finish())
        out.flush()
        elapsed = time.perf_counter() - start

    print(f"✅ 복원 {decoder.bytes_out:,} B ({elapsed:.2f}초)", file=sys.stderr)
    return EXIT_OK


def _collect(config: CliConfig) -> Tuple[Histogram256, bytes]:
    """페이로드(또는 --raw 면 파일 전체)의 히스토그램과 FIPS 용 앞부분"""
    hist = Histogram256()
    head = bytearray()
    with ExitStack() as stack:
        inp = _input(stack, config.input)
        if not config.raw:
            # 헤더는 구조화된 평문이므로 분석에서 제외
            ContainerHeader.unpack(read_exact(inp, HEADER_SIZE))
        for chunk in read_chunks(inp):
            hist.update(chunk)
            if len(head) < FIPS_BYTES:
                head += chunk[:FIPS_BYTES - len(head)]
    return hist, bytes(head)


def _run_analyze(config: CliConfig) -> int:
    hist, head = _collect(config)
    report = analyze_bytes(head, hist)
    with ExitStack() as stack:
        out = _output(stack, config.output)
        out.write(render_analysis_report(report, "raw" if config.raw else "payload").encode("utf-8"))
        out.flush()
    if not report.complete:
        return EXIT_INSUFFICIENT
    return EXIT_OK


def _run_hist(config: CliConfig) -> int:
    hist, _ = _collect(config)
    csv = hist.to_csv()
    with ExitStack() as stack:
        out = _output(stack, config.output)
        out.write(csv.encode("utf-8"))
        out.flush()
    if config.chart:
        save_histogram_chart(hist, config.chart)
        print(f"✅ 차트 저장: {config.chart}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "encode": _run_encode,
    "decode": _run_decode,
    "analyze": _run_analyze,
    "hist": _run_hist,
}


def run(config: CliConfig) -> int:
    """
    명령 실행 후 종료코드 반환

    0 성공 / 1 사용법 / 2 형식·손상 / 3 키 / 4 검정 데이터 부족
    """
    try:
        return COMMANDS[config.command](config)
    except UsageError as e:
        print(f"❌ 사용법 오류: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidKeyError as e:
        print(f"❌ 키 오류: {e}", file=sys.stderr)
        return EXIT_KEY
    except (ContainerFormatError, CorruptStreamError, EndOfStreamError) as e:
        print(f"❌ 스트림 오류: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except InsufficientDataError as e:
        print(f"❌ 데이터 부족: {e}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except OSError as e:
        print(f"❌ 파일 오류: {e}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = config_from_args(args)
    except UsageError as e:
        print(f"❌ 사용법 오류: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
