"""
명령행 도구 테스트
종료코드 계약, 키 소스, 왕복, 분석 리포트, 히스토그램 CSV
"""

import pytest

from cli import EXIT_FORMAT, EXIT_INSUFFICIENT, EXIT_KEY, EXIT_OK, EXIT_USAGE, main
from codec import HEADER_SIZE, ContainerHeader
from data_loader import DEFAULT_KEY_ENV
from keystream import GeneratorKind
from sample_data import english_text


@pytest.fixture(autouse=True)
def no_default_key(monkeypatch):
    monkeypatch.delenv(DEFAULT_KEY_ENV, raising=False)


@pytest.fixture
def plain(tmp_path):
    path = tmp_path / "plain.txt"
    path.write_bytes(english_text(65536, seed=31))
    return path


def encode_file(plain, out, *extra):
    return main(["encode", "-i", str(plain), "-o", str(out), *extra])


def decode_file(container, out, *extra):
    return main(["decode", "-i", str(container), "-o", str(out), *extra])


def test_round_trip(tmp_path, plain):
    container = tmp_path / "plain.ccx"
    restored = tmp_path / "restored.txt"
    assert encode_file(plain, container, "--key", "s3cret") == EXIT_OK
    assert container.stat().st_size < plain.stat().st_size
    assert decode_file(container, restored, "--key", "s3cret") == EXIT_OK
    assert restored.read_bytes() == plain.read_bytes()


@pytest.mark.parametrize("prbs", ["lfsr32", "rc4"])
def test_round_trip_with_options(tmp_path, plain, prbs):
    container = tmp_path / "opts.ccx"
    restored = tmp_path / "opts.txt"
    assert encode_file(
        plain, container, "--key", "opt-key", "--prbs", prbs, "--max-width", "10",
        "--reset-policy", "at-limit", "--permute",
    ) == EXIT_OK
    header = ContainerHeader.unpack(container.read_bytes()[:HEADER_SIZE])
    assert header.max_width == 10 and header.permute_initial
    assert decode_file(container, restored, "--key", "opt-key") == EXIT_OK
    assert restored.read_bytes() == plain.read_bytes()


def test_encode_reports_summary(tmp_path, plain, capsys):
    encode_file(plain, tmp_path / "out.ccx", "--key", "k")
    err = capsys.readouterr().err
    assert "65,536 B" in err
    assert "MB/s" in err


def test_zero_requires_insecure(tmp_path, plain):
    assert encode_file(plain, tmp_path / "z.ccx", "--prbs", "zero") == EXIT_USAGE


def test_zero_with_insecure(tmp_path, plain):
    container = tmp_path / "z.ccx"
    restored = tmp_path / "z.txt"
    assert encode_file(plain, container, "--prbs", "zero", "--insecure") == EXIT_OK
    assert ContainerHeader.unpack(container.read_bytes()).generator_kind == GeneratorKind.ZERO
    assert decode_file(container, restored) == EXIT_USAGE
    assert decode_file(container, restored, "--insecure") == EXIT_OK
    assert restored.read_bytes() == plain.read_bytes()


def test_missing_key(tmp_path, plain):
    assert encode_file(plain, tmp_path / "k.ccx") == EXIT_KEY


def test_default_env_key(tmp_path, plain, monkeypatch):
    monkeypatch.setenv(DEFAULT_KEY_ENV, "env-key")
    container = tmp_path / "e.ccx"
    restored = tmp_path / "e.txt"
    assert encode_file(plain, container) == EXIT_OK
    assert decode_file(container, restored, "--key", "env-key") == EXIT_OK
    assert restored.read_bytes() == plain.read_bytes()


def test_named_env_key(tmp_path, plain, monkeypatch):
    monkeypatch.setenv("TEAM_KEY", "team")
    monkeypatch.delenv("NOT_SET_KEY", raising=False)
    container = tmp_path / "n.ccx"
    assert encode_file(plain, container, "--key-env", "TEAM_KEY") == EXIT_OK
    assert decode_file(container, tmp_path / "n.txt", "--key-env", "NOT_SET_KEY") == EXIT_KEY


def test_key_file(tmp_path, plain):
    key_file = tmp_path / "key.txt"
    key_file.write_bytes(b"file-key\n")
    container = tmp_path / "f.ccx"
    restored = tmp_path / "f.txt"
    assert encode_file(plain, container, "--key-file", str(key_file)) == EXIT_OK
    assert decode_file(container, restored, "--key", "file-key") == EXIT_OK
    assert restored.read_bytes() == plain.read_bytes()


def test_overlong_key(tmp_path, plain):
    assert encode_file(plain, tmp_path / "l.ccx", "--key", "x" * 257) == EXIT_KEY


def test_bad_magic(tmp_path, plain):
    container = tmp_path / "bad.ccx"
    encode_file(plain, container, "--key", "k")
    data = bytearray(container.read_bytes())
    data[:4] = b"NOPE"
    container.write_bytes(bytes(data))
    assert decode_file(container, tmp_path / "bad.txt", "--key", "k") == EXIT_FORMAT


def test_truncated_container(tmp_path, plain):
    container = tmp_path / "cut.ccx"
    encode_file(plain, container, "--key", "k")
    data = container.read_bytes()
    container.write_bytes(data[:len(data) // 2])
    assert decode_file(container, tmp_path / "cut.txt", "--key", "k") == EXIT_FORMAT

    container.write_bytes(data[:HEADER_SIZE - 5])
    assert decode_file(container, tmp_path / "cut.txt", "--key", "k") == EXIT_FORMAT


def test_failed_decode_leaves_no_output(tmp_path, plain):
    container = tmp_path / "partial.ccx"
    restored = tmp_path / "partial.txt"
    encode_file(plain, container, "--key", "k")
    data = container.read_bytes()
    # 앞부분 페이로드는 정상 복원되지만 끝이 잘려 finish 에서 실패
    container.write_bytes(data[:HEADER_SIZE + (len(data) - HEADER_SIZE) * 3 // 4])

    assert decode_file(container, restored, "--key", "k") == EXIT_FORMAT
    assert not restored.exists()
    assert not list(tmp_path.glob("*.part"))


def test_failed_decode_keeps_existing_target(tmp_path, plain):
    container = tmp_path / "keep.ccx"
    restored = tmp_path / "keep.txt"
    restored.write_bytes(b"previous contents")
    encode_file(plain, container, "--key", "k")
    container.write_bytes(container.read_bytes()[:-100])

    assert decode_file(container, restored, "--key", "k") == EXIT_FORMAT
    assert restored.read_bytes() == b"previous contents"


def test_wrong_key_leaves_no_output(tmp_path, plain):
    container = tmp_path / "wrong.ccx"
    restored = tmp_path / "wrong.txt"
    encode_file(plain, container, "--key", "right")
    code = decode_file(container, restored, "--key", "wrong")
    assert code in (EXIT_OK, EXIT_FORMAT)
    if code == EXIT_FORMAT:
        assert not restored.exists()
    else:
        assert restored.read_bytes() != plain.read_bytes()
    assert not list(tmp_path.glob("*.part"))


def test_analyze_container(tmp_path, plain):
    container = tmp_path / "a.ccx"
    report = tmp_path / "report.txt"
    encode_file(plain, container, "--key", "analysis-key")
    assert main(["analyze", "-i", str(container), "-o", str(report)]) == EXIT_OK
    text = report.read_text(encoding="utf-8")
    assert "payload" in text
    assert "p-value" in text
    assert "monobit" in text and "poker" in text


def test_analyze_insufficient(tmp_path):
    small = tmp_path / "small.bin"
    small.write_bytes(b"tiny")
    report = tmp_path / "report.txt"
    assert main(["analyze", "--raw", "-i", str(small), "-o", str(report)]) == EXIT_INSUFFICIENT
    assert "생략" in report.read_text(encoding="utf-8")


def test_hist_csv_and_chart(tmp_path, plain):
    csv = tmp_path / "hist.csv"
    chart = tmp_path / "hist.json"
    assert main(["hist", "--raw", "-i", str(plain), "-o", str(csv), "--chart", str(chart)]) == EXIT_OK
    lines = csv.read_text().splitlines()
    assert len(lines) == 257
    assert lines[0] == "byte,count,probability"
    assert chart.exists()


@pytest.mark.parametrize("argv", [
    ["encode", "--max-width", "9", "--key", "k"],
    ["encode", "--max-width", "25", "--key", "k"],
    ["encode", "--threshold", "5000", "--key", "k"],
    ["encode", "--prbs", "des", "--key", "k"],
    ["compress"],
    [],
])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "encode" in capsys.readouterr().out


def test_missing_input_file(tmp_path):
    assert main(["encode", "-i", str(tmp_path / "nope"), "-o", str(tmp_path / "o"), "--key", "k"]) == EXIT_USAGE
