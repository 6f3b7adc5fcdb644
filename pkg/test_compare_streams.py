"""
스트림 비교 스크립트 및 샘플 데이터 테스트
"""

from compare_streams import compare, summarize
from sample_data import english_text, random_bytes


def test_english_text_deterministic():
    a = english_text(5000, seed=3)
    assert len(a) == 5000
    assert a == english_text(5000, seed=3)
    assert a != english_text(5000, seed=4)
    assert a.decode("ascii")


def test_random_bytes_deterministic():
    assert random_bytes(100, seed=1) == random_bytes(100, seed=1)
    assert len(random_bytes(0)) == 0


def test_summarize_short_stream():
    row = summarize("tiny", b"abc")
    assert row["chi2"] is None and row["p_value"] is None
    assert "monobit" not in row


def test_compare_table(capsys):
    table = compare(16384, seed=0)
    assert list(table["stream"]) == ["plaintext", "LFSR32", "RC4"]
    plaintext, _, rc4 = table.to_dict("records")
    assert plaintext["chi2"] > rc4["chi2"]
    assert plaintext["monobit"] == "FAIL"
    assert "RC4" in capsys.readouterr().out
