"""
리포트 구성 요소 테스트
"""

import json

from analysis import analyze_bytes, histogram
from keystream import Rc4Generator
from report_components import (
    build_histogram_chart, render_analysis_report, render_encode_summary,
    runs_frame, save_histogram_chart, savings_permille,
)


def test_savings_permille():
    assert savings_permille(1000, 4000) == 500
    assert savings_permille(1000, 8000) == 0
    assert savings_permille(10, 100) == -250
    assert savings_permille(0, 0) is None


def test_encode_summary_line():
    line = render_encode_summary(1000, 4000, 400, 2, 0.5)
    assert "1,000 B" in line
    assert "500‰" in line
    assert "2 회" in line
    assert "-" in render_encode_summary(0, 0, 0, 0, 0.0)


def test_analysis_report_text():
    report = analyze_bytes(Rc4Generator(b"report").keystream(4096))
    text = render_analysis_report(report, "raw")
    assert "p-value" in text
    for name in ("monobit", "poker", "runs", "long-run"):
        assert name in text
    assert len(runs_frame(report)) == 6


def test_analysis_report_skipped():
    text = render_analysis_report(analyze_bytes(b"tiny"))
    assert "생략" in text
    assert "⚠️" in text


def test_histogram_chart(tmp_path):
    h = histogram(Rc4Generator(b"chart").keystream(2048))
    spec = build_histogram_chart(h).to_dict()
    assert len(spec["layer"]) == 2

    path = tmp_path / "hist.json"
    save_histogram_chart(h, str(path))
    assert "layer" in json.loads(path.read_text())
