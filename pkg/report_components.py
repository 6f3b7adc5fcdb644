"""
리포트 구성 요소
분석 결과 텍스트 리포트, 인코딩 요약 줄, 바이트 확률 막대 차트 (altair)
"""

from typing import Optional

import altair as alt
import pandas as pd

from analysis import RUNS_INTERVALS, AnalysisReport, Histogram256


def status_badge(passed: bool) -> str:
    return "✅ PASS" if passed else "❌ FAIL"


def savings_permille(bytes_in: int, payload_bits: int) -> Optional[int]:
    """전체 스트림 절감률 (퍼밀). 입력이 비어 있으면 None"""
    if bytes_in == 0:
        return None
    return 1000 - (1000 * payload_bits) // (8 * bytes_in)


def render_encode_summary(bytes_in: int, payload_bits: int, codes: int, resets: int, seconds: float) -> str:
    """인코딩 진단 한 줄 (진단 스트림 출력용)"""
    savings = savings_permille(bytes_in, payload_bits)
    savings_text = "-" if savings is None else f"{savings}‰"
    throughput = (bytes_in / seconds / 1e6) if seconds > 0 else 0.0
    return (
        f"📦 입력 {bytes_in:,} B | 페이로드 {payload_bits:,} bit | 포인터 {codes:,} 개 | "
        f"사전 초기화 {resets} 회 | 절감률 {savings_text} | 처리속도 {throughput:.2f} MB/s"
    )


def runs_frame(report: AnalysisReport) -> pd.DataFrame:
    """runs 검정 구간표 (길이별 0/1 런 개수와 허용 구간)"""
    fips = report.fips
    labels = ["1", "2", "3", "4", "5", "6+"]
    zeros, ones = fips.runs_counts
    return pd.DataFrame({
        "length": labels,
        "zeros": zeros,
        "ones": ones,
        "interval": [f"[{low}, {high}]" for low, high in RUNS_INTERVALS],
        "zeros_ok": ["ok" if p else "FAIL" for p in fips.runs_passes[:6]],
        "ones_ok": ["ok" if p else "FAIL" for p in fips.runs_passes[6:]],
    })


def render_analysis_report(report: AnalysisReport, source: str = "payload") -> str:
    """
    χ² / FIPS 결과를 구조화된 텍스트로 렌더링

    Args:
        report: analyze_bytes 결과
        source: 분석 대상 설명 (payload / raw)
    """
    h = report.histogram
    lines = [
        "=" * 60,
        f"🔎 난수성 분석 리포트 ({source})",
        "=" * 60,
        f"bytes            : {h.total:,}",
    ]
    if h.total:
        flat = h.flatness()
        lines.append(f"max/min 빈도 비  : {'inf' if flat == float('inf') else f'{flat:.4f}'}")

    lines.append("")
    lines.append("[χ² 균일성 검정]")
    if report.chi_square is not None:
        chi = report.chi_square
        lines += [
            f"  statistic      : {chi.statistic:.4f}",
            f"  dof            : {chi.degrees_of_freedom}",
            f"  p-value        : {chi.p_value:.6g}",
        ]
    else:
        lines.append("  (데이터 부족으로 생략)")

    lines.append("")
    lines.append("[FIPS 140-1]")
    if report.fips is not None:
        fips = report.fips
        lines += [
            f"  monobit   X={fips.monobit_count:<10d} {status_badge(fips.monobit_pass)}",
            f"  poker     X={fips.poker_statistic:<10.2f} {status_badge(fips.poker_pass)}",
            f"  runs      {sum(fips.runs_passes):>2d}/12 구간      {status_badge(fips.runs_pass)}",
            f"  long-run  max={fips.long_run_max:<8d} {status_badge(fips.long_run_pass)}",
            f"  overall                {status_badge(fips.overall)}",
            "",
            runs_frame(report).to_string(index=False),
        ]
    else:
        lines.append("  (데이터 부족으로 생략)")

    for reason in report.skipped:
        lines.append(f"⚠️ {reason}")
    return "\n".join(lines) + "\n"


def build_histogram_chart(h: Histogram256, title: str = "Byte probabilities") -> alt.Chart:
    """바이트 값별 출현 확률 막대 차트"""
    df = h.to_frame()
    uniform = 1 / len(df)
    bars = alt.Chart(df).mark_bar(color="#6366F1").encode(
        x=alt.X("byte:Q", title="byte", scale=alt.Scale(domain=[0, 255])),
        y=alt.Y("probability:Q", title="probability", axis=alt.Axis(format=".4f")),
        tooltip=[
            alt.Tooltip("byte:Q", title="byte"),
            alt.Tooltip("count:Q", format=",.0f", title="count"),
            alt.Tooltip("probability:Q", format=".6f", title="probability"),
        ],
    )
    baseline = alt.Chart(pd.DataFrame({"probability": [uniform]})).mark_rule(
        color="#F59E0B", strokeDash=[4, 4]
    ).encode(y="probability:Q")
    return alt.layer(bars, baseline).properties(title=title, width=640, height=240)


def save_histogram_chart(h: Histogram256, path: str) -> None:
    """확장자(.html / .json)에 맞춰 차트 저장"""
    build_histogram_chart(h).save(path)
