"""
스트림 비교 스크립트
같은 의사 영어 텍스트를 평문 / LFSR32 / RC4 로 처리해 χ² 와 FIPS 결과를 나란히 비교
"""

import argparse
import sys
import time
from typing import Optional

import pandas as pd

from analysis import InsufficientDataError, chi_square_uniform, fips_battery, histogram
from codec import CodecParams, encode
from keystream import GeneratorKind
from report_components import save_histogram_chart
from sample_data import english_text

KEY = b"compare-streams-key"


def summarize(label: str, data: bytes, seconds: float = 0.0) -> dict:
    h = histogram(data)
    row = {"stream": label, "bytes": h.total, "max/min": round(h.flatness(), 4), "seconds": round(seconds, 2)}
    try:
        chi = chi_square_uniform(h)
        row["chi2"] = round(chi.statistic, 2)
        row["p_value"] = chi.p_value
    except InsufficientDataError:
        row["chi2"] = row["p_value"] = None
    try:
        fips = fips_battery(data)
        row.update({name: "PASS" if ok else "FAIL" for name, ok in fips.verdicts().items()})
    except InsufficientDataError:
        pass
    return row


def compare(size: int, seed: int, chart: Optional[str] = None) -> pd.DataFrame:
    print(f"🚀 샘플 생성: {size:,} 바이트 (seed={seed})")
    text = english_text(size, seed)
    rows = [summarize("plaintext", text)]

    for kind in (GeneratorKind.LFSR32, GeneratorKind.RC4):
        start = time.time()
        container = encode(text, KEY, CodecParams(generator_kind=kind))
        elapsed = time.time() - start
        print(f"✅ {kind.name} 인코딩 완료 ({elapsed:.2f}초)")
        rows.append(summarize(kind.name, container.payload, elapsed))
        if chart and kind == GeneratorKind.RC4:
            save_histogram_chart(histogram(container.payload), chart)
            print(f"📈 차트 저장: {chart}")

    return pd.DataFrame(rows)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=1 << 20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--chart", help="RC4 페이로드 차트 저장 경로 (.html / .json)")
    args = parser.parse_args()

    table = compare(args.size, args.seed, args.chart)
    print(table.to_string(index=False))
    sys.exit(0)
