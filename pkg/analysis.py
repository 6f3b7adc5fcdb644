"""
분석 기능 모듈
바이트 빈도 히스토그램, χ² 균일성 검정, FIPS 140-1 난수성 검정 4종
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.special import gammaincc

CELLS = 256
DEGREES_OF_FREEDOM = CELLS - 1
# 셀당 기대빈도 5 이상
CHI_SQUARE_MIN_TOTAL = 5 * CELLS

FIPS_BITS = 20000
FIPS_BYTES = FIPS_BITS // 8
MONOBIT_RANGE = (9654, 10346)          # 양 끝 제외
POKER_RANGE = (1.03, 57.4)             # 양 끝 제외
# 길이 1, 2, 3, 4, 5, 6 이상 (양 끝 포함)
RUNS_INTERVALS = [
    (2267, 2733),
    (1079, 1421),
    (502, 748),
    (223, 402),
    (90, 223),
    (90, 223),
]
LONG_RUN_LIMIT = 34


class InsufficientDataError(ValueError):
    """검정에 필요한 데이터 양 부족"""


@dataclass
class Histogram256:
    counts: np.ndarray = field(default_factory=lambda: np.zeros(CELLS, dtype=np.int64))
    total: int = 0

    def update(self, data: bytes) -> "Histogram256":
        """청크 누적 (스트리밍 분석용)"""
        if data:
            self.counts += np.bincount(np.frombuffer(data, dtype=np.uint8), minlength=CELLS)
            self.total += len(data)
        return self

    def frequencies(self) -> np.ndarray:
        if self.total == 0:
            raise InsufficientDataError("빈 데이터의 상대 빈도는 정의되지 않습니다.")
        return self.counts / self.total

    def flatness(self) -> float:
        """최대/최소 빈도 비 (최소 빈도가 0 이면 inf)"""
        low = int(self.counts.min())
        if low == 0:
            return float("inf")
        return int(self.counts.max()) / low

    def to_frame(self) -> pd.DataFrame:
        """바이트별 빈도 표 (byte, count, probability)"""
        return pd.DataFrame({
            "byte": np.arange(CELLS),
            "count": self.counts,
            "probability": self.frequencies(),
        })

    def to_csv(self) -> str:
        """플롯 데이터 CSV: byte,count,probability (확률은 소수점 6자리)"""
        return self.to_frame().to_csv(index=False, float_format="%.6f", lineterminator="\n")


def histogram(data: bytes) -> Histogram256:
    return Histogram256().update(data)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    degrees_of_freedom: int
    p_value: float


def chi_square_uniform(h: Histogram256) -> ChiSquareResult:
    """
    256 셀 균등분포 χ² 적합도 검정

    statistic = Σ (c_i - T/256)² / (T/256) = (256·Σc_i² - T²) / T 를 정수로 계산한 뒤
    한 번만 나눈다. p 값은 Q(255/2, statistic/2).

    Args:
        h: 바이트 히스토그램 (total >= 1280)

    Returns:
        ChiSquareResult: 통계량, 자유도 255, 상측 확률

    Raises:
        InsufficientDataError: total 이 1280 미만
    """
    total = int(h.total)
    if total < CHI_SQUARE_MIN_TOTAL:
        raise InsufficientDataError(
            f"χ² 검정에는 최소 {CHI_SQUARE_MIN_TOTAL} 바이트가 필요합니다 (현재 {total})"
        )
    sum_squares = sum(int(c) * int(c) for c in h.counts)
    statistic = (CELLS * sum_squares - total * total) / total
    p_value = float(gammaincc(DEGREES_OF_FREEDOM / 2, statistic / 2))
    return ChiSquareResult(statistic, DEGREES_OF_FREEDOM, min(max(p_value, 0.0), 1.0))


@dataclass(frozen=True)
class FipsReport:
    monobit_count: int
    monobit_pass: bool
    poker_statistic: float
    poker_pass: bool
    # 행: 0 의 런 / 1 의 런, 열: 길이 1~5, 6 이상
    runs_counts: Tuple[Tuple[int, ...], Tuple[int, ...]]
    runs_passes: Tuple[bool, ...]
    long_run_max: int
    long_run_pass: bool

    @property
    def runs_pass(self) -> bool:
        return all(self.runs_passes)

    @property
    def overall(self) -> bool:
        return self.monobit_pass and self.poker_pass and self.runs_pass and self.long_run_pass

    def verdicts(self) -> Dict[str, bool]:
        return {
            "monobit": self.monobit_pass,
            "poker": self.poker_pass,
            "runs": self.runs_pass,
            "long_run": self.long_run_pass,
        }


def _run_lengths(bits: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """연속 구간(run)의 길이와 값"""
    boundaries = np.concatenate(([0], np.flatnonzero(np.diff(bits)) + 1, [bits.size]))
    lengths = np.diff(boundaries)
    values = bits[boundaries[:-1]]
    return lengths, values


def fips_battery(data: bytes) -> FipsReport:
    """
    FIPS 140-1 통계 검정 4종 (앞 20,000 비트만 사용)

    Args:
        data: 바이트열 (최소 2,500 바이트)

    Returns:
        FipsReport: monobit / poker / runs / long run 결과
    """
    if len(data) < FIPS_BYTES:
        raise InsufficientDataError(
            f"FIPS 검정에는 {FIPS_BITS} 비트({FIPS_BYTES} 바이트)가 필요합니다 (현재 {len(data) * 8} 비트)"
        )
    bits = np.unpackbits(np.frombuffer(bytes(data[:FIPS_BYTES]), dtype=np.uint8))

    # 1. Monobit
    ones = int(bits.sum())
    monobit_pass = MONOBIT_RANGE[0] < ones < MONOBIT_RANGE[1]

    # 2. Poker: 4비트 세그먼트 5000 개
    segments = bits.reshape(-1, 4) @ np.array([8, 4, 2, 1])
    f = np.bincount(segments, minlength=16)
    poker = 16 / segments.size * float(np.dot(f, f)) - segments.size
    poker_pass = POKER_RANGE[0] < poker < POKER_RANGE[1]

    # 3. Runs / 4. Long run
    lengths, values = _run_lengths(bits)
    buckets = np.minimum(lengths, 6) - 1
    counts = np.zeros((2, 6), dtype=np.int64)
    np.add.at(counts, (values, buckets), 1)
    runs_passes = tuple(
        bool(low <= counts[symbol, i] <= high)
        for symbol in (0, 1)
        for i, (low, high) in enumerate(RUNS_INTERVALS)
    )
    long_run = int(lengths.max())

    return FipsReport(
        monobit_count=ones,
        monobit_pass=bool(monobit_pass),
        poker_statistic=poker,
        poker_pass=bool(poker_pass),
        runs_counts=tuple(tuple(int(c) for c in row) for row in counts),
        runs_passes=runs_passes,
        long_run_max=long_run,
        long_run_pass=long_run < LONG_RUN_LIMIT,
    )


@dataclass
class AnalysisReport:
    """분석 결과 묶음 (데이터 부족으로 못 한 검정은 사유를 기록)"""
    histogram: Histogram256
    chi_square: Optional[ChiSquareResult] = None
    fips: Optional[FipsReport] = None
    skipped: List[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.skipped


def analyze_bytes(data: bytes, hist: Optional[Histogram256] = None) -> AnalysisReport:
    """
    χ² 와 FIPS 검정을 한 번에 수행

    Args:
        data: FIPS 에 쓸 앞부분 바이트 (2,500 바이트 이상이면 충분)
        hist: 미리 누적한 히스토그램 (없으면 data 로 계산)
    """
    if hist is None:
        hist = histogram(data)
    report = AnalysisReport(histogram=hist)

    try:
        report.chi_square = chi_square_uniform(hist)
    except InsufficientDataError as e:
        report.skipped.append(str(e))

    try:
        report.fips = fips_battery(data)
    except InsufficientDataError as e:
        report.skipped.append(str(e))

    return report
