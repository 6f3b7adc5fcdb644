"""
샘플 데이터 모듈
테스트/재현 스크립트용 결정적 의사 영어 텍스트 생성 (외부 파일 불필요)
"""

import random
from typing import List

WORDS = """
the of and to a in is it you that he was for on are with as his they be at one
have this from or had by word but what some we can out other were all there
when up use your how said an each she which do their time if will way about
many then them write would like so these her long make thing see him two has
look more day could go come did number sound no most people my over know water
than call first who may down side been now find any new work part take get
place made live where after back little only round man year came show every
good me give our under name very through just form sentence great think say
help low line differ turn cause much mean before move right boy old too same
tell does set three want air well also play small end put home read hand port
large spell add even land here must big high such follow act why ask men
change went light kind off need house picture try us again animal point mother
world near build self earth father head stand own page should country found
answer school grow study still learn plant cover food sun four between state
keep eye never last let thought city tree cross farm hard start might story saw
far sea draw left late run while press close night real life few north open
seem together next white children begin got walk example ease paper group
always music those both mark often letter until mile river car feet care second
book carry took science eat room friend began idea fish mountain stop once base
hear horse cut sure watch color face wood main enough plain girl usual young
ready above ever red list though feel talk bird soon body dog family direct
pose leave song measure door product black short numeral class wind question
happen complete ship area half rock order fire south problem piece told knew
pass since top whole king space heard best hour better true during hundred five
remember step early hold west ground interest reach fast verb sing listen six
table travel less morning ten simple several vowel toward war lay against
pattern slow center love person money serve appear road map rain rule govern
pull cold notice voice unit power town fine certain fly fall lead cry dark
machine note wait plan figure star box noun field rest correct able pound done
beauty drive stood contain front teach week final gave green oh quick develop
ocean warm free minute strong special mind behind clear tail produce fact
""".split()

# 순위 r 의 단어 가중치 1/(r+1) (Zipf 분포)
WEIGHTS = [1.0 / (rank + 1) for rank in range(len(WORDS))]


def _sentence(rng: random.Random) -> str:
    words: List[str] = rng.choices(WORDS, weights=WEIGHTS, k=rng.randint(5, 18))
    words[0] = words[0].capitalize()
    if len(words) > 8 and rng.random() < 0.4:
        words[rng.randint(3, len(words) - 3)] += ","
    return " ".join(words) + rng.choice([".", ".", ".", "?", "!"])


def english_text(size: int, seed: int = 0) -> bytes:
    """
    의사 영어 텍스트 size 바이트

    Args:
        size: 바이트 길이
        seed: 난수 시드 (같은 시드 → 같은 텍스트)

    Returns:
        bytes: ASCII 텍스트 (문단은 빈 줄로 구분)
    """
    rng = random.Random(seed)
    parts: List[str] = []
    length = 0
    while length < size:
        paragraph = " ".join(_sentence(rng) for _ in range(rng.randint(3, 8))) + "\n\n"
        parts.append(paragraph)
        length += len(paragraph)
    return "".join(parts).encode("ascii")[:size]


def random_bytes(size: int, seed: int = 0) -> bytes:
    """압축이 안 되는 무작위 바이트 (재현 가능)"""
    return random.Random(seed).randbytes(size)
