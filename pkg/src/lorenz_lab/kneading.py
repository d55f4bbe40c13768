"""Kneading sequences, the lexicographic admissibility test and factorization
of kneading invariants into renormalization blocks.

Words are eventually periodic, ``prefix + period**inf``, kept in a canonical
form so that equality is structural and lexicographic comparison stops after
finitely many symbols. Words read off a non-recurrent orbit are truncated and
every verdict on them is three-valued.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

from .lorenzmap import LorenzMap, orbit
from .sided import MINUS, PLUS, SidedPoint, sided_cmp

__all__ = [
    "KneadingWord",
    "kneading_bit",
    "itinerary",
    "kneading_word",
    "kneading_invariant",
    "compare_words",
    "admissibility_check",
    "Admissibility",
    "renorm_factorization",
    "Factorization",
]


def _primitive_root(w: str) -> str:
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w


@dataclass(frozen=True)
class KneadingWord:
    """``prefix`` followed by ``period`` repeated forever, or a truncated word when period is None."""

    prefix: str
    period: Optional[str] = None

    def __post_init__(self):
        if self.period is not None:
            if not self.period:
                raise ValueError("period must be nonempty")
            p, q = self.prefix, _primitive_root(self.period)
            while p and p[-1] == q[-1]:
                p, q = p[:-1], q[-1] + q[:-1]
            object.__setattr__(self, "prefix", p)
            object.__setattr__(self, "period", q)

    @property
    def truncated(self) -> bool:
        return self.period is None

    @property
    def known_length(self) -> Optional[int]:
        """Number of known symbols; None for a fully known word."""
        return None if self.period is not None else len(self.prefix)

    def __getitem__(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        if self.period is None:
            raise IndexError(f"symbol {i} beyond the truncation at {len(self.prefix)}")
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> str:
        if self.period is None:
            return self.prefix[:n]
        return "".join(self[i] for i in range(n))

    def shift(self, n: int = 1) -> "KneadingWord":
        """sigma**n."""
        if n <= len(self.prefix) or self.period is None:
            return KneadingWord(self.prefix[n:], self.period)
        k = (n - len(self.prefix)) % len(self.period)
        return KneadingWord("", self.period[k:] + self.period[:k])

    def __str__(self):
        if self.period is None:
            return self.prefix + "..."
        return f"{self.prefix}({self.period})*"

    @classmethod
    def parse(cls, text: str) -> "KneadingWord":
        text = text.strip().replace("^∞", "*").replace("^inf", "*")
        m = re.fullmatch(r"([01]*)\(([01]+)\)\*", text)
        if m:
            return cls(m.group(1), m.group(2))
        m = re.fullmatch(r"([01]*)(\.\.\.|…)", text)
        if m:
            return cls(m.group(1), None)
        raise ValueError(f"cannot parse kneading word {text!r}")


def compare_words(a: KneadingWord, b: KneadingWord) -> Optional[int]:
    """Lexicographic comparison: -1, 0, +1, or None when truncation hides the answer."""
    if a.period is not None and b.period is not None:
        if a == b:
            return 0
        n = len(a.prefix) + len(b.prefix) + math.lcm(len(a.period), len(b.period))
    else:
        n = min(x for x in (a.known_length, b.known_length) if x is not None)
    for i in range(n):
        x, y = a[i], b[i]
        if x != y:
            return -1 if x < y else 1
    if a.period is not None and b.period is not None:
        return 0
    return None


def kneading_bit(f: LorenzMap, p: SidedPoint) -> str:
    return "1" if sided_cmp(p, SidedPoint(f.c, PLUS)) >= 0 else "0"


def itinerary(f: LorenzMap, p: SidedPoint, n: int) -> str:
    """First n symbols of k(p)."""
    res = orbit(f, p, n)
    if res.recurrent:
        return "".join(kneading_bit(f, res.at(i)) for i in range(n))
    return "".join(kneading_bit(f, q) for q in res.points[:n])


def kneading_word(f: LorenzMap, p: SidedPoint, horizon: int) -> KneadingWord:
    res = orbit(f, p, horizon)
    bits = "".join(kneading_bit(f, q) for q in res.points)
    if res.recurrent:
        return KneadingWord(bits[: res.preperiod], bits[res.preperiod :])
    return KneadingWord(bits, None)


def kneading_invariant(f: LorenzMap, horizon: int = 200) -> tuple:
    """(k_+, k_-): kneading words of c_+ and c_-."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    kp = kneading_word(f, SidedPoint(f.c, PLUS), horizon)
    km = kneading_word(f, SidedPoint(f.c, MINUS), horizon)
    return kp, km


@dataclass
class Admissibility:
    verdict: str  # "admissible", "inadmissible" or "undecidable-truncated"
    witness: Optional[int] = None
    checked_up_to: int = 0

    def __bool__(self):
        return self.verdict == "admissible"


def _shift_range(w: KneadingWord) -> int:
    if w.period is None:
        return len(w.prefix)
    # sigma^n for n > len(prefix) + len(period) repeats an earlier shift
    return max(1, len(w.prefix) + len(w.period))


def admissibility_check(k_plus: KneadingWord, k_minus: KneadingWord) -> Admissibility:
    """Check  s(k+) <= s^n(k+) < s(k-)  and  s(k+) < s^n(k-) <= s(k-)  for every n >= 1."""
    sp, sm = k_plus.shift(1), k_minus.shift(1)
    undecided = False
    n_max = max(_shift_range(k_plus), _shift_range(k_minus))
    for n in range(1, n_max + 1):
        tests = []
        if n <= _shift_range(k_plus):
            w = k_plus.shift(n)
            tests += [(compare_words(sp, w), (-1, 0)), (compare_words(w, sm), (-1,))]
        if n <= _shift_range(k_minus):
            w = k_minus.shift(n)
            tests += [(compare_words(sp, w), (-1,)), (compare_words(w, sm), (-1, 0))]
        for result, allowed in tests:
            if result is None:
                undecided = True
            elif result not in allowed:
                return Admissibility("inadmissible", n, n)
    if undecided or k_plus.truncated or k_minus.truncated:
        return Admissibility("undecidable-truncated", None, n_max)
    return Admissibility("admissible", None, n_max)


@dataclass(frozen=True)
class Factorization:
    l: int
    r: int
    w_minus: str
    w_plus: str


def _in_block_language(word: KneadingWord, start: int, first: str, blocks: tuple) -> bool:
    """Is word[start:] = first + (concatenation of blocks)**inf ?"""
    pl, q = len(word.prefix), len(word.period)

    def state(i: int) -> int:
        return i if i < pl else pl + (i - pl) % q

    def matches(i: int, block: str) -> bool:
        return all(word[i + j] == block[j] for j in range(len(block)))

    n_states = pl + q
    edges = {}
    for s in range(n_states):
        edges[s] = [state(s + len(b)) for b in blocks if matches(s, b)]
    alive = set(range(n_states))
    changed = True
    while changed:
        changed = False
        for s in list(alive):
            if not any(t in alive for t in edges[s]):
                alive.discard(s)
                changed = True
    return matches(start, first) and state(start + len(first)) in alive


def renorm_factorization(k_plus: KneadingWord, k_minus: KneadingWord, l_max: int, r_max: int) -> list:
    """All (l, r) with k+ in w+ w- {w-, w+}^inf and k- in w- w+ {w-, w+}^inf, l, r > 1.

    Truncated words give an empty list.
    """
    if k_plus.truncated or k_minus.truncated:
        return []
    out = []
    for l in range(2, l_max + 1):
        w_minus = k_minus.take(l)
        for r in range(2, r_max + 1):
            w_plus = k_plus.take(r)
            blocks = (w_minus, w_plus)
            if _in_block_language(k_plus, r, w_minus, blocks) and _in_block_language(
                k_minus, l, w_plus, blocks
            ):
                out.append(Factorization(l, r, w_minus, w_plus))
    return out
