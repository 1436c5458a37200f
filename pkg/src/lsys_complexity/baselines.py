"""Topological entropy and linguistic complexity of a symbol sequence.

Both rest on A_l(s), the number of distinct length-l substrings.  All A_l
are read off a suffix automaton in O(|s|): a state whose longest string
has length ``len`` and whose suffix link has length ``link_len`` accounts
for exactly one distinct substring of every length in (link_len, len].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError


@dataclass(frozen=True)
class SubstringIndex:
    source: Sequence
    counts: tuple[int, ...]  # counts[l - 1] == A_l

    def __getitem__(self, length: int) -> int:
        if not 1 <= length <= len(self.counts):
            raise DomainError(f"substring length {length} outside 1..{len(self.counts)}")
        return self.counts[length - 1]

    @property
    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class LcBreakdown:
    A: int
    M: int
    lc: float


def _suffix_automaton_lengths(s: Sequence) -> tuple[list[int], list[int]]:
    """Return (len, link) arrays of the suffix automaton of ``s``."""
    length = [0]
    link = [-1]
    trans: list[dict] = [{}]
    last = 0
    for ch in s:
        cur = len(length)
        length.append(length[last] + 1)
        link.append(0)
        trans.append({})
        p = last
        while p != -1 and ch not in trans[p]:
            trans[p][ch] = cur
            p = link[p]
        if p != -1:
            q = trans[p][ch]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                clone = len(length)
                length.append(length[p] + 1)
                link.append(link[q])
                trans.append(dict(trans[q]))
                while p != -1 and trans[p].get(ch) == q:
                    trans[p][ch] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        last = cur
    return length, link


def distinct_counts(s: Sequence) -> SubstringIndex:
    n = len(s)
    if n == 0:
        raise DomainError("distinct substring counts need a non-empty sequence")
    length, link = _suffix_automaton_lengths(s)
    diff = [0] * (n + 2)
    for state in range(1, len(length)):
        diff[length[link[state]] + 1] += 1
        diff[length[state] + 1] -= 1
    counts = []
    running = 0
    for l in range(1, n + 1):
        running += diff[l]
        counts.append(running)
    return SubstringIndex(s, tuple(counts))


def _max_count(n: int, k: int, l: int) -> int:
    # min(k**l, n - l + 1) without building huge powers
    cap = n - l + 1
    if l * math.log2(k) >= cap.bit_length():
        return cap
    return min(k**l, cap)


def max_vocabulary(n: int, k: int) -> int:
    """M(s): sum over l of min(k**l, n - l + 1); depends only on |s| and k."""
    return sum(_max_count(n, k, l) for l in range(1, n + 1))


def linguistic_complexity(s: Sequence, k: int = 2) -> LcBreakdown:
    if k < 2:
        raise DomainError("alphabet size must be >= 2")
    a = distinct_counts(s).total
    m = max_vocabulary(len(s), k)
    return LcBreakdown(a, m, a / m)


def entropy_fixed_length(s: Sequence, l: int, k: int = 2) -> float:
    if not 1 <= l <= len(s):
        raise DomainError(f"length {l} outside 1..{len(s)}")
    if k < 2:
        raise DomainError("alphabet size must be >= 2")
    count = len({tuple(s[i:i + l]) for i in range(len(s) - l + 1)})
    return math.log(count, k) / l


def te_length(n: int, k: int) -> int:
    """Largest l with k**l + l - 1 <= n.

    The defining inequality admits two values of l when n == k**(l+1) + l;
    the larger one is returned.
    """
    if n < k:
        raise DomainError(f"sequence of length {n} is too short for alphabet size {k}")
    l = 1
    while k ** (l + 1) + l <= n:
        l += 1
    return l


def topological_entropy(s: Sequence, k: int = 2) -> float:
    if k < 2:
        raise DomainError("alphabet size must be >= 2")
    l = te_length(len(s), k)
    prefix = s[: k**l + l - 1]
    count = len({tuple(prefix[i:i + l]) for i in range(len(prefix) - l + 1)})
    return math.log(count, k) / l
