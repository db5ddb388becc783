"""Shared corpus builders and independent oracles for the test suite.

The oracles here deliberately avoid the package's automaton machinery: word
membership questions go through the positional dynamic program only, and
factorization counting is done by direct enumeration, so that agreement tests
actually compare two routes.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from codesync import Alphabet, FiniteLanguage, LengthProfile, Word, kraft_canonical
from codesync.languages import kleene_membership

BINARY = Alphabet.binary()


def lang(strings, alphabet=None) -> FiniteLanguage:
    return FiniteLanguage.from_strings(list(strings), alphabet)


def w(text: str, alphabet: Alphabet = BINARY) -> Word:
    return Word.parse(text, alphabet)


EXAMPLE_SET = ("aa", "ab", "ba", "baa", "bbb")  # the running incomplete example
EXAMPLE_PREFIX = ("a", "baaa", "baab", "bab", "bb")  # the complete prefix example


@lru_cache(maxsize=1)
def exhaustive_corpus() -> tuple[FiniteLanguage, ...]:
    """All 469 binary languages with at most 3 words of length at most 3."""
    pool = [
        Word(BINARY, t)
        for k in (1, 2, 3)
        for t in itertools.product((0, 1), repeat=k)
    ]
    out = []
    for r in (1, 2, 3):
        for combo in itertools.combinations(range(len(pool)), r):
            out.append(FiniteLanguage(BINARY, tuple(pool[i] for i in combo)))
    return tuple(out)


def factorization_count(language: FiniteLanguage, word: Word) -> int:
    """Number of distinct factorizations of the word into language words."""
    n = len(word)
    counts = [0] * (n + 1)
    counts[0] = 1
    pieces = [x.indices for x in language.words if len(x) > 0]
    for i in range(n):
        if counts[i] == 0:
            continue
        for p in pieces:
            j = i + len(p)
            if j <= n and word.indices[i:j] == p:
                counts[j] += counts[i]
    return counts[n]


def shortest_ambiguous_word(language: FiniteLanguage, max_len: int):
    """Shortest word with at least two factorizations, by layered counting."""
    by_len = {0: {(): 1}}
    for t in range(1, max_len + 1):
        cur: dict[tuple[int, ...], int] = {}
        for x in language.words:
            lx = len(x)
            if lx == 0 or lx > t:
                continue
            prev = by_len.get(t - lx)
            if not prev:
                continue
            for word, c in prev.items():
                cw = word + x.indices
                cur[cw] = cur.get(cw, 0) + c
        for word, c in cur.items():
            if c > 1:
                return Word(language.alphabet, word)
        if cur:
            by_len[t] = cur
    return None


def brute_is_code(language: FiniteLanguage, max_len: int) -> bool:
    return shortest_ambiguous_word(language, max_len) is None


def has_completion_brute(language: FiniteLanguage, word: Word) -> bool:
    """Definitional completability: some context pair (r, s) with
    |r|, |s| ≤ ℓ(X) − 1 puts r·w·s into X* (membership by the DP oracle)."""
    bound = max(language.size - 1, 0)
    d = len(language.alphabet)
    contexts = [()]
    level = [()]
    for _ in range(bound):
        level = [c + (a,) for c in level for a in range(d)]
        contexts.extend(level)
    for r in contexts:
        for s in contexts:
            rws = Word(language.alphabet, r + word.indices + s)
            if kleene_membership(language, rws):
                return True
    return False


def random_language_sample(seed: int, count: int, n: int, d: int = 2):
    """Seeded random languages, ε-free, mirroring the harness distribution."""
    from codesync.experiments import random_language

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        x = random_language(rng, n, d)
        if not x.contains_epsilon:
            out.append(x)
    return out


def random_dary_profile(rng: random.Random, d: int, max_depth: int) -> tuple[int, ...]:
    leaves = [1] * d
    for _ in range(rng.randint(0, 4)):
        expandable = [i for i, k in enumerate(leaves) if k < max_depth]
        if not expandable:
            break
        i = rng.choice(expandable)
        k = leaves.pop(i)
        leaves.extend([k + 1] * d)
    return tuple(sorted(leaves))


def random_complete_code(rng: random.Random, d: int, max_depth: int) -> FiniteLanguage:
    """A random complete code over d letters: a Kraft tree, letters shuffled,
    reversed into a suffix code half the time."""
    profile = random_dary_profile(rng, d, max_depth)
    x = kraft_canonical(LengthProfile(d, profile))
    perm = list(range(d))
    rng.shuffle(perm)
    words = tuple(Word(x.alphabet, tuple(perm[i] for i in u.indices)) for u in x.words)
    x = FiniteLanguage(x.alphabet, words)
    if rng.random() < 0.5:
        x = FiniteLanguage(x.alphabet, tuple(u.reversed() for u in x.words))
    return x


def binary_image_profile(rng: random.Random, n_words: int, max_depth: int = 4) -> tuple[int, ...]:
    """Leaf depths of a random full binary tree with exactly n_words leaves."""
    while True:
        leaves = [1, 1]
        while len(leaves) < n_words:
            expandable = [i for i, k in enumerate(leaves) if k < max_depth]
            if not expandable:
                break
            i = rng.choice(expandable)
            k = leaves.pop(i)
            leaves.extend((k + 1, k + 1))
        if len(leaves) == n_words:
            return tuple(sorted(leaves))
