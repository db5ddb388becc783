"""Desk-scale experiments estimating the worst-case witness lengths R and C.

R(class, n, d) is the largest minimal incompletable-word length over the
incomplete class members of size ≤ n on d letters; C(class, n, d) the largest
minimal synchronizing-pair total length over the synchronizing members.
Exhaustive mode enumerates every class instance (canonicalized under letter
permutations, since both parameters are permutation-invariant); random mode
samples from a fixed seeded distribution and yields lower bounds only.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from dataclasses import dataclass
from typing import Iterator, Optional

from .completeness import is_complete_language, shortest_incompletable
from .errors import (
    CodesyncError,
    SearchBudgetExceeded,
    DEFAULT_INSTANCE_CAP,
    DEFAULT_SUBSET_CAP,
)
from .languages import Alphabet, FiniteLanguage, Word, is_code, is_prefix
from .reduction import ReductionTrace, synchronizing_pair_via_reduction
from .synchrony import is_synchronizing_code, shortest_sync_pair

CLASS_TAGS = ("all", "codes", "prefix", "complete-codes", "complete-prefix")

CSV_HEADER = (
    "kind,class,n,d,mode,value,witness_language,witness,"
    "instances,inconclusive,samples,seed,elapsed_seconds"
)


@dataclass(frozen=True)
class ExperimentReport:
    kind: str
    class_tag: str
    n: int
    d: int
    mode: str
    value: Optional[int]
    witness_language: Optional[tuple[str, ...]]
    witness: Optional[tuple[str, ...]]
    instance_count: int
    inconclusive_count: int
    samples: Optional[int]
    seed: Optional[int]
    elapsed_seconds: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "class": self.class_tag,
            "n": self.n,
            "d": self.d,
            "mode": self.mode,
            "value": self.value,
            "witness_language": None
            if self.witness_language is None
            else list(self.witness_language),
            "witness": None if self.witness is None else list(self.witness),
            "instances": self.instance_count,
            "inconclusive": self.inconclusive_count,
            "samples": self.samples,
            "seed": self.seed,
            "elapsed_seconds": self.elapsed_seconds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv_row(self) -> str:
        d = self.to_dict()
        cells = [
            d["kind"], d["class"], d["n"], d["d"], d["mode"], d["value"],
            " ".join(d["witness_language"] or []),
            " ".join(d["witness"] or []),
            d["instances"], d["inconclusive"], d["samples"], d["seed"],
            f"{d['elapsed_seconds']:.3f}",
        ]
        return ",".join("" if c is None else str(c) for c in cells)


def _word_pool(alphabet: Alphabet, n: int) -> list[Word]:
    pool = []
    for k in range(1, n + 1):
        for tup in itertools.product(range(len(alphabet)), repeat=k):
            pool.append(Word(alphabet, tup))
    return pool


def _canonical_under_permutation(words: tuple[tuple[int, ...], ...], d: int) -> bool:
    """Keep only the lexicographically least representative of each orbit."""
    me = tuple(sorted(words))
    for perm in itertools.permutations(range(d)):
        if perm == tuple(range(d)):
            continue
        image = tuple(sorted(tuple(perm[i] for i in w) for w in words))
        if image < me:
            return False
    return True


def _in_class(language: FiniteLanguage, class_tag: str, cap: int) -> bool:
    if class_tag == "all":
        return True
    if class_tag == "codes":
        return is_code(language)
    if class_tag == "prefix":
        return is_prefix(language)
    if class_tag == "complete-codes":
        return is_code(language) and is_complete_language(language, cap)
    if class_tag == "complete-prefix":
        return is_prefix(language) and is_complete_language(language, cap)
    raise CodesyncError(f"unknown class tag {class_tag!r}")


def enumerate_class_languages(
    class_tag: str,
    n: int,
    d: int,
    canonicalize: bool = True,
    instance_cap: int = DEFAULT_INSTANCE_CAP,
    cap: int = DEFAULT_SUBSET_CAP,
) -> Iterator[FiniteLanguage]:
    """All nonempty languages of size ≤ n on d letters in the class.

    Enumerates subsets of the word pool A^{≤n} (ε excluded); the candidate
    count 2^|pool| must stay under the instance cap, otherwise random mode is
    the way out.
    """
    alphabet = Alphabet.lowercase(d)
    pool = _word_pool(alphabet, n)
    if 2 ** len(pool) > instance_cap:
        raise SearchBudgetExceeded(
            f"exhaustive enumeration needs 2^{len(pool)} candidates; "
            f"cap is {instance_cap} — use random mode"
        )
    for bits in range(1, 2 ** len(pool)):
        chosen = tuple(pool[i] for i in range(len(pool)) if (bits >> i) & 1)
        if canonicalize and not _canonical_under_permutation(
            tuple(w.indices for w in chosen), d
        ):
            continue
        language = FiniteLanguage(alphabet, chosen)
        if _in_class(language, class_tag, cap):
            yield language


def random_language(rng: random.Random, n: int, d: int) -> FiniteLanguage:
    """Word count uniform in [2, 2n], each word uniform in A^{≤n}."""
    alphabet = Alphabet.lowercase(d)
    pool_size = sum(d ** k for k in range(1, n + 1))

    def pick() -> Word:
        idx = rng.randrange(pool_size)
        k = 1
        while idx >= d ** k:
            idx -= d ** k
            k += 1
        digits = []
        for _ in range(k):
            digits.append(idx % d)
            idx //= d
        return Word(alphabet, tuple(reversed(digits)))

    count = rng.randint(2, 2 * n)
    return FiniteLanguage(alphabet, tuple(pick() for _ in range(count)))


def _random_complete_instance(
    rng: random.Random, n: int, d: int, allow_reverse: bool
) -> FiniteLanguage:
    """A random complete code of size ≤ n: a Kraft tree with shuffled letters,
    reversed into a suffix code half the time when allowed."""
    from .encoding import kraft_canonical, LengthProfile

    leaves = [1] * d
    for _ in range(rng.randint(0, 2 ** max(n - 1, 1))):
        expandable = [i for i, k in enumerate(leaves) if k < n]
        if not expandable:
            break
        i = rng.choice(expandable)
        k = leaves.pop(i)
        leaves.extend([k + 1] * d)
    x = kraft_canonical(LengthProfile(d, tuple(sorted(leaves))))
    perm = list(range(d))
    rng.shuffle(perm)
    words = tuple(Word(x.alphabet, tuple(perm[i] for i in w.indices)) for w in x.words)
    x = FiniteLanguage(x.alphabet, words)
    if allow_reverse and rng.random() < 0.5:
        x = FiniteLanguage(x.alphabet, tuple(w.reversed() for w in x.words))
    return x


def sample_class_languages(
    class_tag: str,
    n: int,
    d: int,
    samples: int,
    seed: int,
    cap: int = DEFAULT_SUBSET_CAP,
    max_draws_per_sample: int = 5000,
) -> Iterator[FiniteLanguage]:
    """Seeded in-class random instances.

    Uniform random languages are essentially never complete, so the complete
    classes sample Kraft trees instead of rejection-filtering the uniform
    distribution.
    """
    rng = random.Random(seed)
    complete_class = class_tag in ("complete-codes", "complete-prefix")
    for _ in range(samples):
        for _ in range(max_draws_per_sample):
            if complete_class:
                language = _random_complete_instance(
                    rng, n, d, allow_reverse=class_tag == "complete-codes"
                )
            else:
                language = random_language(rng, n, d)
            if _in_class(language, class_tag, cap):
                yield language
                break
        else:
            raise SearchBudgetExceeded(
                f"rejection sampling found no {class_tag} instance in "
                f"{max_draws_per_sample} draws"
            )


def estimate_R(
    class_tag: str,
    n: int,
    d: int,
    mode: str = "exhaustive",
    samples: int = 500,
    seed: int = 0,
    instance_cap: int = DEFAULT_INSTANCE_CAP,
    cap: int = DEFAULT_SUBSET_CAP,
) -> ExperimentReport:
    """Max over enumerated incomplete class instances of the minimal
    incompletable-word length; exact in exhaustive mode, a lower bound of the
    true parameter in random mode."""
    start = time.monotonic()
    if mode == "exhaustive":
        instances = enumerate_class_languages(class_tag, n, d, True, instance_cap, cap)
    elif mode == "random":
        instances = sample_class_languages(class_tag, n, d, samples, seed, cap)
    else:
        raise CodesyncError(f"unknown mode {mode!r}")
    value = None
    witness_language = None
    witness = None
    count = 0
    for language in instances:
        if language.contains_epsilon:
            continue
        w = shortest_incompletable(language, cap)
        if w is None:
            continue
        count += 1
        if value is None or len(w) > value:
            value = len(w)
            witness_language = tuple(language.word_strings())
            witness = (w.text,)
    return ExperimentReport(
        kind="R",
        class_tag=class_tag,
        n=n,
        d=d,
        mode=mode,
        value=value,
        witness_language=witness_language,
        witness=witness,
        instance_count=count,
        inconclusive_count=0,
        samples=samples if mode == "random" else None,
        seed=seed if mode == "random" else None,
        elapsed_seconds=time.monotonic() - start,
    )


def estimate_C(
    class_tag: str,
    n: int,
    d: int,
    mode: str = "exhaustive",
    budget: int = 12,
    samples: int = 500,
    seed: int = 0,
    instance_cap: int = DEFAULT_INSTANCE_CAP,
    cap: int = DEFAULT_SUBSET_CAP,
) -> ExperimentReport:
    """Max over synchronizing class instances of the minimal pair length.

    Instances whose pair search exhausts the budget are counted separately
    and never folded into the max; for code classes, provably
    non-synchronizing instances are excluded exactly.
    """
    start = time.monotonic()
    if mode == "exhaustive":
        instances = enumerate_class_languages(class_tag, n, d, True, instance_cap, cap)
    elif mode == "random":
        instances = sample_class_languages(class_tag, n, d, samples, seed, cap)
    else:
        raise CodesyncError(f"unknown mode {mode!r}")
    value = None
    witness_language = None
    witness = None
    count = 0
    inconclusive = 0
    codes_class = class_tag in ("codes", "prefix", "complete-codes", "complete-prefix")
    for language in instances:
        if language.contains_epsilon:
            continue
        if codes_class and not is_synchronizing_code(language, cap):
            continue
        pair = shortest_sync_pair(language, budget, cap)
        if pair is None:
            inconclusive += 1
            continue
        count += 1
        if value is None or pair.total_length > value:
            value = pair.total_length
            witness_language = tuple(language.word_strings())
            witness = (pair.u.text, pair.v.text)
    return ExperimentReport(
        kind="C",
        class_tag=class_tag,
        n=n,
        d=d,
        mode=mode,
        value=value,
        witness_language=witness_language,
        witness=witness,
        instance_count=count,
        inconclusive_count=inconclusive,
        samples=samples if mode == "random" else None,
        seed=seed if mode == "random" else None,
        elapsed_seconds=time.monotonic() - start,
    )


def random_tree_profile(rng: random.Random, max_depth: int) -> tuple[int, ...]:
    """Leaf-depth multiset of a random full binary tree with coprime depths."""
    while True:
        leaves = [1, 1]
        budget = rng.randint(0, 2 ** (max_depth - 1))
        for _ in range(budget):
            expandable = [i for i, k in enumerate(leaves) if k < max_depth]
            if not expandable:
                break
            i = rng.choice(expandable)
            k = leaves.pop(i)
            leaves.extend((k + 1, k + 1))
        if math.gcd(*leaves) == 1:
            return tuple(sorted(leaves))


def random_complete_sync_codes(
    count: int,
    seed: int = 0,
    max_size: int = 5,
    reverse_half: bool = True,
    cap: int = DEFAULT_SUBSET_CAP,
) -> list[FiniteLanguage]:
    """Seeded complete synchronizing binary codes of size ≤ max_size.

    Instances are random Kraft trees with coprime leaf depths, randomly
    recolored; half of them are reversed into suffix codes so that the sample
    is not purely prefix.  Every instance is re-verified (code, complete,
    synchronizing) before being returned.
    """
    from .encoding import kraft_canonical, LengthProfile
    from .automata import flower_automaton, first_return_language
    from .encoding import _colored_automaton, _out_multisets
    from .synchrony import is_synchronizing_dfa

    rng = random.Random(seed)
    out: list[FiniteLanguage] = []
    while len(out) < count:
        profile = LengthProfile(2, random_tree_profile(rng, max_size))
        base = flower_automaton(kraft_canonical(profile))
        multisets = _out_multisets(base)
        language = None
        for _ in range(64):
            assignment = []
            for ms in multisets:
                perm = list(ms)
                rng.shuffle(perm)
                assignment.append(tuple(perm))
            colored = _colored_automaton(base, assignment)
            if is_synchronizing_dfa(colored):
                language = first_return_language(colored)
                break
        if language is None:
            continue
        if reverse_half and len(out) % 2 == 1:
            language = FiniteLanguage(
                language.alphabet, tuple(w.reversed() for w in language.words)
            )
        if not is_code(language):
            continue
        if not is_complete_language(language, cap):
            continue
        if not is_synchronizing_code(language, cap):
            continue
        out.append(language)
    return out


@dataclass(frozen=True)
class BoundCheck:
    """Per-instance outcome of the reduction-bound ledger verification."""

    language: FiniteLanguage
    ok: bool
    detail: str
    trace: Optional[ReductionTrace]


def verify_main_bound(
    instances: list[FiniteLanguage],
    budget: int = 14,
    cap: int = DEFAULT_SUBSET_CAP,
) -> list[BoundCheck]:
    """Run the reduction pipeline on each instance and check its ledger.

    A ledger violation (or any internal failure) is recorded as a finding with
    the full trace rather than raised, so a batch always reports completely.
    The tighter prefix ledger |w₁| ≤ |v| is checked on prefix instances.
    """
    results = []
    for language in instances:
        try:
            pair, trace = synchronizing_pair_via_reduction(
                language, None, budget, cap
            )
        except CodesyncError as e:
            results.append(
                BoundCheck(language, False, f"{type(e).__name__}: {e}", None)
            )
            continue
        ok = trace.bound_ok
        detail = (
            f"|final| = {trace.final_length} ≤ {trace.bound_value} = "
            f"2·max(|v|) + 2n − 2"
        )
        if is_prefix(language) and trace.prefix_pair is not None:
            prefix_ok = (
                trace.left.skipped
                or len(trace.prefix_pair.u) <= trace.left.v_length
            )
            ok = ok and prefix_ok
            detail += (
                f"; prefix ledger |w₁| = {len(trace.prefix_pair.u)} ≤ "
                f"{trace.left.v_length} = |v|"
            )
        results.append(BoundCheck(language, ok, detail, trace))
    return results
