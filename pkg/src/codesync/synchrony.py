"""Synchronizing pairs, constants, reset words and the Černý witness family.

Two checkers certify a pair (u, v) ∈ X* × X*:

* the code path tests Qu ∩ Qv⁻¹ = {1} on the flower automaton, which is the
  exact criterion when X is a code (and a sound sufficient condition always);
* the general path quantifies over all forward-reachable subsets S = δ(1, r)
  and backward-reachable subsets T = {q : 1 ∈ δ(q, s)} and checks that every
  completion context splits:  δ(S, uv) ∩ T ≠ ∅ implies 1 ∈ δ(S, u) and
  δ(1, v) ∩ T ≠ ∅.

Both subset families are finite, computed once per language and cached, since
pair testing is the hot path of the exact search.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .automata import (
    Automaton,
    flower_automaton,
    is_deterministic,
    step_backward,
    step_forward,
)
from .errors import (
    AutomatonContractError,
    EpsilonNotAllowed,
    NotInStar,
    ParseError,
    SubsetCapExceeded,
    DEFAULT_SUBSET_CAP,
)
from .languages import Alphabet, FiniteLanguage, Word, is_code, kleene_membership


@dataclass(frozen=True)
class SyncPair:
    """A synchronizing pair (u, v) with both components certified in X*."""

    u: Word
    v: Word
    checked_by: str = "code"

    @property
    def total_length(self) -> int:
        return len(self.u) + len(self.v)


def _close_family(automaton: Automaton, start: int, back: bool, cap: int) -> list[int]:
    d = len(automaton.alphabet)
    step = automaton.step_letter_back if back else automaton.step_letter
    seen = {start}
    queue = [start]
    head = 0
    while head < len(queue):
        s = queue[head]
        head += 1
        for a in range(d):
            t = step(s, a)
            if t and t not in seen:
                seen.add(t)
                if len(seen) > cap:
                    raise SubsetCapExceeded(cap, "subset family closure")
                queue.append(t)
    return queue


@lru_cache(maxsize=256)
def _context_families(language: FiniteLanguage, cap: int) -> tuple[Automaton, tuple[int, ...], tuple[int, ...]]:
    """Flower automaton plus the families {δ(1,r)} and {T_s} used by the
    general checker and the constant test."""
    automaton = flower_automaton(language)
    init = 1 << automaton.initial
    fwd = _close_family(automaton, init, back=False, cap=cap)
    bwd = _close_family(automaton, init, back=True, cap=cap)
    return automaton, tuple(fwd), tuple(bwd)


@lru_cache(maxsize=256)
def _full_families(language: FiniteLanguage, cap: int) -> tuple[Automaton, tuple[int, ...], tuple[int, ...]]:
    """Families {δ(Q,w)} and {δ(Q,w⁻¹)} from the full state set."""
    automaton = flower_automaton(language)
    full = automaton.full_mask
    fwd = _close_family(automaton, full, back=False, cap=cap)
    bwd = _close_family(automaton, full, back=True, cap=cap)
    return automaton, tuple(fwd), tuple(bwd)


def _check_in_star(language: FiniteLanguage, w: Word, name: str) -> None:
    if not kleene_membership(language, w):
        raise NotInStar(f"{name} = {w.text!r} is not in X*")


def _code_pair_check(automaton: Automaton, u: Word, v: Word) -> bool:
    full = automaton.full_mask
    qu = step_forward(automaton, full, u)
    qv_back = step_backward(automaton, full, v)
    return qu & qv_back == 1 << automaton.initial


def _general_pair_check(
    automaton: Automaton, fwd: tuple[int, ...], bwd: tuple[int, ...], u: Word, v: Word
) -> bool:
    # For fixed v the T-quantifier collapses: some T meets a set S iff S meets
    # the union of those T, so two union masks decide every S at once.
    init = 1 << automaton.initial
    d1v = step_forward(automaton, init, v)
    union_all = 0
    union_bad = 0  # states covered by contexts T with δ(1,v) ∩ T = ∅
    for t_mask in bwd:
        union_all |= t_mask
        if not d1v & t_mask:
            union_bad |= t_mask
    for s_mask in fwd:
        su = step_forward(automaton, s_mask, u)
        suv = step_forward(automaton, su, v)
        blocked = union_bad if su & init else union_all
        if suv & blocked:
            return False
    return True


def is_sync_pair(
    language: FiniteLanguage,
    u: Word,
    v: Word,
    method: str = "auto",
    cap: int = DEFAULT_SUBSET_CAP,
) -> bool:
    """Decide whether (u, v) is a synchronizing pair of X.

    ``method`` selects the checker: ``"code"`` (flower-automaton criterion,
    exact for codes), ``"general"`` (definition-level subset check, exact for
    any finite X), or ``"auto"`` which picks the code path exactly when X is a
    code.  Raises :class:`NotInStar` when u or v is not in X*.
    """
    _check_in_star(language, u, "u")
    _check_in_star(language, v, "v")
    if method == "auto":
        method = "code" if (not language.contains_epsilon and is_code(language)) else "general"
    if method == "code":
        automaton, _, _ = _context_families(language, cap)
        return _code_pair_check(automaton, u, v)
    if method == "general":
        automaton, fwd, bwd = _context_families(language, cap)
        return _general_pair_check(automaton, fwd, bwd, u, v)
    raise ParseError(f"unknown sync-pair method {method!r}")


def is_synchronizing_code(language: FiniteLanguage, cap: int = DEFAULT_SUBSET_CAP) -> bool:
    """Exact synchronization test for codes.

    X is a synchronizing code iff some words w₁, w₂ over the alphabet satisfy
    Qw₁ ∩ Qw₂⁻¹ = {1} on its (unambiguous) flower automaton; both subset
    families are finite, so this is a complete decision procedure.
    """
    if not is_code(language):
        raise ParseError("exact synchronization test requires a code")
    automaton, fwd, bwd = _full_families(language, cap)
    init = 1 << automaton.initial
    bwd_set = set(bwd)
    for s in fwd:
        if s & init and any(s & t == init for t in bwd_set):
            return True
    return False


def is_constant(language: FiniteLanguage, c: Word, cap: int = DEFAULT_SUBSET_CAP) -> bool:
    """Context-exchange test: u₁cu₂, u₃cu₄ ∈ X* forces u₁cu₄, u₃cu₂ ∈ X*.

    Over the reachable context families, f(S, T) = [δ(S, c) ∩ T ≠ ∅] must be
    a combinatorial rectangle.  The word c need not lie in X*; membership is
    the caller's concern (the constant/pair dualities need c ∈ X*).
    """
    automaton, fwd, bwd = _context_families(language, cap)
    images = {s: step_forward(automaton, s, c) for s in fwd}
    rows = [s for s in fwd if any(images[s] & t for t in bwd)]
    cols = [t for t in bwd if any(images[s] & t for s in fwd)]
    return all(images[s] & t for s in rows for t in cols)


def sync_word_shortest(
    automaton: Automaton, cap: int = DEFAULT_SUBSET_CAP
) -> Optional[Word]:
    """Shortest reset word of a deterministic complete automaton.

    Breadth-first search in the power automaton from the full state set down
    to any singleton; ties break lexicographically.  Returns None when the
    automaton is not synchronizing.
    """
    if not is_deterministic(automaton):
        raise AutomatonContractError("reset words need a deterministic automaton")
    d = len(automaton.alphabet)
    full = automaton.full_mask
    for q in range(automaton.n_states):
        if any(automaton.table[q][a] == 0 for a in range(d)):
            raise AutomatonContractError("reset words need a complete automaton")
    if full.bit_count() == 1:
        return Word.epsilon(automaton.alphabet)
    parent: dict[int, tuple[int, int]] = {}
    seen = {full}
    queue = [full]
    head = 0
    while head < len(queue):
        s = queue[head]
        head += 1
        for a in range(d):
            t = automaton.step_letter(s, a)
            if t in seen:
                continue
            seen.add(t)
            if len(seen) > cap:
                raise SubsetCapExceeded(cap, "reset-word search")
            parent[t] = (s, a)
            if t.bit_count() == 1:
                letters = []
                cur = t
                while cur != full:
                    prev, letter = parent[cur]
                    letters.append(letter)
                    cur = prev
                letters.reverse()
                return Word(automaton.alphabet, tuple(letters))
            queue.append(t)
    return None


def is_synchronizing_dfa(automaton: Automaton) -> bool:
    """All-pairs merge check, independent of the reset-word search.

    A deterministic complete automaton is synchronizing iff every pair of
    states can be mapped to a single state by some word.
    """
    if not is_deterministic(automaton):
        raise AutomatonContractError("pair-merge check needs a deterministic automaton")
    n, d = automaton.n_states, len(automaton.alphabet)
    if any(automaton.table[q][a] == 0 for q in range(n) for a in range(d)):
        raise AutomatonContractError("pair-merge check needs a complete automaton")

    def target(q: int, a: int) -> int:
        return automaton.table[q][a].bit_length() - 1

    mergeable = {(q, q) for q in range(n)}
    changed = True
    while changed:
        changed = False
        for p, q in itertools.combinations(range(n), 2):
            if (p, q) in mergeable:
                continue
            for a in range(d):
                tp, tq = target(p, a), target(q, a)
                if (min(tp, tq), max(tp, tq)) in mergeable:
                    mergeable.add((p, q))
                    changed = True
                    break
    return all(pair in mergeable for pair in itertools.combinations(range(n), 2))


def _star_reps_forward(
    language: FiniteLanguage, automaton: Automaton, budget: int, cap: int
) -> list[tuple[int, tuple[int, ...], int]]:
    """Minimal X*-representatives of the subsets δ(Q, u), u ∈ X*, |u| ≤ budget.

    Returns (length, indices, mask) sorted by (length, indices); each distinct
    mask keeps only its (length, lex)-least witness, which is enough for the
    code-path search because the pair test depends on u only through δ(Q, u).
    """
    full = automaton.full_mask
    heap: list[tuple[int, tuple[int, ...], int]] = [(0, (), full)]
    best: dict[int, tuple[int, tuple[int, ...]]] = {}
    out = []
    while heap:
        length, word, mask = heapq.heappop(heap)
        if mask in best:
            continue
        best[mask] = (length, word)
        if len(best) > cap:
            raise SubsetCapExceeded(cap, "sync-pair forward enumeration")
        out.append((length, word, mask))
        for x in language.words:
            nl = length + len(x)
            if nl > budget:
                continue
            nm = step_forward(automaton, mask, x)
            if nm not in best:
                heapq.heappush(heap, (nl, word + x.indices, nm))
    return out


def _star_reps_backward(
    language: FiniteLanguage, automaton: Automaton, budget: int, cap: int
) -> list[tuple[int, tuple[int, ...], int]]:
    """Same as :func:`_star_reps_forward` for the subsets δ(Q, v⁻¹), growing v
    by prepending codewords."""
    full = automaton.full_mask
    heap: list[tuple[int, tuple[int, ...], int]] = [(0, (), full)]
    best: dict[int, tuple[int, tuple[int, ...]]] = {}
    out = []
    while heap:
        length, word, mask = heapq.heappop(heap)
        if mask in best:
            continue
        best[mask] = (length, word)
        if len(best) > cap:
            raise SubsetCapExceeded(cap, "sync-pair backward enumeration")
        out.append((length, word, mask))
        for x in language.words:
            nl = length + len(x)
            if nl > budget:
                continue
            nm = step_backward(automaton, mask, x)
            if nm not in best:
                heapq.heappush(heap, (nl, x.indices + word, nm))
    return out


def _star_words(language: FiniteLanguage, budget: int) -> list[tuple[int, tuple[int, ...]]]:
    """All distinct words of X* up to the length budget, sorted (length, lex)."""
    seen: set[tuple[int, ...]] = {()}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for x in language.words:
                c = w + x.indices
                if len(c) <= budget and c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted((len(w), w) for w in seen)


def shortest_sync_pair(
    language: FiniteLanguage,
    budget: int = 12,
    cap: int = DEFAULT_SUBSET_CAP,
    where=None,
) -> Optional[SyncPair]:
    """Exact search for a synchronizing pair of minimal total length.

    Candidates u, v are enumerated as codeword concatenations (the definition
    requires u, v ∈ X*) in nondecreasing |uv|, with ties broken by
    (|u|, lex u, lex v).  Returns None when no pair with |uv| ≤ budget exists;
    X may still be synchronizing via longer pairs.

    ``where(u, v)`` optionally filters acceptable pairs.  A filter disables
    the subset-representative compression of the code path, because distinct
    words with equal subset dynamics are interchangeable for the pair test
    but not for an arbitrary predicate.
    """
    if language.contains_epsilon:
        raise EpsilonNotAllowed("synchronizing pairs require ε ∉ X")
    code = is_code(language)
    if code and where is None:
        automaton, _, _ = _context_families(language, cap)
        fwd = _star_reps_forward(language, automaton, budget, cap)
        bwd = _star_reps_backward(language, automaton, budget, cap)
        init = 1 << automaton.initial
        by_len: dict[int, list[tuple[tuple[int, ...], int]]] = {}
        for length, word, mask in bwd:
            by_len.setdefault(length, []).append((word, mask))
        for total in range(budget + 1):
            for lu, wu, mu in fwd:
                if lu > total:
                    break
                for wv, mv in by_len.get(total - lu, ()):  # lex-sorted already
                    if mu & mv == init:
                        return SyncPair(
                            u=Word(language.alphabet, wu),
                            v=Word(language.alphabet, wv),
                            checked_by="code",
                        )
        return None
    automaton, fwd_fam, bwd_fam = _context_families(language, cap)
    words = _star_words(language, budget)
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for lv, wv in words:
        by_len.setdefault(lv, []).append(wv)
    checker = (
        (lambda u, v: _code_pair_check(automaton, u, v))
        if code
        else (lambda u, v: _general_pair_check(automaton, fwd_fam, bwd_fam, u, v))
    )
    for total in range(budget + 1):
        for lu, wu in words:
            if lu > total:
                break
            for wv in by_len.get(total - lu, ()):
                u = Word(language.alphabet, wu)
                v = Word(language.alphabet, wv)
                if where is not None and not where(u, v):
                    continue
                if checker(u, v):
                    return SyncPair(u=u, v=v, checked_by="code" if code else "general")
    return None


def cerny_family(n: int) -> FiniteLanguage:
    """The slowly synchronizing prefix code family X_n over {a, b}.

    X_n consists of all words a·A^{n-2} and b·A^{n-1}; it is a complete prefix
    code of size n with 2^{n-2} + 2^{n-1} words whose canonical synchronizing
    pair ((a b^{n-2})^{n-1}, ε) has total length (n-1)², while the minimal DFA
    of X_n* needs reset words of length n² - 3n + 3.
    """
    if n < 3:
        raise ParseError("the X_n family needs n ≥ 3")
    alphabet = Alphabet.binary()
    words = []
    for tail in itertools.product((0, 1), repeat=n - 2):
        words.append(Word(alphabet, (0,) + tail))
    for tail in itertools.product((0, 1), repeat=n - 1):
        words.append(Word(alphabet, (1,) + tail))
    return FiniteLanguage(alphabet, tuple(words))


def cerny_canonical_pair(n: int) -> SyncPair:
    """The pair ((a b^{n-2})^{n-1}, ε) of total length (n-1)²."""
    if n < 3:
        raise ParseError("the X_n family needs n ≥ 3")
    alphabet = Alphabet.binary()
    block = (0,) + (1,) * (n - 2)
    return SyncPair(
        u=Word(alphabet, block * (n - 1)),
        v=Word.epsilon(alphabet),
        checked_by="code",
    )
