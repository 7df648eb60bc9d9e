"""Independent oracles shared by the module tests and the acceptance suite.

Everything here is deliberately written from scratch against the contracts,
not against the library code paths it checks.
"""

from __future__ import annotations

from itertools import combinations


def oracle_ngram_counts(tokens, n):
    counts = {}
    for i in range(len(tokens) - n + 1):
        gram = tuple(tokens[i : i + n])
        counts[gram] = counts.get(gram, 0) + 1
    return counts


def oracle_rouge_n(cand, ref, n):
    """Brute-force clipped n-gram overlap; returns (precision, recall, f1)."""
    cc = oracle_ngram_counts(cand, n)
    rc = oracle_ngram_counts(ref, n)
    match = sum(min(v, rc.get(g, 0)) for g, v in cc.items())
    c_total = sum(cc.values())
    r_total = sum(rc.values())
    p = match / c_total if c_total else 0.0
    r = match / r_total if r_total else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def oracle_lcs_dp(a, b):
    """Full-table dynamic-programming LCS length."""
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[-1][-1]


def all_subsequences(tokens):
    out = set()
    for r in range(len(tokens) + 1):
        for idx in combinations(range(len(tokens)), r):
            out.add(tuple(tokens[i] for i in idx))
    return out


def oracle_lcs_enum(a, b):
    """Exponential common-subsequence enumeration; only for short sequences."""
    common = all_subsequences(list(a)) & all_subsequences(list(b))
    return max(len(s) for s in common)


def reference_split_words(text):
    """Regex-free whitespace splitter used to cross-check tokenization counts."""
    words = []
    current = []
    for ch in text:
        if ch.isspace():
            if current:
                words.append("".join(current))
                current = []
        else:
            current.append(ch)
    if current:
        words.append("".join(current))
    return words


def validate_noised_pair(pair, mask_token="[MASK]"):
    """Re-derive every noised-pair invariant from the pair's own metadata.

    Checks: masked count equals the span-length sum, the corrupted sequence
    holds exactly one mask per span, spans never overlap, stripping masks
    yields the surviving permuted tokens, and undoing the permutation leaves
    a subsequence of the original whose complement is the masked count.
    """
    n = len(pair.original)
    assert pair.masked_token_count == sum(pair.span_lengths)
    assert sum(1 for t in pair.corrupted if t == mask_token) == len(pair.span_lengths)
    assert len(pair.corrupted) == n - pair.masked_token_count + len(pair.span_lengths)

    counts = pair.sentence_token_counts
    assert sum(counts) == n
    prefix = [0]
    for c in counts:
        prefix.append(prefix[-1] + c)
    perm_to_orig = []
    for s in pair.sentence_order:
        perm_to_orig.extend(range(prefix[s], prefix[s] + counts[s]))
    assert sorted(perm_to_orig) == list(range(n))
    permuted = [pair.original[i] for i in perm_to_orig]

    covered = set()
    for start, length in zip(pair.span_starts, pair.span_lengths):
        for p in range(start, start + length):
            assert p not in covered, "overlapping spans"
            covered.add(p)
    assert len(covered) == pair.masked_token_count

    survivors = [permuted[p] for p in range(n) if p not in covered]
    assert [t for t in pair.corrupted if t != mask_token] == survivors

    # Undo the permutation: the survivors' original positions are distinct, so
    # they form a subsequence of the original whose complement is the budget.
    surviving_original = sorted(perm_to_orig[p] for p in range(n) if p not in covered)
    assert len(set(surviving_original)) == len(surviving_original)
    assert n - len(surviving_original) == pair.masked_token_count
