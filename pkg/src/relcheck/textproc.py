"""Deterministic text pipeline: tokenization, stemming, vocabulary, bags of words.

Shared by the TF-IDF index and the topic model so both operate over one
document-frequency-filtered vocabulary.
"""

from __future__ import annotations

import hashlib
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

_TOKEN_RE = re.compile(r"[a-z0-9]+")

_VOWELS = frozenset("aeiou")


class PorterStemmer:
    """English suffix-stripping stemmer (the classic 1980 rule set).

    Tokens of length <= 2 or containing a digit pass through unchanged;
    the rules are defined over alphabetic words only.
    """

    def stem(self, word: str) -> str:
        if len(word) <= 2 or not word.isalpha():
            return word
        word = self._step1a(word)
        word = self._step1b(word)
        word = self._step1c(word)
        word = self._step2(word)
        word = self._step3(word)
        word = self._step4(word)
        word = self._step5a(word)
        word = self._step5b(word)
        return word

    # -- letter classification ------------------------------------------

    @staticmethod
    def _is_consonant(word: str, i: int) -> bool:
        ch = word[i]
        if ch in _VOWELS:
            return False
        if ch == "y":
            return i == 0 or not PorterStemmer._is_consonant(word, i - 1)
        return True

    @classmethod
    def _measure(cls, stem: str) -> int:
        """Number of vowel-consonant sequences: [C](VC)^m[V]."""
        n = len(stem)
        i = 0
        while i < n and cls._is_consonant(stem, i):
            i += 1
        m = 0
        while True:
            while i < n and not cls._is_consonant(stem, i):
                i += 1
            if i >= n:
                return m
            while i < n and cls._is_consonant(stem, i):
                i += 1
            m += 1

    @classmethod
    def _has_vowel(cls, stem: str) -> bool:
        return any(not cls._is_consonant(stem, i) for i in range(len(stem)))

    @classmethod
    def _ends_double_consonant(cls, word: str) -> bool:
        return (
            len(word) >= 2
            and word[-1] == word[-2]
            and cls._is_consonant(word, len(word) - 1)
        )

    @classmethod
    def _ends_cvc(cls, word: str) -> bool:
        return (
            len(word) >= 3
            and cls._is_consonant(word, len(word) - 3)
            and not cls._is_consonant(word, len(word) - 2)
            and cls._is_consonant(word, len(word) - 1)
            and word[-1] not in "wxy"
        )

    # -- rule application -----------------------------------------------
    #
    # Within one rule block only the longest matching suffix is considered;
    # if its condition fails, the whole block is a no-op ("feed" must not
    # fall through from EED to ED).

    def _apply(self, word: str, rules) -> str:
        best = None
        for suffix, replacement, condition in rules:
            if word.endswith(suffix) and (best is None or len(suffix) > len(best[0])):
                best = (suffix, replacement, condition)
        if best is None:
            return word
        suffix, replacement, condition = best
        stem = word[: len(word) - len(suffix)]
        if condition is None or condition(stem):
            return stem + replacement
        return word

    def _step1a(self, word: str) -> str:
        return self._apply(
            word,
            [
                ("sses", "ss", None),
                ("ies", "i", None),
                ("ss", "ss", None),
                ("s", "", None),
            ],
        )

    def _step1b(self, word: str) -> str:
        if word.endswith("eed"):
            stem = word[:-3]
            return stem + "ee" if self._measure(stem) > 0 else word
        for suffix in ("ed", "ing"):
            if word.endswith(suffix):
                stem = word[: len(word) - len(suffix)]
                if not self._has_vowel(stem):
                    return word
                return self._step1b_cleanup(stem)
        return word

    def _step1b_cleanup(self, stem: str) -> str:
        if stem.endswith(("at", "bl", "iz")):
            return stem + "e"
        if self._ends_double_consonant(stem) and stem[-1] not in "lsz":
            return stem[:-1]
        if self._measure(stem) == 1 and self._ends_cvc(stem):
            return stem + "e"
        return stem

    def _step1c(self, word: str) -> str:
        if word.endswith("y") and self._has_vowel(word[:-1]):
            return word[:-1] + "i"
        return word

    def _step2(self, word: str) -> str:
        m_pos = lambda stem: self._measure(stem) > 0
        return self._apply(
            word,
            [
                ("ational", "ate", m_pos),
                ("tional", "tion", m_pos),
                ("enci", "ence", m_pos),
                ("anci", "ance", m_pos),
                ("izer", "ize", m_pos),
                ("abli", "able", m_pos),
                ("alli", "al", m_pos),
                ("entli", "ent", m_pos),
                ("eli", "e", m_pos),
                ("ousli", "ous", m_pos),
                ("ization", "ize", m_pos),
                ("ation", "ate", m_pos),
                ("ator", "ate", m_pos),
                ("alism", "al", m_pos),
                ("iveness", "ive", m_pos),
                ("fulness", "ful", m_pos),
                ("ousness", "ous", m_pos),
                ("aliti", "al", m_pos),
                ("iviti", "ive", m_pos),
                ("biliti", "ble", m_pos),
            ],
        )

    def _step3(self, word: str) -> str:
        m_pos = lambda stem: self._measure(stem) > 0
        return self._apply(
            word,
            [
                ("icate", "ic", m_pos),
                ("ative", "", m_pos),
                ("alize", "al", m_pos),
                ("iciti", "ic", m_pos),
                ("ical", "ic", m_pos),
                ("ful", "", m_pos),
                ("ness", "", m_pos),
            ],
        )

    def _step4(self, word: str) -> str:
        m_gt1 = lambda stem: self._measure(stem) > 1
        ion_cond = lambda stem: self._measure(stem) > 1 and stem.endswith(("s", "t"))
        return self._apply(
            word,
            [
                ("al", "", m_gt1),
                ("ance", "", m_gt1),
                ("ence", "", m_gt1),
                ("er", "", m_gt1),
                ("ic", "", m_gt1),
                ("able", "", m_gt1),
                ("ible", "", m_gt1),
                ("ant", "", m_gt1),
                ("ement", "", m_gt1),
                ("ment", "", m_gt1),
                ("ent", "", m_gt1),
                ("ion", "", ion_cond),
                ("ou", "", m_gt1),
                ("ism", "", m_gt1),
                ("ate", "", m_gt1),
                ("iti", "", m_gt1),
                ("ous", "", m_gt1),
                ("ive", "", m_gt1),
                ("ize", "", m_gt1),
            ],
        )

    def _step5a(self, word: str) -> str:
        if word.endswith("e"):
            stem = word[:-1]
            m = self._measure(stem)
            if m > 1 or (m == 1 and not self._ends_cvc(stem)):
                return stem
        return word

    def _step5b(self, word: str) -> str:
        if (
            word.endswith("l")
            and self._ends_double_consonant(word)
            and self._measure(word[:-1]) > 1
        ):
            return word[:-1]
        return word


_STEMMER = PorterStemmer()


def stem(word: str) -> str:
    return _STEMMER.stem(word)


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumeric boundaries, drop 1-char tokens, stem.

    Purely numeric and digit-bearing tokens are kept as-is (the stemmer is a
    no-op on them). ASCII alphanumerics only; the corpus is English.
    """
    return [
        _STEMMER.stem(tok)
        for tok in _TOKEN_RE.findall(text.lower())
        if len(tok) >= 2
    ]


@dataclass
class BagOfWords:
    """Token counts for one document; ``total`` is the sum of counts."""

    counts: dict[str, int] = field(default_factory=dict)
    total: int = 0

    def __bool__(self) -> bool:
        return self.total > 0


@dataclass
class Vocabulary:
    """Corpus vocabulary after the document-frequency filter.

    Terms appearing in more than half the documents are removed (this is
    the only stopword mechanism). ``terms`` is sorted lexicographically and
    ``term_ids`` is its inverse.
    """

    terms: list[str]
    term_ids: dict[str, int]
    doc_freq: dict[str, int]
    n_docs: int

    def __contains__(self, term: str) -> bool:
        return term in self.term_ids

    def __len__(self) -> int:
        return len(self.terms)

    def idf(self, term: str) -> float:
        """ln(n_docs / doc_freq) over the vocabulary-building corpus; 0 for OOV."""
        import math

        df = self.doc_freq.get(term)
        if not df:
            return 0.0
        return math.log(self.n_docs / df)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"n_docs={self.n_docs}\n".encode())
        for term in self.terms:
            h.update(f"{term}\t{self.doc_freq[term]}\n".encode())
        return h.hexdigest()


def build_vocabulary(documents: list[list[str]]) -> Vocabulary:
    """Build the shared vocabulary from tokenized documents.

    Document frequency counts distinct presence per document; tokens with
    doc_freq > n_docs / 2 (strictly) are dropped. May legitimately produce
    an empty vocabulary (e.g. a single-document corpus).
    """
    if not documents:
        raise ValueError("build_vocabulary requires at least one document")
    n_docs = len(documents)
    df: Counter[str] = Counter()
    for tokens in documents:
        df.update(set(tokens))
    cutoff = n_docs / 2
    terms = sorted(t for t, c in df.items() if c <= cutoff)
    return Vocabulary(
        terms=terms,
        term_ids={t: i for i, t in enumerate(terms)},
        doc_freq={t: df[t] for t in terms},
        n_docs=n_docs,
    )


def to_bow(tokens: list[str], vocab: Vocabulary) -> BagOfWords:
    """Count in-vocabulary tokens; out-of-vocabulary tokens are dropped."""
    counts: dict[str, int] = {}
    for tok in tokens:
        if tok in vocab.term_ids:
            counts[tok] = counts.get(tok, 0) + 1
    return BagOfWords(counts=counts, total=sum(counts.values()))


def save_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    """Dump as TSV: term, term_id, doc_freq per line, sorted by term."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#n_docs={vocab.n_docs}\n")
        for term in vocab.terms:
            fh.write(f"{term}\t{vocab.term_ids[term]}\t{vocab.doc_freq[term]}\n")


def load_vocabulary(path: str | Path) -> Vocabulary:
    terms: list[str] = []
    doc_freq: dict[str, int] = {}
    n_docs = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#n_docs="):
                n_docs = int(line.split("=", 1)[1])
                continue
            term, term_id, df = line.split("\t")
            if int(term_id) != len(terms):
                raise ValueError(f"vocabulary file out of order at term {term!r}")
            terms.append(term)
            doc_freq[term] = int(df)
    return Vocabulary(
        terms=terms,
        term_ids={t: i for i, t in enumerate(terms)},
        doc_freq=doc_freq,
        n_docs=n_docs,
    )
