"""Nominal context features for sense discrimination.

Five feature families are extracted from a word sample:

  M        morphology tag of the target occurrence (nouns and verbs only)
  PL2/PL1/PR1/PR2   POS of the word 1 or 2 positions left/right of the target
  C1/C2/C3 presence in the sentence of the sample's three most frequent
           content words (binary)
  UL2/UL1/UR1/UR2   the word at a fixed offset, restricted to the 19 most
           frequent words seen at that offset, plus (none) for any other
           word and (null) for positions outside the sentence
  CL1/CR1  like UL/UR at offset 1, restricted to the 19 most frequent
           content words at that offset

Three standard combinations are provided: set A (M, POS window,
co-occurrences), set B (M, unrestricted collocations) and set C (M, POS
window, content collocations). A content word is any token whose
case-folded text is not on the stopword list and is not the target word
itself; the default list covers determiners, prepositions, conjunctions,
auxiliaries and punctuation, and can be replaced by a one-word-per-line
file. Pronouns are deliberately kept as content words.
"""

import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .corpus import POS_TAGS, WordSample

NONE_VALUE = "(none)"
NULL_VALUE = "(null)"
COLLOC_TOP = 19

FEATURE_SETS = {
    "A": ("M", "PL2", "PL1", "PR1", "PR2", "C1", "C2", "C3"),
    "B": ("M", "UL2", "UL1", "UR1", "UR2"),
    "C": ("M", "PL2", "PL1", "PR1", "PR2", "CL1", "CR1"),
}

# Morphology cardinality by category under the nominal tagging scheme
# (adjectives carry no M feature, nouns singular/plural, verbs 7 tenses).
MORPH_CARDINALITY = {"adjective": 1, "noun": 2, "verb": 7}

_DETERMINERS = """
a an the this that these those each every either neither some any no
all both half several many much few little more most less least own
other another such what which whose whatever whichever enough
""".split()

_PREPOSITIONS = """
aboard about above across after against along amid among around as at
before behind below beneath beside besides between beyond by despite
down during except for from in inside into like near of off on onto out
outside over past per since through throughout till to toward towards
under underneath until unto up upon via with within without
""".split()

_CONJUNCTIONS = """
and or nor but so yet if because although though while unless whereas
whether than when whenever where wherever how why once lest
""".split()

_AUXILIARIES = """
am is are was were be been being have has had having do does did doing
done will would shall should can could may might must ought not n't
cannot 's 're 've 'll 'd 'm s'
""".split()

_PUNCTUATION = list(".,;:!?'\"`()[]{}<>|/\\$%#&*+=~^_@") + [
    "``", "''", "--", "---", "...", "‘", "’", "“", "”",
]

DEFAULT_STOPWORDS = frozenset(
    _DETERMINERS + _PREPOSITIONS + _CONJUNCTIONS + _AUXILIARIES + _PUNCTUATION
)


def load_stopwords(path) -> frozenset:
    """Read a stopword list, one word per line; blank lines and # comments skipped."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.add(word.casefold())
    return frozenset(words)


@dataclass(frozen=True)
class Feature:
    """One feature: a name, an ordered value alphabet and how to read it off.

    ``kind`` selects the extraction rule: "morph", "pos", "cooc" or
    "colloc". For positional kinds ``offset`` is the signed distance from
    the target. For "cooc" ``word`` is the content word whose presence is
    tested (None when the sample had too few content words; the feature
    is then constantly 0). For "colloc" ``vocabulary`` holds the actual
    top words; alphabet slots padded to keep cardinality at 21 are never
    emitted.
    """

    name: str
    kind: str
    values: tuple[str, ...]
    offset: int = 0
    word: str | None = None
    vocabulary: frozenset = frozenset()

    @property
    def cardinality(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered feature descriptors for one sample/feature-set combination."""

    features: tuple[Feature, ...]

    @property
    def q(self) -> int:
        return len(self.features)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(f.cardinality for f in self.features)


@dataclass(frozen=True)
class FeatureMatrix:
    """Extracted nominal values, one row per instance, as alphabet indices."""

    schema: FeatureSchema
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if arr.ndim != 2 or arr.shape[1] != self.schema.q:
            raise ValueError("matrix shape does not match schema")
        for j, feat in enumerate(self.schema.features):
            col = arr[:, j]
            if col.size and (col.min() < 0 or col.max() >= feat.cardinality):
                raise ValueError(f"value index out of alphabet for feature {feat.name}")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def q(self) -> int:
        return self.values.shape[1]

    def decode_row(self, i) -> tuple[str, ...]:
        """Row i as alphabet strings."""
        return tuple(
            feat.values[v] for feat, v in zip(self.schema.features, self.values[i])
        )


def _is_content(word: str, stopwords) -> bool:
    return word not in stopwords


def top_content_words(sample: WordSample, k: int, stopwords=None) -> list[str]:
    """The k most frequent content words in the sample's sentences.

    Frequencies are counted over token occurrences, case-folded; the
    target word itself is excluded. Ties break lexicographically. Fewer
    than k distinct content words yield a shorter list.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    stop = DEFAULT_STOPWORDS if stopwords is None else stopwords
    target = sample.word.casefold()
    counts = Counter(
        tok.folded
        for inst in sample.instances
        for tok in inst.tokens
        if tok.folded != target and _is_content(tok.folded, stop)
    )
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return [word for word, _ in ranked[:k]]


def _ranked_positional(sample, offset, content_only, stop) -> list[str]:
    counts = Counter()
    for inst in sample.instances:
        pos = inst.target_index + offset
        if 0 <= pos < len(inst.tokens):
            word = inst.tokens[pos].folded
            if content_only and not _is_content(word, stop):
                continue
            counts[word] += 1
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return [word for word, _ in ranked]


def top_positional_words(
    sample: WordSample, offset: int, content_only: bool = False, k: int = COLLOC_TOP,
    stopwords=None,
) -> list[str]:
    """The k most frequent words at a fixed signed offset from the target.

    Positions falling outside a sentence contribute nothing. With
    content_only, stopwords are skipped. Ties break lexicographically.
    """
    if offset == 0:
        raise ValueError("offset must be non-zero")
    if k < 1:
        raise ValueError("k must be at least 1")
    stop = DEFAULT_STOPWORDS if stopwords is None else stopwords
    return _ranked_positional(sample, offset, content_only, stop)[:k]


_RESERVED = re.compile(r"\((?:none|null|unused\d+)\)$")


def _colloc_alphabet(words: list[str]) -> tuple[str, ...]:
    padded = list(words) + [
        f"(unused{i})" for i in range(len(words), COLLOC_TOP)
    ]
    return tuple(padded) + (NONE_VALUE, NULL_VALUE)


def _drop_reserved_spellings(words: list[str]) -> list[str]:
    # a token spelled like (null)/(none)/(unusedN) would collide with the
    # alphabet's special slots; such words extract as (none) instead
    return [w for w in words if not _RESERVED.fullmatch(w)]


def _parse_offset(name: str) -> int:
    side = 1 if name[1] == "R" else -1
    return side * int(name[2])


def build_schema(sample: WordSample, set_id: str, stopwords=None) -> FeatureSchema:
    """Assemble the schema for feature set A, B or C over one sample.

    The M alphabet is the sorted set of observed morph tags (dropped for
    adjectives); collocation alphabets are the per-offset top-19 words
    padded with unreachable placeholders, plus (none) and (null), so
    their cardinality is always 21.
    """
    set_id = set_id.upper()
    if set_id not in FEATURE_SETS:
        raise ValueError(f"unknown feature set {set_id!r}")
    if sample.n == 0:
        raise ValueError("sample has no instances")
    stop = DEFAULT_STOPWORDS if stopwords is None else stopwords

    features = []
    cooc_words = None
    for name in FEATURE_SETS[set_id]:
        if name == "M":
            if sample.category == "adjective":
                continue
            morphs = tuple(sorted({inst.morph for inst in sample.instances}))
            features.append(Feature(name, "morph", morphs))
        elif name[0] == "P":
            features.append(Feature(name, "pos", POS_TAGS, offset=_parse_offset(name)))
        elif name[0] == "C" and name[1].isdigit():
            if cooc_words is None:
                cooc_words = top_content_words(sample, 3, stop)
            rank = int(name[1]) - 1
            word = cooc_words[rank] if rank < len(cooc_words) else None
            features.append(Feature(name, "cooc", ("0", "1"), word=word))
        else:
            offset = _parse_offset(name)
            content_only = name[0] == "C"
            words = _drop_reserved_spellings(
                _ranked_positional(sample, offset, content_only, stop)
            )[:COLLOC_TOP]
            features.append(
                Feature(
                    name,
                    "colloc",
                    _colloc_alphabet(words),
                    offset=offset,
                    vocabulary=frozenset(words),
                )
            )
    return FeatureSchema(tuple(features))


def extract(sample: WordSample, schema: FeatureSchema) -> FeatureMatrix:
    """Extract the matrix of feature value indices for every instance.

    POS features read `other` at positions outside the sentence;
    collocation features read (null) there, and (none) for any in-bounds
    word missing from their alphabet. The schema must have been built
    from the same sample.
    """
    extractors = []
    for feat in schema.features:
        if feat.kind == "morph":
            index = {v: i for i, v in enumerate(feat.values)}

            def get(inst, index=index, name=feat.name):
                try:
                    return index[inst.morph]
                except KeyError:
                    raise ValueError(
                        f"morph {inst.morph!r} not in schema for {name}; "
                        "schema must be built from the same sample"
                    ) from None

        elif feat.kind == "pos":
            index = {v: i for i, v in enumerate(feat.values)}
            other = index["other"]

            def get(inst, index=index, off=feat.offset, other=other):
                pos = inst.target_index + off
                if 0 <= pos < len(inst.tokens):
                    return index[inst.tokens[pos].pos]
                return other

        elif feat.kind == "cooc":

            def get(inst, word=feat.word):
                if word is None:
                    return 0
                return int(any(tok.folded == word for tok in inst.tokens))

        else:
            index = {v: i for i, v in enumerate(feat.values) if v in feat.vocabulary}
            none_idx = feat.values.index(NONE_VALUE)
            null_idx = feat.values.index(NULL_VALUE)

            def get(inst, index=index, off=feat.offset, none_idx=none_idx, null_idx=null_idx):
                pos = inst.target_index + off
                if not 0 <= pos < len(inst.tokens):
                    return null_idx
                return index.get(inst.tokens[pos].folded, none_idx)

        extractors.append(get)

    rows = np.empty((sample.n, schema.q), dtype=np.int64)
    for i, inst in enumerate(sample.instances):
        for j, get in enumerate(extractors):
            rows[i, j] = get(inst)
    return FeatureMatrix(schema, rows)


def dimensionality(set_id: str, category: str) -> int:
    """Size of the feature space for a set/category pair.

    Uses the nominal morphology cardinalities (1 for adjectives, 2 for
    nouns, 7 for verbs) and the fixed alphabets: 5 for POS, 2 for
    co-occurrence, 21 for collocation features.
    """
    set_id = set_id.upper()
    if set_id not in FEATURE_SETS:
        raise ValueError(f"unknown feature set {set_id!r}")
    if category not in MORPH_CARDINALITY:
        raise ValueError(f"unknown category {category!r}")
    total = 1
    for name in FEATURE_SETS[set_id]:
        if name == "M":
            total *= MORPH_CARDINALITY[category]
        elif name[0] == "P":
            total *= len(POS_TAGS)
        elif name[0] == "C" and name[1].isdigit():
            total *= 2
        else:
            total *= COLLOC_TOP + 2
    return total


def format_matrix(matrix: FeatureMatrix) -> str:
    """Tabular text export: feature-name header, one row of alphabet strings per instance."""
    lines = ["\t".join(matrix.schema.names)]
    for i in range(matrix.n):
        lines.append("\t".join(matrix.decode_row(i)))
    return "\n".join(lines) + "\n"
