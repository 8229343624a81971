#!/usr/bin/env python3
"""Regenerate the demo corpora. Seeded, so output files are stable.

Each word gets sense-specific cue words around the target plus shared
fillers, mixed sentence shapes, and a skewed sense distribution, so all
three algorithms have real structure to find without being trivial.
"""

import numpy as np

from sensecluster.corpus import Instance, Token, WordSample, save_corpus


def build(word, category, senses, cues, n, seed, majority=0.65):
    rng = np.random.default_rng(seed)
    fillers = [("market", "noun"), ("year", "noun"), ("report", "noun"), ("week", "noun")]
    openers = [("the", "other"), ("a", "other"), ("its", "other")]
    morphs = {
        "noun": ["singular", "plural"],
        "verb": ["base", "past", "3sg"],
        "adjective": [""],
    }[category]
    probs = [majority] + [(1 - majority) / (len(senses) - 1)] * (len(senses) - 1)
    instances = []
    for _ in range(n):
        sense = senses[int(rng.choice(len(senses), p=probs))]
        pool = cues[sense]
        morph = morphs[rng.integers(len(morphs))]
        text = word + "s" if morph in ("plural", "3sg") else word
        pre = pool[rng.integers(len(pool))]
        post = pool[rng.integers(len(pool))]
        toks = []
        if rng.random() < 0.8:
            toks.append(Token(*openers[rng.integers(len(openers))]))
        toks.append(Token(pre[0], pre[1]))
        target = len(toks)
        toks.append(Token(text, category))
        toks.append(Token(post[0], post[1]))
        if rng.random() < 0.6:
            toks.append(Token(*fillers[rng.integers(len(fillers))]))
        if rng.random() < 0.4:
            toks.append(Token(".", "other"))
        instances.append(Instance(tuple(toks), target, morph, sense))
    return WordSample(word, category, tuple(instances), tuple(senses))


WORDS = [
    build(
        "drug", "noun", ("medicine", "narcotic"),
        {
            "medicine": [("fda", "noun"), ("approved", "verb"), ("maker", "noun"),
                         ("generic", "adjective"), ("dose", "noun"), ("patients", "noun")],
            "narcotic": [("police", "noun"), ("seized", "verb"), ("illegal", "adjective"),
                         ("street", "noun"), ("dealer", "noun"), ("trade", "noun")],
        },
        n=40, seed=101,
    ),
    build(
        "agree", "verb", ("concede", "share-opinion"),
        {
            "concede": [("finally", "adverb"), ("settle", "verb"), ("dispute", "noun"),
                        ("pay", "verb"), ("terms", "noun")],
            "share-opinion": [("analysts", "noun"), ("critics", "noun"), ("strongly", "adverb"),
                              ("economists", "noun"), ("view", "noun")],
        },
        n=36, seed=102, majority=0.7,
    ),
    build(
        "chief", "adjective", ("highest-rank", "main"),
        {
            "highest-rank": [("executive", "noun"), ("officer", "noun"), ("president", "noun"),
                             ("named", "verb"), ("financial", "adjective")],
            "main": [("rival", "noun"), ("reason", "noun"), ("obstacle", "noun"),
                     ("remains", "verb"), ("export", "noun")],
        },
        n=32, seed=103, majority=0.75,
    ),
]

if __name__ == "__main__":
    from pathlib import Path

    here = Path(__file__).parent
    for sample in WORDS:
        save_corpus(sample, here / f"{sample.word}.jsonl")
        print(f"{sample.word}: {sample.n} instances, {sample.k} senses ({sample.category})")
