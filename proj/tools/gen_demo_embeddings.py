#!/usr/bin/env python3
"""Writes the small demonstration word-vector table shipped in data/.

Every token of the bundled corpus gets a vector. Keyword clusters place
related words near a shared direction so that lexicon expansion and
paragraph search have meaningful neighbours; all other words are random
directions, which are close to orthogonal at this dimensionality.
"""

import argparse
import collections
import json
import pathlib
import re

import numpy as np

DIM = 100
SEED = 20170105

# canonical -> [(word, loading)]; cosine(canonical, word) is about
# 0.9 * loading, so loadings below 0.61 fall under the default cutoff.
CLUSTERS = {
    "humanity": [("humankind", 0.9), ("mankind", 0.9), ("humanitarian", 0.8)],
    "beneficial": [("benefit", 0.9), ("benefits", 0.9), ("beneficence", 0.8)],
    "dignity": [("dignified", 0.8)],
    "education": [("educate", 0.9), ("literacy", 0.75)],
    "collaboration": [("collaborate", 0.9), ("collaborative", 0.9), ("collaborations", 0.9)],
    "partnership": [("partnerships", 0.9), ("partners", 0.85)],
    "cooperation": [("cooperate", 0.9), ("cooperative", 0.85)],
    "dialogue": [("discussion", 0.75), ("deliberation", 0.7)],
    "share": [("shared", 0.9), ("sharing", 0.9)],
    "equal": [("equally", 0.9), ("equality", 0.85)],
    "inequality": [("inequalities", 0.9), ("disparities", 0.75)],
    "fairness": [("fair", 0.9), ("unfair", 0.8), ("impartial", 0.7)],
    "bias": [("biases", 0.9), ("biased", 0.85), ("prejudice", 0.7)],
    "discrimination": [("discriminatory", 0.9), ("discriminate", 0.85)],
    "transparency": [("transparent", 0.9), ("openness", 0.75)],
    "explainable": [("explainability", 0.9), ("interpretable", 0.8), ("interpretability", 0.75)],
    "predictable": [("predictability", 0.9)],
    "intelligible": [("understandable", 0.8)],
    "audit": [("auditing", 0.9), ("auditable", 0.85), ("accounting", 0.7)],
    "opaque": [("opacity", 0.85)],
    "privacy": [("private", 0.75), ("secrecy", 0.5)],
    "informed": [("inform", 0.8)],
    "security": [("secure", 0.9), ("resilient", 0.7)],
    "cyberattack": [("cyberattacks", 0.9)],
    "hacks": [("hacking", 0.9), ("hackers", 0.85)],
    "confidential": [("confidentiality", 0.9)],
    "safety": [("safe", 0.9), ("safely", 0.85), ("safeguards", 0.75)],
    "verification": [("verify", 0.9), ("verifiable", 0.85)],
    "validation": [("validate", 0.9)],
    "test": [("testing", 0.9), ("tests", 0.9), ("tested", 0.85)],
    "controllability": [("controllable", 0.9)],
    "accountability": [("accountable", 0.9)],
    "responsibility": [("responsible", 0.9), ("responsibly", 0.85)],
    "superintelligence": [("superintelligent", 0.9)],
}

TOKEN = re.compile(r"[^\W_]+")


def tokens(text):
    return TOKEN.findall(text.lower())


def unit(v):
    return v / np.linalg.norm(v)


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus", default=root / "data" / "corpus.json", type=pathlib.Path)
    parser.add_argument("--lexicon", default=root / "data" / "lexicon_base.json", type=pathlib.Path)
    parser.add_argument("--output", default=root / "data" / "embeddings_demo.txt", type=pathlib.Path)
    args = parser.parse_args()

    freq = collections.Counter()
    for proposal in json.loads(args.corpus.read_text())["proposals"]:
        for item in proposal["items"]:
            freq.update(tokens(item["title_text"]))
            freq.update(tokens(item["explanatory_text"]))
    for topic in json.loads(args.lexicon.read_text())["topics"]:
        for group in topic["groups"]:
            if " " not in group["canonical"]:
                freq.setdefault(group["canonical"], 0)
    for canonical, members in CLUSTERS.items():
        freq.setdefault(canonical, 0)
        for word, _ in members:
            freq.setdefault(word, 0)

    rng = np.random.default_rng(SEED)
    vectors = {}
    for canonical in sorted(CLUSTERS):
        centre = unit(rng.standard_normal(DIM))
        vectors[canonical] = unit(0.9 * centre + np.sqrt(1 - 0.81) * unit(rng.standard_normal(DIM)))
        for word, loading in CLUSTERS[canonical]:
            noise = unit(rng.standard_normal(DIM))
            vectors[word] = unit(loading * centre + np.sqrt(1 - loading**2) * noise)
    order = sorted(freq, key=lambda w: (-freq[w], w))
    for word in order:
        if word not in vectors:
            vectors[word] = unit(rng.standard_normal(DIM))

    with args.output.open("w", encoding="utf-8") as out:
        out.write(f"{len(order)} {DIM}\n")
        for word in order:
            out.write(word + " " + " ".join(f"{x:.6f}" for x in vectors[word]) + "\n")
    print(f"wrote {len(order)} vectors to {args.output}")


if __name__ == "__main__":
    main()
