#!/usr/bin/env python3
"""Generate the reference/hypothesis fixture corpora used by the metric tests.

Deterministic: the same seed always gives byte-identical files.
Usage: make_metric_corpora.py OUT_DIR
"""
import random
import sys
from pathlib import Path

WORDS = (
    "the a he she they is was are wearing glasses water village market children "
    "school teacher went came home today tomorrow morning evening rain river road "
    "bus car fish maize farm field mother father brother sister friend doctor "
    "hospital church book letter phone money price bread tea sugar salt good bad "
    "big small old new quickly slowly well very not also and but or because when"
).split()
BEMBA = "nafwala amakalashi ku menso umwana ifwe imwe balya bushiku lelo mailo icibemba".split()
EXTRAS = [
    "3.5", "1,000", "2020-2021", "10-15", "well-known", "state-of-the-art", "e-mail",
    "U.S.", "Dr.", "naïve", "café", "Zürich", "señor", '"quoted"', "(aside)",
    "it's", "don't", "x&y", "50%", "$20", "#tag", "@home", "a/b", "[note]", "{k}",
    "~", "|", "^", "`tick`", "&amp;", "&lt;b&gt;", "ok?!", "end...", "--", ";",
]
PUNCT = [".", ".", ".", "?", "!", ",", ":", ";"]


def sentence(rng):
    n = rng.randint(3, 18)
    toks = []
    for _ in range(n):
        r = rng.random()
        if r < 0.12:
            toks.append(rng.choice(EXTRAS))
        elif r < 0.2:
            toks.append(rng.choice(BEMBA))
        else:
            toks.append(rng.choice(WORDS))
        if rng.random() < 0.08:
            toks[-1] += rng.choice([",", ";", ":"])
    s = " ".join(toks)
    s = s[0].upper() + s[1:]
    return s + rng.choice(PUNCT)


def perturb(rng, ref, level):
    toks = ref.split()
    out = []
    for t in toks:
        r = rng.random()
        if r < level * 0.3:
            out.append(rng.choice(WORDS))
        elif r < level * 0.45:
            continue
        elif r < level * 0.55:
            out.append(t)
            out.append(rng.choice(WORDS + BEMBA))
        elif r < level * 0.65:
            out.append(t.lower() if t[0].isupper() else t.capitalize())
        elif r < level * 0.7:
            out.append(t.rstrip(".,?!;:"))
        else:
            out.append(t)
    if rng.random() < level * 0.3 and len(out) > 2:
        i = rng.randrange(len(out) - 1)
        out[i], out[i + 1] = out[i + 1], out[i]
    if rng.random() < level * 0.2:
        out = out[: max(1, len(out) // 2)]
    return " ".join(out)


def corpus(rng, n, special):
    refs, hyps = [], []
    for i in range(n):
        ref = sentence(rng)
        level = rng.choice([0.0, 0.2, 0.4, 0.7, 1.0])
        hyp = perturb(rng, ref, level)
        refs.append(ref)
        hyps.append(hyp)
    if special:
        refs[0] = "He is wearing glasses."
        hyps[0] = "he is wearing glasses as well"
        hyps[1] = ""
        hyps[2] = "zzz qqq"
        refs[3] = refs[3] + "  "
        hyps[4] = hyps[4] + "\t"
    return refs, hyps


def main():
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    for name, n, seed in (("small", 10, 11), ("medium", 50, 23), ("large", 100, 37)):
        rng = random.Random(seed)
        refs, hyps = corpus(rng, n, special=(name != "small"))
        (out / f"{name}.ref.txt").write_text("".join(r + "\n" for r in refs), encoding="utf-8")
        (out / f"{name}.hyp.txt").write_text("".join(h + "\n" for h in hyps), encoding="utf-8")


if __name__ == "__main__":
    main()
