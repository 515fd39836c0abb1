#!/usr/bin/env python3
"""Freeze reference metric values for the fixture corpora.

Runs sacreBLEU (the reference implementation the C++ metrics must agree with)
and an independent word-level Levenshtein, then writes oracle.json next to the
corpora. Only needed when the fixtures change; the tests read the JSON.

Usage: PYTHONPATH=<sacrebleu install> freeze_metric_oracle.py FIXTURE_DIR
"""
import json
import sys
from pathlib import Path

import sacrebleu
from sacrebleu.metrics import BLEU, CHRF
from sacrebleu.tokenizers.tokenizer_13a import Tokenizer13a

TOKENIZER_CASES = [
    "Hello, world!",
    "He is wearing glasses.",
    "The price is 3.5 or 1,000 units.",
    "2020-2021 and 10-15 but well-known state-of-the-art e-mail",
    'She said "yes" (twice) [really] {k}',
    "it's x&y &amp; &lt;b&gt; &quot;q&quot;",
    "U.S. Dr. end... ok?! a/b 50% $20 #tag @home",
    "naïve café Zürich señor.",
    "tab\tseparated   spaces",
    "line-\nbreak<skipped> here\nnext",
    "~|^`tick`",
    "",
    "   ",
    "trailing dot.",
    "5.-x ,.,",
]

EDGE_PAIRS = {
    "identical": (["He is wearing glasses."], ["He is wearing glasses."]),
    "disjoint": (["alpha beta gamma delta"], ["one two three four"]),
    "empty_hyp": (["nafwala na amakalashi ku menso"], [""]),
    "short_hyp": (["the children went to school in the morning"], ["the children went"]),
    "glasses_pair": (["He is wearing glasses."], ["he is wearing glasses as well"]),
    "unigram_only": (["a b c d"], ["d c b a"]),
    "long_hyp": (["the cat"], ["the cat sat on the mat today"]),
}


def read_lines(path):
    with open(path, encoding="utf-8", newline="\n") as f:
        return [line[:-1] if line.endswith("\n") else line for line in f]


def levenshtein(r, h):
    prev = list(range(len(h) + 1))
    for i in range(1, len(r) + 1):
        cur = [i] + [0] * len(h)
        for j in range(1, len(h) + 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (r[i - 1] != h[j - 1]))
        prev = cur
    return prev[-1]


def nopunct_tokens(s):
    return "".join(c if (c.isalpha() or c.isdigit()) else (" " if c.isspace() else "") for c in s.lower()).split()


def wer_block(refs, hyps):
    out = {}
    for name, tok in (("verbatim", str.split), ("lowercase_nopunct", nopunct_tokens)):
        dist = sum(levenshtein(tok(r), tok(h)) for r, h in zip(refs, hyps))
        n = sum(len(tok(r)) for r in refs)
        out[name] = {"distance": dist, "ref_words": n, "wer": dist / n if n else None}
    return out


def score(refs, hyps):
    exp = BLEU().corpus_score(hyps, [refs])
    none = BLEU(smooth_method="none").corpus_score(hyps, [refs])
    chrf = CHRF(word_order=2).corpus_score(hyps, [refs])
    return {
        "bleu": exp.score,
        "bleu_none": none.score,
        "precisions": [p / 100.0 for p in exp.precisions],
        "brevity_penalty": exp.bp,
        "hyp_len": exp.sys_len,
        "ref_len": exp.ref_len,
        "chrf_pp": chrf.score,
        "chrf_pp_segments": [CHRF(word_order=2).sentence_score(h, [r]).score for r, h in zip(refs, hyps)],
        "wer": wer_block(refs, hyps),
    }


def main():
    root = Path(sys.argv[1])
    corpora = {}
    for name in ("small", "medium", "large"):
        refs = read_lines(root / f"{name}.ref.txt")
        hyps = read_lines(root / f"{name}.hyp.txt")
        corpora[name] = score(refs, hyps)
    tok = Tokenizer13a()
    bleu, chrf = BLEU(), CHRF(word_order=2)
    bleu.corpus_score(["a"], [["a"]])
    chrf.corpus_score(["a"], [["a"]])
    oracle = {
        "toolkit": f"sacrebleu {sacrebleu.__version__}",
        "signature": {"bleu": str(bleu.get_signature()), "chrf": str(chrf.get_signature())},
        "corpora": corpora,
        "edge_pairs": {k: {"refs": r, "hyps": h, **score(r, h)} for k, (r, h) in EDGE_PAIRS.items()},
        "tokenize_13a": [{"input": s, "output": tok(s.rstrip())} for s in TOKENIZER_CASES],
    }
    (root / "oracle.json").write_text(json.dumps(oracle, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
