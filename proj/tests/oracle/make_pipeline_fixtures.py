#!/usr/bin/env python3
"""Write the 20-utterance pipeline corpus, the mock adapter table and the
canned baseline / finetuned hypotheses. Usage: make_pipeline_fixtures.py OUT_DIR
"""
import json
import random
import sys
from pathlib import Path

# (transcript, reference translation, ASR output, MT output of the ASR output)
ROWS = [
    ("nafwala na amakalashi ku menso", "He is wearing glasses.",
     "nafwala na amakalashi ku menso", "he is wearing glasses as well"),
    ("umwana aleangala panse", "The child is playing outside.",
     "umwana aleangala panse", "The child is playing outside."),
    ("bamayo baleipika ubwali", "Mother is cooking nshima.",
     "bamayo baleipika ubwali", "Mother is cooking nshima."),
    ("tulaya ku musumba mailo", "We are going to town tomorrow.",
     "tulaya ku musumba mailo", "We go to the town tomorrow."),
    ("imfula ileloka sana", "It is raining heavily.",
     "imfula ileloka", "It is raining."),
    ("abalumendo baleteya umupila", "The boys are playing football.",
     "abalumendo baleteya umupila", "The boys are playing ball."),
    ("ndefwaya amenshi", "I want water.",
     "ndefwaya amenshi", "I want water."),
    ("ishuko lisuma", "Good luck.",
     "ishuko lisuma", "Good luck."),
    ("bashikulu balelanda ilyashi", "Grandfather is telling a story.",
     "bashikulu balelanda ilyashi", "Grandfather is telling a story."),
    ("inkoko shili mu cikuku", "The chickens are in the yard.",
     "inkoko shili mu cikuku", "The chickens are in the kitchen."),
    ("uyu muntu ni kafundisha", "This person is a teacher.",
     "uyu muntu ni kafundisha", "This person is a teacher."),
    ("tuleikala mu mushi", "We live in the village.",
     "tuleikala mu mushi", "We are living in the village."),
    ("aleshita isabi ku maliketi", "She is buying fish at the market.",
     "aleshita isabi ku maliketi", "He is buying fish at the market."),
    ("ubushiku bwa lelo bwaba ubusuma", "Today is a good day.",
     "ubushiku bwa lelo ubusuma", "Today is good."),
    ("bus yaishile ilyo", "The bus came late.",
     "bus yaishile", "The bus came."),
    ("ndi mu ng'anda", "I am in the house.",
     "ndi mu ng'anda", "I am in the house."),
    ("umulilo ulepya", "The fire is burning.",
     "umulilo ulepya", "The fire is burning."),
    ("balefwaya ukusambilila icibemba", "They want to learn Bemba.",
     "balefwaya ukusambilila icibemba", "They want to learn Bemba."),
    ("ifyakulya fyapwa", "The food is finished.",
     None, None),
    ("natotela sana", "Thank you very much.",
     "natotela sana", "Thank you very much."),
]

BASELINE_VOCAB = "so the of it one when then market dog tree red eleven yes".split()


def main():
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    lines = ["id\taudio\ttranscript\ttranslation\torigin\tquality"]
    transcribe, translate, e2e = {}, {}, {}
    for i, (src, ref, asr, mt) in enumerate(ROWS, start=1):
        uid = f"u{i:02d}"
        lines.append(f"{uid}\tclips/{uid}.wav\t{src}\t{ref}\tauthentic\t")
        if asr is None:
            transcribe[uid] = {"error": "audio decode failed"}
            e2e[uid] = {"error": "audio decode failed"}
            continue
        transcribe[uid] = asr
        translate[asr] = mt
        translate.setdefault(src, mt)
        e2e[uid] = mt if i % 3 else ref
    (out / "test20.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    table = {
        "backend": "mock",
        "tasks": ["transcribe", "translate", "translate_audio"],
        "language_pairs": [["bem", "eng"], ["eng", "bem"]],
        "metadata": {"asr_model": "whisper-small (fixture)", "mt_model": "nllb-200-distilled-600M (fixture)"},
        "transcribe": transcribe,
        "translate": {
            "bem-eng": translate,
            "eng-bem": {
                "He is wearing glasses.": {"text": "nafwala amakalashi", "avg_log_prob": -0.05},
                "The child is playing outside.": {"text": "umwana aleangala panse", "avg_log_prob": -0.2613647641344075},
                "We are going to town tomorrow.": {"text": "tulaya ku musumba", "avg_log_prob": -0.9},
                "Thank you very much.": {"text": "natotela sana", "avg_log_prob": -0.01},
                "The food is finished.": {"error": "model timeout"},
            },
        },
        "translate_audio": {"bem-eng": e2e},
        "translate_fallback": "error",
        "default_avg_log_prob": -0.1,
    }
    (out / "mock_adapter.json").write_text(json.dumps(table, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")

    rng = random.Random(4)
    finetuned = [(mt if mt is not None else ref) for _, ref, _, mt in ROWS]
    baseline = [" ".join(rng.choice(BASELINE_VOCAB) for _ in range(rng.randint(2, 7))) for _ in ROWS]
    (out / "finetuned.hyp.txt").write_text("\n".join(finetuned) + "\n", encoding="utf-8")
    (out / "baseline.hyp.txt").write_text("\n".join(baseline) + "\n", encoding="utf-8")

    mono = ["id\taudio\ttranscript\ttranslation\torigin\tquality"]
    for i, s in enumerate(["He is wearing glasses.", "The child is playing outside.", "We are going to town tomorrow.",
                           "Thank you very much.", "The food is finished.", "Nobody knows this sentence."], start=1):
        mono.append(f"m{i}\t\t{s}\t\tauthentic\t")
    (out / "mono_eng.tsv").write_text("\n".join(mono) + "\n", encoding="utf-8")

    base = {"adapter": "mock:mock_adapter.json", "beam_size": 5, "concurrency_limit": 4,
            "metrics": ["bleu", "chrf", "wer"]}
    for mode, system in (("cascaded", "Cascade"), ("end_to_end", "E2E"), ("mt_only", "MT")):
        cfg = {"mode": mode, "system": system, **base}
        if mode == "cascaded":
            cfg["training_metadata"] = {"learning_rate": 1e-4, "warmup_ratio": 0.1, "epochs": 3}
        (out / f"{mode}.json").write_text(json.dumps(cfg, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
