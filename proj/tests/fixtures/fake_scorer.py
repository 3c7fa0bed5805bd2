#!/usr/bin/env python3
"""Stand-in external scorer for adapter tests.

Scores are a deterministic function of text length. With --count FILE each
invocation appends one line to FILE. --mode selects failure behaviour.
"""
import argparse
import json
import sys


def scores(text):
    x = min(len(text), 50) / 100.0
    tox = {k: x for k in ["toxicity", "severe_toxicity", "obscene", "threat", "insult",
                          "identity_attack", "sexual_explicit"]}
    emo = {k: 0.0 for k in ["neutral", "joy", "sadness", "anger", "love", "fear", "surprise"]}
    emo["neutral"] = 1.0 - x
    emo["anger"] = x
    sent = {"positive": 0.0, "negative": x, "neutral": 1.0 - x, "compound": -x}
    return {"toxicity": tox, "emotion": emo, "sentiment": sent}


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--count")
    p.add_argument("--mode", default="ok", choices=["ok", "crash", "short", "garbage", "range"])
    args = p.parse_args()
    req = json.load(sys.stdin)
    if args.count:
        with open(args.count, "a") as f:
            f.write("%d\n" % len(req["texts"]))
    if args.mode == "crash":
        sys.stderr.write("model weights not found\n")
        sys.exit(3)
    results = [scores(t) for t in req["texts"]]
    if args.mode == "short":
        results = results[:-1]
    if args.mode == "garbage":
        sys.stdout.write("this is not json")
        return
    if args.mode == "range":
        for r in results:
            r["toxicity"]["threat"] = 1.5
    json.dump({"results": results}, sys.stdout)


if __name__ == "__main__":
    main()
