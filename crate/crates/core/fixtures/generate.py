"""Regenerates the synthetic measurement, pool and plan-sweep fixtures.

Accuracies are hand-shaped (saturating in T, scale-dependent penalties for
4-bit weights and gains from voting) and carry no empirical meaning. The
plan sweep is computed here by brute force, independently of the Rust code.

    python3 generate.py
"""

import json
import math
import random
from fractions import Fraction
from pathlib import Path

HERE = Path(__file__).parent
catalog = {m["name"]: m for m in json.loads((HERE / "qwen3.json").read_text())["models"]}

CAPACITY = {
    "Qwen3-0.6B": 0.15,
    "Qwen3-1.7B": 0.35,
    "Qwen3-4B": 0.55,
    "Qwen3-8B": 0.62,
    "Qwen3-14B": 0.68,
    "Qwen3-32B": 0.74,
}
PRECISIONS = [4, 8, 16]
KVS = ["full", "evict:4000", "quant:4"]
BUDGETS = [2000 + 4000 * i for i in range(8)]
GROUPS = [1, 4]


def weights(m, bits):
    nq, nu = m["n_params_quantizable"], m["n_params_unquantizable"]
    if bits == 16:
        return Fraction(2 * (nq + nu))
    return nq * (Fraction(bits, 8) + Fraction(16, 8 * 128)) + 2 * nu


def kv(m, strategy, t, g):
    elems = m["n_layers"] * m["n_kv_heads"] * m["d_head"] * 2
    per_token = elems * 2
    if strategy == "full":
        return Fraction(g * t * per_token)
    if strategy.startswith("evict:"):
        return Fraction(g * min(t, int(strategy[6:])) * per_token)
    bits = int(strategy[6:])
    residual = 128
    packed = elems * (Fraction(bits, 8) + Fraction(16, 8 * 64))
    return g * (min(t, residual) * per_token + max(t - residual, 0) * packed)


def memory(model, bits, strategy, t, g):
    m = catalog[model]
    return math.floor(weights(m, bits) + kv(m, strategy, t, g))


def accuracy(model, bits, strategy, t, g):
    cap = CAPACITY[model]
    small = cap < 0.5
    if bits == 4:
        cap *= 0.80 if small else 0.93
    elif bits == 8:
        cap *= 0.99
    acc = cap * (1 - math.exp(-t / 8000))
    if strategy == "evict:4000" and t > 4000:
        acc *= 0.97
    elif strategy == "quant:4":
        acc *= 0.985
    if g > 1:
        acc += (0.03 if small else 0.15) * (1 - acc) * math.log2(g) / 2
    return round(min(acc, 1.0), 4)


def latency(model, bits, t, g):
    params = float(model.split("-")[1][:-1])
    speed = (0.4 + 0.06 * params) * (0.6 + 0.4 * bits / 16)
    return round(t / 1000 * speed * (1 + 0.1 * math.log2(g)), 3)


def key_str(model, bits, strategy, t, g):
    return f"{model}/w{bits}/{strategy}/T={t}/G={g}"


def main():
    rows = []
    for model in CAPACITY:
        for bits in PRECISIONS:
            for strategy in KVS:
                for t in BUDGETS:
                    for g in GROUPS:
                        rows.append((model, bits, strategy, t, g))

    with open(HERE / "synthetic_measurements.jsonl", "w") as f:
        for model, bits, strategy, t, g in rows:
            rec = {
                "schema_version": 1,
                "model": model,
                "precision_bits": bits,
                "kv": kv_object(strategy),
                "token_budget": t,
                "group_size": g,
                "accuracy": accuracy(model, bits, strategy, t, g),
                "latency_seconds": latency(model, bits, t, g),
            }
            f.write(json.dumps(rec) + "\n")

    # Reference planner: max accuracy, then lower cost, T, G, higher
    # precision, model name, KV descriptor.
    cands = [(accuracy(*r), memory(*r), r) for r in rows]
    lo, hi = 0.3 * 2**30, 140 * 2**30
    budgets = [round(lo * (hi / lo) ** (i / 49)) for i in range(50)]
    expected = []
    for b in budgets:
        feasible = [c for c in cands if c[1] <= b]
        if not feasible:
            expected.append(None)
            continue
        best = min(
            feasible,
            key=lambda c: (-c[0], c[1], c[2][3], c[2][4], -c[2][1], c[2][0], kv_rank(c[2][2])),
        )
        expected.append({"key": key_str(*best[2]), "accuracy": best[0], "memory_bytes": best[1]})
    sweep = {"schema_version": 1, "budgets_bytes": budgets, "expected": expected}
    (HERE / "plan_sweep.json").write_text(json.dumps(sweep, indent=1) + "\n")

    rng = random.Random(20251016)
    with open(HERE / "pools.jsonl", "w") as f:
        for i in range(50):
            size = 1 + i % 8
            keys = ["A", "B", "C", "D", "INVALID"]
            weights_ = [rng.random() for _ in keys]
            correct = rng.choice(["A", "B"])
            samples = [
                {"answer_key": k, "correct": k == correct}
                for k in rng.choices(keys, weights=weights_, k=size)
            ]
            line = {"schema_version": 1, "instance_id": f"q{i:02}", "samples": samples}
            f.write(json.dumps(line) + "\n")


def kv_object(descriptor):
    kind, _, arg = descriptor.partition(":")
    if kind == "full":
        return {"strategy": "full"}
    if kind == "evict":
        return {"strategy": "evict", "retain_tokens": int(arg)}
    return {"strategy": "quant", "precision_bits": int(arg)}


def kv_rank(descriptor):
    # Matches the derived ordering of the Rust KV strategy enum:
    # Full < Evict(n) < Quant(spec).
    kind, _, arg = descriptor.partition(":")
    return ({"full": 0, "evict": 1, "quant": 2}[kind], int(arg or 0))


if __name__ == "__main__":
    main()
