"""Generates random class hierarchies and records CPython's __mro__ for
each class, or the error raised when the class cannot be created.

usage: python3 tools/gen_c3_oracle.py [COUNT] [SEED] > c3_oracle.json
"""

import json
import random
import sys

NAMES = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def make(rng, index):
    depth = rng.randint(1, 4)
    classes = []
    created = {}
    layers = []
    n = 0
    for level in range(depth):
        layer = []
        for _ in range(rng.randint(1, 4)):
            name = NAMES[n]
            n += 1
            pool = [c for prev in layers for c in prev if c in created]
            bases = []
            if level > 0 and pool:
                bases = rng.sample(pool, rng.randint(1, min(3, len(pool))))
                if rng.random() < 0.08:
                    bases.insert(rng.randint(0, len(bases)), "object")
            record = {"name": name, "bases": bases}
            try:
                cls = type(name, tuple(created.get(b, object) for b in bases), {})
                created[name] = cls
                record["mro"] = [k.__name__ for k in cls.__mro__]
            except TypeError:
                record["mro"] = "error:TypeError"
            classes.append(record)
            layer.append(name)
        layers.append(layer)
    return {"id": index, "classes": classes}


def main():
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 80
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 7
    rng = random.Random(seed)
    hierarchies = [make(rng, i) for i in range(count)]
    inconsistent = sum(any(c["mro"] == "error:TypeError" for c in h["classes"]) for h in hierarchies)
    json.dump({"seed": seed, "inconsistent": inconsistent, "hierarchies": hierarchies}, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
