"""Runs corpus files under CPython and prints an oracle record as JSON.

usage: python3 tools/oracle.py FILE... > oracle.json
"""

import contextlib
import io
import json
import runpy
import sys

SKIP = {"Protocol", "Generic", "ABC", "object", "type"}


def result(fn):
    try:
        return bool(fn())
    except Exception as e:  # noqa: BLE001
        return f"error:{type(e).__name__}"


def corpus_classes(path):
    with contextlib.redirect_stdout(io.StringIO()):
        ns = runpy.run_path(path, run_name="__corpus__")
    out = {}
    for value in ns.values():
        if not isinstance(value, type) or value.__name__ in SKIP:
            continue
        if value.__module__ == "__corpus__" or getattr(value, "_is_protocol", False):
            out[value.__name__] = value
    values = {k: v for k, v in ns.items() if not k.startswith("__") and not isinstance(v, type)}
    return out, values


def run(paths):
    classes, instances = [], []
    checks = []
    for path in paths:
        found, values = corpus_classes(path)
        for name in sorted(found):
            c = found[name]
            classes.append({
                "name": name,
                "mro": [k.__name__ for k in c.__mro__],
                "metaclass": type(c).__name__,
            })
        for sub in sorted(found):
            for sup in sorted(found):
                checks.append({
                    "sub": sub,
                    "sup": sup,
                    "result": result(lambda: issubclass(found[sub], found[sup])),
                })
        for expr in sorted(values):
            if callable(values[expr]):
                continue
            for target in sorted(found):
                instances.append({
                    "value_expr": expr,
                    "target": target,
                    "result": result(lambda: isinstance(values[expr], found[target])),
                })
    return {"classes": classes, "subclass_checks": checks, "instance_checks": instances}


if __name__ == "__main__":
    json.dump(run(sys.argv[1:]), sys.stdout, indent=2)
    sys.stdout.write("\n")
