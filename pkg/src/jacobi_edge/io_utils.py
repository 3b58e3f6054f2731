"""Canonical serialization helpers.

Artifacts must be byte-identical across runs for the same job: JSON is
emitted with sorted keys and fixed separators, rationals as lowest-term
strings, and floats through a fixed 17-significant-digit format.
"""

from __future__ import annotations

import json


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True) + "\n"


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(canonical_json(obj))


def fmt_float(x: float) -> str:
    return "%.17g" % float(x)


def write_curve_csv(path, xs, ys, header=("s", "value")):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for x, y in zip(xs, ys):
            fh.write("%s,%s\n" % (fmt_float(x), fmt_float(y)))


def write_curve_json(path, xs, ys, header=("s", "value")):
    kx, ky = header
    rows = [{kx: fmt_float(x), ky: fmt_float(y)} for x, y in zip(xs, ys)]
    write_json(path, rows)


def write_samples_csv(path, values):
    with open(path, "w") as fh:
        for v in values:
            fh.write(fmt_float(float(v)) + "\n")
