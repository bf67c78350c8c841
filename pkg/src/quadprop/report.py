"""Deterministic serialization: sorted-key JSON with 17-significant-digit
floats, and CSV direction reports."""

import numpy as np


def _fmt_float(x):
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("non-finite value in report")
    return format(float(x), ".17g")


def dumps(obj):
    """JSON text with sorted keys and fixed float formatting (byte-deterministic)."""
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        out = ['"']
        for ch in obj:
            if ch in '"\\':
                out.append("\\" + ch)
            elif ord(ch) < 0x20:
                out.append("\\u%04x" % ord(ch))
            else:
                out.append(ch)
        out.append('"')
        return "".join(out)
    if isinstance(obj, complex):
        return dumps({"re": obj.real, "im": obj.imag})
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(x) for x in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ",".join(dumps(str(k)) + ":" + dumps(v) for k, v in items) + "}"
    raise TypeError("cannot serialize %r" % type(obj))


def matrix_entry(M):
    """Complex matrix as {"re": [[..]], "im": [[..]]} with plain lists."""
    M = np.asarray(M, dtype=complex)
    return {"re": M.real.tolist(), "im": M.imag.tolist()}


def direction_rows(directions, exponents, flags):
    """CSV rows for a wavefront report: direction components, exponent, flag."""
    rows = []
    for d, e, f in zip(directions, exponents, flags):
        d = np.atleast_1d(np.asarray(d, dtype=complex))
        comps = []
        for c in d:
            comps.extend([_fmt_float(c.real), _fmt_float(c.imag)])
        rows.append(comps + [_fmt_float(e), "singular" if f else "regular"])
    return rows


def write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
