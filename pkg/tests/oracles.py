"""Brute-force reference implementations.

These deliberately avoid the library's algorithms: joins are nested loops,
groups are found by linear scan, sorting is insertion sort with an explicit
comparator, aggregates use rational arithmetic, and singular values come from
the characteristic polynomial of the Gram matrix.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from tabframe import ColType, Frame

# ---------------------------------------------------------------------------
# relational


def rows_of(frame: Frame) -> list[list]:
    return [[frame.column(j)[i] for j in range(frame.col_count)] for i in range(frame.row_count)]


def frame_from_rows(names, types, rows, index=None) -> Frame:
    cols = [[r[j] for r in rows] for j in range(len(names))]
    return Frame(list(names), list(types), cols, index)


def nested_loop_join(left: Frame, right: Frame, on, kind: str) -> Frame:
    lpos = [left.columns.index(k) for k in on]
    rpos = [right.columns.index(k) for k in on]
    rextra = [j for j, c in enumerate(right.columns) if c not in on]
    names = list(left.columns)
    for j in rextra:
        c = right.columns[j]
        names.append(c + "_2" if c in left.columns else c)
    types = list(left.types) + [right.types[j] for j in rextra]

    out = []
    for lrow in rows_of(left):
        matched = False
        for rrow in rows_of(right):
            ok = True
            for a, b in zip(lpos, rpos):
                if lrow[a] is None or rrow[b] is None or lrow[a] != rrow[b]:
                    ok = False
            if ok:
                matched = True
                out.append(lrow + [rrow[j] for j in rextra])
        if not matched and kind == "left":
            out.append(lrow + [None] * len(rextra))
    return frame_from_rows(names, types, out)


def exact_sum(xs):
    return sum(Fraction(x) for x in xs)


def oracle_reduce(values, op: str, coltype: ColType):
    xs = [v for v in values if v is not None]
    if op == "count":
        return len(xs)
    if not xs:
        return None
    if op == "sum":
        total = exact_sum(xs)
        if not coltype.is_integer:
            return float(total)
        if not -(2**63) <= total < 2**63:
            raise OverflowError(total)
        return int(total)
    if op == "mean":
        return float(exact_sum(xs) / len(xs))
    if op == "std":
        if len(xs) == 1:
            return 0.0
        n = len(xs)
        s1 = exact_sum(xs)
        s2 = sum(Fraction(x) ** 2 for x in xs)
        return math.sqrt(float((s2 - s1 * s1 / n) / (n - 1)))
    if op == "median":
        ys = insertion_sorted(xs)
        mid = len(ys) // 2
        if len(ys) % 2:
            return float(ys[mid])
        return float((Fraction(ys[mid - 1]) + Fraction(ys[mid])) / 2)
    if op == "min":
        best = xs[0]
        for x in xs[1:]:
            if x < best:
                best = x
        return best
    if op == "max":
        best = xs[0]
        for x in xs[1:]:
            if x > best:
                best = x
        return best
    if op == "first":
        return xs[0]
    if op == "last":
        return xs[-1]
    raise AssertionError(op)


def oracle_result_type(op: str, t: ColType) -> ColType:
    if op == "count":
        return ColType.I64
    if op in ("mean", "std", "median"):
        return ColType.DD
    if op == "sum":
        return ColType.I64 if t in (ColType.I32, ColType.I64) else ColType.DD
    return t


def naive_group_aggregate(frame: Frame, keys, spec) -> Frame:
    kpos = [frame.columns.index(k) for k in keys]
    seen: list[tuple] = []
    members: list[list] = []
    for row in rows_of(frame):
        key = tuple(row[p] for p in kpos)
        for g, existing in enumerate(seen):
            if existing == key:
                members[g].append(row)
                break
        else:
            seen.append(key)
            members.append([row])
    names = list(keys)
    types = [frame.types[p] for p in kpos]
    for col, op in spec:
        names.append(f"{col}_{op}")
        types.append(oracle_result_type(op, frame.col_type(col)))
    out = []
    for key, rows in zip(seen, members):
        rec = list(key)
        for col, op in spec:
            p = frame.columns.index(col)
            rec.append(oracle_reduce([r[p] for r in rows], op, frame.types[p]))
        out.append(rec)
    return frame_from_rows(names, types, out)


def _compare(a, b) -> int:
    # Missing is the smallest value
    if a is None and b is None:
        return 0
    if a is None:
        return -1
    if b is None:
        return 1
    return (a > b) - (a < b)


def insertion_sorted(xs, cmp=_compare):
    out: list = []
    for x in xs:
        i = len(out)
        while i > 0 and cmp(out[i - 1], x) > 0:
            i -= 1
        out.insert(i, x)
    return out


def naive_sort(frame: Frame, keys) -> Frame:
    spec = [(frame.columns.index(n), asc) for n, asc in keys]

    def cmp(a, b):
        for p, asc in spec:
            c = _compare(a[1][p], b[1][p])
            if c:
                return c if asc else -c
        return 0

    ordered = insertion_sorted(list(zip(frame.index, rows_of(frame))), cmp)
    return frame_from_rows(frame.columns, frame.types, [r for _, r in ordered], [lab for lab, _ in ordered])


def naive_filter(frame: Frame, predicate, keep: bool = True) -> Frame:
    labels, rows = [], []
    for lab, row in zip(frame.index, rows_of(frame)):
        if bool(predicate(dict(zip(frame.columns, row)))) == keep:
            labels.append(lab)
            rows.append(row)
    return frame_from_rows(frame.columns, frame.types, rows, labels)


# ---------------------------------------------------------------------------
# numeric


def char_poly(m: np.ndarray) -> np.ndarray:
    """Characteristic polynomial coefficients (highest degree first) by Faddeev-LeVerrier."""
    n = m.shape[0]
    coeffs = [1.0]
    mk = np.zeros_like(m)
    ident = np.eye(n)
    for k in range(1, n + 1):
        mk = m @ mk + coeffs[-1] * ident
        coeffs.append(-np.trace(m @ mk) / k)
    return np.array(coeffs)


def gram_singular_values(a: np.ndarray) -> np.ndarray:
    """Singular values from the roots of det(G - lambda I), G the smaller Gram matrix."""
    a = np.asarray(a, dtype=float)
    g = a.T @ a if a.shape[1] <= a.shape[0] else a @ a.T
    poly = char_poly(g)
    roots = np.real(np.roots(poly))
    dpoly = np.polyder(poly)
    for _ in range(3):  # Newton polish
        d = np.polyval(dpoly, roots)
        step = np.where(np.abs(d) > 0, np.polyval(poly, roots) / np.where(d == 0, 1, d), 0.0)
        roots = roots - step
    return np.sort(np.sqrt(np.clip(roots, 0.0, None)))[::-1]


def brute_hankel(x, window: int) -> np.ndarray:
    k = len(x) - window + 1
    return np.array([[x[i + j] for j in range(k)] for i in range(window)], dtype=float)


def brute_diagonal_average(m: np.ndarray) -> np.ndarray:
    rows, cols = m.shape
    out = []
    for s in range(rows + cols - 1):
        cells = [m[i, s - i] for i in range(rows) if 0 <= s - i < cols]
        out.append(sum(cells) / len(cells))
    return np.array(out)


def brute_local_linear(x, y, w, at) -> float:
    """Weighted least-squares line evaluated at ``at`` via the normal equations."""
    sw = sum(w)
    sx = sum(wi * xi for wi, xi in zip(w, x))
    sy = sum(wi * yi for wi, yi in zip(w, y))
    sxx = sum(wi * xi * xi for wi, xi in zip(w, x))
    sxy = sum(wi * xi * yi for wi, xi, yi in zip(w, x, y))
    det = sw * sxx - sx * sx
    b = (sw * sxy - sx * sy) / det
    a = (sy - b * sx) / sw
    return a + b * at
