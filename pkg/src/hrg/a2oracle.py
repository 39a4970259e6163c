"""Compiled exhaustive confluence oracle for the triangle-group rewriting.

Words over the 14-letter signed alphabet are encoded base 15 (digit 0
terminates), so every word of length <= 7 is an int below 15^7 and the
visited set is a flat byte array.  Components of the bounded move graph are
flooded once; every newly reached word must normalize to the component root.
The move set is symmetric (insert/delete inverse pairs, insert/delete relator
words, contract/expand through a triple), so components never straddle two
fibers silently: any merge would surface as a node failing the root check.

The python reference implementation lives in a2words.confluence_oracle; this
module must agree with it on small scales (tested), and exists because the
stated scale (start length 5, closure length 7) visits tens of millions of
words.
"""

from __future__ import annotations

from typing import List, Tuple

import numpy as np

from .a2words import A2Calculus

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    njit = None

BASE = 15
CAP_LEN = 7
SPACE = BASE ** CAP_LEN


def _tables(calc: A2Calculus):
    """posc[x,y] = z or -1; swap_s/t for the right-form diamond; expansion
    lists per letter point."""
    P = len(calc.points)
    posc = np.full((P, P), -1, dtype=np.int8)
    for (x, y), z in calc.pos_contract.items():
        if z is not None:
            posc[x, y] = z
    swap_s = np.full((P, P), -1, dtype=np.int8)
    swap_t = np.full((P, P), -1, dtype=np.int8)
    for (x, y), (s, t) in calc.swap_right.items():
        swap_s[x, y] = s
        swap_t[x, y] = t
    trips = np.array(sorted(calc.t.triples), dtype=np.int8)
    return posc, swap_s, swap_t, trips


if njit is not None:

    @njit(cache=True)
    def _decode(code, buf):
        L = 0
        n = code
        while n > 0:
            buf[L] = n % BASE - 1
            n //= BASE
            L += 1
        return L

    @njit(cache=True)
    def _encode(buf, L):
        out = 0
        for j in range(L - 1, -1, -1):
            out = out * BASE + (buf[j] + 1)
        return out

    @njit(cache=True)
    def _normalize_code(code, posc, swap_s, swap_t):
        buf = np.empty(CAP_LEN + 2, dtype=np.int8)
        L = _decode(code, buf)
        i = 0
        while i + 1 < L:
            a = buf[i]
            b = buf[i + 1]
            pa = a % 7
            pb = b % 7
            sa = a < 7
            sb = b < 7
            rewrote = True
            if sa != sb and pa == pb:
                for j in range(i, L - 2):
                    buf[j] = buf[j + 2]
                L -= 2
            elif sa and sb and posc[pa, pb] >= 0:
                buf[i] = posc[pa, pb] + 7
                for j in range(i + 1, L - 1):
                    buf[j] = buf[j + 1]
                L -= 1
            elif (not sa) and (not sb) and posc[pb, pa] >= 0:
                buf[i] = posc[pb, pa]
                for j in range(i + 1, L - 1):
                    buf[j] = buf[j + 1]
                L -= 1
            elif (not sa) and sb and pa != pb:
                buf[i] = swap_s[pa, pb]
                buf[i + 1] = swap_t[pa, pb] + 7
            else:
                rewrote = False
            if rewrote:
                if i > 0:
                    i -= 1
            else:
                i += 1
        return _encode(buf, L)

    @njit(cache=True)
    def _run_oracle(max_start_len, cap_len, posc, swap_s, swap_t, trips, visited):
        nodes = 0
        edges = 0
        violations = 0
        first_bad = np.full(2, -1, dtype=np.int64)
        stack = np.empty(1 << 20, dtype=np.int64)
        ntrips = trips.shape[0]
        buf = np.empty(CAP_LEN + 4, dtype=np.int8)
        child = np.empty(CAP_LEN + 4, dtype=np.int8)
        digits = np.empty(max_start_len + 1, dtype=np.int8)

        for start_len in range(max_start_len + 1):
            for d in range(start_len):
                digits[d] = 0
            while True:
                code = 0
                for d in range(start_len - 1, -1, -1):
                    code = code * BASE + (digits[d] + 1)
                if visited[code] == 0:
                    root = _normalize_code(code, posc, swap_s, swap_t)
                    visited[code] = 1
                    nodes += 1
                    top = 0
                    stack[top] = code
                    top += 1
                    while top > 0:
                        top -= 1
                        cur = stack[top]
                        L = _decode(cur, buf)
                        # enumerate children into candidate codes
                        for i in range(L - 1):
                            a = buf[i]
                            b = buf[i + 1]
                            pa = a % 7
                            pb = b % 7
                            sa = a < 7
                            sb = b < 7
                            # cancellation
                            if sa != sb and pa == pb:
                                for j in range(i):
                                    child[j] = buf[j]
                                for j in range(i + 2, L):
                                    child[j - 2] = buf[j]
                                cc = _encode(child, L - 2)
                                edges += 1
                                if visited[cc] == 0:
                                    visited[cc] = 1
                                    nodes += 1
                                    if _normalize_code(cc, posc, swap_s, swap_t) != root:
                                        violations += 1
                                        if first_bad[0] == -1:
                                            first_bad[0] = cur
                                            first_bad[1] = cc
                                    stack[top] = cc
                                    top += 1
                            # contractions
                            z = -1
                            up = False
                            if sa and sb:
                                z = posc[pa, pb]
                            elif (not sa) and (not sb):
                                z = posc[pb, pa]
                                up = True
                            if z >= 0:
                                for j in range(i):
                                    child[j] = buf[j]
                                child[i] = z if up else z + 7
                                for j in range(i + 2, L):
                                    child[j - 1] = buf[j]
                                cc = _encode(child, L - 1)
                                edges += 1
                                if visited[cc] == 0:
                                    visited[cc] = 1
                                    nodes += 1
                                    if _normalize_code(cc, posc, swap_s, swap_t) != root:
                                        violations += 1
                                        if first_bad[0] == -1:
                                            first_bad[0] = cur
                                            first_bad[1] = cc
                                    stack[top] = cc
                                    top += 1
                        # relator deletions
                        for i in range(L - 2):
                            a = buf[i]
                            b = buf[i + 1]
                            c = buf[i + 2]
                            hit = False
                            if a < 7 and b < 7 and c < 7 and posc[a, b] == c:
                                hit = True
                            if a >= 7 and b >= 7 and c >= 7 and posc[c - 7, b - 7] == a - 7:
                                hit = True
                            if hit:
                                for j in range(i):
                                    child[j] = buf[j]
                                for j in range(i + 3, L):
                                    child[j - 3] = buf[j]
                                cc = _encode(child, L - 3)
                                edges += 1
                                if visited[cc] == 0:
                                    visited[cc] = 1
                                    nodes += 1
                                    if _normalize_code(cc, posc, swap_s, swap_t) != root:
                                        violations += 1
                                        if first_bad[0] == -1:
                                            first_bad[0] = cur
                                            first_bad[1] = cc
                                    stack[top] = cc
                                    top += 1
                        # expansions: one letter -> the two others of its triple
                        if L + 1 <= cap_len:
                            for i in range(L):
                                a = buf[i]
                                pa = a % 7
                                for ti in range(ntrips):
                                    if trips[ti, 2] != pa:
                                        continue
                                    x = trips[ti, 0]
                                    y = trips[ti, 1]
                                    for j in range(i):
                                        child[j] = buf[j]
                                    if a < 7:  # a_z = a_y^-1 a_x^-1
                                        child[i] = y + 7
                                        child[i + 1] = x + 7
                                    else:  # a_z^-1 = a_x a_y
                                        child[i] = x
                                        child[i + 1] = y
                                    for j in range(i + 1, L):
                                        child[j + 1] = buf[j]
                                    cc = _encode(child, L + 1)
                                    edges += 1
                                    if visited[cc] == 0:
                                        visited[cc] = 1
                                        nodes += 1
                                        if _normalize_code(cc, posc, swap_s, swap_t) != root:
                                            violations += 1
                                            if first_bad[0] == -1:
                                                first_bad[0] = cur
                                                first_bad[1] = cc
                                        stack[top] = cc
                                        top += 1
                        # inverse-pair insertions
                        if L + 2 <= cap_len:
                            for i in range(L + 1):
                                for pp in range(14):
                                    q = pp + 7 if pp < 7 else pp - 7
                                    for j in range(i):
                                        child[j] = buf[j]
                                    child[i] = pp
                                    child[i + 1] = q
                                    for j in range(i, L):
                                        child[j + 2] = buf[j]
                                    cc = _encode(child, L + 2)
                                    edges += 1
                                    if visited[cc] == 0:
                                        visited[cc] = 1
                                        nodes += 1
                                        if _normalize_code(cc, posc, swap_s, swap_t) != root:
                                            violations += 1
                                            if first_bad[0] == -1:
                                                first_bad[0] = cur
                                                first_bad[1] = cc
                                        stack[top] = cc
                                        top += 1
                        # relator insertions
                        if L + 3 <= cap_len:
                            for i in range(L + 1):
                                for ti in range(ntrips):
                                    x = trips[ti, 0]
                                    y = trips[ti, 1]
                                    zz = trips[ti, 2]
                                    for rep in range(2):
                                        for j in range(i):
                                            child[j] = buf[j]
                                        if rep == 0:
                                            child[i] = x
                                            child[i + 1] = y
                                            child[i + 2] = zz
                                        else:
                                            child[i] = zz + 7
                                            child[i + 1] = y + 7
                                            child[i + 2] = x + 7
                                        for j in range(i, L):
                                            child[j + 3] = buf[j]
                                        cc = _encode(child, L + 3)
                                        edges += 1
                                        if visited[cc] == 0:
                                            visited[cc] = 1
                                            nodes += 1
                                            if _normalize_code(cc, posc, swap_s, swap_t) != root:
                                                violations += 1
                                                if first_bad[0] == -1:
                                                    first_bad[0] = cur
                                                    first_bad[1] = cc
                                            stack[top] = cc
                                            top += 1
                        if top + 4096 >= stack.shape[0]:
                            bigger = np.empty(stack.shape[0] * 2, dtype=np.int64)
                            bigger[:top] = stack[:top]
                            stack = bigger
                # odometer
                if start_len == 0:
                    break
                d = 0
                while d < start_len:
                    digits[d] += 1
                    if digits[d] < 14:
                        break
                    digits[d] = 0
                    d += 1
                if d == start_len:
                    break
        return nodes, edges, violations, first_bad


def fast_confluence_oracle(calc: A2Calculus, max_start_len: int = 5,
                           closure_len: int = CAP_LEN
                           ) -> Tuple[int, int, int, Tuple[str, str]]:
    """(words visited, move edges checked, violations, first violating pair)."""
    if njit is None:
        raise RuntimeError("numba unavailable; use a2words.confluence_oracle")
    if len(calc.points) != 7:
        raise ValueError("oracle encoding assumes the 7-point plane")
    if closure_len > CAP_LEN:
        raise ValueError(f"closure length above {CAP_LEN} needs a wider encoding")
    posc, swap_s, swap_t, trips = _tables(calc)
    visited = np.zeros(SPACE, dtype=np.uint8)
    nodes, edges, violations, first_bad = _run_oracle(
        max_start_len, closure_len, posc, swap_s, swap_t, trips, visited)
    pair = ("", "")
    if int(first_bad[0]) >= 0:
        pair = (_decode_py(int(first_bad[0])), _decode_py(int(first_bad[1])))
    return nodes, edges, violations, pair


def _decode_py(code: int) -> str:
    toks: List[str] = []
    while code > 0:
        d = code % BASE - 1
        code //= BASE
        toks.append(f"a{d}" if d < 7 else f"a{d - 7}^-1")
    return " ".join(toks) if toks else "1"


def cross_check_small(calc: A2Calculus, max_start_len: int = 2,
                      closure_len: int = 4) -> bool:
    """Agreement of the compiled oracle with the python reference at a scale
    where both run: same visited count and zero violations."""
    from .a2words import confluence_oracle

    nodes_py, _, bad_py = confluence_oracle(calc, max_start_len, closure_len)
    nodes_nb, _, bad_nb, _ = fast_confluence_oracle(calc, max_start_len, closure_len)
    return nodes_py == nodes_nb and not bad_py and bad_nb == 0
