"""Compiled brute-force evaluator for batches of small graphs.

Every graph in a batch has the same vertex count and edge count. Each edge
has two ends; colouring the edge with ``c`` adds ``end_a[c]`` to the table
code of its first endpoint and ``end_b[c]`` to that of its second. For
undirected graphs both arrays hold the same strides; for directed graphs the
tail receives the out-stride and the head the in-stride. Colourings are
walked as an odometer so each step touches O(1) codes on average.

Callers guarantee (by a magnitude bound) that no int64 overflow can occur.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def eval_rational(edges, n, k, end_a, end_b, table, out):
    B, m = edges.shape[0], edges.shape[1]
    codes = np.zeros(n, dtype=np.int64)
    digits = np.zeros(m, dtype=np.int64)
    for b in range(B):
        if k == 0 and m > 0:
            out[b] = 0
            continue
        codes[:] = 0
        digits[:] = 0
        for j in range(m):
            codes[edges[b, j, 0]] += end_a[0]
            codes[edges[b, j, 1]] += end_b[0]
        total = 0
        while True:
            prod = 1
            for v in range(n):
                t = table[codes[v]]
                if t == 0:
                    prod = 0
                    break
                prod *= t
            total += prod
            # advance the odometer
            j = 0
            while j < m:
                c = digits[j]
                u = edges[b, j, 0]
                w = edges[b, j, 1]
                if c + 1 < k:
                    codes[u] += end_a[c + 1] - end_a[c]
                    codes[w] += end_b[c + 1] - end_b[c]
                    digits[j] = c + 1
                    break
                codes[u] += end_a[0] - end_a[c]
                codes[w] += end_b[0] - end_b[c]
                digits[j] = 0
                j += 1
            if j == m:
                break
        out[b] = total


@njit(cache=True)
def eval_gaussian(edges, n, k, end_a, end_b, table_re, table_im, out_re, out_im):
    B, m = edges.shape[0], edges.shape[1]
    codes = np.zeros(n, dtype=np.int64)
    digits = np.zeros(m, dtype=np.int64)
    for b in range(B):
        if k == 0 and m > 0:
            out_re[b] = 0
            out_im[b] = 0
            continue
        codes[:] = 0
        digits[:] = 0
        for j in range(m):
            codes[edges[b, j, 0]] += end_a[0]
            codes[edges[b, j, 1]] += end_b[0]
        tot_re = 0
        tot_im = 0
        while True:
            pr = 1
            pi = 0
            for v in range(n):
                a = table_re[codes[v]]
                c2 = table_im[codes[v]]
                if a == 0 and c2 == 0:
                    pr = 0
                    pi = 0
                    break
                nr = pr * a - pi * c2
                pi = pr * c2 + pi * a
                pr = nr
            tot_re += pr
            tot_im += pi
            j = 0
            while j < m:
                c = digits[j]
                u = edges[b, j, 0]
                w = edges[b, j, 1]
                if c + 1 < k:
                    codes[u] += end_a[c + 1] - end_a[c]
                    codes[w] += end_b[c + 1] - end_b[c]
                    digits[j] = c + 1
                    break
                codes[u] += end_a[0] - end_a[c]
                codes[w] += end_b[0] - end_b[c]
                digits[j] = 0
                j += 1
            if j == m:
                break
        out_re[b] = tot_re
        out_im[b] = tot_im
