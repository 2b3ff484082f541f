"""Compiled copy of ``GridTopology`` for the fixture searches.

``evaluate(signs, choices)`` takes signs[j][i] in {+1,-1} and choice codes
(0 odd square, 1 A, 2 B, 3 N) and returns curve component count, node count,
and per sign the blown-up region components as (chi, orientable) plus the
number of empty ovals of that sign.  Cross-checked against the package.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _find(p, x):
    while p[x] != x:
        p[x] = p[p[x]]
        x = p[x]
    return x


@njit(cache=True)
def _union(p, a, b):
    ra = _find(p, a)
    rb = _find(p, b)
    if ra != rb:
        p[rb] = ra


@njit(cache=True)
def _core(signs, choices):
    b = signs.shape[0] - 1
    a = signs.shape[1] - 1
    W = 2 * a
    H = 2 * b
    nv = W * H

    # vertex index of normalised (X, Y), X in (-a, a], Y in (-b, b]
    def vid(X, Y):
        if X == -a:
            X = a
        if Y == -b:
            Y = b
        return (Y + b - 1) * W + (X + a - 1)

    sign = np.zeros(nv, np.int64)
    for Y in range(-b + 1, b + 1):
        for X in range(-a + 1, a + 1):
            s = signs[abs(Y), abs(X)]
            if X < 0 and abs(X) % 2 == 1:
                s = -s
            if Y < 0 and abs(Y) % 2 == 1:
                s = -s
            sign[vid(X, Y)] = s
    fpar = np.arange(nv)
    # complex edges (for chi and orientation): up to 3 per square
    eu = np.zeros(3 * nv, np.int64)
    ev = np.zeros(3 * nv, np.int64)
    ne = 0
    full = np.zeros(nv, np.int64)  # full square count credited to corner c00
    # crossing edges: horizontal id = Yn*W + (X+a), vertical id = nv + ...
    cpar = np.arange(2 * nv)
    cused = np.zeros(2 * nv, np.bool_)
    bu = np.zeros(2 * nv, np.int64)
    bv = np.zeros(2 * nv, np.int64)
    bs = np.zeros(2 * nv, np.int64)
    nb = 0
    nodecorner = np.zeros(nv, np.bool_)
    for Y in range(-b, b):
        for X in range(-a, a):
            c00 = vid(X, Y)
            c10 = vid(X + 1, Y)
            c01 = vid(X, Y + 1)
            c11 = vid(X + 1, Y + 1)
            yb = Y if Y != -b else b
            yt = Y + 1 if Y + 1 != -b else b
            xl = X if X != -a else a
            xr = X + 1 if X + 1 != -a else a
            hb = (yb + b - 1) * W + (X + a)
            ht = (yt + b - 1) * W + (X + a)
            vl = nv + (Y + b) * W + (xl + a - 1)
            vr = nv + (Y + b) * W + (xr + a - 1)
            s00, s10, s01, s11 = sign[c00], sign[c10], sign[c01], sign[c11]
            if s00 == s10:
                eu[ne] = c00
                ev[ne] = c10
                ne += 1
                _union(fpar, c00, c10)
            if s00 == s01:
                eu[ne] = c00
                ev[ne] = c01
                ne += 1
                _union(fpar, c00, c01)
            kb = s00 != s10
            kr = s10 != s11
            kt = s01 != s11
            kl = s00 != s01
            n = kb + kr + kt + kl
            if kb:
                cused[hb] = True
            if kt:
                cused[ht] = True
            if kl:
                cused[vl] = True
            if kr:
                cused[vr] = True
            if n == 0:
                full[c00] += 1
            elif n == 2:
                first = -1
                for k in range(4):
                    e = hb if k == 0 else (vr if k == 1 else (ht if k == 2 else vl))
                    on = kb if k == 0 else (kr if k == 1 else (kt if k == 2 else kl))
                    if on:
                        if first < 0:
                            first = e
                        else:
                            _union(cpar, first, e)
            elif n == 4:
                i = X if X >= 0 else -X - 1
                j = Y if Y >= 0 else -Y - 1
                ch = choices[j, i]
                if ch == 3:
                    _union(cpar, hb, vr)
                    _union(cpar, hb, ht)
                    _union(cpar, hb, vl)
                    bu[nb] = c00
                    bv[nb] = c11
                    bs[nb] = s00
                    nb += 1
                    bu[nb] = c10
                    bv[nb] = c01
                    bs[nb] = s10
                    nb += 1
                    nodecorner[c00] = True
                    nodecorner[c10] = True
                    nodecorner[c01] = True
                    nodecorner[c11] = True
                else:
                    flipped = (X < 0) != (Y < 0)
                    main = (ch == 1) != flipped
                    if main:
                        eu[ne] = c00
                        ev[ne] = c11
                        ne += 1
                        _union(fpar, c00, c11)
                        _union(cpar, vl, ht)
                        _union(cpar, hb, vr)
                    else:
                        eu[ne] = c10
                        ev[ne] = c01
                        ne += 1
                        _union(fpar, c10, c01)
                        _union(cpar, hb, vl)
                        _union(cpar, vr, ht)
    # faces
    fv = np.zeros(nv, np.int64)
    fe = np.zeros(nv, np.int64)
    ff = np.zeros(nv, np.int64)
    fnode = np.zeros(nv, np.bool_)
    for v in range(nv):
        r = _find(fpar, v)
        fv[r] += 1
        ff[r] += full[v]
        if nodecorner[v]:
            fnode[r] = True
    for e in range(ne):
        fe[_find(fpar, eu[e])] += 1
    comps = 0
    for e in range(2 * nv):
        if cused[e] and _find(cpar, e) == e:
            comps += 1
    # empty ovals per sign
    eo_plus = 0
    eo_minus = 0
    for v in range(nv):
        if _find(fpar, v) == v:
            chi = fv[v] - fe[v] + ff[v]
            if chi == 1 and not fnode[v]:
                if sign[v] > 0:
                    eo_plus += 1
                else:
                    eo_minus += 1
    # regions for each sign: union faces by bands
    out_chi = np.zeros((2, nv), np.int64)
    out_ori = np.zeros((2, nv), np.bool_)
    out_n = np.zeros(2, np.int64)
    for si in range(2):
        sg = 1 if si == 0 else -1
        rpar = np.arange(nv)
        for k in range(nb):
            if bs[k] == sg:
                _union(rpar, _find(fpar, bu[k]), _find(fpar, bv[k]))
        rchi = np.zeros(nv, np.int64)
        for v in range(nv):
            if _find(fpar, v) == v and sign[v] == sg:
                rchi[_find(rpar, v)] += fv[v] - fe[v] + ff[v]
        for k in range(nb):
            if bs[k] == sg:
                rchi[_find(rpar, _find(fpar, bu[k]))] -= 1
        # orientation: 2-colour vertices, edges keep colour, bands swap
        colour = -np.ones(nv, np.int64)
        bad = np.zeros(nv, np.bool_)
        # adjacency lists via arrays
        deg = np.zeros(nv, np.int64)
        for e in range(ne):
            if sign[eu[e]] == sg:
                deg[eu[e]] += 1
                deg[ev[e]] += 1
        for k in range(nb):
            if bs[k] == sg:
                deg[bu[k]] += 1
                deg[bv[k]] += 1
        start = np.zeros(nv + 1, np.int64)
        for v in range(nv):
            start[v + 1] = start[v] + deg[v]
        fill = start[:-1].copy()
        adj = np.zeros(start[nv], np.int64)
        tw = np.zeros(start[nv], np.int64)
        for e in range(ne):
            if sign[eu[e]] == sg:
                adj[fill[eu[e]]] = ev[e]
                tw[fill[eu[e]]] = 0
                fill[eu[e]] += 1
                adj[fill[ev[e]]] = eu[e]
                tw[fill[ev[e]]] = 0
                fill[ev[e]] += 1
        for k in range(nb):
            if bs[k] == sg:
                adj[fill[bu[k]]] = bv[k]
                tw[fill[bu[k]]] = 1
                fill[bu[k]] += 1
                adj[fill[bv[k]]] = bu[k]
                tw[fill[bv[k]]] = 1
                fill[bv[k]] += 1
        stack = np.zeros(nv, np.int64)
        for v0 in range(nv):
            if sign[v0] != sg or colour[v0] >= 0:
                continue
            colour[v0] = 0
            top = 0
            stack[0] = v0
            top = 1
            while top > 0:
                top -= 1
                x = stack[top]
                for q in range(start[x], start[x + 1]):
                    y = adj[q]
                    want = colour[x] ^ tw[q]
                    if colour[y] < 0:
                        colour[y] = want
                        stack[top] = y
                        top += 1
                    elif colour[y] != want:
                        bad[_find(rpar, _find(fpar, x))] = True
        cnt = 0
        for v in range(nv):
            if _find(fpar, v) == v and sign[v] == sg and _find(rpar, v) == v:
                out_chi[si, cnt] = rchi[v]
                out_ori[si, cnt] = not bad[v]
                cnt += 1
        out_n[si] = cnt
    return comps, nb // 2, eo_plus, eo_minus, out_chi, out_ori, out_n


CODES = {"-": 0, "A": 1, "B": 2, "N": 3}


def evaluate(signs, choices):
    s = np.asarray(signs, dtype=np.int64)
    c = np.array([[CODES[x] if isinstance(x, str) else x for x in row] for row in choices], dtype=np.int64)
    comps, nodes, eop, eom, chi, ori, n = _core(s, c)
    regions = {1: sorted((int(chi[0, k]), bool(ori[0, k])) for k in range(n[0])),
               -1: sorted((int(chi[1, k]), bool(ori[1, k])) for k in range(n[1]))}
    return {"components": int(comps), "nodes": int(nodes), "empty_ovals": {1: int(eop), -1: int(eom)},
            "regions": regions}
