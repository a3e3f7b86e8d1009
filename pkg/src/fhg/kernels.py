"""Hot inner loops, compiled with numba when available.

Every kernel works on integer-scaled exact values. Accumulators are passed in
by the caller so the same code runs on ``int64`` arrays (compiled) or on
``object`` arrays of Python ints (uncompiled, used when int64 could overflow).
Invalid table entries hold the caller-supplied ``neg`` sentinel, which absorbs
addition.
"""
import numpy as np

from ._jit import njit

# block roles of the parent cut vertex
ISO, CL, SC, SL = 0, 1, 2, 3
ROLE_NAMES = ("iso", "cl", "sc", "sl")

# cut-table rows; star-center rows follow at SC_BASE + l - 1
G_ISO, G_CL, G_SL, SC_BASE = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# partition enumeration


@njit
def _assign(i, j, W, A, a, bw, bs, be, s, deg):
    a[i] = j
    bs[j] += 1
    for u in range(i):
        if a[u] == j:
            w = W[i, u]
            bw[j] += w
            s[u] += w
            s[i] += w
            if A[i, u]:
                be[j] += 1
                deg[u] += 1
                deg[i] += 1


@njit
def _unassign(i, j, W, A, a, bw, bs, be, s, deg):
    bs[j] -= 1
    for u in range(i):
        if a[u] == j:
            w = W[i, u]
            bw[j] -= w
            s[u] -= w
            s[i] -= w
            if A[i, u]:
                be[j] -= 1
                deg[u] -= 1
                deg[i] -= 1


@njit
def _clique_or_star(nb, n, a, bs, be, deg):
    for j in range(nb):
        size = bs[j]
        edges = be[j]
        if size == 1 or edges == size * (size - 1) // 2:
            continue
        if edges != size - 1:
            return False
        hub = False
        for u in range(n):
            if a[u] == j and deg[u] == size - 1:
                hub = True
                break
        if not hub:
            return False
    return True


@njit
def _score(objective, nb, n, a, bw, bs, s, sc):
    if objective == 0:
        val = 2 * bw[0] * sc[bs[0]]
        for j in range(1, nb):
            val += 2 * bw[j] * sc[bs[j]]
        return val
    val = s[0] * sc[bs[a[0]]]
    for v in range(1, n):
        x = s[v] * sc[bs[a[v]]]
        if x < val:
            val = x
    return val


@njit
def best_partition(W, A, sc, objective, restrict_cs, max_blocks, tie_a, tie_b,
                   prefix, a, mx, bw, bs, be, s, deg, best_rgs):
    """Exhaustive search over set partitions in restricted-growth order.

    ``W`` holds scaled edge weights, ``sc[k] = L // k`` so that a coalition's
    utilitarian welfare is ``2 * weight * sc[size]`` in units of ``1/L``.
    Only partitions extending ``prefix`` are visited. Returns ``(found, best)``
    and writes the first optimal labelling into ``best_rgs``.
    """
    n = W.shape[0]
    p0 = prefix.shape[0]
    found = False
    best = sc[1] * 0
    top = -1
    for i in range(p0):
        _assign(i, prefix[i], W, A, a, bw, bs, be, s, deg)
        if prefix[i] > top:
            top = prefix[i]
    if p0 == n:
        nb = top + 1
        ok = max_blocks <= 0 or nb <= max_blocks
        if ok and tie_a >= 0 and a[tie_a] != a[tie_b]:
            ok = False
        if ok and restrict_cs:
            ok = _clique_or_star(nb, n, a, bs, be, deg)
        if ok:
            found = True
            best = _score(objective, nb, n, a, bw, bs, s, sc)
            for v in range(n):
                best_rgs[v] = a[v]
        for i in range(p0 - 1, -1, -1):
            _unassign(i, a[i], W, A, a, bw, bs, be, s, deg)
        return found, best
    mx[p0] = top
    pos = p0
    a[pos] = -1
    while pos >= p0:
        if a[pos] >= 0:
            _unassign(pos, a[pos], W, A, a, bw, bs, be, s, deg)
        j = a[pos] + 1
        if j > mx[pos] + 1 or (max_blocks > 0 and j >= max_blocks):
            a[pos] = -1
            pos -= 1
            continue
        if pos == tie_b and j != a[tie_a]:
            # only a[tie_a] can satisfy the tie; jump straight to it or give up
            if j < a[tie_a]:
                j = a[tie_a]
            else:
                a[pos] = -1
                pos -= 1
                continue
        _assign(pos, j, W, A, a, bw, bs, be, s, deg)
        if pos == n - 1:
            nb = mx[pos] + 1
            if j > mx[pos]:
                nb = j + 1
            ok = True
            if restrict_cs:
                ok = _clique_or_star(nb, n, a, bs, be, deg)
            if ok:
                val = _score(objective, nb, n, a, bw, bs, s, sc)
                if (not found) or val > best:
                    found = True
                    best = val
                    for v in range(n):
                        best_rgs[v] = a[v]
            continue
        nxt = mx[pos]
        if j > nxt:
            nxt = j
        mx[pos + 1] = nxt
        pos += 1
        a[pos] = -1
    for i in range(p0 - 1, -1, -1):
        _unassign(i, a[i], W, A, a, bw, bs, be, s, deg)
    return found, best


# ---------------------------------------------------------------------------
# max k-bin packing


@njit
def bin_packing_table(vals, caps, strides, dp, choice, neg):
    """Fill ``dp[i, state]`` = best value placing items ``0..i-1``.

    ``state`` is the mixed-radix code of the per-bin fill levels ``d_j``;
    ``choice[i, state]`` records the bin receiving item ``i - 1``.
    Returns the value of the full state (all capacities met).
    """
    n_items = vals.shape[0]
    k = vals.shape[1]
    n_states = dp.shape[1]
    for st in range(n_states):
        dp[0, st] = neg
    dp[0, 0] = neg * 0
    for i in range(1, n_items + 1):
        for st in range(n_states):
            dp[i, st] = neg
            choice[i, st] = -1
            for j in range(k):
                d = (st // strides[j]) % (caps[j] + 1)
                if d == 0:
                    continue
                prev = dp[i - 1, st - strides[j]]
                if prev == neg:
                    continue
                v = prev + vals[i - 1, j]
                if dp[i, st] == neg or v > dp[i, st]:
                    dp[i, st] = v
                    choice[i, st] = j
    return dp[n_items, n_states - 1]


# ---------------------------------------------------------------------------
# block-graph DP


@njit
def _add(x, y, neg):
    if x == neg or y == neg:
        return neg
    return x + y


@njit
def _local(role, plain, cp_leaf):
    """Welfare (in whole units) of the coalitions living inside one block.

    ``plain`` counts block vertices with no outside coalition members (the
    block's non-cut vertices plus children used in their isolated state).
    They form one clique; for ``sc``/``sl`` the parent cut vertex first takes
    one of them as its star partner. Returns ``(value, valid)``.
    """
    if role == ISO or cp_leaf:
        return max(plain - 1, 0), True
    if role == CL:
        return plain, plain >= 1
    if plain == 0:
        return 0, False
    return 1 + max(plain - 2, 0), True


@njit
def config_table(role, center, leaf, a, F, S, r, has_parent, unit, neg, tab, order):
    """Table over the free children of one block for a fixed configuration.

    ``center = -1`` is the configuration with no ``scu`` child. Otherwise
    child ``center`` is a star centre absorbing the leaf ``leaf`` from the
    block: a child index, ``m`` for a non-cut vertex, ``m + 1`` for the
    parent cut vertex. ``tab[i, kk]`` is the best value after the first ``i``
    free children (listed in ``order``) with ``kk`` of them isolated.
    Returns ``(n_free, base_k, p_offset, cp_leaf, ok)``.
    """
    m = a.shape[0]
    for i in range(m + 1):
        for kk in range(m + 1):
            tab[i, kk] = neg
    if not has_parent and role != ISO:
        return 0, 0, 0, False, False
    const = unit * 0
    base_k = 0
    p_off = r
    cp_leaf = False
    if center >= 0:
        if S[center] == neg:
            return 0, 0, 0, False, False
        const = S[center]
        if leaf == m:
            if r == 0:
                return 0, 0, 0, False, False
            p_off = r - 1
        elif leaf == m + 1:
            if role != SL or not has_parent:
                return 0, 0, 0, False, False
            cp_leaf = True
        else:
            if leaf == center or a[leaf] == neg:
                return 0, 0, 0, False, False
            const = const + a[leaf]
            base_k = 1
    n_free = 0
    for c in range(m):
        if c == center or (center >= 0 and c == leaf):
            continue
        order[n_free] = c
        n_free += 1
    h0, _ = _local(role, p_off, cp_leaf)
    tab[0, 0] = const + h0 * unit
    for i in range(1, n_free + 1):
        c = order[i - 1]
        for kk in range(i + 1):
            best = neg
            if kk >= 1:
                hp, _ = _local(role, p_off + kk - 1, cp_leaf)
                hn, _ = _local(role, p_off + kk, cp_leaf)
                best = _add(_add(tab[i - 1, kk - 1], a[c], neg), (hn - hp) * unit, neg)
            if kk <= i - 1:
                alt = _add(tab[i - 1, kk], F[c], neg)
                if best == neg or (alt != neg and alt > best):
                    best = alt
            tab[i, kk] = best
    return n_free, base_k, p_off, cp_leaf, True


@njit
def block_table(a, F, S, r, has_parent, unit, neg, fstar, src, tab, order):
    """``fstar[role, k]`` over all configurations; ``src`` names the winner.

    ``src = -1`` marks the no-``scu`` configuration, otherwise
    ``center * (m + 2) + leaf``. Ties keep the earlier configuration.
    """
    m = a.shape[0]
    for role in range(4):
        for k in range(m + 1):
            fstar[role, k] = neg
            src[role, k] = -2
    for role in range(4):
        for center in range(-1, m):
            n_leaf = 1 if center < 0 else m + 2
            for leaf in range(n_leaf):
                if center < 0:
                    leaf = -1
                n_free, base_k, p_off, cp_leaf, ok = config_table(
                    role, center, leaf, a, F, S, r, has_parent, unit, neg, tab, order)
                if not ok:
                    continue
                for kk in range(n_free + 1):
                    v = tab[n_free, kk]
                    if v == neg:
                        continue
                    _, valid = _local(role, p_off + kk, cp_leaf)
                    if not valid:
                        continue
                    k = kk + base_k
                    if fstar[role, k] == neg or v > fstar[role, k]:
                        fstar[role, k] = v
                        src[role, k] = -1 if center < 0 else center * (m + 2) + leaf


@njit
def cut_table(iso, cl, sc, sl, delta, neg, g):
    """Fill the cut-node table ``g[row, i]`` over the first ``i`` child blocks.

    ``delta[l]`` is the scaled welfare change from merging an ``l - 1``-leaf
    star with a single edge into an ``l``-leaf star.
    """
    d = iso.shape[0]
    rows = g.shape[0]
    for row in range(rows):
        g[row, 0] = neg
    g[G_ISO, 0] = neg * 0
    for i in range(1, d + 1):
        b = i - 1
        g[G_ISO, i] = _add(g[G_ISO, i - 1], iso[b], neg)
        best = _add(g[G_CL, i - 1], iso[b], neg)
        alt = _add(g[G_ISO, i - 1], cl[b], neg)
        if best == neg or (alt != neg and alt > best):
            best = alt
        g[G_CL, i] = best
        best = _add(g[G_SL, i - 1], iso[b], neg)
        alt = _add(g[G_ISO, i - 1], sl[b], neg)
        if best == neg or (alt != neg and alt > best):
            best = alt
        g[G_SL, i] = best
        for ell in range(1, d + 1):
            row = SC_BASE + ell - 1
            best = _add(g[row, i - 1], iso[b], neg)
            prev = g[G_ISO, i - 1] if ell == 1 else g[row - 1, i - 1]
            alt = _add(_add(prev, sc[b], neg), delta[ell], neg)
            if best == neg or (alt != neg and alt > best):
                best = alt
            g[row, i] = best


def empty_like_values(shape, dtype):
    if dtype == object:
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out
    return np.zeros(shape, dtype=dtype)
