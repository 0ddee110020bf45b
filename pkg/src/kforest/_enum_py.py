"""Pure-Python edge-subset enumeration for the exact oracle.

``enumerate_profile`` returns, for every count ``j`` of unconnected demands,
the cheapest edge set leaving exactly ``j`` demands unconnected (``-1`` when
no edge set does). Edge sets are bitmasks over edge positions; cost ties go
to the lexicographically smallest sorted tuple of edge positions.

Subsets containing a cycle are skipped: with positive costs such a set is
never optimal, so the profile is the same as full enumeration.
"""


def lex_less(a: int, b: int) -> bool:
    d = a ^ b
    if d == 0:
        return False
    x = d & -d
    above = ~((x << 1) - 1)
    if a & x:
        return (b & above) != 0
    return (a & above) == 0


def enumerate_profile(n, us, vs, costs, ss, ts):
    E, m = len(us), len(ss)
    best = [-1] * (m + 1)
    best_mask = [0] * (m + 1)
    demands = list(zip(ss, ts))

    def leaf(mask, cost, label):
        bad = sum(1 for s, t in demands if label[s] != label[t])
        b = best[bad]
        if b < 0 or cost < b or (cost == b and lex_less(mask, best_mask[bad])):
            best[bad] = cost
            best_mask[bad] = mask

    def rec(i, mask, cost, label):
        if i == E:
            leaf(mask, cost, label)
            return
        rec(i + 1, mask, cost, label)
        a, b = label[us[i]], label[vs[i]]
        if a != b:
            merged = [a if x == b else x for x in label]
            rec(i + 1, mask | (1 << i), cost + costs[i], merged)

    rec(0, 0, 0, list(range(n + 1)))
    return best, best_mask
