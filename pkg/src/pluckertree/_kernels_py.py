"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Both implementations must return identical results; the test-suite runs
them side by side.
"""

from itertools import combinations

import numpy as np

# column layout of the relation table
COLS = ("S", "q0", "q1", "q2", "q3", "c0", "c1", "c2", "a0", "b0", "a1", "b1", "a2", "b2", "known")
PAIRS = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))
ALT = (1, -1, 1)


def admissible_relations(n, d, eps, known, verts):
    """Enumerate admissible ``+Γ(S|ijkl)`` over ``verts``.

    ``eps[mask]`` is the signature of the normal form of the solid with
    support ``mask`` and ``known[mask]`` its knownness (both indexable by
    bitmask, e.g. dense numpy arrays).  Returns an int64 array with the
    columns in ``COLS``; ``known`` packs the six knownness bits, bit
    ``2t`` for solid ``a_t`` and ``2t+1`` for ``b_t``.
    """
    verts = sorted(verts)
    rows = []
    for S in combinations(verts, d - 1):
        smask = 0
        for v in S:
            smask |= 1 << v
        rest = [v for v in verts if not (smask >> v) & 1]
        # above[v] = number of elements of S greater than v
        above = {v: (smask >> (v + 1)).bit_count() for v in rest}
        for q in combinations(rest, 4):
            row = [smask, q[0], q[1], q[2], q[3], 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]
            kbits = 0
            ok = True
            for t in range(3):
                p1, p2, p3, p4 = PAIRS[t]
                x, y, z, w = q[p1], q[p2], q[p3], q[p4]
                ka = smask | (1 << x) | (1 << y)
                kb = smask | (1 << z) | (1 << w)
                na, nb = known[ka], known[kb]
                if not (na or nb):
                    ok = False
                    break
                inv = above[x] + above[y] + above[z] + above[w]
                c = ALT[t] * (-1 if inv & 1 else 1) * eps[ka] * eps[kb]
                row[5 + t] = c
                row[8 + 2 * t] = ka
                row[9 + 2 * t] = kb
                kbits |= (1 if na else 0) << (2 * t) | (1 if nb else 0) << (2 * t + 1)
            if ok:
                row[14] = kbits
                rows.append(row)
    if not rows:
        return np.zeros((0, len(COLS)), dtype=np.int64)
    return np.array(rows, dtype=np.int64)
