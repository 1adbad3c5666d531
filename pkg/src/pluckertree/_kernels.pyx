# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_kernels_py`` for the reference versions."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, int8_t, uint8_t

cnp.import_array()


cdef inline int popcount64(uint64_t x) nogil:
    return __builtin_popcountll(x)

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def admissible_relations(int n, int d, eps_in, known_in, verts_in):
    cdef int8_t[::1] eps = np.ascontiguousarray(eps_in, dtype=np.int8)
    cdef uint8_t[::1] known = np.ascontiguousarray(known_in, dtype=np.uint8)
    cdef int64_t[::1] verts = np.ascontiguousarray(sorted(verts_in), dtype=np.int64)
    cdef int nv = verts.shape[0]
    cdef int k = d - 1
    cdef int i, j, t, m, nr
    cdef int64_t smask, ka, kb
    cdef int inv, kbits, na, nb, c, ok
    cdef int64_t q[4]
    cdef int64_t rest[64]
    cdef int above[64]
    cdef int idx[64]
    cdef int qi[4]
    cdef int pairs[12]
    cdef int alt[3]
    pairs[:] = [0, 1, 2, 3, 0, 2, 1, 3, 0, 3, 1, 2]
    alt[:] = [1, -1, 1]
    cdef int cap = 1024
    cdef int64_t count = 0
    out = np.zeros((cap, 15), dtype=np.int64)
    cdef int64_t[:, ::1] ov = out
    cdef int64_t row[15]

    if nv > 64 or k < 0 or k > nv:
        return out[:0]
    for i in range(k):
        idx[i] = i
    while True:
        smask = 0
        for i in range(k):
            smask |= (<int64_t>1) << verts[idx[i]]
        nr = 0
        for i in range(nv):
            if not ((smask >> verts[i]) & 1):
                rest[nr] = verts[i]
                above[nr] = popcount64(<uint64_t>(smask >> (verts[i] + 1)))
                nr += 1
        if nr >= 4:
            qi[0] = 0; qi[1] = 1; qi[2] = 2; qi[3] = 3
            while True:
                ok = 1
                kbits = 0
                inv = above[qi[0]] + above[qi[1]] + above[qi[2]] + above[qi[3]]
                for t in range(3):
                    ka = smask | ((<int64_t>1) << rest[qi[pairs[4 * t]]]) | ((<int64_t>1) << rest[qi[pairs[4 * t + 1]]])
                    kb = smask | ((<int64_t>1) << rest[qi[pairs[4 * t + 2]]]) | ((<int64_t>1) << rest[qi[pairs[4 * t + 3]]])
                    na = known[ka]
                    nb = known[kb]
                    if na == 0 and nb == 0:
                        ok = 0
                        break
                    c = alt[t] * eps[ka] * eps[kb]
                    if inv & 1:
                        c = -c
                    row[5 + t] = c
                    row[8 + 2 * t] = ka
                    row[9 + 2 * t] = kb
                    kbits |= ((1 if na else 0) << (2 * t)) | ((1 if nb else 0) << (2 * t + 1))
                if ok:
                    if count == cap:
                        cap *= 2
                        out = np.resize(out, (cap, 15))
                        ov = out
                    ov[count, 0] = smask
                    for j in range(4):
                        ov[count, 1 + j] = rest[qi[j]]
                    for j in range(5, 14):
                        ov[count, j] = row[j]
                    ov[count, 14] = kbits
                    count += 1
                # next quadruple
                j = 3
                while j >= 0 and qi[j] == nr - 4 + j:
                    j -= 1
                if j < 0:
                    break
                qi[j] += 1
                for m in range(j + 1, 4):
                    qi[m] = qi[m - 1] + 1
        # next S
        i = k - 1
        while i >= 0 and idx[i] == nv - k + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for m in range(i + 1, k):
            idx[m] = idx[m - 1] + 1
    return out[:count].copy()
