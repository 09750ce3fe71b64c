# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel.

Line-for-line port of ``_pure.py``; see that module for the semantics and
the layout of the uniform draw blocks.
"""
import numpy as np
cimport numpy as cnp

from libc.string cimport memcpy

cnp.import_array()

cdef enum:
    MAX_BUILD = 16
    MAX_WITNESSES = 2
    MAX_ENTITIES = 64
    BUILD_DRAWS = 1 + 4 * (MAX_BUILD + MAX_WITNESSES) + 1
    ATTEMPT_DRAWS = 4
    MAX_PATTERNS = 8
    NVC_CODE = 8

ctypedef struct Model:
    int n
    int ent[MAX_ENTITIES][3]


cdef struct Tables:
    int prem[2][3]
    int figure
    double eps
    int canon[4][MAX_PATTERNS][2]
    int n_canon[4]
    int broad[4][MAX_PATTERNS][2]
    int n_broad[4]
    int n_sizes
    double size_cdf[MAX_BUILD]
    int n_add
    int add_pats[8][3]


cdef inline int pick(double u, int n) nogil:
    cdef int i = <int>(u * n)
    if i >= n:
        return n - 1
    return i


cdef inline bint holds(Model* m, int mood, int subj, int obj) nogil:
    cdef int n_subj = 0, n_both = 0, i
    for i in range(m.n):
        if m.ent[i][subj] == 1:
            n_subj += 1
            if m.ent[i][obj] == 1:
                n_both += 1
    if mood == 0:
        return n_subj > 0 and n_both == n_subj
    if mood == 1:
        return n_subj > 0 and n_both == 0
    if mood == 2:
        return n_both > 0
    return n_both < n_subj


cdef inline bint premises_hold(Model* m, Tables* t) nogil:
    return (holds(m, t.prem[0][0], t.prem[0][1], t.prem[0][2])
            and holds(m, t.prem[1][0], t.prem[1][1], t.prem[1][2]))


cdef inline bint conclusion_holds(Model* m, int code) nogil:
    cdef int mood = code // 2
    if code % 2 == 0:
        return holds(m, mood, 0, 2)
    return holds(m, mood, 2, 0)


cdef inline void seed_entity(int* ent, int p, double u1, double u2, Tables* t) nogil:
    cdef int mood = t.prem[p][0], subj = t.prem[p][1], obj = t.prem[p][2], k
    if u1 < t.eps:
        k = pick(u2, t.n_broad[mood])
        ent[subj] = t.broad[mood][k][0]
        ent[obj] = t.broad[mood][k][1]
    else:
        k = pick(u2, t.n_canon[mood])
        ent[subj] = t.canon[mood][k][0]
        ent[obj] = t.canon[mood][k][1]


cdef inline void complete_entity(int* ent, int p, double u1, double u2, Tables* t) nogil:
    cdef int mood = t.prem[p][0], subj = t.prem[p][1], obj = t.prem[p][2]
    cdef int bpos, end, count, k, n_idx = 0
    cdef int idx[MAX_PATTERNS]
    cdef bint has_b = ent[1] == 1
    if subj == 1:
        bpos = 0
        end = obj
    else:
        bpos = 1
        end = subj
    if u1 < t.eps:
        count = t.n_broad[mood]
        for k in range(count):
            if (t.broad[mood][k][bpos] == 1) == has_b:
                idx[n_idx] = k
                n_idx += 1
        if n_idx == 0:
            return
        k = idx[pick(u2, n_idx)]
        ent[end] = t.broad[mood][k][1 - bpos]
    else:
        count = t.n_canon[mood]
        for k in range(count):
            if (t.canon[mood][k][bpos] == 1) == has_b:
                idx[n_idx] = k
                n_idx += 1
        if n_idx == 0:
            return
        k = idx[pick(u2, n_idx)]
        ent[end] = t.canon[mood][k][1 - bpos]


cdef inline int sample_size(double u, Tables* t) nogil:
    cdef int i
    for i in range(t.n_sizes):
        if u < t.size_cdf[i]:
            return i + 2
    return t.n_sizes + 1


cdef void build(Model* m, Tables* t, const double* u) nogil:
    cdef int n = sample_size(u[0], t), i, p, base, slot, mood, subj, obj
    m.n = 0
    for i in range(n):
        p = i % 2
        base = 1 + 4 * i
        m.ent[i][0] = 0
        m.ent[i][1] = 0
        m.ent[i][2] = 0
        seed_entity(m.ent[i], p, u[base], u[base + 1], t)
        complete_entity(m.ent[i], 1 - p, u[base + 2], u[base + 3], t)
        m.n += 1
    slot = n
    for p in range(2):
        mood = t.prem[p][0]
        subj = t.prem[p][1]
        obj = t.prem[p][2]
        if holds(m, mood, subj, obj):
            continue
        base = 1 + 4 * slot
        slot += 1
        i = m.n
        m.ent[i][0] = 0
        m.ent[i][1] = 0
        m.ent[i][2] = 0
        m.ent[i][subj] = t.canon[mood][0][0]
        m.ent[i][obj] = t.canon[mood][0][1]
        complete_entity(m.ent[i], 1 - p, u[base + 2], u[base + 3], t)
        m.n += 1


cdef int scan(Model* m, Tables* t, double u_tie) nogil:
    cdef int mood1 = t.prem[0][0], mood2 = t.prem[1][0]
    cdef bint negative = mood1 == 1 or mood1 == 3 or mood2 == 1 or mood2 == 3
    cdef bint universal = (mood1 == 0 or mood1 == 1) and (mood2 == 0 or mood2 == 1)
    cdef int moods[2]
    cdef int j, mood
    cdef bint ac, ca
    if negative:
        moods[0] = 1 if universal else -1
        moods[1] = 3
    else:
        moods[0] = 0 if universal else -1
        moods[1] = 2
    for j in range(2):
        mood = moods[j]
        if mood < 0:
            continue
        ac = holds(m, mood, 0, 2)
        ca = holds(m, mood, 2, 0)
        if ac and ca:
            if t.figure == 1:
                return 2 * mood
            if t.figure == 2:
                return 2 * mood + 1
            return 2 * mood + (0 if u_tie < 0.5 else 1)
        if ac:
            return 2 * mood
        if ca:
            return 2 * mood + 1
    return NVC_CODE


cdef inline bint counter_instance(int* pat, int mood, int x, int y) nogil:
    if mood == 0:
        return pat[x] == 1 and pat[y] != 1
    if mood == 1:
        return pat[x] == 1 and pat[y] == 1
    return False


cdef bint mutate(Model* src, Model* dst, int op, double u1, double u2, double u3,
                 Tables* t, int target) nogil:
    cdef int n = src.n, i, j, k, k1, t1, t2, n_present, n_rest, n_pool, n_src, n_dst
    cdef int mood = -1, x = -1, y = -1
    cdef int present[3]
    cdef int rest[3]
    cdef int pool[8]
    cdef int cand[MAX_ENTITIES]
    cdef int cand2[MAX_ENTITIES]
    if target >= 0:
        mood = target // 2
        if target % 2 == 0:
            x = 0
            y = 2
        else:
            x = 2
            y = 0
    if op == 0:
        if n >= MAX_ENTITIES:
            return False
        n_pool = 0
        if target >= 0:
            for k in range(t.n_add):
                if counter_instance(t.add_pats[k], mood, x, y):
                    pool[n_pool] = k
                    n_pool += 1
        if n_pool == 0:
            for k in range(t.n_add):
                pool[k] = k
            n_pool = t.n_add
        memcpy(dst, src, sizeof(Model))
        k = pool[pick(u1, n_pool)]
        dst.ent[n][0] = t.add_pats[k][0]
        dst.ent[n][1] = t.add_pats[k][1]
        dst.ent[n][2] = t.add_pats[k][2]
        dst.n = n + 1
        return True
    if op == 1:
        if n < 2:
            return False
        i = -1
        j = -1
        t1 = -1
        if mood == 0 or mood == 2:
            n_src = 0
            for k in range(n):
                if src.ent[k][x] == 1 and src.ent[k][y] == 1:
                    cand[n_src] = k
                    n_src += 1
            if n_src > 0:
                i = cand[pick(u1, n_src)]
                t1 = y if u2 < 0.5 else x
                j = pick(u3, n - 1)
                if j >= i:
                    j += 1
        elif mood == 1 or mood == 3:
            n_dst = 0
            for k in range(n):
                if src.ent[k][x] == 1 and src.ent[k][y] != 1:
                    cand[n_dst] = k
                    n_dst += 1
            if n_dst > 0:
                j = cand[pick(u1, n_dst)]
                n_src = 0
                for k in range(n):
                    if k != j and src.ent[k][y] == 1:
                        cand2[n_src] = k
                        n_src += 1
                if n_src > 0:
                    i = cand2[pick(u2, n_src)]
                    t1 = y
        if i < 0:
            i = pick(u1, n)
            n_present = 0
            for k in range(3):
                if src.ent[i][k] == 1:
                    present[n_present] = k
                    n_present += 1
            if n_present == 0:
                return False
            t1 = present[pick(u2, n_present)]
            j = pick(u3, n - 1)
            if j >= i:
                j += 1
        memcpy(dst, src, sizeof(Model))
        dst.ent[i][t1] = 0
        if dst.ent[i][0] == 0 and dst.ent[i][1] == 0 and dst.ent[i][2] == 0:
            return False
        dst.ent[j][t1] = 1
        return True
    if n >= MAX_ENTITIES:
        return False
    n_src = 0
    if mood == 0 or mood == 2:
        for k in range(n):
            if src.ent[k][x] == 1 and src.ent[k][y] == 1:
                cand[n_src] = k
                n_src += 1
    if n_src > 0:
        i = cand[pick(u1, n_src)]
        t1 = y
        t2 = x
    else:
        i = pick(u1, n)
        n_present = 0
        for k in range(3):
            if src.ent[i][k] == 1:
                present[n_present] = k
                n_present += 1
        if n_present < 2:
            return False
        k1 = pick(u2, n_present)
        t1 = present[k1]
        n_rest = 0
        for k in range(n_present):
            if k != k1:
                rest[n_rest] = present[k]
                n_rest += 1
        t2 = rest[pick(u3, n_rest)]
    for k in range(i + 1):
        dst.ent[k][0] = src.ent[k][0]
        dst.ent[k][1] = src.ent[k][1]
        dst.ent[k][2] = src.ent[k][2]
    dst.ent[i + 1][0] = src.ent[i][0]
    dst.ent[i + 1][1] = src.ent[i][1]
    dst.ent[i + 1][2] = src.ent[i][2]
    for k in range(i + 1, n):
        dst.ent[k + 1][0] = src.ent[k][0]
        dst.ent[k + 1][1] = src.ent[k][1]
        dst.ent[k + 1][2] = src.ent[k][2]
    dst.ent[i][t1] = 0
    dst.ent[i + 1][t2] = 0
    dst.n = n + 1
    return True


cdef int search(Model* cur, Model* scratch, Tables* t, int candidate, int k,
                const double* u, int* attempts) nogil:
    """Returns 1 with the counterexample in ``cur``, else 0."""
    cdef int j, base, op
    cdef Model* tmp
    for j in range(k):
        base = 2 + ATTEMPT_DRAWS * j
        op = pick(u[base], 3)
        if not mutate(cur, scratch, op, u[base + 1], u[base + 2], u[base + 3], t, candidate):
            continue
        if not premises_hold(scratch, t):
            continue
        memcpy(cur, scratch, sizeof(Model))
        if not conclusion_holds(cur, candidate):
            attempts[0] = j + 1
            return 1
    attempts[0] = k
    return 0


cdef inline int weaken(int code) nogil:
    cdef int mood = code // 2, direction = code % 2
    if mood == 0:
        return 4 + direction
    if mood == 1:
        return 6 + direction
    return NVC_CODE


cdef int respond_one(Tables* t, double sigma, double omega, int k, const double* ub,
                     const double* us, Model* model, Model* scratch, long long* work) nogil:
    cdef int c, w, attempts = 0, found
    build(model, t, ub)
    work[0] += model.n
    c = scan(model, t, ub[BUILD_DRAWS - 1])
    if c == NVC_CODE or us[0] >= sigma:
        return c
    found = search(model, scratch, t, c, k, us, &attempts)
    work[0] += attempts
    if not found:
        return c
    if us[1] < omega:
        w = weaken(c)
        if w != NVC_CODE and conclusion_holds(model, w):
            return w
    return NVC_CODE


def simulate_runs(prem, int figure, double eps, double sigma, double omega, int k,
                  size_cdf, canon, n_canon, broad, n_broad, add_pats,
                  build_u, search_u):
    cdef Tables t
    cdef int i, j, r, n_runs
    cdef long long work = 0
    cdef Model model, scratch
    cdef cnp.int32_t[:, ::1] prem_v = np.ascontiguousarray(prem, dtype=np.int32)
    cdef cnp.int32_t[:, :, ::1] canon_v = np.ascontiguousarray(canon, dtype=np.int32)
    cdef cnp.int32_t[:, :, ::1] broad_v = np.ascontiguousarray(broad, dtype=np.int32)
    cdef cnp.int32_t[::1] nc_v = np.ascontiguousarray(n_canon, dtype=np.int32)
    cdef cnp.int32_t[::1] nb_v = np.ascontiguousarray(n_broad, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] add_v = np.ascontiguousarray(add_pats, dtype=np.int32)
    cdef double[::1] cdf_v = np.ascontiguousarray(size_cdf, dtype=np.float64)
    cdef double[:, ::1] bu = np.ascontiguousarray(build_u, dtype=np.float64)
    cdef double[:, ::1] su = np.ascontiguousarray(search_u, dtype=np.float64)

    if bu.shape[1] != BUILD_DRAWS:
        raise ValueError(f"build block must have {BUILD_DRAWS} columns")
    if su.shape[1] != 2 + ATTEMPT_DRAWS * k:
        raise ValueError("search block width does not match k")
    if cdf_v.shape[0] > MAX_BUILD or add_v.shape[0] > 8 or add_v.shape[0] == 0:
        raise ValueError("table sizes out of range")
    if bu.shape[0] != su.shape[0]:
        raise ValueError("build and search blocks disagree on run count")

    for i in range(2):
        for j in range(3):
            t.prem[i][j] = prem_v[i, j]
    t.figure = figure
    t.eps = eps
    for i in range(4):
        t.n_canon[i] = nc_v[i]
        t.n_broad[i] = nb_v[i]
        for j in range(MAX_PATTERNS):
            t.canon[i][j][0] = canon_v[i, j, 0]
            t.canon[i][j][1] = canon_v[i, j, 1]
            t.broad[i][j][0] = broad_v[i, j, 0]
            t.broad[i][j][1] = broad_v[i, j, 1]
    t.n_sizes = cdf_v.shape[0]
    for i in range(t.n_sizes):
        t.size_cdf[i] = cdf_v[i]
    t.n_add = add_v.shape[0]
    for i in range(t.n_add):
        for j in range(3):
            t.add_pats[i][j] = add_v[i, j]

    n_runs = bu.shape[0]
    out = np.empty(n_runs, dtype=np.int32)
    cdef cnp.int32_t[::1] out_v = out
    with nogil:
        for r in range(n_runs):
            out_v[r] = respond_one(&t, sigma, omega, k, &bu[r, 0], &su[r, 0],
                                   &model, &scratch, &work)
    return out, int(work)
