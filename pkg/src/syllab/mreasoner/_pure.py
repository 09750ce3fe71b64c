"""Pure-Python simulation kernel.

This module is the reference implementation; ``_kernel.pyx`` mirrors it
statement by statement and must consume the uniform draws identically.

Entities are 3-lists over the terms A, B, C with values 1 (present),
-1 (absent) and 0 (unspecified).  All truth checks read a model as a closed
world: a property is held only when it is marked present.

Random draws come from two pre-generated uniform blocks per run with a
fixed layout, so the draws are independent of the code path taken:

* build block (``BUILD_DRAWS``): ``[0]`` model size; entity slot ``i`` uses
  ``[1 + 4i, 5 + 4i)`` (seed set, seed pattern, completion set, completion
  pattern); the last entry breaks direction ties in the scan.
* search block (``2 + 4K``): ``[0]`` System-2 gate, ``[1]`` weaken gate;
  mutation attempt ``j`` uses ``[2 + 4j, 6 + 4j)``.
"""
from __future__ import annotations

import numpy as np

MOOD_A, MOOD_E, MOOD_I, MOOD_O = 0, 1, 2, 3
NVC_CODE = 8
OP_ADD, OP_MOVE, OP_BREAK = 0, 1, 2

MAX_BUILD = 16
MAX_WITNESSES = 2
MAX_ENTITIES = 64
BUILD_DRAWS = 1 + 4 * (MAX_BUILD + MAX_WITNESSES) + 1
ATTEMPT_DRAWS = 4


def search_draws(k: int) -> int:
    return 2 + ATTEMPT_DRAWS * k


def pick(u: float, n: int) -> int:
    i = int(u * n)
    return n - 1 if i >= n else i


def response_code(mood: int, direction: int) -> int:
    return 2 * mood + direction


def holds(model, mood: int, subj: int, obj: int) -> bool:
    n_subj = 0
    n_both = 0
    for e in model:
        if e[subj] == 1:
            n_subj += 1
            if e[obj] == 1:
                n_both += 1
    if mood == MOOD_A:
        return n_subj > 0 and n_both == n_subj
    if mood == MOOD_E:
        return n_subj > 0 and n_both == 0
    if mood == MOOD_I:
        return n_both > 0
    return n_both < n_subj


def premises_hold(model, prem) -> bool:
    return (holds(model, prem[0][0], prem[0][1], prem[0][2])
            and holds(model, prem[1][0], prem[1][1], prem[1][2]))


def conclusion_holds(model, code: int) -> bool:
    mood, direction = divmod(code, 2)
    if direction == 0:
        return holds(model, mood, 0, 2)
    return holds(model, mood, 2, 0)


def sample_size(u: float, size_cdf) -> int:
    for i in range(len(size_cdf)):
        if u < size_cdf[i]:
            return i + 2
    return len(size_cdf) + 1


def seed_entity(ent, p, eps, u1, u2, canon, n_canon, broad, n_broad):
    mood, subj, obj = p
    if u1 < eps:
        k = pick(u2, n_broad[mood])
        ent[subj] = broad[mood][k][0]
        ent[obj] = broad[mood][k][1]
    else:
        k = pick(u2, n_canon[mood])
        ent[subj] = canon[mood][k][0]
        ent[obj] = canon[mood][k][1]


def complete_entity(ent, p, eps, u1, u2, canon, n_canon, broad, n_broad):
    """Fill the end term of premise ``p`` from a pattern agreeing with the
    entity on the middle term; left unspecified when nothing agrees."""
    mood, subj, obj = p
    if subj == 1:
        bpos, end = 0, obj
    else:
        bpos, end = 1, subj
    has_b = ent[1] == 1
    if u1 < eps:
        table, count = broad[mood], n_broad[mood]
    else:
        table, count = canon[mood], n_canon[mood]
    idx = [k for k in range(count) if (table[k][bpos] == 1) == has_b]
    if not idx:
        return
    k = idx[pick(u2, len(idx))]
    ent[end] = table[k][1 - bpos]


def build(prem, eps, size_cdf, canon, n_canon, broad, n_broad, u):
    """Returns ``(entities, provenance)``; provenance 0/1 is the premise
    that seeded the entity."""
    n = sample_size(u[0], size_cdf)
    model = []
    prov = []
    for i in range(n):
        p = i % 2
        base = 1 + 4 * i
        ent = [0, 0, 0]
        seed_entity(ent, prem[p], eps, u[base], u[base + 1], canon, n_canon, broad, n_broad)
        complete_entity(ent, prem[1 - p], eps, u[base + 2], u[base + 3],
                        canon, n_canon, broad, n_broad)
        model.append(ent)
        prov.append(p)
    slot = n
    for p in range(2):
        mood, subj, obj = prem[p]
        if holds(model, mood, subj, obj):
            continue
        base = 1 + 4 * slot
        slot += 1
        ent = [0, 0, 0]
        ent[subj] = canon[mood][0][0]
        ent[obj] = canon[mood][0][1]
        complete_entity(ent, prem[1 - p], eps, u[base + 2], u[base + 3],
                        canon, n_canon, broad, n_broad)
        model.append(ent)
        prov.append(p)
    return model, prov


def allowed_moods(mood1: int, mood2: int) -> tuple[int, int]:
    """Universal then particular conclusion mood permitted by the premise
    moods: universal needs two universal premises, and any negative
    premise makes the conclusion negative."""
    negative = mood1 in (MOOD_E, MOOD_O) or mood2 in (MOOD_E, MOOD_O)
    universal = mood1 in (MOOD_A, MOOD_E) and mood2 in (MOOD_A, MOOD_E)
    if negative:
        return (MOOD_E if universal else -1), MOOD_O
    return (MOOD_A if universal else -1), MOOD_I


def scan(model, prem, figure, u_tie) -> int:
    for mood in allowed_moods(prem[0][0], prem[1][0]):
        if mood < 0:
            continue
        ac = holds(model, mood, 0, 2)
        ca = holds(model, mood, 2, 0)
        if ac and ca:
            if figure == 1:
                return response_code(mood, 0)
            if figure == 2:
                return response_code(mood, 1)
            return response_code(mood, 0 if u_tie < 0.5 else 1)
        if ac:
            return response_code(mood, 0)
        if ca:
            return response_code(mood, 1)
    return NVC_CODE


def _counter_instance(pat, mood, x, y) -> bool:
    if mood == MOOD_A:
        return pat[x] == 1 and pat[y] != 1
    if mood == MOOD_E:
        return pat[x] == 1 and pat[y] == 1
    return False


def mutate(model, op, u1, u2, u3, add_pats, target=-1):
    """One mutation on a copy of ``model``; None when not applicable.

    ``target`` is the response code being tested.  When given, each
    operation aims at entities that bear on it: ADD prefers an individual
    contradicting a universal, MOVE strips the conjunction an affirmative
    rests on or supplies the property a negative lacks, and BREAK splits an
    entity holding both end terms.  Without an applicable aim the operation
    acts on a uniformly chosen entity.
    """
    n = len(model)
    mood = x = y = -1
    if target >= 0:
        mood, direction = divmod(target, 2)
        x, y = (0, 2) if direction == 0 else (2, 0)
    if op == OP_ADD:
        if n >= MAX_ENTITIES:
            return None
        pool = [p for p in add_pats if _counter_instance(p, mood, x, y)] if target >= 0 else []
        if not pool:
            pool = add_pats
        new = [list(e) for e in model]
        new.append(list(pool[pick(u1, len(pool))]))
        return new
    if op == OP_MOVE:
        if n < 2:
            return None
        i = j = t = -1
        if mood == MOOD_A or mood == MOOD_I:
            src = [k for k in range(n) if model[k][x] == 1 and model[k][y] == 1]
            if src:
                i = src[pick(u1, len(src))]
                t = y if u2 < 0.5 else x
                j = pick(u3, n - 1)
                if j >= i:
                    j += 1
        elif mood == MOOD_E or mood == MOOD_O:
            dst = [k for k in range(n) if model[k][x] == 1 and model[k][y] != 1]
            if dst:
                j = dst[pick(u1, len(dst))]
                src = [k for k in range(n) if k != j and model[k][y] == 1]
                if src:
                    i = src[pick(u2, len(src))]
                    t = y
        if i < 0:
            i = pick(u1, n)
            present = [k for k in range(3) if model[i][k] == 1]
            if not present:
                return None
            t = present[pick(u2, len(present))]
            j = pick(u3, n - 1)
            if j >= i:
                j += 1
        new = [list(e) for e in model]
        new[i][t] = 0
        if new[i][0] == 0 and new[i][1] == 0 and new[i][2] == 0:
            return None
        new[j][t] = 1
        return new
    # BREAK
    if n >= MAX_ENTITIES:
        return None
    both = []
    if mood == MOOD_A or mood == MOOD_I:
        both = [k for k in range(n) if model[k][x] == 1 and model[k][y] == 1]
    if both:
        i = both[pick(u1, len(both))]
        t1, t2 = y, x
    else:
        i = pick(u1, n)
        present = [k for k in range(3) if model[i][k] == 1]
        if len(present) < 2:
            return None
        k1 = pick(u2, len(present))
        t1 = present[k1]
        rest = present[:k1] + present[k1 + 1:]
        t2 = rest[pick(u3, len(rest))]
    first = list(model[i])
    second = list(model[i])
    first[t1] = 0
    second[t2] = 0
    new = [list(e) for e in model[:i]] + [first, second] + [list(e) for e in model[i + 1:]]
    return new


def search(model, prem, candidate, k, add_pats, u, offset=2):
    """Returns ``(counterexample or None, attempts made)``."""
    current = model
    for j in range(k):
        base = offset + ATTEMPT_DRAWS * j
        op = pick(u[base], 3)
        new = mutate(current, op, u[base + 1], u[base + 2], u[base + 3], add_pats, candidate)
        if new is None or not premises_hold(new, prem):
            continue
        current = new
        if not conclusion_holds(current, candidate):
            return current, j + 1
    return None, k


def weaken(code: int) -> int:
    mood, direction = divmod(code, 2)
    if mood == MOOD_A:
        return response_code(MOOD_I, direction)
    if mood == MOOD_E:
        return response_code(MOOD_O, direction)
    return NVC_CODE


def respond_one(prem, figure, eps, sigma, omega, k, size_cdf, canon, n_canon,
                broad, n_broad, add_pats, ub, us, trace=None):
    """Returns ``(response code, work)``."""
    model, _ = build(prem, eps, size_cdf, canon, n_canon, broad, n_broad, ub)
    work = len(model)
    c = scan(model, prem, figure, ub[BUILD_DRAWS - 1])
    if c == NVC_CODE or us[0] >= sigma:
        return c, work
    cx, attempts = search(model, prem, c, k, add_pats, us)
    work += attempts
    if cx is None:
        return c, work
    if trace is not None:
        trace.append(cx)
    if us[1] < omega:
        w = weaken(c)
        if w != NVC_CODE and conclusion_holds(cx, w):
            return w, work
    return NVC_CODE, work


def simulate_runs(prem, figure, eps, sigma, omega, k, size_cdf, canon, n_canon,
                  broad, n_broad, add_pats, build_u, search_u):
    prem = [tuple(int(v) for v in row) for row in np.asarray(prem)]
    canon = np.asarray(canon).tolist()
    broad = np.asarray(broad).tolist()
    n_canon = np.asarray(n_canon).tolist()
    n_broad = np.asarray(n_broad).tolist()
    add_pats = np.asarray(add_pats).tolist()
    size_cdf = np.asarray(size_cdf).tolist()
    n_runs = build_u.shape[0]
    out = np.empty(n_runs, dtype=np.int32)
    work = 0
    for r in range(n_runs):
        code, w = respond_one(prem, figure, eps, sigma, omega, k, size_cdf, canon, n_canon,
                              broad, n_broad, add_pats, build_u[r].tolist(), search_u[r].tolist())
        out[r] = code
        work += w
    return out, work
