# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: initializedcheck=False
# cython: cdivision=True
"""Compiled depth-first consistency search (additive combiner only).

Mirrors the pure-Python engine step for step: identical enumeration
order, identical counters, identical conflict-store semantics. Level
sets are 64-bit masks, so the kernel is limited to n <= 64; the
dispatcher additionally bounds the rating values so every combined
difference fits a signed 64-bit integer.
"""

from libc.stdlib cimport free, malloc, realloc

from time import monotonic as _monotonic

ctypedef unsigned long long u64
ctypedef long long i64


cdef struct Store:
    u64 *masks
    int count
    int cap
    unsigned char *jkind      # journal entry kinds: 0 add, 1 kill
    u64 *jmask
    int jcount
    int jcap


cdef struct Search:
    i64 *d                    # g rows of n rating differences
    unsigned char *strict
    int n
    int g
    int t
    int s
    bint conflicts
    double deadline           # monotonic seconds, negative disables
    i64 nodes
    i64 candidates
    i64 skipped
    i64 singleton_calls
    i64 learned
    i64 since_check
    int success_depth
    Store store
    # per-depth arenas, row stride in the comments
    int *avail                # n
    int *avail_n
    int *tied                 # g
    int *tied_n
    i64 *psum                 # (t + 1) * g prefix sums over the combination
    u64 *pmask                # t + 1 prefix masks
    int *pos                  # t combination positions
    u64 *levels               # n + 1 chosen level masks
    int *levels_n


cdef int store_blocks(Store *st, u64 c) noexcept:
    cdef int i
    for i in range(st.count):
        if (st.masks[i] & c) == st.masks[i]:
            return 1
    return 0


cdef int journal_push(Store *st, unsigned char kind, u64 mask) noexcept:
    cdef int ncap
    cdef unsigned char *nk
    cdef u64 *nm
    if st.jcount == st.jcap:
        ncap = st.jcap * 2
        nk = <unsigned char *> realloc(st.jkind, ncap)
        if nk == NULL:
            return -1
        st.jkind = nk
        nm = <u64 *> realloc(st.jmask, ncap * sizeof(u64))
        if nm == NULL:
            return -1
        st.jmask = nm
        st.jcap = ncap
    st.jkind[st.jcount] = kind
    st.jmask[st.jcount] = mask
    st.jcount += 1
    return 0


cdef int store_insert(Store *st, u64 c) noexcept:
    # The caller guarantees c is not blocked, so no stored subset of c
    # exists; stored supersets become redundant and are removed.
    cdef int i = 0
    cdef int ncap
    cdef u64 m
    cdef u64 *nmasks
    while i < st.count:
        m = st.masks[i]
        if (m & c) == c:
            if journal_push(st, 1, m) < 0:
                return -1
            st.masks[i] = st.masks[st.count - 1]
            st.count -= 1
            continue
        i += 1
    if st.count == st.cap:
        ncap = st.cap * 2
        nmasks = <u64 *> realloc(st.masks, ncap * sizeof(u64))
        if nmasks == NULL:
            return -1
        st.masks = nmasks
        st.cap = ncap
    st.masks[st.count] = c
    st.count += 1
    if journal_push(st, 0, c) < 0:
        return -1
    return 0


cdef void store_rollback(Store *st, int mark) noexcept:
    # Replaying the journal backwards restores the exact set collection;
    # capacity suffices because count never exceeds its historical peak.
    cdef int i
    cdef u64 m
    while st.jcount > mark:
        st.jcount -= 1
        m = st.jmask[st.jcount]
        if st.jkind[st.jcount] == 0:
            for i in range(st.count):
                if st.masks[i] == m:
                    st.masks[i] = st.masks[st.count - 1]
                    st.count -= 1
                    break
        else:
            st.masks[st.count] = m
            st.count += 1


cdef int deadline_hit(Search *s):
    if s.deadline < 0:
        return 0
    if _monotonic() > s.deadline:
        return 1
    return 0


cdef int node(Search *s, int depth):
    """One search node. Returns 1 consistent, 0 inconsistent,
    -1 deadline expired, -2 out of memory."""
    cdef int n = s.n
    cdef int g = s.g
    cdef int na = s.avail_n[depth]
    cdef int nt = s.tied_n[depth]
    cdef int *avail = s.avail + depth * n
    cdef int *tied = s.tied + depth * g
    cdef u64 *levels = s.levels + depth * (n + 1)
    cdef i64 *psum = s.psum + depth * (s.t + 1) * g
    cdef u64 *pmask = s.pmask + depth * (s.t + 1)
    cdef int *pos = s.pos + depth * s.t
    cdef int *child_avail
    cdef int *child_tied
    cdef int lv = 0
    cdef int changed, i, q, w, p, e, opp, ok
    cdef int any_strict, k, r, slot, tq, cna, cnt, status, maxk, mark, lo
    cdef u64 cmask

    s.nodes += 1
    s.singleton_calls += 1
    if deadline_hit(s):
        return -1

    # Greedy singleton extension: ascending-index passes with the tied
    # set updated mid-pass, repeated until a pass adds nothing.
    changed = 1
    while changed:
        changed = 0
        i = 0
        while i < na:
            e = avail[i]
            opp = 0
            for q in range(nt):
                p = tied[q]
                if s.d[p * n + e] > 0:
                    opp = 1
                    break
            if opp:
                i += 1
                continue
            levels[lv] = (<u64> 1) << e
            lv += 1
            for q in range(i, na - 1):
                avail[q] = avail[q + 1]
            na -= 1
            w = 0
            for q in range(nt):
                p = tied[q]
                if s.d[p * n + e] == 0:
                    tied[w] = p
                    w += 1
            nt = w
            changed = 1

    any_strict = 0
    for q in range(nt):
        if s.strict[tied[q]]:
            any_strict = 1
            break
    if not any_strict:
        s.levels_n[depth] = lv
        s.success_depth = depth
        return 1

    mark = s.store.jcount if s.conflicts else 0
    maxk = s.t if s.t < na else na
    for k in range(2, maxk + 1):
        for r in range(k):
            pos[r] = r
        pmask[0] = 0
        for tq in range(nt):
            psum[tq] = 0
        lo = 0
        while True:
            # Refill prefix sums and masks for the slots the last
            # odometer step changed.
            for slot in range(lo, k):
                e = avail[pos[slot]]
                for tq in range(nt):
                    psum[(slot + 1) * g + tq] = (
                        psum[slot * g + tq] + s.d[tied[tq] * n + e]
                    )
                pmask[slot + 1] = pmask[slot] | ((<u64> 1) << e)
            s.candidates += 1
            s.since_check += 1
            if s.since_check >= 65536:
                s.since_check = 0
                if deadline_hit(s):
                    return -1
            cmask = pmask[k]
            ok = 1
            if s.conflicts and store_blocks(&s.store, cmask):
                s.skipped += 1
                ok = 0
            if ok:
                opp = 0
                for tq in range(nt):
                    if psum[k * g + tq] > 0:
                        opp = 1
                        break
                if opp:
                    ok = 0
            if ok:
                any_strict = 0
                cnt = 0
                child_tied = s.tied + (depth + 1) * g
                for tq in range(nt):
                    if psum[k * g + tq] == 0:
                        child_tied[cnt] = tied[tq]
                        cnt += 1
                        if s.strict[tied[tq]]:
                            any_strict = 1
                if not any_strict:
                    levels[lv] = cmask
                    s.levels_n[depth] = lv + 1
                    s.success_depth = depth
                    return 1
                child_avail = s.avail + (depth + 1) * n
                cna = 0
                r = 0
                for i in range(na):
                    if r < k and pos[r] == i:
                        r += 1
                        continue
                    child_avail[cna] = avail[i]
                    cna += 1
                s.avail_n[depth + 1] = cna
                s.tied_n[depth + 1] = cnt
                status = node(s, depth + 1)
                if status == 1:
                    levels[lv] = cmask
                    s.levels_n[depth] = lv + 1
                    return 1
                if status < 0:
                    return status
                if s.conflicts and k <= s.s:
                    if store_insert(&s.store, cmask) < 0:
                        return -2
                    s.learned += 1
            r = k - 1
            while r >= 0 and pos[r] == na - k + r:
                r -= 1
            if r < 0:
                break
            pos[r] += 1
            for slot in range(r + 1, k):
                pos[slot] = pos[slot - 1] + 1
            lo = r
    if s.conflicts:
        store_rollback(&s.store, mark)
    return 0


def solve(object diffs, object strict_flags, int n, int g, int t,
          bint conflicts, int s, double deadline):
    """Run the search over flattened difference rows.

    diffs is a buffer of g * n signed 64-bit integers (row p holds the
    per-evaluation rating differences alpha minus beta of statement p);
    strict_flags is a buffer of g bytes. A negative deadline disables
    the time limit. Returns (status, level_masks, stats): status is 1
    consistent, 0 inconsistent, -1 deadline expired; level_masks is a
    root-first list of level bitmasks when status is 1, else None; stats
    is (nodes, candidates, skipped, singleton_calls, learned).
    """
    cdef i64[::1] dview = diffs
    cdef unsigned char[::1] sview = strict_flags
    cdef Search srch
    cdef int maxd, i, status, dd, q
    cdef list masks

    if n < 1 or n > 64:
        raise ValueError("kernel requires 1 <= n <= 64")
    if t < 1:
        raise ValueError("kernel requires t >= 1")
    if t > n:
        t = n
    if g < 0 or dview.shape[0] != g * n or sview.shape[0] != g:
        raise ValueError("diffs must hold g * n entries and strict g entries")

    maxd = n // 2 + 2
    if g > 0:
        srch.d = &dview[0]
        srch.strict = &sview[0]
    else:
        srch.d = NULL
        srch.strict = NULL
    srch.n = n
    srch.g = g
    srch.t = t
    srch.s = s
    srch.conflicts = conflicts
    srch.deadline = deadline
    srch.nodes = 0
    srch.candidates = 0
    srch.skipped = 0
    srch.singleton_calls = 0
    srch.learned = 0
    srch.since_check = 0
    srch.success_depth = -1
    srch.store.masks = NULL
    srch.store.count = 0
    srch.store.cap = 0
    srch.store.jkind = NULL
    srch.store.jmask = NULL
    srch.store.jcount = 0
    srch.store.jcap = 0
    srch.avail = NULL
    srch.avail_n = NULL
    srch.tied = NULL
    srch.tied_n = NULL
    srch.psum = NULL
    srch.pmask = NULL
    srch.pos = NULL
    srch.levels = NULL
    srch.levels_n = NULL
    try:
        srch.avail = <int *> malloc(maxd * n * sizeof(int))
        srch.avail_n = <int *> malloc(maxd * sizeof(int))
        srch.tied = <int *> malloc((maxd * g if g > 0 else 1) * sizeof(int))
        srch.tied_n = <int *> malloc(maxd * sizeof(int))
        srch.psum = <i64 *> malloc(
            (maxd * (t + 1) * g if g > 0 else 1) * sizeof(i64)
        )
        srch.pmask = <u64 *> malloc(maxd * (t + 1) * sizeof(u64))
        srch.pos = <int *> malloc(maxd * t * sizeof(int))
        srch.levels = <u64 *> malloc(maxd * (n + 1) * sizeof(u64))
        srch.levels_n = <int *> malloc(maxd * sizeof(int))
        srch.store.masks = <u64 *> malloc(64 * sizeof(u64))
        srch.store.cap = 64
        srch.store.jkind = <unsigned char *> malloc(64)
        srch.store.jmask = <u64 *> malloc(64 * sizeof(u64))
        srch.store.jcap = 64
        if (srch.avail == NULL or srch.avail_n == NULL or srch.tied == NULL
                or srch.tied_n == NULL or srch.psum == NULL
                or srch.pmask == NULL or srch.pos == NULL
                or srch.levels == NULL or srch.levels_n == NULL
                or srch.store.masks == NULL or srch.store.jkind == NULL
                or srch.store.jmask == NULL):
            raise MemoryError()
        for i in range(n):
            srch.avail[i] = i
        srch.avail_n[0] = n
        for i in range(g):
            srch.tied[i] = i
        srch.tied_n[0] = g
        status = node(&srch, 0)
        if status == -2:
            raise MemoryError()
        masks = None
        if status == 1:
            masks = []
            for dd in range(srch.success_depth + 1):
                for q in range(srch.levels_n[dd]):
                    masks.append(srch.levels[dd * (n + 1) + q])
        return status, masks, (srch.nodes, srch.candidates, srch.skipped,
                               srch.singleton_calls, srch.learned)
    finally:
        free(srch.avail)
        free(srch.avail_n)
        free(srch.tied)
        free(srch.tied_n)
        free(srch.psum)
        free(srch.pmask)
        free(srch.pos)
        free(srch.levels)
        free(srch.levels_n)
        free(srch.store.masks)
        free(srch.store.jkind)
        free(srch.store.jmask)
