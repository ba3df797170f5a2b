# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels.

Line-for-line twins of ``_walk.py``.  Uniforms are pulled straight from the
generator's bit generator with ``next_double``, which is exactly what
``Generator.random()`` returns, so both implementations consume the stream
identically and make identical decisions.
"""
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.stdint cimport int64_t
from libc.stdlib cimport calloc, free
from numpy.random cimport bitgen_t

cdef enum:
    NEG_INF = -1
    POS_INF = -2
    NO_NODE = -1


cdef inline bitgen_t *_bitgen(object rng) except NULL:
    return <bitgen_t *> PyCapsule_GetPointer(rng.bit_generator.capsule, "BitGenerator")


cdef inline bint _atc_pair(bitgen_t *bg, double p, int64_t b_max,
                           const double *bounds, int64_t *calls) noexcept nogil:
    cdef int64_t t, wins = 0
    cdef double p_hat, b
    for t in range(1, b_max + 1):
        calls[0] += 1
        if bg.next_double(bg.state) < p:
            wins += 1
        p_hat = <double> wins / <double> t
        b = bounds[t]
        if p_hat > 0.5 + b:
            return True
        if p_hat < 0.5 - b:
            return False
    if 2 * wins != b_max:
        return 2 * wins > b_max
    return bg.next_double(bg.state) < 0.5


cdef inline bint _atc_row(bitgen_t *bg, const double[::1] row, int64_t j, int64_t b_max,
                          const double *bounds, int64_t[::1] calls) noexcept nogil:
    if j == NEG_INF:
        return True
    if j == POS_INF:
        return False
    cdef int64_t n = 0
    cdef bint won = _atc_pair(bg, row[j], b_max, bounds, &n)
    calls[j] += n
    return won


def atc_pair(double p, int64_t b_max, const double[::1] bounds, object rng):
    """Attempting comparison against an item beaten with probability ``p``.

    Returns ``(probe_wins, comparisons)``.
    """
    cdef bitgen_t *bg = _bitgen(rng)
    cdef int64_t calls = 0
    cdef bint won
    with rng.bit_generator.lock:
        with nogil:
            won = _atc_pair(bg, p, b_max, &bounds[0], &calls)
    return bool(won), calls


def ati_walk_row(const double[::1] row,
                 const int64_t[::1] left, const int64_t[::1] right, const int64_t[::1] mid,
                 const int64_t[::1] parent, const int64_t[::1] lchild, const int64_t[::1] rchild,
                 const int64_t[::1] b_max, const double[:, ::1] bounds,
                 const double[::1] early, double post_threshold, int64_t t_max,
                 object rng, int64_t[::1] calls):
    """Insertion walk with win probabilities ``row[j]``; adds per-opponent counts to ``calls``."""
    cdef bitgen_t *bg = _bitgen(rng)
    cdef Py_ssize_t n_nodes = left.shape[0]
    cdef int64_t *counts = <int64_t *> calloc(n_nodes, sizeof(int64_t))
    if counts == NULL:
        raise MemoryError()
    cdef int64_t x = 0, t, u, best = -1, best_count = -1
    cdef const double *b_root = &bounds[0, 0]
    cdef const double *b_leaf = &bounds[1, 0]
    cdef const double *b_inner = &bounds[2, 0]
    cdef int64_t m_root = b_max[0], m_leaf = b_max[1], m_inner = b_max[2]
    cdef int64_t result = -1
    try:
        with rng.bit_generator.lock:
            with nogil:
                for t in range(1, t_max + 1):
                    if x == 0:
                        if _atc_row(bg, row, mid[x], m_root, b_root, calls):
                            x = rchild[x]
                        else:
                            x = lchild[x]
                    elif lchild[x] == NO_NODE:
                        if (_atc_row(bg, row, left[x], m_leaf, b_leaf, calls)
                                and not _atc_row(bg, row, right[x], m_leaf, b_leaf, calls)):
                            counts[x] += 1
                            if counts[x] > early[t]:
                                result = x
                                break
                        elif counts[x] > 0:
                            counts[x] -= 1
                        else:
                            x = parent[x]
                    else:
                        if (not _atc_row(bg, row, left[x], m_inner, b_inner, calls)
                                or _atc_row(bg, row, right[x], m_inner, b_inner, calls)):
                            x = parent[x]
                        elif _atc_row(bg, row, mid[x], m_inner, b_inner, calls):
                            x = rchild[x]
                        else:
                            x = lchild[x]
                else:
                    for u in range(n_nodes):
                        if lchild[u] == NO_NODE and counts[u] > best_count:
                            best = u
                            best_count = counts[u]
                    if best_count >= post_threshold:
                        result = best
    finally:
        free(counts)
    return result
