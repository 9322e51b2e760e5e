# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled computational kernels.

Mirror of ``impartial._pykernels`` with identical floating-point operation
order (the build disables fused multiply-add contraction), so both backends
produce bit-identical results.  See the pure-Python module for the full
conventions; docstrings there are authoritative.
"""

from libc.math cimport cos, fabs, log, sqrt
from libc.stdlib cimport free, malloc

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64

BACKEND = "c"

cdef double _INV_2_53 = 1.0 / 9007199254740992.0
cdef double _TWO_PI = 6.283185307179586
cdef u64 _GOLDEN = 0x9E3779B97F4A7C15ULL
cdef u64 _MIX_A = 0xBF58476D1CE4E5B9ULL
cdef u64 _MIX_B = 0x94D049BB133111EBULL
cdef u64 _STREAM_SALT = 0xD1B54A32D192ED03ULL


cdef inline Py_ssize_t _pk(Py_ssize_t i, Py_ssize_t j) nogil:
    return i * (i + 1) / 2 + j


cdef inline u64 _mix(u64 z) nogil:
    z = (z ^ (z >> 30)) * _MIX_A
    z = (z ^ (z >> 27)) * _MIX_B
    return z ^ (z >> 31)


cdef inline u64 _derive(u64 seed, u64 stream) nogil:
    cdef u64 z = seed + _GOLDEN * (stream + 1)
    return _mix(_mix(z) ^ _STREAM_SALT)


cdef inline u64 _next(u64* state) nogil:
    state[0] = state[0] + _GOLDEN
    return _mix(state[0])


def derive_stream(u64 seed, u64 stream):
    """Map a (seed, stream) pair to an independent 64-bit generator state."""
    return _derive(seed, stream)


def chol_packed(const double[::1] a, Py_ssize_t p, double[::1] out, double pivot_rel):
    cdef Py_ssize_t i, j, k
    cdef double d, acc, thr
    cdef double maxdiag = 0.0
    for i in range(p):
        d = a[_pk(i, i)]
        if d > maxdiag:
            maxdiag = d
    thr = pivot_rel * maxdiag
    for i in range(p):
        for j in range(i + 1):
            acc = a[_pk(i, j)]
            for k in range(j):
                acc -= out[_pk(i, k)] * out[_pk(j, k)]
            if i == j:
                if acc <= thr:
                    return i
                out[_pk(i, i)] = sqrt(acc)
            else:
                out[_pk(i, j)] = acc / out[_pk(j, j)]
    return -1


def inv_from_chol_packed(const double[::1] l, Py_ssize_t p, double[::1] out):
    cdef Py_ssize_t i, j, k
    cdef double acc, d, dmax, dmin, r
    cdef double* m = <double*> malloc(sizeof(double) * (p * (p + 1) // 2))
    if m == NULL:
        raise MemoryError()
    try:
        for j in range(p):
            m[_pk(j, j)] = 1.0 / l[_pk(j, j)]
            for i in range(j + 1, p):
                acc = 0.0
                for k in range(j, i):
                    acc += l[_pk(i, k)] * m[_pk(k, j)]
                m[_pk(i, j)] = -acc / l[_pk(i, i)]
        for i in range(p):
            for j in range(i + 1):
                acc = 0.0
                for k in range(i, p):
                    acc += m[_pk(k, i)] * m[_pk(k, j)]
                out[_pk(i, j)] = acc
    finally:
        free(m)
    dmax = l[0]
    dmin = l[0]
    for i in range(1, p):
        d = l[_pk(i, i)]
        if d > dmax:
            dmax = d
        if d < dmin:
            dmin = d
    r = dmax / dmin
    return r * r


def jacobi_full(double[:, ::1] a, double[:, ::1] v, Py_ssize_t p,
                int max_sweeps, double tol_rel):
    cdef Py_ssize_t i, j, k
    cdef int sweep
    cdef double x, off, thr, apq, theta, t, c, s, tau, h
    cdef double aki, akj, vki, vkj
    cdef double maxabs = 0.0
    for i in range(p):
        for j in range(p):
            v[i, j] = 1.0 if i == j else 0.0
    for i in range(p):
        for j in range(p):
            x = a[i, j]
            if x < 0.0:
                x = -x
            if x > maxabs:
                maxabs = x
    thr = tol_rel * maxabs
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(p - 1):
            for j in range(i + 1, p):
                x = a[i, j]
                if x < 0.0:
                    x = -x
                if x > off:
                    off = x
        if off <= thr:
            return sweep
        if sweep == max_sweeps:
            return -1
        for i in range(p - 1):
            for j in range(i + 1, p):
                apq = a[i, j]
                if apq == 0.0:
                    continue
                theta = (a[j, j] - a[i, i]) / (2.0 * apq)
                if theta > 1e150 or theta < -1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                h = t * apq
                a[i, i] = a[i, i] - h
                a[j, j] = a[j, j] + h
                a[i, j] = 0.0
                a[j, i] = 0.0
                for k in range(p):
                    if k != i and k != j:
                        aki = a[k, i]
                        akj = a[k, j]
                        a[k, i] = aki - s * (akj + tau * aki)
                        a[i, k] = a[k, i]
                        a[k, j] = akj + s * (aki - tau * akj)
                        a[j, k] = a[k, j]
                for k in range(p):
                    vki = v[k, i]
                    vkj = v[k, j]
                    v[k, i] = vki - s * (vkj + tau * vki)
                    v[k, j] = vkj + s * (vki - tau * vkj)
    return -1


def moments(const double[:, ::1] x, Py_ssize_t n, Py_ssize_t p,
            double[::1] means_out, double[::1] cov_out):
    cdef Py_ssize_t i, j, k, t, idx, size
    cdef double acc, dj
    for j in range(p):
        acc = 0.0
        for i in range(n):
            acc += x[i, j]
        means_out[j] = acc / n
    size = p * (p + 1) // 2
    for t in range(size):
        cov_out[t] = 0.0
    for i in range(n):
        idx = 0
        for j in range(p):
            dj = x[i, j] - means_out[j]
            for k in range(j + 1):
                cov_out[idx] += dj * (x[i, k] - means_out[k])
                idx += 1
    for t in range(size):
        cov_out[t] = cov_out[t] / (n - 1)


def moments_indexed(const double[:, ::1] x, const long long[::1] idx, Py_ssize_t count,
                    Py_ssize_t p, double[::1] means_out, double[::1] cov_out):
    cdef Py_ssize_t i, j, k, t, r, slot, size
    cdef double acc, dj
    for j in range(p):
        acc = 0.0
        for i in range(count):
            acc += x[<Py_ssize_t> idx[i], j]
        means_out[j] = acc / count
    size = p * (p + 1) // 2
    for t in range(size):
        cov_out[t] = 0.0
    for i in range(count):
        r = <Py_ssize_t> idx[i]
        slot = 0
        for j in range(p):
            dj = x[r, j] - means_out[j]
            for k in range(j + 1):
                cov_out[slot] += dj * (x[r, k] - means_out[k])
                slot += 1
    for t in range(size):
        cov_out[t] = cov_out[t] / (count - 1)


def gaussian_fill(double[::1] out, Py_ssize_t count, u64 seed, u64 stream):
    cdef Py_ssize_t t
    cdef u64 state = _derive(seed, stream)
    cdef u64 x1, x2
    cdef double u1, u2
    for t in range(count):
        x1 = _next(&state)
        x2 = _next(&state)
        u1 = <double> ((x1 >> 11) + 1ULL) * _INV_2_53
        u2 = <double> (x2 >> 11) * _INV_2_53
        out[t] = sqrt(-2.0 * log(u1)) * cos(_TWO_PI * u2)


def uniform_fill(double[::1] out, Py_ssize_t count, u64 seed, u64 stream):
    cdef Py_ssize_t t
    cdef u64 state = _derive(seed, stream)
    cdef u64 x
    for t in range(count):
        x = _next(&state)
        out[t] = <double> (x >> 11) * _INV_2_53


def resample_indices_fill(long long[::1] out, Py_ssize_t count, Py_ssize_t n,
                          u64 seed, u64 stream):
    cdef Py_ssize_t t
    cdef u64 state = _derive(seed, stream)
    cdef u64 x
    for t in range(count):
        x = _next(&state)
        out[t] = <long long> ((<u128> x * <u128> n) >> 64)
