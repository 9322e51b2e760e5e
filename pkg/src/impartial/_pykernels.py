"""Pure-Python computational kernels.

This module is the reference implementation of the numeric core.  The
compiled module ``impartial._core`` provides the same functions with the
same floating-point operation order, so the two backends produce
bit-identical results; ``impartial._backend`` picks one at import time.

Conventions shared by both backends:

* symmetric matrices are packed lower triangles, row-major, so the entry
  (i, j) with i >= j lives at slot i*(i+1)//2 + j;
* the random stream is SplitMix64, one independent state per (seed,
  stream) pair, Gaussian draws use the Box-Muller cosine branch and
  consume exactly two raw values each;
* kernels never allocate the caller-visible output buffers.
"""

import math

BACKEND = "python"

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB
_STREAM_SALT = 0xD1B54A32D192ED03
_INV_2_53 = 1.0 / 9007199254740992.0
_TWO_PI = 6.283185307179586


def _pk(i, j):
    # packed slot for (i, j) with i >= j
    return i * (i + 1) // 2 + j


def _mix(z):
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK
    return z ^ (z >> 31)


def derive_stream(seed, stream):
    """Map a (seed, stream) pair to an independent 64-bit generator state."""
    z = (seed + _GOLDEN * (stream + 1)) & _MASK
    return _mix(_mix(z) ^ _STREAM_SALT)


def _next(state):
    state = (state + _GOLDEN) & _MASK
    return state, _mix(state)


def chol_packed(a, p, out, pivot_rel):
    """Factor a packed SPD matrix as L*L^T into ``out``.

    The pivot threshold is ``pivot_rel`` times the largest (nonnegative)
    diagonal entry.  Returns -1 on success, else the index of the first
    failing pivot.
    """
    maxdiag = 0.0
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
                out[_pk(i, i)] = math.sqrt(acc)
            else:
                out[_pk(i, j)] = acc / out[_pk(j, j)]
    return -1


def inv_from_chol_packed(l, p, out):
    """Invert an SPD matrix given its packed Cholesky factor.

    Computes M = L^-1 by forward substitution, then out = M^T * M.
    Returns the condition estimate (max diag L / min diag L) squared.
    """
    m = [0.0] * (p * (p + 1) // 2)
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


def jacobi_full(a, v, p, max_sweeps, tol_rel):
    """Diagonalise the symmetric matrix ``a`` in place by cyclic Jacobi sweeps.

    ``v`` receives the accumulated rotations (columns are eigenvectors of
    the input, eigenvalues stay on the diagonal of ``a``).  Convergence:
    every off-diagonal magnitude at most ``tol_rel`` times the max-abs
    norm of the input.  Returns the number of completed sweeps, or -1 if
    the budget ran out.
    """
    for i in range(p):
        for j in range(p):
            v[i, j] = 1.0 if i == j else 0.0
    maxabs = 0.0
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
                    # theta*theta would overflow; to this accuracy t = 1/(2 theta)
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
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


def moments(x, n, p, means_out, cov_out):
    """Column means and the packed sample covariance (divisor n - 1)."""
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


def moments_indexed(x, idx, count, p, means_out, cov_out):
    """Like :func:`moments` over the row subset ``x[idx[0]], ..., x[idx[count-1]]``.

    Avoids materialising the resampled matrix in the bootstrap loop.
    """
    for j in range(p):
        acc = 0.0
        for i in range(count):
            acc += x[idx[i], j]
        means_out[j] = acc / count
    size = p * (p + 1) // 2
    for t in range(size):
        cov_out[t] = 0.0
    for i in range(count):
        r = idx[i]
        slot = 0
        for j in range(p):
            dj = x[r, j] - means_out[j]
            for k in range(j + 1):
                cov_out[slot] += dj * (x[r, k] - means_out[k])
                slot += 1
    for t in range(size):
        cov_out[t] = cov_out[t] / (count - 1)


def gaussian_fill(out, count, seed, stream):
    """Fill ``out[:count]`` with standard normal draws from (seed, stream)."""
    state = derive_stream(seed, stream)
    for t in range(count):
        state, x1 = _next(state)
        state, x2 = _next(state)
        u1 = ((x1 >> 11) + 1) * _INV_2_53
        u2 = (x2 >> 11) * _INV_2_53
        out[t] = math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)


def uniform_fill(out, count, seed, stream):
    """Fill ``out[:count]`` with uniform draws on [0, 1) from (seed, stream)."""
    state = derive_stream(seed, stream)
    for t in range(count):
        state, x = _next(state)
        out[t] = (x >> 11) * _INV_2_53


def resample_indices_fill(out, count, n, seed, stream):
    """Fill ``out[:count]`` with unbiased random row indices in [0, n)."""
    state = derive_stream(seed, stream)
    for t in range(count):
        state, x = _next(state)
        out[t] = (x * n) >> 64
