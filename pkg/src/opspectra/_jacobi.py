"""Compiled cyclic Jacobi kernel for dense Hermitian matrices."""

import numpy as np
from numba import njit


@njit(cache=True)
def jacobi_hermitian(a, rel_tol, max_sweeps):
    """Diagonalize the Hermitian matrix ``a`` in place by cyclic Jacobi rotations.

    Each rotation first rotates the phase of a[p, q] to the real axis and then
    applies the classical real 2x2 rotation.  Returns ``(diag, vectors, sweeps,
    off)`` where ``off`` is the final off-diagonal Frobenius mass; ``sweeps`` is
    -1 when the sweep budget ran out.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += a[i, j].real ** 2 + a[i, j].imag ** 2
    target = rel_tol * np.sqrt(total)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        off = np.sqrt(off)
        if off <= target:
            d = np.empty(n)
            for i in range(n):
                d[i] = a[i, i].real
            return d, v, sweep, off
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                e = apq / r
                ec = e.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * ec * akq
                    a[k, q] = s * akp + c * ec * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * e * aqk
                    a[q, k] = s * apk + c * e * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * ec * vkq
                    v[k, q] = s * vkp + c * ec * vkq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    d = np.empty(n)
    for i in range(n):
        d[i] = a[i, i].real
    return d, v, -1, off
