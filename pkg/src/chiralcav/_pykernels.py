"""Pure numpy versions of the hot kernels.

These mirror ``_ckernels.pyx`` step for step (same Pade orders, same
thresholds, same RK4 stage sequence) so the two backends are interchangeable
and can be benchmarked against each other.
"""

import math

import numpy as np

# Pade degree -> 1-norm bound below which it reaches double precision
# (Higham, SIAM J. Matrix Anal. Appl. 26 (2005) 1179).
THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}

PADE_COEFFS = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (
        17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0,
    ),
    13: (
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
        960960.0, 16380.0, 182.0, 1.0,
    ),
}


def choose_degree(norm1):
    """Return ``(m, s)``: Pade degree and number of squarings."""
    for m in (3, 5, 7, 9):
        if norm1 <= THETA[m]:
            return m, 0
    s = max(0, int(math.ceil(math.log2(norm1 / THETA[13])))) if norm1 > 0 else 0
    return 13, s


def _pade_uv(A, m):
    b = PADE_COEFFS[m]
    n = A.shape[0]
    ident = np.eye(n, dtype=complex)
    A2 = A @ A
    if m == 13:
        A4 = A2 @ A2
        A6 = A4 @ A2
        U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
                 + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
        V = (A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
             + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident)
        return U, V
    powers = [ident, A2]
    for _ in range(2, m // 2 + 1):
        powers.append(powers[-1] @ A2)
    U_inner = sum(b[2 * k + 1] * powers[k] for k in range(m // 2 + 1))
    V = sum(b[2 * k] * powers[k] for k in range(m // 2 + 1))
    return A @ U_inner, V


def expm(A):
    """Scaling-and-squaring Pade exponential of a complex square matrix."""
    A = np.array(A, dtype=complex)
    norm1 = np.abs(A).sum(axis=0).max() if A.size else 0.0
    m, s = choose_degree(norm1)
    if s:
        A = A / 2.0**s
    U, V = _pade_uv(A, m)
    R = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        R = R @ R
    return R


def rk4_linear(G, Y0, times, steps):
    """Integrate dY/dt = G Y with classical RK4 and record Y at ``times``.

    ``times`` is non-decreasing from an implicit start at 0; ``steps[k]`` is
    the number of equal RK4 steps taken on the interval ending at
    ``times[k]``.
    """
    G = np.asarray(G, dtype=complex)
    Y = np.array(Y0, dtype=complex)
    times = np.asarray(times, dtype=float)
    out = np.empty((len(times),) + Y.shape, dtype=complex)
    t_prev = 0.0
    for k, t_next in enumerate(times):
        n = int(steps[k])
        if n > 0:
            h = (t_next - t_prev) / n
            for _ in range(n):
                k1 = G @ Y
                k2 = G @ (Y + 0.5 * h * k1)
                k3 = G @ (Y + 0.5 * h * k2)
                k4 = G @ (Y + h * k3)
                Y = Y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k] = Y
        t_prev = t_next
    return out
