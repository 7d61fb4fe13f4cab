# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled replication kernel.

Operation order matches ``_kernel_py.simulate`` exactly; keep the two in
step when editing either.
"""
from libc.math cimport exp, log, sqrt

DEF MAX_ACTIONS = 64
DEF MAX_LABELS = 64


cdef inline void _bracket(const double[::1] peaks, double s, int* lo, double* w_lo,
                          double* w_hi) noexcept nogil:
    cdef int n = peaks.shape[0]
    cdef int k
    cdef double upper
    if s < peaks[0]:
        s = peaks[0]
    if s > peaks[n - 1]:
        s = peaks[n - 1]
    lo[0] = n - 2
    for k in range(n - 1):
        if s < peaks[k + 1]:
            lo[0] = k
            break
    upper = (s - peaks[lo[0]]) / (peaks[lo[0] + 1] - peaks[lo[0]])
    w_lo[0] = 1.0 - upper
    w_hi[0] = upper


cdef inline void _active(const double[::1] peaks, double s0, double s1, double s2,
                         int* idx, double* w) noexcept nogil:
    cdef int P = peaks.shape[0]
    cdef int lo[3]
    cdef double wl[3]
    cdef double wh[3]
    cdef int slot, d, bit, lab, rule
    cdef double weight
    _bracket(peaks, s0, &lo[0], &wl[0], &wh[0])
    _bracket(peaks, s1, &lo[1], &wl[1], &wh[1])
    _bracket(peaks, s2, &lo[2], &wl[2], &wh[2])
    for slot in range(8):
        rule = 0
        weight = 1.0
        for d in range(3):
            bit = (slot >> (2 - d)) & 1
            lab = lo[d] + bit
            rule = rule * P + lab
            if bit:
                weight = weight * wh[d]
            else:
                weight = weight * wl[d]
        idx[slot] = rule
        w[slot] = weight


cdef inline int _greedy(const double[:, :, ::1] q, int j, int r, int K) noexcept nogil:
    cdef int k, best_k = 0
    cdef double best = q[j, r, 0]
    for k in range(1, K):
        if q[j, r, k] > best:
            best = q[j, r, k]
            best_k = k
    return best_k


cdef inline int _boltzmann(const double[:, :, ::1] q, int j, int r, int K, double beta,
                           double u) noexcept nogil:
    cdef double wts[MAX_ACTIONS]
    cdef double m = q[j, r, 0]
    cdef double total = 0.0, acc = 0.0, target
    cdef int k
    for k in range(1, K):
        if q[j, r, k] > m:
            m = q[j, r, k]
    for k in range(K):
        wts[k] = exp((q[j, r, k] - m) / beta)
    for k in range(K):
        total += wts[k]
    target = u * total
    for k in range(K):
        acc += wts[k]
        if target < acc:
            return k
    return K - 1


cdef inline int _ucb(const double[:, :, ::1] q, const double[:, :, ::1] counts, int j, int r,
                     int K, double c, int t, double u) noexcept nogil:
    cdef int untried[MAX_ACTIONS]
    cdef int n_untried = 0, k, best_k, pick
    cdef double log_t, best, v
    for k in range(K):
        if counts[j, r, k] == 0.0:
            untried[n_untried] = k
            n_untried += 1
    if n_untried > 0:
        pick = <int>(u * n_untried)
        if pick > n_untried - 1:
            pick = n_untried - 1
        return untried[pick]
    log_t = log(<double>t)
    best_k = 0
    best = q[j, r, 0] + c * sqrt(log_t / counts[j, r, 0])
    for k in range(1, K):
        v = q[j, r, k] + c * sqrt(log_t / counts[j, r, k])
        if v > best:
            best = v
            best_k = k
    return best_k


def simulate(const double[:, :, :, ::1] uniforms, const double[:, ::1] normals,
             const double[::1] firm, const double[::1] peaks, const double[::1] actions,
             int policy, const double[:, ::1] policy_params, double alpha, double discount,
             int t_learn, bint freeze_eval, bint greedy_eval,
             double[:, :, ::1] q, double[:, :, ::1] counts, double[:, ::1] out):
    cdef int K = actions.shape[0]
    cdef int n_steps = out.shape[0]
    if K > MAX_ACTIONS or peaks.shape[0] > MAX_LABELS:
        raise ValueError("too many stored actions or labels for the compiled kernel")
    if uniforms.shape[0] < n_steps or normals.shape[0] < n_steps:
        raise ValueError("random stream shorter than the horizon")

    cdef double b = firm[0], e_s = firm[1], e_1 = firm[2], e_2 = firm[3], sigma = firm[4]
    cdef double l_s = firm[5], l_1 = firm[6], l_2 = firm[7], g1 = firm[8], g2 = firm[9]
    cdef int idx[8]
    cdef int nidx[8]
    cdef double w[8]
    cdef double nw[8]
    cdef int chosen[3][8]
    cdef double inv[3]
    cdef double q_now[3]
    cdef double rewards[3]
    cdef int t, row, j, slot, r, k
    cdef bint exploring
    cdef double a_acc, q_acc, wt, beta, tl, eps, u1, u2
    cdef double th_s, th_1, th_2, i_s, i_1, i_2, q1, q2, rev1, rev2, m1, m2
    cdef double w_s, w_1, w_2, pi_s, pi_1, pi_2, pi_hq, v, mx, delta

    with nogil:
        _active(peaks, 0.0, 0.0, 0.0, &idx[0], &w[0])
        for t in range(1, n_steps + 1):
            row = t - 1
            exploring = not (greedy_eval and t > t_learn)
            for j in range(3):
                a_acc = 0.0
                q_acc = 0.0
                for slot in range(8):
                    r = idx[slot]
                    wt = w[slot]
                    if wt > 0.0 and exploring:
                        u1 = uniforms[row, j, slot, 0]
                        u2 = uniforms[row, j, slot, 1]
                        if policy == 0:
                            beta = policy_params[j, 0] / (policy_params[j, 1] + t)
                            k = _boltzmann(q, j, r, K, beta, u1)
                        elif policy == 1:
                            tl = policy_params[j, 0]
                            if t >= tl:
                                eps = 0.0
                            else:
                                eps = (tl - t) / (tl - 1.0)
                                if eps < 0.0:
                                    eps = 0.0
                                if eps > 1.0:
                                    eps = 1.0
                            if u1 < eps:
                                k = <int>(u2 * K)
                                if k > K - 1:
                                    k = K - 1
                            else:
                                k = _greedy(q, j, r, K)
                        else:
                            k = _ucb(q, counts, j, r, K, policy_params[j, 0], t, u2)
                    else:
                        k = _greedy(q, j, r, K)
                    if wt > 0.0:
                        counts[j, r, k] += 1.0
                    chosen[j][slot] = k
                    a_acc += wt * actions[k]
                    q_acc += wt * q[j, r, k]
                inv[j] = a_acc
                q_now[j] = q_acc

            th_s = e_s + sigma * normals[row, 0]
            th_1 = e_1 + sigma * normals[row, 1]
            th_2 = e_2 + sigma * normals[row, 2]
            i_s = inv[0]
            i_1 = inv[1]
            i_2 = inv[2]
            q1 = (th_1 - th_s + i_s + i_1) / b
            q2 = (th_2 - th_s + i_s + i_2) / b
            if q1 < 0.0:
                q1 = 0.0
            if q2 < 0.0:
                q2 = 0.0
            rev1 = (th_1 - 0.5 * b * q1 + i_1) * q1
            rev2 = (th_2 - 0.5 * b * q2 + i_2) * q2
            m1 = rev1 - (th_s - i_s) * q1
            m2 = rev2 - (th_s - i_s) * q2
            w_s = 0.5 * l_s * i_s * i_s
            w_1 = 0.5 * l_1 * i_1 * i_1
            w_2 = 0.5 * l_2 * i_2 * i_2
            pi_s = g1 * m1 + g2 * m2 - w_s
            pi_1 = (1.0 - g1) * m1 - w_1
            pi_2 = (1.0 - g2) * m2 - w_2
            pi_hq = rev1 + rev2 - (th_s - i_s) * (q1 + q2) - w_s - w_1 - w_2
            rewards[0] = pi_s
            rewards[1] = pi_1
            rewards[2] = pi_2

            _active(peaks, i_s, i_1, i_2, &nidx[0], &nw[0])
            if not (freeze_eval and t > t_learn):
                for j in range(3):
                    v = 0.0
                    for slot in range(8):
                        mx = q[j, nidx[slot], _greedy(q, j, nidx[slot], K)]
                        v += nw[slot] * mx
                    delta = alpha * (rewards[j] + discount * v - q_now[j])
                    for slot in range(8):
                        wt = w[slot]
                        if wt > 0.0:
                            q[j, idx[slot], chosen[j][slot]] += wt * delta

            out[row, 0] = i_s
            out[row, 1] = i_1
            out[row, 2] = i_2
            out[row, 3] = q1
            out[row, 4] = q2
            out[row, 5] = pi_s
            out[row, 6] = pi_1
            out[row, 7] = pi_2
            out[row, 8] = pi_hq
            for slot in range(8):
                idx[slot] = nidx[slot]
                w[slot] = nw[slot]
