"""Pure-Python replication kernel.

Mirrors ``_kernel.pyx`` operation for operation (same summation order,
same libm calls) so both backends produce identical trajectories. Used when
the compiled extension is unavailable or when NTPSIM_PURE_PYTHON is set.
"""
from __future__ import annotations

import math

from .exploration import PolicyKind, boltzmann_index, greedy_index, ucb_index
from .fuzzy import MembershipPartition, active_rules

N_COLS = 9


def simulate(uniforms, normals, firm, peaks, actions, policy, policy_params,
             alpha, discount, t_learn, freeze_eval, greedy_eval, q, counts, out):
    b, e_s, e_1, e_2, sigma, l_s, l_1, l_2, g1, g2 = (float(v) for v in firm)
    lam = (l_s, l_1, l_2)
    partition = MembershipPartition(tuple(float(p) for p in peaks))
    act_vals = [float(a) for a in actions]
    policy = PolicyKind(int(policy))
    pp = [[float(v) for v in row] for row in policy_params]
    n_steps = out.shape[0]

    state = (0.0, 0.0, 0.0)
    idx, w = active_rules(partition, state)
    idx, w = idx.tolist(), w.tolist()
    chosen = [[0] * 8 for _ in range(3)]
    inv = [0.0, 0.0, 0.0]
    q_now = [0.0, 0.0, 0.0]

    for t in range(1, n_steps + 1):
        row = t - 1
        exploring = not (greedy_eval and t > t_learn)
        for j in range(3):
            qj = q[j]
            a_acc = 0.0
            q_acc = 0.0
            for slot in range(8):
                r = idx[slot]
                wt = w[slot]
                q_row = qj[r].tolist()
                if wt > 0.0 and exploring:
                    u1 = float(uniforms[row, j, slot, 0])
                    u2 = float(uniforms[row, j, slot, 1])
                    if policy is PolicyKind.BOLTZMANN:
                        beta = pp[j][0] / (pp[j][1] + t)
                        k = boltzmann_index(q_row, beta, u1)
                    elif policy is PolicyKind.EGREEDY:
                        tl = pp[j][0]
                        if t >= tl:
                            eps = 0.0
                        else:
                            eps = min(1.0, max(0.0, (tl - t) / (tl - 1.0)))
                        if u1 < eps:
                            k = min(int(u2 * len(q_row)), len(q_row) - 1)
                        else:
                            k = greedy_index(q_row)
                    else:
                        k = ucb_index(q_row, counts[j, r].tolist(), pp[j][0], t, u2)
                else:
                    k = greedy_index(q_row)
                if wt > 0.0:
                    counts[j, r, k] += 1.0
                chosen[j][slot] = k
                a_acc += wt * act_vals[k]
                q_acc += wt * q_row[k]
            inv[j] = a_acc
            q_now[j] = q_acc

        th_s = e_s + sigma * float(normals[row, 0])
        th_1 = e_1 + sigma * float(normals[row, 1])
        th_2 = e_2 + sigma * float(normals[row, 2])
        i_s, i_1, i_2 = inv
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
        w_s = 0.5 * lam[0] * i_s * i_s
        w_1 = 0.5 * lam[1] * i_1 * i_1
        w_2 = 0.5 * lam[2] * i_2 * i_2
        pi_s = g1 * m1 + g2 * m2 - w_s
        pi_1 = (1.0 - g1) * m1 - w_1
        pi_2 = (1.0 - g2) * m2 - w_2
        pi_hq = rev1 + rev2 - (th_s - i_s) * (q1 + q2) - w_s - w_1 - w_2
        rewards = (pi_s, pi_1, pi_2)

        nidx, nw = active_rules(partition, (i_s, i_1, i_2))
        nidx, nw = nidx.tolist(), nw.tolist()
        if not (freeze_eval and t > t_learn):
            for j in range(3):
                qj = q[j]
                v = 0.0
                for slot in range(8):
                    v += nw[slot] * max(qj[nidx[slot]].tolist())
                delta = alpha * (rewards[j] + discount * v - q_now[j])
                for slot in range(8):
                    wt = w[slot]
                    if wt > 0.0:
                        qj[idx[slot], chosen[j][slot]] += wt * delta

        out[row, 0] = i_s
        out[row, 1] = i_1
        out[row, 2] = i_2
        out[row, 3] = q1
        out[row, 4] = q2
        out[row, 5] = pi_s
        out[row, 6] = pi_1
        out[row, 7] = pi_2
        out[row, 8] = pi_hq
        idx, w = nidx, nw
