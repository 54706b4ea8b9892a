"""Inner solver loops, compiled with numba when that backend is active.

Everything here is written against the numba-supported numpy subset and uses
explicit loops: one step depends on the previous iterate, so there is nothing
to vectorize.  Integer tags replace string kinds at this layer.
"""

import numpy as np

from ._backend import jit_kernel

LOSS_HINGE = 0
LOSS_SQHINGE = 1

REG_NONE = 0
REG_L2 = 1
REG_L1 = 2
REG_L2_L1 = 3

SCHED_CONSTANT = 0
SCHED_INV_LAMBDA_T = 1
SCHED_INV_STRONG = 2

LOSS_TAGS = {"hinge": LOSS_HINGE, "squared_hinge": LOSS_SQHINGE}
REG_TAGS = {"none": REG_NONE, "l2": REG_L2, "l1": REG_L1, "l2_plus_scaled_l1": REG_L2_L1}


@jit_kernel
def row_dot(w, indices, values, lo, hi):
    acc = 0.0
    for k in range(lo, hi):
        acc += w[indices[k]] * values[k]
    return acc


@jit_kernel
def delta_alpha(option, loss, alpha_i, margin, normsq, lam_n, gamma_i, lip_i, s_frac, rnorm):
    """Scalar increment of one dual coordinate (theta_i = alpha_i * y_i * x_i).

    option 1: exact coordinate maximization (closed form per loss)
    option 2: line search along u - theta_i, exact for these quadratics
    option 3: curvature-based step fraction, clipped to [0, 1]
    option 4: option 3 with ||z||^2 replaced by the bound 4 * lip_i^2
    option 5: fraction s_frac toward u (smooth losses); s_frac is this
              coordinate's share s/(n p_i) of the global step constant
    """
    if normsq <= 0.0:
        return 0.0
    if option == 1:
        if loss == LOSS_HINGE:
            raw = (1.0 - margin) * lam_n / normsq
            lo = -alpha_i
            hi = 1.0 - alpha_i
            if raw < lo:
                return lo
            if raw > hi:
                return hi
            return raw
        raw = (1.0 - margin - 0.5 * alpha_i) / (0.5 + normsq / lam_n)
        if raw < -alpha_i:
            return -alpha_i
        return raw
    # u = a * y_i * x_i with -u a loss subgradient at w
    if loss == LOSS_HINGE:
        a = 1.0 if margin < 1.0 else 0.0
    else:
        a = 2.0 * (1.0 - margin) if margin < 1.0 else 0.0
    zc = a - alpha_i
    if option == 5:
        return s_frac * zc
    if zc == 0.0:
        return 0.0
    if option == 2:
        if loss == LOSS_HINGE:
            s = (1.0 - margin) * lam_n / (zc * normsq)
        else:
            s = (1.0 - margin - 0.5 * alpha_i) / (zc * (0.5 + normsq / lam_n))
    else:
        if loss == LOSS_HINGE:
            lval = 1.0 - margin if margin < 1.0 else 0.0
            cval = -alpha_i
        else:
            gap = 1.0 - margin if margin < 1.0 else 0.0
            lval = gap * gap
            cval = -alpha_i + 0.25 * alpha_i * alpha_i
        fy = lval + cval + alpha_i * margin
        if option == 3:
            znormsq = zc * zc * normsq
            num = fy + 0.5 * gamma_i * znormsq
            den = znormsq * (gamma_i + rnorm * rnorm / lam_n)
        else:
            if lip_i <= 0.0:
                return 0.0
            num = fy
            den = 4.0 * lip_i * lip_i * (rnorm * rnorm / lam_n)
        if den <= 0.0:
            return 0.0
        s = num / den
    if s < 0.0:
        s = 0.0
    elif s > 1.0:
        s = 1.0
    return s * zc


@jit_kernel
def sgd_epoch(w, w_sum, indptr, indices, values, labels, order, weights,
              t_start, sched_kind, sched_a, sched_b,
              loss, composite, lam, reg_kind, reg_ratio, proj_radius):
    """Run len(order) weighted prox-gradient steps in place.

    ``weights[k]`` is the importance weight 1/(n * p_{order[k]}); ``w_sum``
    accumulates the post-step iterates for average reporting.
    """
    d = w.shape[0]
    n_steps = order.shape[0]
    for step in range(n_steps):
        t = t_start + step + 1
        if sched_kind == SCHED_CONSTANT:
            eta = sched_a
        elif sched_kind == SCHED_INV_LAMBDA_T:
            eta = 1.0 / (sched_a * t)
        else:
            eta = 1.0 / (sched_a + sched_b * t)
        i = order[step]
        lo = indptr[i]
        hi = indptr[i + 1]
        m = labels[i] * row_dot(w, indices, values, lo, hi)
        if m < 1.0:
            if loss == LOSS_HINGE:
                coef = -labels[i]
            else:
                coef = -2.0 * (1.0 - m) * labels[i]
        else:
            coef = 0.0
        scale = eta * weights[step]
        if composite:
            # ridge term rides inside the sampled loss, so it is importance
            # weighted as well; the explicit regularizer is empty
            shrink = 1.0 - scale * lam
            for j in range(d):
                w[j] *= shrink
            if coef != 0.0:
                for k in range(lo, hi):
                    w[indices[k]] -= scale * coef * values[k]
        else:
            if coef != 0.0:
                for k in range(lo, hi):
                    w[indices[k]] -= scale * coef * values[k]
            c = eta * lam
            if reg_kind == REG_L2:
                factor = 1.0 / (1.0 + c)
                for j in range(d):
                    w[j] *= factor
            elif reg_kind == REG_L1:
                for j in range(d):
                    wj = w[j]
                    if wj > c:
                        w[j] = wj - c
                    elif wj < -c:
                        w[j] = wj + c
                    else:
                        w[j] = 0.0
            elif reg_kind == REG_L2_L1:
                thresh = c * reg_ratio
                factor = 1.0 / (1.0 + c)
                for j in range(d):
                    wj = w[j]
                    if wj > thresh:
                        w[j] = (wj - thresh) * factor
                    elif wj < -thresh:
                        w[j] = (wj + thresh) * factor
                    else:
                        w[j] = 0.0
        if proj_radius > 0.0:
            sq = 0.0
            for j in range(d):
                sq += w[j] * w[j]
            nrm = np.sqrt(sq)
            if nrm > proj_radius:
                factor = proj_radius / nrm
                for j in range(d):
                    w[j] *= factor
        for j in range(d):
            w_sum[j] += w[j]


@jit_kernel
def sdca_epoch(alpha, v, w, indptr, indices, values, labels, normsq,
               order, lam, n, option, s_fracs, gammas, lips, rnorm,
               loss, reg_kind, reg_ratio,
               t_start, avg_from, alpha_sum, v_sum, w_sum):
    """Run len(order) dual coordinate steps in place.

    ``w`` is kept equal to the conjugate-gradient map of ``v`` after every
    step (identity for l2, soft-threshold for the combined regularizer).
    When ``avg_from > 0``, pre-step iterates with global step >= avg_from are
    accumulated into the *_sum buffers.
    """
    lam_n = lam * n
    n_steps = order.shape[0]
    for step in range(n_steps):
        t = t_start + step + 1
        if avg_from > 0 and t >= avg_from:
            for j in range(alpha.shape[0]):
                alpha_sum[j] += alpha[j]
            for j in range(v.shape[0]):
                v_sum[j] += v[j]
                w_sum[j] += w[j]
        i = order[step]
        nsq = normsq[i]
        if nsq <= 0.0:
            continue
        lo = indptr[i]
        hi = indptr[i + 1]
        m = labels[i] * row_dot(w, indices, values, lo, hi)
        d_a = delta_alpha(option, loss, alpha[i], m, nsq, lam_n,
                          gammas[i], lips[i], s_fracs[i], rnorm)
        if d_a == 0.0:
            continue
        alpha[i] += d_a
        upd = d_a * labels[i] / lam_n
        if reg_kind == REG_L2:
            for k in range(lo, hi):
                j = indices[k]
                v[j] += upd * values[k]
                w[j] = v[j]
        else:
            for k in range(lo, hi):
                j = indices[k]
                vj = v[j] + upd * values[k]
                v[j] = vj
                if vj > reg_ratio:
                    w[j] = vj - reg_ratio
                elif vj < -reg_ratio:
                    w[j] = vj + reg_ratio
                else:
                    w[j] = 0.0
