"""Solvers for the penalized likelihood models.

``newton_box`` minimizes a smooth convex objective with a coefficient cap;
``proximal_gradient`` handles an added l1 term (accelerated, with
backtracking and adaptive restart). Both return ``(params, info)``.
"""

import numpy as np
from scipy.optimize import minimize

NEWTON_MAX_DIM = 1500


def soft_threshold(v, t):
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def newton_box(fun, grad, hess, x0, cap, tol=1e-8, max_iter=1000):
    """Damped Newton projected onto ``|x_j| <= cap``.

    Stops once half the squared Newton decrement (an estimate of the
    remaining objective gap) drops below ``tol``, after taking that last
    step.
    """
    x = np.clip(np.asarray(x0, dtype=np.float64), -cap, cap)
    if x.size > NEWTON_MAX_DIM:
        return _lbfgs_box(fun, grad, x, cap, tol, max_iter)
    f = fun(x)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        g = grad(x)
        h = hess(x)
        h[np.diag_indices_from(h)] += 1e-12 * max(1.0, float(np.max(np.diag(h))))
        try:
            step = np.linalg.solve(h, g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(h, g, rcond=None)[0]
        decrement = float(g @ step) / 2.0
        t = 1.0
        while True:
            cand = np.clip(x - t * step, -cap, cap)
            fc = fun(cand)
            if fc <= f - 1e-4 * t * max(decrement, 0.0) or t < 1e-10:
                break
            t *= 0.5
        change = f - fc
        if fc <= f:
            x, f = cand, fc
        if decrement < tol or abs(change) < tol * 1e-4:
            converged = True
            break
    return x, {"iterations": it, "converged": converged, "objective": f,
               "capped": bool(np.any(np.abs(x) >= cap))}


def _lbfgs_box(fun, grad, x0, cap, tol, max_iter):
    res = minimize(fun, x0, jac=grad, method="L-BFGS-B",
                   bounds=[(-cap, cap)] * x0.size,
                   options={"maxiter": max_iter, "ftol": tol * 1e-3, "gtol": 1e-10})
    x = res.x
    return x, {"iterations": int(res.nit), "converged": bool(res.success),
               "objective": float(res.fun), "capped": bool(np.any(np.abs(x) >= cap))}


def proximal_gradient(fun, grad, x0, penalty, cap, tol=1e-8, max_iter=1000):
    """Minimize ``fun(x) + sum(penalty * |x|)`` subject to ``|x_j| <= cap``.

    ``penalty`` is per-coordinate (zero for intercepts). Accelerated steps
    restart whenever the composite objective increases.
    """
    penalty = np.asarray(penalty, dtype=np.float64)

    def composite(v):
        return fun(v) + float(np.sum(penalty * np.abs(v)))

    def prox(v, step):
        return np.clip(soft_threshold(v, step * penalty), -cap, cap)

    x = prox(np.asarray(x0, dtype=np.float64), 0.0)
    y = x.copy()
    t_acc = 1.0
    lip = 1.0
    obj = composite(x)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        fy, gy = fun(y), grad(y)
        while True:
            z = prox(y - gy / lip, 1.0 / lip)
            d = z - y
            if fun(z) <= fy + gy @ d + 0.5 * lip * (d @ d) + 1e-15 * abs(fy):
                break
            lip *= 2.0
        new_obj = composite(z)
        gmap = lip * np.sqrt(d @ d)
        if new_obj > obj:
            if np.array_equal(y, x):
                converged = True
                break
            # restart momentum from the last accepted point
            y = x.copy()
            t_acc = 1.0
            continue
        t_next = (1.0 + np.sqrt(1.0 + 4.0 * t_acc * t_acc)) / 2.0
        y = z + ((t_acc - 1.0) / t_next) * (z - x)
        change = obj - new_obj
        x, obj, t_acc = z, new_obj, t_next
        lip = max(lip * 0.9, 1e-12)
        if gmap < np.sqrt(tol) * 1e-3 or (change < tol * 1e-4 and gmap < np.sqrt(tol)):
            converged = True
            break
    return x, {"iterations": it, "converged": converged, "objective": obj,
               "capped": bool(np.any(np.abs(x) >= cap))}
