"""Compiled Dormand-Prince 5(4) integrator for ``h'' = (mu - lam * w(theta)) h``.

The weight is ``w = csc^2`` (or ``1`` when ``unit_weight`` is set). Steps are
clipped so that every requested output node is hit exactly; sign changes of
``h`` between accepted steps are counted on the fly.
"""

import numpy as np
from numba import njit

C2, C3, C4, C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# fifth-order minus embedded fourth-order weights
E1 = 71.0 / 57600.0
E3 = -71.0 / 16695.0
E4 = 71.0 / 1920.0
E5 = -17253.0 / 339200.0
E6 = 22.0 / 525.0
E7 = -1.0 / 40.0

STATUS_OK = 0
STATUS_TOO_MANY_STEPS = 1
STATUS_STEP_UNDERFLOW = 2


@njit(cache=True)
def _coef(theta, lam, mu, unit_weight):
    if unit_weight:
        return mu - lam
    s = np.sin(theta)
    return mu - lam / (s * s)


@njit(cache=True)
def integrate(theta0, theta1, lam, mu, unit_weight, rtol, atol, max_step, nodes, h_out, dh_out, max_steps):
    """Integrate from ``h(theta0) = 0, h'(theta0) = 1`` to ``theta1``.

    ``nodes`` is either empty or a strictly increasing grid from ``theta0``
    to ``theta1``; ``h_out``/``dh_out`` receive the solution there.

    Returns ``(h_end, dh_end, sign_changes, n_steps, status)``.
    """
    n_nodes = nodes.shape[0]
    x = theta0
    y0 = 0.0
    y1 = 1.0
    if n_nodes > 0:
        h_out[0] = 0.0
        dh_out[0] = 1.0
    next_node = 1

    q = _coef(x, lam, mu, unit_weight)
    k1a = y1
    k1b = q * y0

    span = theta1 - theta0
    # initial step from the local frequency
    freq = np.sqrt(abs(q) + 1.0 / (span * span))
    step = min(max_step, 0.01 / freq)

    last_sign = 1.0
    changes = 0
    n_steps = 0
    status = STATUS_OK
    while x < theta1:
        if n_steps >= max_steps:
            status = STATUS_TOO_MANY_STEPS
            break
        target = theta1
        if n_nodes > 0 and next_node < n_nodes:
            target = nodes[next_node]
        hit = False
        use = step
        if x + use >= target:
            use = target - x
            hit = True
        elif x + 1.1 * use >= target:
            # avoid a sliver step right before a node
            use = 0.5 * (target - x)

        ya = y0
        yb = y1
        q2 = _coef(x + C2 * use, lam, mu, unit_weight)
        s2a = ya + use * (A21 * k1a)
        s2b = yb + use * (A21 * k1b)
        k2a = s2b
        k2b = q2 * s2a
        q3 = _coef(x + C3 * use, lam, mu, unit_weight)
        s3a = ya + use * (A31 * k1a + A32 * k2a)
        s3b = yb + use * (A31 * k1b + A32 * k2b)
        k3a = s3b
        k3b = q3 * s3a
        q4 = _coef(x + C4 * use, lam, mu, unit_weight)
        s4a = ya + use * (A41 * k1a + A42 * k2a + A43 * k3a)
        s4b = yb + use * (A41 * k1b + A42 * k2b + A43 * k3b)
        k4a = s4b
        k4b = q4 * s4a
        q5 = _coef(x + C5 * use, lam, mu, unit_weight)
        s5a = ya + use * (A51 * k1a + A52 * k2a + A53 * k3a + A54 * k4a)
        s5b = yb + use * (A51 * k1b + A52 * k2b + A53 * k3b + A54 * k4b)
        k5a = s5b
        k5b = q5 * s5a
        x_new = target if hit else x + use
        q6 = _coef(x_new, lam, mu, unit_weight)
        s6a = ya + use * (A61 * k1a + A62 * k2a + A63 * k3a + A64 * k4a + A65 * k5a)
        s6b = yb + use * (A61 * k1b + A62 * k2b + A63 * k3b + A64 * k4b + A65 * k5b)
        k6a = s6b
        k6b = q6 * s6a
        na = ya + use * (B1 * k1a + B3 * k3a + B4 * k4a + B5 * k5a + B6 * k6a)
        nb = yb + use * (B1 * k1b + B3 * k3b + B4 * k4b + B5 * k5b + B6 * k6b)
        k7a = nb
        k7b = q6 * na

        ea = use * (E1 * k1a + E3 * k3a + E4 * k4a + E5 * k5a + E6 * k6a + E7 * k7a)
        eb = use * (E1 * k1b + E3 * k3b + E4 * k4b + E5 * k5b + E6 * k6b + E7 * k7b)
        sca = atol + rtol * max(abs(ya), abs(na))
        scb = atol + rtol * max(abs(yb), abs(nb))
        err = np.sqrt(0.5 * ((ea / sca) ** 2 + (eb / scb) ** 2))

        if err <= 1.0:
            x = x_new
            y0 = na
            y1 = nb
            k1a = k7a
            k1b = k7b
            n_steps += 1
            if y0 != 0.0:
                sgn = 1.0 if y0 > 0.0 else -1.0
                if sgn != last_sign:
                    changes += 1
                    last_sign = sgn
            if hit and n_nodes > 0 and next_node < n_nodes:
                h_out[next_node] = y0
                dh_out[next_node] = y1
                next_node += 1
            if err == 0.0:
                fac = 5.0
            else:
                fac = min(5.0, max(0.2, 0.9 * err ** -0.2))
            if use < step:
                # clipped steps say little about the natural step size
                step = max(step, use * fac)
            else:
                step = use * fac
            step = min(step, max_step)
        else:
            step = use * max(0.2, 0.9 * err ** -0.25)
            if step < 1e-14 * span:
                status = STATUS_STEP_UNDERFLOW
                break
    return y0, y1, changes, n_steps, status
