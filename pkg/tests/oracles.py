"""Independent reference implementations used to freeze expected values.

Nothing here imports the package under test. Formulas are re-derived from
their closed forms, grids are rebuilt from the documented convention, and
GP math uses plain dense linear algebra so the package's cached-factorization
path can be checked against an implementation that shares none of its code.
"""

import math

import numpy as np

# -- problem formulas (independent re-implementation) ---------------------

def p1_objective(x1, x2):
    return math.cos(2.0 * x1) * math.cos(x2) + math.sin(x1)


def p1_constraint(x1, x2):
    return math.cos(x1) * math.cos(x2) - math.sin(x1) * math.sin(x2)


def p2_objective(x1, x2):
    return math.sin(x1) + x2


def p2_constraint(x1, x2):
    return math.sin(x1) * math.sin(x2)


def p3_objective(x1, x2):
    return x1 + x2


def p3_constraint_1(x1, x2):
    return 1.5 - x1 - 2.0 * x2 - 0.5 * math.sin(2.0 * math.pi * (x1 * x1 - 2.0 * x2))


def p3_constraint_2(x1, x2):
    return x1 * x1 + x2 * x2 - 1.5


ORACLE_PROBLEMS = {
    "P1": {
        "bounds": [(0.0, 6.0), (0.0, 6.0)],
        "objective": p1_objective,
        "constraints": [(p1_constraint, -0.5)],
    },
    "P2": {
        "bounds": [(0.0, 6.0), (0.0, 6.0)],
        "objective": p2_objective,
        "constraints": [(p2_constraint, -0.95)],
    },
    "P3": {
        "bounds": [(0.0, 1.0), (0.0, 1.0)],
        "objective": p3_objective,
        "constraints": [(p3_constraint_1, 0.0), (p3_constraint_2, 0.0)],
    },
}


def oracle_axis_count(count, n_dims):
    n = int(math.ceil(count ** (1.0 / n_dims)))
    while n > 2 and (n - 1) ** n_dims >= count:
        n -= 1
    while n ** n_dims < count:
        n += 1
    return n


def oracle_grid(bounds, count):
    """Row-major truncated lattice, built point by point."""
    n_dims = len(bounds)
    n = oracle_axis_count(count, n_dims)
    axes = []
    for lo, hi in bounds:
        axes.append([lo + (hi - lo) * i / (n - 1) for i in range(n)])
    points = []
    if n_dims == 2:
        for i in range(n):
            for j in range(n):
                points.append((axes[0][i], axes[1][j]))
                if len(points) == count:
                    return points, n
    else:
        raise NotImplementedError("oracle grids are two-dimensional")
    return points, n


def oracle_grid_scan(name, count=20_000):
    """Brute-force feasible minimum over the truncated grid.

    Returns (best_index, best_point, best_objective, feasible_count)."""
    spec = ORACLE_PROBLEMS[name]
    points, _ = oracle_grid(spec["bounds"], count)
    best_idx = None
    best_val = None
    feasible_count = 0
    for idx, (x1, x2) in enumerate(points):
        ok = all(fn(x1, x2) <= lam for fn, lam in spec["constraints"])
        if not ok:
            continue
        feasible_count += 1
        val = spec["objective"](x1, x2)
        if best_val is None or val < best_val:
            best_val = val
            best_idx = idx
    if best_idx is None:
        raise ValueError("no feasible grid point")
    return best_idx, points[best_idx], best_val, feasible_count


def oracle_component_count(name, count=20_000):
    """8-neighbor connected feasible regions via breadth-first flood fill."""
    spec = ORACLE_PROBLEMS[name]
    points, n = oracle_grid(spec["bounds"], count)
    feasible = {}
    for idx, (x1, x2) in enumerate(points):
        if all(fn(x1, x2) <= lam for fn, lam in spec["constraints"]):
            feasible[(idx // n, idx % n)] = False  # visited flag
    components = 0
    for start in feasible:
        if feasible[start]:
            continue
        components += 1
        stack = [start]
        feasible[start] = True
        while stack:
            ci, cj = stack.pop()
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    if di == 0 and dj == 0:
                        continue
                    nb = (ci + di, cj + dj)
                    if nb in feasible and not feasible[nb]:
                        feasible[nb] = True
                        stack.append(nb)
    return components


# -- Gaussian posterior and CDF oracles ------------------------------------

def normal_cdf(z):
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def dense_gp_posterior(x_train, y_train, x_query, lengthscales, signal_variance,
                       noise_variance, prior_mean, jitter=0.0):
    """Posterior mean/variance by explicit dense inversion, no Cholesky."""
    x_train = np.asarray(x_train, dtype=float)
    y_train = np.asarray(y_train, dtype=float)
    x_query = np.atleast_2d(np.asarray(x_query, dtype=float))
    ls = np.asarray(lengthscales, dtype=float)

    def kern(a, b):
        d2 = ((a[:, None, :] - b[None, :, :]) / ls) ** 2
        return signal_variance * np.exp(-0.5 * d2.sum(axis=2))

    gram = kern(x_train, x_train)
    gram += (noise_variance + jitter * signal_variance) * np.eye(len(x_train))
    inv = np.linalg.inv(gram)
    k_star = kern(x_query, x_train)
    mean = prior_mean + k_star @ inv @ (y_train - prior_mean)
    var = signal_variance - np.einsum("ij,jk,ik->i", k_star, inv, k_star)
    return mean, var


def dense_log_marginal_likelihood(x_train, y_train, lengthscales, signal_variance,
                                  noise_variance, prior_mean, jitter=0.0):
    """Log marginal likelihood via explicit determinant and inverse."""
    x_train = np.asarray(x_train, dtype=float)
    y_train = np.asarray(y_train, dtype=float)
    ls = np.asarray(lengthscales, dtype=float)
    d2 = ((x_train[:, None, :] - x_train[None, :, :]) / ls) ** 2
    gram = signal_variance * np.exp(-0.5 * d2.sum(axis=2))
    gram += (noise_variance + jitter * signal_variance) * np.eye(len(x_train))
    sign, logdet = np.linalg.slogdet(gram)
    assert sign > 0
    resid = y_train - prior_mean
    quad = resid @ np.linalg.inv(gram) @ resid
    n = len(x_train)
    return -0.5 * quad - 0.5 * logdet - 0.5 * n * math.log(2.0 * math.pi)


def mc_feasibility_probability(mean, variance, specs, n_samples=100_000, seed=0):
    """Monte Carlo estimate of the joint constraint-satisfaction probability.

    specs: list of (lower-or-None, upper) tuples, one per constraint."""
    rng = np.random.default_rng(seed)
    inside = np.ones(n_samples, dtype=bool)
    for k, (lower, upper) in enumerate(specs):
        draws = rng.normal(mean[k], math.sqrt(variance[k]), size=n_samples)
        ok = draws <= upper
        if lower is not None:
            ok &= draws >= lower
        inside &= ok
    return inside.mean()
