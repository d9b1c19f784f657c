import numpy as np


def cone_residual(beta_half_angle: float, omega: float, point) -> float:
    """Normalized residual of the elliptic cone through a straight corner.

    The corner sits at the origin with its bisector along +x and half-angle
    `beta_half_angle` (radians); `omega` is the classic solid angle of the
    level set. Zero on the cone, scale-free elsewhere.
    """
    x, y, z = (float(c) for c in point)
    rho2 = x * x + y * y + z * z
    if rho2 == 0.0:
        return 0.0
    rhs = (np.sin(beta_half_angle) * z / np.tan(0.5 * omega) + x) ** 2 / np.cos(beta_half_angle) ** 2
    return abs(rho2 - rhs) / rho2


def cone_point(beta_half_angle: float, omega: float, y: float, z: float) -> np.ndarray:
    """The point with given y, z on the cone, on the branch x > 0."""
    s, c = np.sin(beta_half_angle), np.cos(beta_half_angle)
    t = s * z / np.tan(0.5 * omega)
    # x^2 + y^2 + z^2 = (t + x)^2 / c^2, quadratic in x
    qa = c * c - 1.0
    qb = -2.0 * t
    qc = c * c * (y * y + z * z) - t * t
    if abs(qa) < 1e-15:
        return np.array([-qc / qb, y, z])
    disc = np.sqrt(qb * qb - 4.0 * qa * qc)
    roots = [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)]
    return np.array([max(roots), y, z])
