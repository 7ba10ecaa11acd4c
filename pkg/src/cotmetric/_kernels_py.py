"""Pure NumPy per-face kernels, used when the compiled extension is missing.

Every kernel takes ``uf`` of shape ``(F, 3)``: the u-coordinates
(``u = d**2 / 2``) of the edges opposite corners 0, 1, 2 of each face.
With ``A`` the face area,

* ``cot(theta_x) = (u_y + u_z - u_x) / (2 A)``
* ``d cot(theta_x) / d u_x = -u_y u_z / (2 A**3)``
* ``d cot(theta_x) / d u_y = u_z (u_x + u_y - u_z) / (4 A**3)``

which are the cosine-law cotangent and the circumradius/area Hessian
rewritten in u. The area uses Kahan's stable form of Heron's formula.
"""
import numpy as np


def face_areas(uf):
    d = np.sort(np.sqrt(2.0 * np.asarray(uf, dtype=np.float64)), axis=1)
    c, b, a = d[:, 0], d[:, 1], d[:, 2]
    t = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    return 0.25 * np.sqrt(np.maximum(t, 0.0))


def face_cotangents(uf):
    uf = np.asarray(uf, dtype=np.float64)
    area = face_areas(uf)
    total = uf.sum(axis=1, keepdims=True)
    return (total - 2.0 * uf) / (2.0 * area[:, None])


def face_hessians(uf):
    uf = np.asarray(uf, dtype=np.float64)
    area = face_areas(uf)
    s = 0.25 / area**3
    u0, u1, u2 = uf[:, 0], uf[:, 1], uf[:, 2]
    out = np.empty((len(uf), 3, 3))
    out[:, 0, 0] = -2.0 * s * u1 * u2
    out[:, 1, 1] = -2.0 * s * u0 * u2
    out[:, 2, 2] = -2.0 * s * u0 * u1
    out[:, 0, 1] = out[:, 1, 0] = s * u2 * (u0 + u1 - u2)
    out[:, 0, 2] = out[:, 2, 0] = s * u1 * (u0 + u2 - u1)
    out[:, 1, 2] = out[:, 2, 1] = s * u0 * (u1 + u2 - u0)
    return out
