"""Closed-form monodromy matrices in the S/gamma basis, written out by hand
from the published block formulas.  Used as an independent golden for the
lasso-engine computation in relhom."""
import numpy as np


def _sigma1(d):
    s = np.eye(d - 1, dtype=int)
    if d - 1 >= 2:
        s[0, :2] = (-1, 1)
    else:
        s[0, 0] = -1
    return s


def _sigma_mid(d, k):
    # identity except row k (1-based) = (1, -1, 1) on columns k-1, k, k+1
    s = np.eye(d - 1, dtype=int)
    r = k - 1
    if r - 1 >= 0:
        s[r, r - 1] = 1
    s[r, r] = -1
    if r + 1 < d - 1:
        s[r, r + 1] = 1
    return s


def _cartan_row(n, k):
    row = np.zeros(n, dtype=int)
    if k - 2 >= 0:
        row[k - 2] = -1
    row[k - 1] = 2
    if k < n:
        row[k] = -1
    return row


def clebsch(g, d):
    """Return (M_1..M_N, M_inf) for simple poles, genus g, degree d."""
    t = 2 * g + d - 1
    n = t + d - 1
    mats = []
    m = np.eye(n, dtype=int)
    m[t:, t:] = _sigma1(d)
    mats.append(m)
    for j in range(2, 2 * g + 3):
        m = np.eye(n, dtype=int)
        m[t:, t:] = _sigma1(d)
        m[j - 2, t] = 2
        if d - 1 >= 2:
            m[j - 2, t + 1] = -1
        mats.append(m)
    for k in range(2, d):
        m = np.eye(n, dtype=int)
        m[t:, t:] = _sigma_mid(d, k)
        mats.append(m)
        m = m.copy()
        # row 2g+k of S holds the Cartan-type row on columns k-1, k, k+1
        m[2 * g + k - 1, t:] = _cartan_row(d - 1, k)
        mats.append(m)
    minf = np.eye(n, dtype=int)
    for r in range(2 * g + 1):
        sign = 1 if r % 2 == 0 else -1
        minf[r, t] = 2 * sign
        if d - 1 >= 2:
            minf[r, t + 1] = -sign
    for k in range(2, d):
        minf[2 * g + k - 1, t:] = _cartan_row(d - 1, k)
    return mats, minf


def polynomial(d):
    n = d - 1
    mats = []
    for k in range(1, d):
        m = np.eye(n, dtype=int)
        r = k - 1
        if r - 1 >= 0:
            m[r, r - 1] = 1
        m[r, r] = -1
        if r + 1 < n:
            m[r, r + 1] = 1
        mats.append(m)
    minf = np.zeros((n, n), dtype=int)
    for j in range(n - 1):
        minf[j + 1, j] = 1
    minf[:, n - 1] = -1
    return mats, minf
