"""Independent reference implementations used to check the package.

Everything here deliberately avoids the package's own numerics: plain
formulas, exhaustive enumeration, or scipy quadrature.
"""

import math

import numpy as np
from scipy import integrate
from scipy.special import erfc


def q_function(x):
    """Gaussian tail probability."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def bpsk_ber_theory(eb_n0_db):
    """Uncoded antipodal-signalling bit error rate over AWGN."""
    return q_function(np.sqrt(2.0 * 10.0 ** (np.asarray(eb_n0_db, dtype=float) / 10.0)))


def gf2_encode_reference(generator, info):
    """Plain-python GF(2) vector-matrix product."""
    k, n = len(generator), len(generator[0])
    out = [0] * n
    for j in range(n):
        s = 0
        for i in range(k):
            s ^= int(info[i]) & int(generator[i][j])
        out[j] = s
    return np.array(out, dtype=np.uint8)


def all_codewords(code):
    """Every codeword of a small code, indexed by the integer info word."""
    k = code.k
    infos = ((np.arange(2 ** k)[:, None] >> np.arange(k)[None, :]) & 1).astype(np.uint8)
    cws = (infos.astype(np.float64) @ code.generator.astype(np.float64)) % 2
    return infos, cws.astype(np.uint8)


def ml_decode_batch(code, llrs):
    """Exhaustive maximum-likelihood decoding of LLR rows.

    The ML codeword maximizes sum_m (1 - 2 v_m) * llr_m; ties resolve to the
    lowest info index, which matches how argmax breaks ties.
    """
    infos, cws = all_codewords(code)
    signs = 1.0 - 2.0 * cws.astype(np.float64)
    scores = np.asarray(llrs, dtype=np.float64) @ signs.T
    best = np.argmax(scores, axis=-1)
    return infos[best], cws[best]


def llr_v2_bruteforce(y, points, labels, sigma2):
    """Axis-bit LLR by direct evaluation of the four Gaussian likelihoods."""
    y = complex(y)
    num = sum(
        math.exp(-abs(y - p) ** 2 / (2.0 * sigma2))
        for p, lab in zip(points, labels) if lab == 0
    )
    den = sum(
        math.exp(-abs(y - p) ** 2 / (2.0 * sigma2))
        for p, lab in zip(points, labels) if lab == 1
    )
    return math.log(num / den)


def mi_bpsk_quad_oracle(es, sigma2):
    """BPSK mutual information by scipy adaptive quadrature (bits/use).

    Independent of the package's Gauss-Hermite path: integrates the mixture
    entropy with scipy.integrate.quad on the real line.
    """
    a = math.sqrt(es)

    def mix_pdf(y):
        c = 1.0 / math.sqrt(2.0 * math.pi * sigma2)
        return 0.5 * c * (
            math.exp(-((y - a) ** 2) / (2.0 * sigma2))
            + math.exp(-((y + a) ** 2) / (2.0 * sigma2))
        )

    def integrand(y):
        p = mix_pdf(y)
        return -p * math.log2(p) if p > 0 else 0.0

    lim = a + 12.0 * math.sqrt(sigma2)
    h_y, _ = integrate.quad(integrand, -lim, lim, limit=400)
    h_n = math.log2(math.sqrt(2.0 * math.pi * math.e * sigma2))
    return h_y - h_n


def two_proportion_z(k1, n1, k2, n2):
    """Two-proportion z statistic (pooled)."""
    p1, p2 = k1 / n1, k2 / n2
    pool = (k1 + k2) / (n1 + n2)
    se = math.sqrt(pool * (1.0 - pool) * (1.0 / n1 + 1.0 / n2))
    if se == 0.0:
        return 0.0
    return (p1 - p2) / se
