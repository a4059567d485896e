"""Reference values for the unit tests, from scipy / numpy / arviz.

Inputs that are not closed-form come from the 64-bit LCG below; the C++
tests rebuild the same sequences with tests/support.hpp.
"""
import math
import warnings

import numpy as np
import scipy.special as sp
import scipy.stats as st

warnings.filterwarnings("ignore")
import arviz as az  # noqa: E402
from arviz.stats.stats import _gpdfit  # noqa: E402

MASK = (1 << 64) - 1


class Lcg:
    def __init__(self, seed):
        self.s = seed & MASK

    def uniform(self):
        self.s = (6364136223846793005 * self.s + 1442695040888963407) & MASK
        return ((self.s >> 11) + 0.5) / float(1 << 53)

    def normal(self):
        # inverse-CDF keeps the two implementations in lockstep
        return float(st.norm.ppf(self.uniform()))


def show(name, v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
    print(f"{name} = {v!r}")


show("pois_3_2", st.poisson.logpmf(3, 2))
show("pois_20_7", st.poisson.logpmf(20, 7))
show("pois_1000_950.5", st.poisson.logpmf(1000, 950.5))
show("zip_0_2_0.3", math.log(0.3 + 0.7 * math.exp(-2)))
show("zip_2_2_0.3", math.log(0.7) + st.poisson.logpmf(2, 2))
show("norm_0_0_1.5", st.norm.logpdf(0, 0, 1.5))
show("halfcauchy_2.5_1.7", st.halfcauchy.logpdf(2.5, scale=1.7))
show("lgamma_1e6", sp.gammaln(1e6))
show("lgamma_0.5", sp.gammaln(0.5))
show("inv_logit_-4.61", sp.expit(-4.61))
show("inv_logit_-1.22", sp.expit(-1.22))

# AR(1) chains with phi = 0.6, 4 x 200
lcg = Lcg(12345)
chains = []
for c in range(4):
    x = 0.0
    seq = []
    for t in range(200):
        x = 0.6 * x + lcg.normal()
        seq.append(x + 0.1 * c)
    chains.append(seq)
arr = np.array(chains)
show("rhat_split_ar", float(az.rhat(arr, method="split")))
show("ess_bulk_ar", float(az.ess(arr, method="bulk")))
show("ess_basic_ar", float(az.ess(arr, method="mean")))

# Generalized Pareto fit
lcg = Lcg(777)
x = np.array([st.genpareto.ppf(lcg.uniform(), 0.4, scale=2.0) for _ in range(60)])
k, sigma = _gpdfit(np.sort(x))
show("gpd_k", float(k))
show("gpd_sigma", float(sigma))

# PSIS-LOO on a 400 x 3 log-likelihood matrix; observation 2 is heavy-tailed
lcg = Lcg(2024)
S, N = 400, 3
ll = np.zeros((S, N))
for s in range(S):
    z = lcg.normal()
    ll[s, 0] = -0.9189385332046727 - 0.5 * (0.3 * z - 0.2) ** 2
    ll[s, 1] = -1.5 + 0.4 * z
    ll[s, 2] = -2.0 - 3.0 * lcg.uniform() ** 4 * 10.0
idata = az.from_dict(log_likelihood={"y": ll.reshape(1, S, N)})
loo = az.loo(idata, pointwise=True, reff=1.0)
waic = az.waic(idata, pointwise=True)
show("loo_elpd", float(loo.elpd_loo))
show("loo_p", float(loo.p_loo))
show("loo_pointwise", [float(v) for v in loo.loo_i.values])
show("loo_k", [float(v) for v in loo.pareto_k.values])
# arviz uses the population variance for se; the library uses n - 1
show("loo_se_sample", float(np.std(loo.loo_i.values, ddof=1) * math.sqrt(N)))
show("waic_elpd", float(waic.elpd_waic))
show("waic_p", float(waic.p_waic))
# same criterion with the n - 1 variance the library uses
v1 = ll.var(axis=0, ddof=1)
lppd = sp.logsumexp(ll, axis=0) - math.log(S)
show("waic_p_sample", float(v1.sum()))
show("waic_elpd_sample", float((lppd - v1).sum()))

# Quantile conventions on a fixed sample
xs = np.array([3.1, -0.4, 7.7, 2.2, 2.2, 5.0, -1.3, 0.0, 9.9, 4.4])
show("q7_0.03", float(np.quantile(xs, 0.03)))
show("q7_0.5", float(np.quantile(xs, 0.5)))
show("q7_0.97", float(np.quantile(xs, 0.97)))
show("q1_0.03", float(np.quantile(xs, 0.03, method="inverted_cdf")))
show("q1_0.97", float(np.quantile(xs, 0.97, method="inverted_cdf")))
show("q1_0.5", float(np.quantile(xs, 0.5, method="inverted_cdf")))

# Tversky-Kahneman weights
def w(p, g):
    return p**g / (p**g + (1 - p) ** g) ** (1 / g)

show("w_0.1_0.61", w(0.1, 0.61))
show("w_0.5_0.61", w(0.5, 0.61))
show("w_0.3_0.69", w(0.3, 0.69))
# mixed prospect {-600: 0.2, -100: 0.3, 250: 0.4, 900: 0.1}, cumulative
g, l = 0.61, 0.69
wl = [w(0.2, l), w(0.5, l) - w(0.2, l)]
wg = [w(0.5, g) - w(0.1, g), w(0.1, g)]
eu = -600 * wl[0] - 100 * wl[1] + 250 * wg[0] + 900 * wg[1]
show("cpt_mixed_eu", eu)
show("cpt_mixed_weights", wl + wg)
