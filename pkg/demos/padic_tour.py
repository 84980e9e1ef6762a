# coding: utf-8

# # Riemann sums in Z_3
#
# The q-Volkenborn integral is a limit of sums over y mod p^N.  We take
# q = 4, precision 3^15, and watch the error shrink as N grows.

# In[1]:

from qbern.padic import QConfig, check_dbeta_integral


# In[2]:

for n in range(4):
    cfg = QConfig(p=3, K=15, lambda_val=1, x_val=1)
    levels = check_dbeta_integral(n, cfg, [2, 4, 6])
    print(n, [(r.N, "exact" if r.exact else r.valuation) for r in levels])
