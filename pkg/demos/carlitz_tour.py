# coding: utf-8

# # Carlitz q-Bernoulli numbers and polynomials
#
# Everything here is exact: coefficients are `Fraction`s and values are
# reduced rational functions in `q`, `L` (lambda) and `Q` (stands for q^x).

# In[1]:

from qbern.carlitz import beta_number, beta_poly, beta_poly_closed, beta_via_integral
from qbern.exactcore import rf_eq, rf_limit


# The first few numbers.

# In[2]:

for n in range(5):
    print(n, beta_number(n).to_text())


# The same polynomial three ways: the binomial expansion in the numbers,
# the closed form, and the q-integral.

# In[3]:

n = 4
a, b, c = beta_poly(n), beta_poly_closed(n), beta_via_integral(n)
print(rf_eq(a, b), rf_eq(b, c))
print(b.to_latex())


# At q = 1 the numbers turn into the classical Bernoulli numbers.

# In[4]:

for n in (1, 2, 4, 12):
    print(n, rf_limit(beta_number(n), "q", 1).to_text())
