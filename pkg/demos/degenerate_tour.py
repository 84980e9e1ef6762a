# coding: utf-8

# # Degenerate polynomials and Stirling transforms

# In[1]:

from qbern.carlitz import beta_poly_closed
from qbern.degenerate import (
    dbeta,
    dbeta_double_sum,
    difference_sides,
    multiplication_rhs,
    recover_beta,
)
from qbern.exactcore import rf_eq, rf_subst


# The degenerate polynomial of degree 2, then lambda set to zero.

# In[2]:

d2 = dbeta(2)
print(d2.to_text())
print(rf_eq(rf_subst(d2, "L", 0), beta_poly_closed(2)))


# Independent constructions agree.

# In[3]:

print(all(rf_eq(dbeta(n), dbeta_double_sum(n)) for n in range(7)))


# Going back with second-kind Stirling numbers removes lambda entirely.

# In[4]:

rec = recover_beta(5)
print(rec.variables(), rf_eq(rec, beta_poly_closed(5)))


# The multiplication formula for m = 2 and the difference identity.

# In[5]:

print(rf_eq(multiplication_rhs(4, 2), dbeta(4)))
lhs, rhs = difference_sides(3)
print(rf_eq(lhs, rhs))
lhs, rhs = difference_sides(1, upper="n-1")
print("shorter sum leaves", (lhs - rhs).to_text())
