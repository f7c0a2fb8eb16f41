"""
Moments of |u.X| on the sphere
==============================

"""

# for X uniform on the unit sphere the marginal |u.X| has density
# proportional to (1 - t^2)^((d-3)/2); the mean m_d sets the radius of the
# halving polytope
import math
from halving_lab import mean_abs_dot, variance_abs_dot
from halving_lab.moments import sample_abs_dot

print("   d        m_d      var_d   m_d*sqrt(d)   d*var_d")
for d in (2, 3, 5, 10, 100, 1000):
    m, v = mean_abs_dot(d), variance_abs_dot(d)
    print("%4d  %9.6f  %9.6f  %11.6f  %8.6f" % (d, m, v, m * math.sqrt(d), d * v))
print("limits:            %11.6f  %8.6f" % (math.sqrt(2 / math.pi), 1 - 2 / math.pi))

# a Monte Carlo check in d = 3, where |u.X| is uniform on [0, 1]
x = sample_abs_dot(3, 10**6, seed=1)
print("d=3 sample mean %.4f, variance %.4f" % (x.mean(), x.var()))
