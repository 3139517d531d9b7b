"""Log singular values versus log eigenvalue moduli, on worked examples.

The two chamber-valued projections of a matrix — sorted log singular
values and sorted log eigenvalue moduli — agree for normal matrices,
disagree for sheared ones, and reconverge under high powers.  This script
walks through both on matrices whose answers are known in closed form.
"""

import warnings

import numpy as np

from repdyn.errors import ConditionWarning
from repdyn.linalg import cartan_projection, jordan_projection, opposition_involution

# --- a symmetric matrix where both projections have closed forms --------
m = np.array([[3.0, 1.0], [1.0, 1.0]])
sv = cartan_projection(m)
print("matrix [[3,1],[1,1]]")
print("  log singular values:", sv.values)
print("  closed form:        ", np.log([2.0 + np.sqrt(2.0), 2.0 - np.sqrt(2.0)]))

e = np.array([[2.0, 1.0], [1.0, 1.0]])
jv = jordan_projection(e)
print("matrix [[2,1],[1,1]]")
print("  log eigenvalue moduli:", jv.values)
print("  closed form:          ", np.log([(3.0 + np.sqrt(5.0)) / 2.0,
                                          (3.0 - np.sqrt(5.0)) / 2.0]))

# --- a shear separates the two projections ------------------------------
shear = np.array([[2.0, 5.0], [0.0, 0.5]])
print("\nshear [[2,5],[0,1/2]]")
print("  singular projection:  ", cartan_projection(shear).values)
print("  eigenvalue projection:", jordan_projection(shear).values)

# --- ... and high powers close most of the gap --------------------------
# the shear contributes a constant offset, so the normalized difference
# from the eigenvalue projection shrinks like 1/power; the 64th power has
# condition ~4e39, which rightly draws a conditioning warning we silence
# for this one deliberate stress
p = np.linalg.matrix_power(shear, 64)
with warnings.catch_warnings():
    warnings.simplefilter("ignore", ConditionWarning)
    scaled = cartan_projection(p).values / 64.0
print("  singular projection of the 64th power, divided by 64:")
print("   ", scaled)
print("  eigenvalue projection for comparison:")
print("   ", jordan_projection(shear).values)

# --- the inverse acts by the opposition involution ----------------------
inv = cartan_projection(np.linalg.inv(shear))
print("\ninvolution check: projection of the inverse")
print("  measured:", inv.values)
print("  predicted:", opposition_involution(cartan_projection(shear)).values)
