"""Block averaging operators and their momentum response.

The averaging map Q sends a fine field to a coarse field by weighting each
block with a profile; its adjoint distributes coarse values back.  The flat
profile makes Q Q* the identity on coarse fields, smoothed profiles trade
that sharpness for a faster-decaying momentum response, and the composite
Q*Q is a rank-one projection in every momentum fiber.
"""

import numpy as np

from blochlat import LatticeSpec, build_family
from blochlat.averaging import (
    dirichlet_average,
    naive_profile,
    profile_hat,
    prolong_field,
    prolong_restrict_fiber,
    restrict_field,
    smooth_profile,
)
from blochlat.rand import random_field_values, rng_from_seed

spec = LatticeSpec(eps_t=1.0, eps_x=1.0, l_t=3, l_x=3, big_l_t=9, big_l_x=9, dim=1)
fam = build_family(spec)
rng = rng_from_seed(3)

naive = naive_profile(spec)
smooth = smooth_profile(spec, 2)
print("flat profile weights per axis:",
      [[float(x) for x in w.round(4)] for w in naive.axis_weights])
print("width-2 smooth weights per axis:",
      [[float(x) for x in w.round(4)] for w in smooth.axis_weights])

psi = fam.field("coarse", random_field_values(fam, "coarse", rng))
back = restrict_field(fam, naive, prolong_field(fam, naive, psi))
print(f"flat-profile average of its own spread-out field, max deviation from "
      f"the input: {np.abs(back.values - psi.values).max():.3e}")

back = restrict_field(fam, smooth, prolong_field(fam, smooth, psi))
print(f"same with the smooth profile (no longer a projection): deviation "
      f"{np.abs(back.values - psi.values).max():.3f}")

# scalar momentum response of a 3-point flat average
print("\n3-point average response u(theta):")
for theta in (0.0, np.pi / 2, 2 * np.pi / 3, np.pi):
    print(f"  theta = {theta:5.3f}: u = {dirichlet_average(3, theta):+.6f}")
print("the response at theta=pi is -1/3: averaging cannot suppress the "
      "fastest block oscillation below 1/points")

# smooth profiles multiply responses: width-2 response is the square
k = np.array([0.9, -0.4])
d = np.prod([dirichlet_average(3, float(k[a] * spec.spacings()[a]))
             for a in range(2)])
print(f"\nsmooth width-2 response at k={k}: {profile_hat(smooth, k):+.6f} "
      f"= (flat response {d:+.6f})^2")

# each fiber of Q*Q has rank one, so 8 of its 9 eigenvalues vanish
fiber = prolong_restrict_fiber(smooth, k).entries
vals = np.sort(np.abs(np.linalg.eigvals(fiber)))[::-1]
print(f"composite fiber eigenvalue magnitudes: largest {vals[0]:.6f}, "
      f"second largest {vals[1]:.2e}")
