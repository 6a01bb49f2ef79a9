"""
Two circles of very different size, one diagram that sees both
==============================================================

A unit circle and a radius-5 circle, both sampled densely. Plain
Vietoris-Rips persistence measures loops in absolute units, so the small
circle's class dies five times earlier and looks like noise next to the
big one. Rescaling the metric by the estimated sampling density puts the
two loops on comparable footing.
"""

import pathlib
import time

from scipy.spatial.distance import cdist

from scaledph import (
    dvr_filtration,
    make_rng,
    persistence_diagram,
    sample_two_circles,
    vr_filtration,
    write_diagram_svg,
)

out = pathlib.Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

# 500 points, about half on each circle; the sampler attaches the exact
# densities but the pipeline below estimates its own from the points
cloud = sample_two_circles(make_rng(7), n=500)
print(f"{len(cloud.points)} points, radii 1 and 5")

# plain Rips on Euclidean distances
t0 = time.perf_counter()
dgm_vr = persistence_diagram(vr_filtration(cloud.points))
print(f"plain VR reduced in {time.perf_counter() - t0:.1f}s")

# density-scaled Rips: estimate density (intrinsic dimension 1, the
# circles are curves), reweight a 10-NN graph, take shortest paths
t0 = time.perf_counter()
dgm_dvr = persistence_diagram(dvr_filtration(cloud, dim=1, k=10))
print(f"density-scaled VR reduced in {time.perf_counter() - t0:.1f}s")

for name, dgm in (("plain", dgm_vr), ("scaled", dgm_dvr)):
    lives = dgm.finite_lifetimes(1)
    top = ", ".join(f"{x:.3f}" for x in lives[:3])
    ratio = lives[1] / lives[0] if len(lives) > 1 else 0.0
    print(f"{name:>7}: top H1 lifetimes [{top}]  second/first = {ratio:.2f}")

# the scaled diagram carries two comparable loop classes; the plain one
# shows a single dominant loop with the small circle buried in the tail
write_diagram_svg(dgm_vr, out / "two_circles_vr.svg", title="plain VR")
write_diagram_svg(dgm_dvr, out / "two_circles_dvr.svg", title="density-scaled VR")
print(f"diagrams written to {out}/two_circles_*.svg")
