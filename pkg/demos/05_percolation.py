"""Site percolation diagnostics and the grey-cube environment.

At high opening probability the lattice carries a unique giant cluster
that crosses the box in many vertex-disjoint ways and is dense in every
sub-cube.  The same machinery coarse-grains a point process into good
(occupied) unit cubes and measures the regularity of their largest
connected component.
"""

from hopwalk.percolation import (
    boundary_ratio,
    cluster_cube_density,
    crossing_count,
    density_and_occupancy_checks,
    evaluate_events,
    grey_cluster,
    label_clusters,
    sample_site_field,
)
from hopwalk.pointprocess import sample_poisson

field = sample_site_field(n=64, dim=2, p=0.75, seed=1)
labels = label_clusters(field)
big = labels.sizes.max()
print(f"p = {field.p} field on a {field.n}x{field.n} box: "
      f"{labels.max_label} clusters, largest {big} sites "
      f"({100 * big / field.open.sum():.1f}% of open sites)")

for direction in (0, 1):
    print(f"vertex-disjoint crossings along axis {direction}: "
          f"{crossing_count(field, direction)}")

a, b, c = evaluate_events(field, kappa=0.5)
print(f"events: unique large cluster {a}, crossing cluster {b}, "
      f"giant cluster {c}")
print(f"min sub-cube density of the largest cluster (side 16): "
      f"{cluster_cube_density(field, labels, 16):.3f}")

# grey cubes of a Poisson environment
xi = sample_poisson(1.0, 2, 32.0, seed=2)
cluster = grey_cluster(xi, cube_side=2.0)
print(f"\nPoisson environment: grey cluster covers "
      f"{100 * cluster.coverage:.1f}% of the cubes")
report = density_and_occupancy_checks(xi, cube_side=2.0, eps=0.5, c_w=2.0)
print(f"min window density {report['min_density']:.3f}, "
      f"occupancy check {report['occupancy']}")

subset = sorted(cluster.member_cubes)[:4]
vol_b, vol_a, ratio = boundary_ratio(cluster, subset)
print(f"boundary/volume of a 4-cube subset: {vol_b:.0f}/{vol_a:.0f} "
      f"= {ratio:.2f}")
