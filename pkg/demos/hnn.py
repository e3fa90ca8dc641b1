"""Stable letter norm of an HNN extension of S3 over A3, and what goes wrong when diam(A) > K."""

from pathlib import Path

from graev import io
from graev.hnn import build_hnn, check_subgroup_metric_agreement, restriction_violations, stable_letter_norm
from graev.metrics import NormalChain, metric_from_chain

hnn = io.read_hnn(io.load_json(Path(__file__).parent / "data" / "hnn_a3.json"))
st = stable_letter_norm(hnn)
print(f"K = {hnn.k}: |t| = {st.value} (lower bound {st.lower_bound}), witness c, x = {st.witness}")
print("restriction violations:", restriction_violations(hnn))

g = hnn.group
big = metric_from_chain(g, NormalChain([tuple(range(g.order)), hnn.a, (g.identity,)], [4, 2]))
loose = build_hnn(big, hnn.a, hnn.a, {a: a for a in hnn.a}, 1, check_diameter=False)
rep, n = check_subgroup_metric_agreement(loose, 2)
print(f"diam(A) = 2 > K = 1: {len(rep.violations)} disagreements among {n} elements, e.g.")
for v in rep.violations[:2]:
    print("  ", v)
