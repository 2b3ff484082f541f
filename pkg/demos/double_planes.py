"""The three small double planes branched along (2,2)-curves: two spheres, a torus, a Klein bottle."""

from viropatch.checks import glue_bundle
from viropatch.charts import build_torus_arrangement
from viropatch.fixtures import SYNTHETIC, load_fixture
from viropatch.surfaces import blow_up_nodes, double_cover_topology, sign_regions

for name in SYNTHETIC:
    b = load_fixture(name)
    d1, d2, _ = b.tridegree
    rc = blow_up_nodes(sign_regions(build_torus_arrangement(glue_bundle(b)), b.seed))
    st = double_cover_topology(rc, d1, d2)
    print(f"{name:9} b0={st.b0} chi={st.chi} b1={st.b1}  {st.describe()}")
