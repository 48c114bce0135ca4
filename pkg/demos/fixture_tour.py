"""A walk through the six named graphs: faces, genus and broken faces.

Each graph is a rotation system. Faces are traced by following an edge and
turning to the next port of the vertex you land on; a face is broken when
it passes an external leg.
"""
from hopfgraph.canon import plain_key, ribbon_key
from hopfgraph.fixtures import FIXTURES
from hopfgraph.ribbon import is_planar_regular, topology, trace_faces

print(f"{'graph':10} V  I  E  F  B  g  regular")
for name, g in FIXTURES.items():
    t = topology(g)
    print(f"{name:10} {t.V}  {t.I}  {t.E}  {t.F}  {t.B}  {t.g}  {is_planar_regular(g)}")

tp, tx = FIXTURES["tadpole_p"], FIXTURES["tadpole_x"]


def faces(g):
    return [" ".join(f"{h.vertex}.{h.port}" for h in face) for face in trace_faces(g).faces]


print("\ntadpole_p faces:", faces(tp))
print("tadpole_x faces:", faces(tx))
# same Feynman graph, different ribbon graph
print("same plain class:", plain_key(tp) == plain_key(tx))
print("same ribbon class:", ribbon_key(tp) == ribbon_key(tx))
