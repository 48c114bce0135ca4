"""Where the broken-face inequality B0 >= B1 fails.

Inserting a regular four-point graph into a vertex is claimed never to lower
the number of broken faces of the host.  That holds when the host is regular,
and for every gluing that follows the cyclic order of the vertex.  With an
irregular host and a twisted gluing it fails: the tadpole with two broken
faces absorbs a bubble and becomes the planar sunset, which has one.
"""
from hopfgraph.canon import ribbon_key
from hopfgraph.fixtures import BUBBLE, SUNSET_P, TADPOLE_X
from hopfgraph.ribbon import topology
from hopfgraph.surgery import GluingData, insert, is_order_respecting

gl = GluingData.make("vertex", 0, {"f1": 0, "f2": 1, "f3": 3, "f4": 2})
out = insert(TADPOLE_X, BUBBLE, gl)
host, guest, res = topology(TADPOLE_X), topology(BUBBLE), topology(out)
print(f"host  tadpole_x: g={host.g} B={host.B}")
print(f"guest bubble:    g={guest.g} B={guest.B}")
print(f"result:          g={res.g} B={res.B}")
print("order respecting:", is_order_respecting(TADPOLE_X, BUBBLE, gl))
print("result is the planar sunset:", ribbon_key(out) == ribbon_key(SUNSET_P))
print("B0 >= B1:", res.B >= host.B)
