"""Renormalize the two-bubble chain by hand and by machine.

Under the toy rule a graph with L loops is worth ((1+e)/e)^L.  The chain has
two bubble subgraphs, so its counterterm needs the nested subtraction.
"""
from hopfgraph.canon import plain_key
from hopfgraph.fixtures import BUBBLE, CHAIN
from hopfgraph.hopf import HopfAlgebra, element_to_json, tensor_to_json
from hopfgraph.renorm import Renormalizer, forest_formula, forests

A = HopfAlgebra("phi4")
names = {plain_key(BUBBLE): "bubble", plain_key(CHAIN): "chain"}
print("reduced coproduct:", tensor_to_json(A.reduced_coproduct(CHAIN), names))
print("antipode:", element_to_json(A.antipode(CHAIN), names))

R = Renormalizer()
print("\nphi(bubble) =", R.phi((plain_key(BUBBLE),)))
print("phi(chain)  =", R.phi((plain_key(CHAIN),)))
print("phi_-(bubble) =", R.twisted_antipode(BUBBLE))
print("phi_-(chain)  =", R.twisted_antipode(CHAIN))
print("phi_+(chain)  =", R.renormalize(CHAIN))

# The forest formula knows nothing about coproducts; it must agree.
print(f"\n{len(forests(CHAIN))} forests, forest formula gives", forest_formula(CHAIN))
