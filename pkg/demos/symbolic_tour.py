"""Graphs as polynomials in the model entries y_alpha."""

from vertexmodels import Multigraph, PinMap, kernel_generator_pins, p_poly, p_quantum, path_graph
from vertexmodels.symbolic import diagram_check, diagram_sides, parse_x_monomial, x_monomials

# p(G) keeps y symbolic: one monomial per colouring of the edges.
print("p(K2), k = 2:   ", p_poly(path_graph(2), 2))
print("p(loop), k = 2: ", p_poly(Multigraph(1, [(0, 0)]), 2))
print("p(P3), k = 2:   ", p_poly(path_graph(3), 2))

# A signed sum of pinned copies of P3 is a nonzero formal combination of
# graphs whose image under p cancels.
gen = kernel_generator_pins(path_graph(3), PinMap((0, 2), (1, 2)))
for G, c in gen.terms.items():
    print(f"  {c:+d} * {G}")
print("p of that combination, k = 1:", p_quantum(gen, 1))

# x-monomials name multigraphs on [n]; substituting x_ij = sum_h z_hi z_hj and
# reading each column of z as a colour multiset gives p again.
q = parse_x_monomial("x[1,2]^2*x[2,3]*x[3,3]")
sides = diagram_sides(q, 2, 3)
print("p(mu(q))      =", sides.left)
print("sigma(tau(q)) =", sides.right)
count = sum(diagram_check(m, k, 3) for k in (1, 2) for m in x_monomials(3, 3))
print(f"square commutes on {count} monomials (n = 3, degree <= 3, k <= 2)")
