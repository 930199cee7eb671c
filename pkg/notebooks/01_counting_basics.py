"""
Counting simplets in a small complex
====================================

A simplicial complex is stored by its maximal simplices.  Here a filled
triangle shares node 2 with an edge, and we count every connected 3-node
pattern exactly.
"""

from simplets import SimplicialComplex, count_exact, get_catalog, primal_graph

K = SimplicialComplex.from_simplices([[0, 1, 2], [2, 3]])
print(K.maximal_simplices, "edges:", primal_graph(K).edges())

# The size-3 catalog: filled triangle, open path, hollow triangle.
cat = get_catalog(3)
for s, nst in zip(cat.simplets, cat.spanning_tree_counts):
    print(s.maximal_simplices, "spanning trees:", nst)

report = count_exact(K, cat)
print("exact counts:", report.counts)

# Catalog sizes grow quickly with k.
for k in (3, 4, 5):
    c = get_catalog(k)
    print(f"k={k}: {len(c)} simplets, {c.total_maximal_simplices()} maximal simplices in total")
