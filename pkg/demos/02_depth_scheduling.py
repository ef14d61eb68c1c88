"""Circuit depth on fully-connected hardware
============================================

Two schedulers set the depth budget of the alternating ansatz: a round-robin
tournament packs all pairwise mixer gates of a block, and a proper edge
coloring packs the phase-separation gates of the problem graph.
"""

from lpncsim import SubsystemSpec, build_xy_qaoa_circuit, schedule_clique_mixer
from lpncsim.circuits import assert_proper_edge_coloring, schedule_edge_coloring
from lpncsim.graphs import random_regular_graph

# All-to-all mixer on one block: kappa-1 layers when kappa is even (perfect
# matchings), kappa layers when odd (one idle qubit per round).
print("clique mixer depths:")
for kappa in range(2, 11):
    circ = schedule_clique_mixer(kappa, beta=0.4)
    gates = sum(len(layer) for layer in circ.layers)
    print(f"  kappa={kappa:2d}: {gates:2d} gates in {circ.depth:2d} layers")

# Phase separation: color the problem graph's edges so no two incident
# edges share a layer. Misra-Gries needs at most max_degree + 1 colors.
print("\nedge coloring of random 3-regular graphs on 30 vertices:")
for seed in range(5):
    graph = random_regular_graph(30, 3, seed=seed)
    classes = schedule_edge_coloring(graph, seed=seed)
    assert_proper_edge_coloring(graph, classes)
    sizes = ", ".join(str(len(c)) for c in classes)
    print(f"  seed {seed}: {len(classes)} layers (class sizes {sizes})")

# Putting it together: per ansatz block, a 3-regular graph with 3 colors per
# vertex costs (k+1) + kappa = 4 + 3 = 7 layers.
graph = random_regular_graph(30, 3, seed=1)
spec = SubsystemSpec(kappa=3, particle_number=1, subsystems=30)
for blocks in (1, 3, 10):
    circ = build_xy_qaoa_circuit(graph, spec, [0.3] * blocks, [0.7] * blocks)
    print(f"\n{blocks} block(s): depth {circ.depth} on {circ.qubit_count} qubits "
          f"(all gates weight-conserving: {circ.all_lpnc})")

# The 6-color weight-2 encoding pays 4 layers per edge class for its
# 4-local terms plus a 4-layer mixer: 4*(k+1) + 4 = 20 per block.
spec2 = SubsystemSpec(kappa=4, particle_number=2, subsystems=30)
circ2 = build_xy_qaoa_circuit(graph, spec2, [0.3], [0.7])
print(f"weight-2 encoding, 1 block: depth {circ2.depth} on {circ2.qubit_count} qubits")
