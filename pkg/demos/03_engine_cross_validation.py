"""Three routes to the same number
==================================

The retention of a weight-conserving circuit does not depend on its gate
angles, so a closed-form expression, an exact density-matrix simulation, and
a classical flip-propagation sampler must all agree. Each route makes
entirely different approximations (none, truncation-free linear algebra,
finite sampling), which is what makes the agreement a real check.
"""

import numpy as np

from lpncsim import (
    NoiseModel,
    SubsystemSpec,
    build_mixer_cycle_circuit,
    dense_run,
    feasibility_expectation,
    flip_frame_run,
    reference_feasible_bits,
    subspace_weight,
)
from lpncsim.flipframe import subsystem_weight_validator

spec = SubsystemSpec(kappa=3, particle_number=1)
noise = NoiseModel(eta=0.05)
shots = 100_000

print("depth | closed form | dense engine | sampled (stderr)")
for depth in (0, 2, 5, 10, 14):
    circuit = build_mixer_cycle_circuit(spec, depth, seed=depth)

    analytic = subspace_weight(spec, noise, depth)

    rho = dense_run(circuit, noise, reference_feasible_bits(spec))
    exact = feasibility_expectation(rho, spec)

    sampled = flip_frame_run(
        circuit,
        noise,
        shots,
        seed=17 + depth,
        initial_bits=reference_feasible_bits(spec),
        valid=subsystem_weight_validator(spec),
    )
    print(
        f" {depth:4d} |   {analytic:.6f}  |   {exact:.6f}  | "
        f"{sampled.estimate:.6f} ({sampled.stderr:.6f})"
    )

# The sampler scales to registers the dense engine cannot touch: 30 blocks
# of 3 qubits is a 90-qubit register, still instant classically.
big = SubsystemSpec(3, 1, 30)
deep = build_mixer_cycle_circuit(big, 70, seed=9)
result = flip_frame_run(
    deep,
    NoiseModel(1e-3),
    shots,
    seed=5,
    initial_bits=reference_feasible_bits(big),
    valid=subsystem_weight_validator(big),
)
from lpncsim import feasible_probability

want = feasible_probability(big, NoiseModel(1e-3), 70)
print(f"\n90 qubits, depth 70: sampled {result.estimate:.5f} "
      f"vs closed form {want:.5f} (stderr {result.stderr:.5f})")
