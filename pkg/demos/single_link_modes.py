"""Configure a single two-mode link and inspect the covertness math.

Walks through the closed forms on one link: the figure of merit, the
optimal per-mode power split, and how tightly the covertness surrogate
is consumed.
"""

import math

from covertnet import (
    Adversary,
    CovertBudget,
    CsiEntry,
    FriendlyNode,
    GainTable,
    Position,
    build_network,
    covert_surrogate,
    exact_gaussian_kl,
    linearized_capacity,
    link_capacity,
    link_gamma_single,
    optimal_mode_powers,
    pinsker_bound,
)

# One transmitter, one receiver 30 units away, one detector 45 units out.
# Mode 0 is a steady unit-gain channel; mode 1 happens to fade favourably:
# strong toward the receiver, weak toward the detector.
nodes = [
    FriendlyNode(0, Position(0.0, 0.0), noise_var=(2.0, 2.0)),
    FriendlyNode(1, Position(30.0, 0.0), noise_var=(1.5, 1.5)),
]
willie = Adversary(0, Position(15.0, 45.0), noise_var=(1.0, 1.0))
friendly = {
    (0, 1, 0): 1.0, (1, 0, 0): 1.0,
    (0, 1, 1): 1.4, (1, 0, 1): 1.4,
}
adversary = {
    (0, 0, 0): CsiEntry.known(1.0), (1, 0, 0): CsiEntry.known(1.0),
    (0, 0, 1): CsiEntry.known(0.35), (1, 0, 1): CsiEntry.known(0.35),
}
net = build_network(nodes, [willie], GainTable(friendly, adversary), alpha=2.0, source=0, dest=1)

budget = CovertBudget(epsilon=0.01, n=500)
print(f"per-symbol budget delta = {budget.delta:.2e} nats")

metric = link_gamma_single(net, 0, 1, willie=0)
print(f"link figure of merit gamma = {metric.gamma:.4f}")
print(f"per-mode power factors     = {metric.per_mode_coeff}")

powers = optimal_mode_powers(metric, budget.delta)
print(f"optimal powers             = {powers}")
print(f"mode 1 : mode 0 power      = {powers[1] / powers[0]:.2f}x  (fading mode is cheap here)")

# The constraint is consumed exactly, and capacity follows the square root law.
used = covert_surrogate(net, 0, powers, willies=[0])
print(f"surrogate used = {used:.6e} (== delta up to rounding)")
print(f"link capacity  = {link_capacity(budget.delta, metric.gamma):.6f} nats/symbol")
print(f"linearized objective at the optimum = {linearized_capacity(net, 0, 1, powers):.6f} (half the headline)")

# What the detector faces, expressed as an error-probability floor.  The
# exact divergence per symbol is far below the quadratic surrogate.
d = net.arrays.adv_dist[0, 0]
per_symbol = sum(
    exact_gaussian_kl(adversary[(0, 0, m)].v ** 2 * powers[m] / d**2.0) for m in range(2)
)
print(f"exact divergence over the block: {budget.n * per_symbol:.3e} (budget {budget.epsilon})")
print(f"detector error floor from the budget: {pinsker_bound(budget.epsilon):.4f}")

# Budget scaling: quadruple the budget, powers double, capacity doubles.
strong = CovertBudget(epsilon=0.04, n=500)
p2 = optimal_mode_powers(link_gamma_single(net, 0, 1, 0), strong.delta)
print(f"4x budget -> power ratio {p2[0] / powers[0]:.3f}, capacity ratio "
      f"{link_capacity(strong.delta, metric.gamma) / link_capacity(budget.delta, metric.gamma):.3f}")
