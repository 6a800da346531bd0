"""Independent re-checking of route plans against their network.

``verify_plan`` recomputes every invariant a plan is supposed to satisfy
from the network alone: per-link surrogate tightness, budget accounting,
capacity consistency and (for optimally-split plans) equalization.  It
also reports the exact per-detector divergence the plan induces and the
resulting error-probability floor, which is a strictly stronger
diagnostic than the quadratic surrogate the planner enforces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .metrics import (
    covert_surrogate,
    exact_gaussian_kl,
    link_capacity,
    link_metric_general,
    pinsker_bound,
)
from .model import NetworkInstance, RoutePlan, distance, validate_route_plan

# Algorithms that split the budget optimally (sum of shares == budget,
# all link capacities equal).
_EQUALIZING = ("het-opt", "brute-force", "single-mode-")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    residual: float | None = None


@dataclass(frozen=True)
class AdversaryDiagnostic:
    adversary_id: int
    exact_kl_total: float
    pinsker_lower_bound: float


@dataclass(frozen=True)
class VerifyReport:
    passed: bool
    checks: tuple[CheckResult, ...]
    adversaries: tuple[AdversaryDiagnostic, ...]
    budget_divergence: float
    budget_pinsker_bound: float

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                    "residual": c.residual,
                }
                for c in self.checks
            ],
            "adversaries": [
                {
                    "adversary": a.adversary_id,
                    "exact_kl_total": a.exact_kl_total,
                    "pinsker_lower_bound": a.pinsker_lower_bound,
                }
                for a in self.adversaries
            ],
            "budget_divergence": self.budget_divergence,
            "budget_pinsker_bound": self.budget_pinsker_bound,
        }


def _is_equalizing(algorithm: str) -> bool:
    return any(algorithm.startswith(tag) for tag in _EQUALIZING)


def verify_plan(net: NetworkInstance, plan: RoutePlan, rel_tol: float = 1e-9) -> VerifyReport:
    """Recompute a plan's invariants from scratch.

    Structural mismatch (unknown ids, broken path, wrong power shape)
    raises; everything else is reported as per-check pass/fail with the
    measured residual.
    """
    validate_route_plan(net, plan)

    if plan.adversary_mode == "single" and net.num_adversaries != 1:
        raise ValueError(
            "plan was made against a single adversary but the network has "
            f"{net.num_adversaries}"
        )
    willies = [a.id for a in net.adversaries]
    extended = plan.csi_variant != "known" and len(willies) > 1
    modes = None
    if plan.algorithm.startswith("single-mode-"):
        modes = [int(plan.algorithm.rsplit("-", 1)[1]) - 1]
    checks: list[CheckResult] = []

    # Per-link surrogate must consume exactly the allotted share.
    worst = 0.0
    for (u, _v), d_i, pw in zip(plan.links, plan.delta_per_link, plan.powers):
        s = covert_surrogate(net, u, pw, willies, plan.csi_variant, extended)
        worst = max(worst, abs(s - d_i) / d_i)
    checks.append(
        CheckResult(
            name="surrogate-tightness",
            passed=worst <= rel_tol,
            detail="max relative |surrogate - delta_i| over links",
            residual=worst,
        )
    )

    # Budget accounting.
    delta = plan.budget.delta
    total = 0.0
    for d_i in plan.delta_per_link:
        total += d_i
    if _is_equalizing(plan.algorithm):
        residual = abs(total - delta) / delta
        ok = residual <= rel_tol
        detail = "relative |sum(delta_i) - delta| (optimal split uses the whole budget)"
    else:
        residual = (total - delta) / delta
        ok = residual <= rel_tol
        detail = "relative budget overshoot (equal split may leave slack)"
    checks.append(CheckResult(name="budget-sum", passed=ok, detail=detail, residual=residual))

    # Capacity consistency: recompute each link's figure of merit under
    # the plan's adversary/CSI/mode configuration.
    caps = []
    for (u, v), d_i in zip(plan.links, plan.delta_per_link):
        metric = link_metric_general(net, u, v, willies, plan.csi_variant, extended, modes)
        caps.append(link_capacity(d_i, metric.gamma))
    cap_residual = abs(min(caps) - plan.path_capacity) / plan.path_capacity
    checks.append(
        CheckResult(
            name="capacity-consistency",
            passed=cap_residual <= rel_tol,
            detail="relative |min link capacity - stated path capacity|",
            residual=cap_residual,
        )
    )

    if _is_equalizing(plan.algorithm):
        spread = (max(caps) - min(caps)) / max(caps)
        checks.append(
            CheckResult(
                name="capacity-equalization",
                passed=spread <= rel_tol,
                detail="relative spread of per-link capacities",
                residual=spread,
            )
        )

    # Exact-divergence diagnostics, one per detector: the planner bounds a
    # quadratic surrogate; the true Gaussian divergence is never larger.
    diagnostics = []
    for a in net.adversaries:
        kl = 0.0
        for (u, _v), pw in zip(plan.links, plan.powers):
            src_pos = net.node_by_id[u].pos
            d_a = distance(src_pos, a.pos) ** net.alpha
            for m in range(net.num_modes):
                entry = net.gains.adversary_csi(u, a.id, m)
                snr = (entry.v * entry.v) * pw[m] / (a.noise_var[m] * d_a)
                kl += exact_gaussian_kl(snr)
        total_kl = plan.budget.n * kl
        diagnostics.append(
            AdversaryDiagnostic(
                adversary_id=a.id,
                exact_kl_total=total_kl,
                pinsker_lower_bound=pinsker_bound(total_kl),
            )
        )

    budget_div = plan.budget.n * total  # surrogate-based end-to-end divergence bound
    return VerifyReport(
        passed=all(c.passed for c in checks),
        checks=tuple(checks),
        adversaries=tuple(diagnostics),
        budget_divergence=budget_div,
        budget_pinsker_bound=pinsker_bound(budget_div),
    )
