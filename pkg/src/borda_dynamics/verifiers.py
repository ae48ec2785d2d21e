"""Executable checks for the constructive dynamical claims.

Each verifier re-derives its hypotheses from the realized scenario (it never
trusts the builder), runs the dynamics, and returns a VerificationOutcome
whose evidence is enough to replay a failure: measured transient and period,
margins, and the first offending step where applicable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .dynamics import (
    OrbitReport,
    Profile,
    enumerate_fixed_points,
    margin_text,
    run_until_cycle,
)
from .errors import ScenarioFormatError
from .influence import class_structure, perturb_weights, reach
from .move_graph import build_cover_graph, find_cycle
from .scenarios import ScenarioConfig, build_gadget, build_traveling_wave, load_scenario, with_pins
from .weak_orders import (
    WeakOrder,
    alternative_names,
    enumerate_weak_orders,
    format_order,
    parse_order,
)

DEFAULT_ENUM_BUDGET = 10**6


@dataclass
class VerificationOutcome:
    """Result of one verifier: a claim, a verdict, and replayable evidence."""

    claim: str
    passed: bool
    evidence: dict

    def to_json_dict(self) -> dict:
        return {"claim": self.claim, "passed": self.passed, "evidence": _jsonable(self.evidence)}


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, WeakOrder):
        return format_order(value)
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, frozenset):
        return sorted(value)
    return value


def _profile_text(profile: Profile, names: Sequence[str]) -> dict[str, str]:
    return {name: format_order(w) for name, w in zip(names, profile)}


def _hypothesis_not_met(claim: str, reason: str, **extra) -> VerificationOutcome:
    evidence = {"hypothesis_met": False, "reason": reason}
    evidence.update(extra)
    return VerificationOutcome(claim, False, evidence)


# --- traveling waves on directed rings --------------------------------------


def _ring_predecessors(sc: ScenarioConfig) -> dict[int, int] | None:
    """Predecessor map when the network is a pure single-cycle copier ring."""
    net = sc.network
    pred = {}
    for i in range(net.n):
        ins = net.in_neighbors(i)
        if len(ins) != 1 or net.weights[i][ins[0]] != 1:
            return None
        pred[i] = ins[0]
    # the predecessor permutation must be one n-cycle
    seen = {0}
    node = pred[0]
    while node not in seen:
        seen.add(node)
        node = pred[node]
    if len(seen) != net.n:
        return None
    return pred


def verify_traveling_wave(sc: ScenarioConfig, expected_k: int) -> VerificationOutcome:
    """The ring of copiers sustains a wave of period expected_k from time 0,
    with every logged target equal to the predecessor's current state."""
    claim = f"{sc.label}: copier ring oscillates with period {expected_k}"
    if sc.persistent.pins:
        return _hypothesis_not_met(claim, "persistent nodes present on the ring")
    pred = _ring_predecessors(sc)
    if pred is None:
        return _hypothesis_not_met(claim, "network is not a single copier ring")

    report = sc.run()
    violation = None
    for t, log in enumerate(report.target_log):
        state = report.prefix[t]
        for i, tau in log:
            if tau != state[pred[i]]:
                violation = {"step": t, "node": sc.network.names[i]}
                break
        if violation:
            break
    hypothesis_held = violation is None
    passed = hypothesis_held and report.mu == 0 and report.period == expected_k
    return VerificationOutcome(
        claim,
        passed,
        {
            "hypothesis_met": True,
            "mu": report.mu,
            "period": report.period,
            "expected_period": expected_k,
            "targets_copy_predecessor": hypothesis_held,
            "first_target_violation": violation,
            "non_oscillating": report.period == 1,
            "min_margin": margin_text(report.min_margin),
        },
    )


# --- forced even-period oscillations under contrarian camps ------------------


def verify_forced_even_period(
    sc: ScenarioConfig, sweep: bool = True, budget: int = DEFAULT_ENUM_BUDGET
) -> VerificationOutcome:
    """Contrarian camps on a period-2 closed free class force an even period.

    Simulates the configured initial profile first and, if needed, sweeps all
    initial assignments on the closed class (within budget).  Passes when some
    run has an even period greater than 1 with positive orbit margin.
    """
    claim = f"{sc.label}: contrarian camps force an even period > 1"
    pc = sc.persistent
    if pc.camps is None:
        return _hypothesis_not_met(claim, "no contrarian camps configured")
    free = pc.free_nodes(sc.network.n)
    structure = class_structure(sc.network, free)
    period2 = [c for c in structure.closed_classes if structure.period_of.get(c) == 2]
    if not period2:
        return _hypothesis_not_met(
            claim,
            "no closed free class of period 2",
            closed_class_periods={str(c): structure.period_of.get(c) for c in structure.closed_classes},
        )
    cls = period2[0]

    graph = build_cover_graph(sc.m)
    space = enumerate_weak_orders(sc.m)
    fixed_points: list[Profile] | None = None
    if len(space) ** len(free) <= budget:
        fixed_points = enumerate_fixed_points(sc.network, graph, sc.policy, pc, budget)

    def attempt(initial: Profile) -> tuple[bool, OrbitReport]:
        report = run_until_cycle(
            sc.network, graph, sc.policy, pc, initial, sc.schedule, sc.max_steps
        )
        good = report.period > 1 and report.period % 2 == 0 and report.min_margin > 0
        return good, report

    tried = 1
    found, report = attempt(sc.initial)
    witness = sc.initial
    if not found and sweep:
        for combo in product(space, repeat=len(cls)):
            candidate = list(sc.initial)
            for node, order in zip(cls, combo):
                candidate[node] = order
            tried += 1
            ok, rep = attempt(tuple(candidate))
            if ok:
                found, report, witness = True, rep, tuple(candidate)
                break

    return VerificationOutcome(
        claim,
        found,
        {
            "hypothesis_met": True,
            "closed_class": [sc.network.names[i] for i in cls],
            "cyclic_parts": [
                [sc.network.names[i] for i in side] for side in structure.cyclic_parts[cls]
            ],
            "fixed_point_count": None if fixed_points is None else len(fixed_points),
            "fixed_points": None
            if fixed_points is None
            else [_profile_text(p, sc.network.names) for p in fixed_points],
            "initial_profiles_tried": tried,
            "witness_initial": _profile_text(witness, sc.network.names),
            "mu": report.mu,
            "period": report.period,
            "period_even": report.period % 2 == 0,
            "min_margin": margin_text(report.min_margin),
            "margin_positive": report.min_margin > 0,
        },
    )


# --- even-period lifting across a bipartite cut ------------------------------


def _crossing_bipartition(sc: ScenarioConfig) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """2-coloring of the free nodes such that every free-free arc crosses it."""
    net = sc.network
    free = sc.persistent.free_nodes(net.n)
    free_set = set(free)
    undirected: dict[int, set[int]] = {i: set() for i in free}
    for j, i in net.support_arcs():
        if i in free_set and j in free_set:
            undirected[i].add(j)
            undirected[j].add(i)
    color: dict[int, int] = {}
    for root in free:
        if root in color:
            continue
        color[root] = 0
        queue = [root]
        while queue:
            u = queue.pop(0)
            for v in undirected[u]:
                if v not in color:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    side_a = tuple(i for i in free if color[i] == 0)
    side_b = tuple(i for i in free if color[i] == 1)
    return side_a, side_b


def _cyclic_min_period(seq: Sequence) -> int:
    n = len(seq)
    for d in range(1, n + 1):
        if n % d == 0 and all(seq[(j + d) % n] == seq[j] for j in range(n)):
            return d
    return n


def verify_even_period_lifting(sc: ScenarioConfig) -> VerificationOutcome:
    """A k-cycle of the two-step half dynamics lifts to a 2k-cycle of the full map.

    The half-map cycle length k is measured on the even-time subsequence of one
    side of the cut along the realized orbit; the orbit state itself is the
    lifted witness and is re-run to confirm a closed cycle of length 2k.
    """
    claim = f"{sc.label}: bipartite two-step cycle of length k lifts to full period 2k"
    parts = _crossing_bipartition(sc)
    if parts is None:
        return _hypothesis_not_met(claim, "free-to-free influence does not cross a bipartition")
    side_a, side_b = parts

    report = sc.run()
    p = report.period
    orbit = report.orbit

    def even_time_period(side: tuple[int, ...]) -> int:
        length = p if p % 2 else p // 2
        seq = [tuple(orbit[(2 * j) % p][i].canonical_id for i in side) for j in range(length)]
        return _cyclic_min_period(seq)

    k_a = even_time_period(side_a)
    k_b = even_time_period(side_b)

    # replay from the witness: a state on the orbit must close in exactly p steps
    graph = build_cover_graph(sc.m)
    replay = run_until_cycle(
        sc.network, graph, sc.policy, sc.persistent, orbit[0], sc.schedule, sc.max_steps
    )
    witness_closed = replay.mu == 0 and replay.period == p

    passed = witness_closed and p > 1 and (p == 2 * k_a or p == 2 * k_b)
    return VerificationOutcome(
        claim,
        passed,
        {
            "hypothesis_met": True,
            "part_a": [sc.network.names[i] for i in side_a],
            "part_b": [sc.network.names[i] for i in side_b],
            "mu": report.mu,
            "period": p,
            "half_cycle_a": k_a,
            "half_cycle_b": k_b,
            "witness": _profile_text(orbit[0], sc.network.names),
            "witness_closed": witness_closed,
            "trivial_fixed_point": p == 1,
        },
    )


# --- robustness of periodic orbits away from tie hyperplanes -----------------


def verify_robustness(sc: ScenarioConfig, trials: int, seed: int) -> VerificationOutcome:
    """Seeded weight perturbations below the margin bound leave the orbit intact.

    The bound eps* = delta / (2 (m-1) n) keeps every aggregate score strictly
    inside its tie margin delta (an entrywise-eps weight change moves a score
    by at most n*eps*(m-1); the factor 2 covers a score pair).  Each trial must
    reproduce the identical target log and the identical orbit.
    """
    claim = f"{sc.label}: periodic orbit survives weight perturbations below the margin bound"
    base = sc.run()
    delta = base.min_margin
    if delta == 0:
        return _hypothesis_not_met(claim, "orbit has zero tie margin; not certifiable")
    if delta == math.inf:
        return _hypothesis_not_met(
            claim, "no orbit score separates any alternatives; margin bound undefined"
        )
    eps_star = Fraction(delta) / (2 * (sc.m - 1) * sc.network.n)
    eps = eps_star / 2

    graph = build_cover_graph(sc.m)
    divergence = None
    for t in range(trials):
        perturbed = perturb_weights(sc.network, eps, seed + t)
        rep = run_until_cycle(
            perturbed, graph, sc.policy, sc.persistent, sc.initial, sc.schedule, sc.max_steps
        )
        if (rep.mu, rep.period) != (base.mu, base.period) or rep.prefix != base.prefix:
            first_bad = next(
                (
                    i
                    for i, (a, b) in enumerate(zip(rep.prefix, base.prefix))
                    if a != b
                ),
                min(len(rep.prefix), len(base.prefix)),
            )
            divergence = {"trial": t, "first_divergence_step": first_bad}
            break
        if rep.target_log != base.target_log:
            divergence = {"trial": t, "first_divergence_step": "target log"}
            break

    return VerificationOutcome(
        claim,
        divergence is None,
        {
            "hypothesis_met": True,
            "delta": margin_text(delta),
            "eps_star": eps_star,
            "eps_used": eps,
            "trials": trials,
            "mu": base.mu,
            "period": base.period,
            "divergence": divergence,
        },
    )


# --- irrelevance of unreachable persistent nodes -----------------------------


def verify_unreachable_persistence(
    sc: ScenarioConfig, alt_pins: dict[int, WeakOrder]
) -> VerificationOutcome:
    """Re-pinning persistent nodes leaves every node outside their reach untouched."""
    claim = f"{sc.label}: nodes outside the reach of the pinned set ignore re-pinning"
    pc = sc.persistent
    bad = [i for i in alt_pins if i not in pc.pins]
    if bad:
        raise ValueError(f"alternative pins address non-pinned nodes {bad}")
    reached = reach(sc.network, pc.pins)
    outside = [i for i in pc.free_nodes(sc.network.n) if i not in reached]
    if not outside:
        return _hypothesis_not_met(claim, "every free node is reachable from the pinned set")

    twin = with_pins(sc, alt_pins)
    base_report = sc.run()
    twin_report = twin.run()
    horizon = max(
        base_report.mu + base_report.period, twin_report.mu + twin_report.period
    )
    mismatch = None
    for t in range(horizon + 1):
        state_a = base_report.state_at(t)
        state_b = twin_report.state_at(t)
        for i in outside:
            if state_a[i] != state_b[i]:
                mismatch = {"step": t, "node": sc.network.names[i]}
                break
        if mismatch:
            break

    return VerificationOutcome(
        claim,
        mismatch is None,
        {
            "hypothesis_met": True,
            "reach_of_pins": sorted(sc.network.names[i] for i in reached),
            "unreached_free": [sc.network.names[i] for i in outside],
            "compared_steps": horizon + 1,
            "first_mismatch": mismatch,
        },
    )


# --- single-peaked domain ----------------------------------------------------


def is_single_peaked(order: WeakOrder, axis: Sequence[int]) -> bool:
    """Single-peaked w.r.t. an axis: the top class is the peak set, and on each
    side of its span, preference strictly decreases moving outward."""
    position = {alt: k for k, alt in enumerate(axis)}
    peak_positions = [position[a] for a in order.classes[0]]
    lo, hi = min(peak_positions), max(peak_positions)
    rank = {a: order.class_index(a) for a in position}
    right = sorted((a for a in position if position[a] > hi), key=lambda a: position[a])
    left = sorted((a for a in position if position[a] < lo), key=lambda a: -position[a])
    for side in (right, left):
        for nearer, farther in zip(side, side[1:]):
            if rank[nearer] >= rank[farther]:
                return False
    return True


def enumerate_single_peaked(m: int, axis: Sequence[int]) -> tuple[WeakOrder, ...]:
    """All single-peaked weak orders for the axis, in canonical enumeration order."""
    axis = tuple(axis)
    if sorted(axis) != list(range(m)):
        raise ValueError(f"axis {axis} is not a permutation of 0..{m - 1}")
    return tuple(w for w in enumerate_weak_orders(m) if is_single_peaked(w, axis))


def verify_single_peaked_invariance(
    sc: ScenarioConfig, axis: Sequence[int]
) -> VerificationOutcome:
    """While every target stays single-peaked, every state stays single-peaked.

    Target violations refute the hypothesis, state violations (with the
    hypothesis intact up to that step) refute the invariance itself; the first
    of either is reported.
    """
    claim = f"{sc.label}: single-peaked profiles stay single-peaked while targets do"
    axis = tuple(axis)
    for i, w in enumerate(sc.initial):
        if not is_single_peaked(w, axis):
            raise ValueError(f"initial state of node {sc.network.names[i]} is not single-peaked")
    report = sc.run()

    target_violation = None
    state_violation = None
    for t, log in enumerate(report.target_log):
        for i, tau in log:
            if not is_single_peaked(tau, axis):
                target_violation = {"step": t, "node": sc.network.names[i], "target": tau}
                break
        if target_violation:
            break
        after = report.state_at(t + 1)
        for i, w in enumerate(after):
            if not is_single_peaked(w, axis):
                state_violation = {"step": t + 1, "node": sc.network.names[i], "state": w}
                break
        if state_violation:
            break

    return VerificationOutcome(
        claim,
        target_violation is None and state_violation is None,
        {
            "hypothesis_met": target_violation is None,
            "axis": list(axis),
            "definition": "tied peak set at the top, strictly decreasing outward along the axis",
            "steps_checked": len(report.target_log),
            "first_target_violation": target_violation,
            "first_state_violation": state_violation,
            "mu": report.mu,
            "period": report.period,
        },
    )


# --- restriction to strict orders --------------------------------------------


@dataclass
class StrictRestriction:
    """Result of restricting the move graph to strict orders."""

    feasible: bool
    scenario: ScenarioConfig | None
    evidence: dict


def restrict_to_strict(sc: ScenarioConfig) -> StrictRestriction:
    """Restrict the dynamics to strict orders if their induced subgraph is connected.

    On the cover graph strict orders are pairwise non-adjacent (every cover
    move passes through a merge), so the restriction is degenerate and an
    infeasibility report is returned instead of a scenario.
    """
    for i, w in enumerate(sc.initial):
        if not w.is_strict:
            raise ValueError(f"initial state of node {sc.network.names[i]} is not strict")
    graph = build_cover_graph(sc.m)
    strict_ids = [w.canonical_id for w in graph.orders if w.is_strict]
    strict_set = set(strict_ids)
    induced_edges = [
        (i, j) for i, j in graph.edges() if i in strict_set and j in strict_set
    ]
    adjacency: dict[int, set[int]] = {i: set() for i in strict_ids}
    for i, j in induced_edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    seen = set()
    stack = [strict_ids[0]]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        stack.extend(adjacency[u] - seen)
    connected = len(seen) == len(strict_ids)
    evidence = {
        "strict_order_count": len(strict_ids),
        "induced_edge_count": len(induced_edges),
        "connected": connected,
    }
    if not connected:
        evidence["reason"] = (
            "strict orders form an independent set in the cover graph; "
            "a one-step move always passes through an order with a tie"
        )
        return StrictRestriction(False, None, evidence)
    return StrictRestriction(True, sc, evidence)


# --- suite manifests ----------------------------------------------------------


@dataclass
class SuiteEntry:
    label: str
    verifier: str
    scenario: ScenarioConfig
    args: dict
    expect_pass: bool


def _build_from_spec(doc: dict, path: str) -> ScenarioConfig:
    kind = doc.get("builder")
    if kind == "traveling_wave":
        m = doc.get("m", 3)
        graph = build_cover_graph(m)
        cycle = find_cycle(graph, doc["cycle_length"])
        if cycle is None:
            raise ScenarioFormatError(path, f"no cycle of length {doc['cycle_length']} in the move graph")
        return build_traveling_wave(doc["ell"], cycle)
    if kind == "gadget":
        m = doc.get("m", 3)
        rho = parse_order(doc.get("rho", "x>y>z"), m)
        eps = Fraction(doc.get("eps", "1/10"))
        initial = None
        if "initial" in doc:
            orders = [parse_order(t, m) for t in doc["initial"]]
            initial = (orders[0], orders[1])
        return build_gadget(m, rho, eps, initial_free=initial)
    raise ScenarioFormatError(path, f"unknown builder {kind!r}")


def _verifier_args(entry_args: dict, sc: ScenarioConfig) -> dict:
    args = dict(entry_args)
    if "alt_pins" in args:
        pins = {}
        for name, text in args["alt_pins"].items():
            idx = sc.network.index_of(name)
            pins[idx] = parse_order(text, sc.m, sc.alt_names)
        args["alt_pins"] = pins
    if "axis" in args:
        axis = args["axis"]
        if isinstance(axis, str):
            names = alternative_names(sc.m, sc.alt_names)
            args["axis"] = tuple(names.index(c) for c in axis)
        else:
            args["axis"] = tuple(axis)
    if "eps" in args:
        args["eps"] = Fraction(args["eps"])
    return args


VERIFIERS: dict[str, Callable[..., VerificationOutcome]] = {
    "traveling_wave": verify_traveling_wave,
    "forced_even_period": verify_forced_even_period,
    "even_period_lifting": verify_even_period_lifting,
    "robustness": verify_robustness,
    "unreachable_persistence": verify_unreachable_persistence,
    "single_peaked_invariance": verify_single_peaked_invariance,
}


def load_suite(path: str | Path) -> list[SuiteEntry]:
    """Read a suite manifest: labeled scenario/verifier pairs with expectations."""
    path = Path(path)
    with open(path) as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ScenarioFormatError(str(path), f"invalid JSON: {exc}") from None
    entries = []
    labels = set()
    for k, entry in enumerate(doc.get("entries", [])):
        epath = f"entries[{k}]"
        label = entry.get("label", f"entry_{k}")
        if label in labels:
            raise ScenarioFormatError(f"{epath}.label", f"duplicate label {label!r}")
        labels.add(label)
        verifier = entry.get("verifier")
        if verifier not in VERIFIERS:
            raise ScenarioFormatError(f"{epath}.verifier", f"unknown verifier {verifier!r}")
        spec = entry.get("scenario")
        if isinstance(spec, str):
            scenario = load_scenario(path.parent / spec)
        elif isinstance(spec, dict):
            scenario = _build_from_spec(spec, f"{epath}.scenario")
        else:
            raise ScenarioFormatError(f"{epath}.scenario", "expected a path or a builder object")
        expect = entry.get("expect", "pass")
        if expect not in ("pass", "fail"):
            raise ScenarioFormatError(f"{epath}.expect", f"expected \"pass\" or \"fail\", got {expect!r}")
        entries.append(
            SuiteEntry(
                label=label,
                verifier=verifier,
                scenario=scenario,
                args=entry.get("args", {}),
                expect_pass=expect == "pass",
            )
        )
    return entries


def run_suite(entries: Iterable[SuiteEntry]) -> tuple[list[dict], bool]:
    """Run every entry; overall success means each outcome matched expectation."""
    results = []
    all_matched = True
    for entry in entries:
        outcome = VERIFIERS[entry.verifier](
            entry.scenario, **_verifier_args(entry.args, entry.scenario)
        )
        matched = outcome.passed == entry.expect_pass
        all_matched = all_matched and matched
        results.append(
            {
                "label": entry.label,
                "verifier": entry.verifier,
                "expected": "pass" if entry.expect_pass else "fail",
                "matched_expectation": matched,
                **outcome.to_json_dict(),
            }
        )
    return results, all_matched
