"""Finite Markov control models with average reward.

The dynamic programming operator of an MDP is the max-affine map
``f_i(x) = max_a (r_i^a + P_i^a . x)``; its eigenvalue is the optimal mean
reward and its critical classes are the optimal final classes.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from . import scalars as sc
from .critical import critical_data, verify_pair
from .markov import final_classes_of_matrix, invariant_measure, mean_reward
from .model import CapExceeded, Generator, MapModel, MaxAffine

DEFAULT_POLICY_CAP = 10**5
EXHAUSTIVE_SUBSETS = 1024
SAMPLED_SUBSETS = 256


class MdpError(ValueError):
    pass


@dataclass(frozen=True)
class Action:
    name: str
    reward: sc.Scalar
    transition: tuple


@dataclass(frozen=True)
class MdpModel:
    states: tuple
    actions: tuple  # actions[i] is the tuple of Actions available in state i
    mode: str = sc.EXACT

    @property
    def n(self) -> int:
        return len(self.states)

    def policy_count(self) -> int:
        total = 1
        for acts in self.actions:
            total *= len(acts)
        return total


@dataclass(frozen=True)
class DeterministicPolicy:
    choice: tuple  # action index per state


@dataclass(frozen=True)
class RandomizedStationaryPolicy:
    weights: tuple  # per state, convex weights over that state's actions


Policy = Union[DeterministicPolicy, RandomizedStationaryPolicy]


@dataclass(frozen=True)
class PolicyAnalysis:
    P: tuple
    r: tuple
    final_classes: tuple
    class_values: tuple  # aligned with final_classes
    mu: tuple


@dataclass
class OptimalityReport:
    lam: sc.Scalar
    active_actions: tuple
    critical_classes: tuple
    certified: list = field(default_factory=list)  # (class, value, ok)
    sampled_policies: int = 0
    sampled_classes: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c[2] for c in self.certified) and not self.violations


def _infer_mode(doc) -> str:
    if "mode" in doc:
        return sc.check_mode(doc["mode"])
    for acts in doc.get("actions", {}).values():
        for a in acts:
            for v in [a.get("reward")] + list(a.get("transition", [])):
                if isinstance(v, float) and not float(v).is_integer():
                    return sc.FLOAT
    return sc.EXACT


def mdp_from_dict(doc: dict) -> MdpModel:
    if not isinstance(doc, dict) or "states" not in doc or "actions" not in doc:
        raise MdpError("MDP document needs 'states' and 'actions'")
    states = tuple(str(s) for s in doc["states"])
    if not states or len(set(states)) != len(states):
        raise MdpError("states must be a nonempty list of distinct names")
    mode = _infer_mode(doc)
    n = len(states)
    table = []
    for s in states:
        acts = doc["actions"].get(s)
        if not acts:
            raise MdpError(f"state {s!r} has no actions")
        row = []
        for k, a in enumerate(acts):
            try:
                reward = sc.convert(a["reward"], mode)
                trans = sc.vector(a["transition"], mode)
            except (KeyError, TypeError, ValueError) as exc:
                raise MdpError(f"state {s!r}, action {k}: {exc}") from exc
            if len(trans) != n:
                raise MdpError(f"state {s!r}, action {k}: transition has length {len(trans)}, expected {n}")
            if min(trans) < 0 or not sc.is_one(sum(trans), mode):
                raise MdpError(f"state {s!r}, action {k}: transition is not stochastic")
            row.append(Action(str(a.get("name", k)), reward, trans))
        table.append(tuple(row))
    return MdpModel(states, tuple(table), mode)


def mdp_to_dict(mdp: MdpModel) -> dict:
    return {
        "mode": mdp.mode,
        "states": list(mdp.states),
        "actions": {s: [{"name": a.name, "reward": sc.format_scalar(a.reward),
                         "transition": sc.format_vector(a.transition)} for a in acts]
                    for s, acts in zip(mdp.states, mdp.actions)},
    }


def load_mdp(path) -> MdpModel:
    with open(path) as fh:
        return mdp_from_dict(json.load(fh))


def mdp_to_map(mdp: MdpModel) -> MapModel:
    """One generator ``(P_i^a, r_i^a)`` per action, in action order."""
    coords = tuple(MaxAffine(tuple(Generator(a.transition, a.reward) for a in acts))
                   for acts in mdp.actions)
    return MapModel(coords, mdp.mode)


def _as_weights(mdp: MdpModel, policy: Policy) -> tuple:
    one = sc.one(mdp.mode)
    if isinstance(policy, DeterministicPolicy):
        if len(policy.choice) != mdp.n:
            raise MdpError("policy length does not match the state count")
        out = []
        for acts, k in zip(mdp.actions, policy.choice):
            if not 0 <= k < len(acts):
                raise MdpError(f"action index {k} out of range")
            out.append(tuple(one if t == k else sc.zero(mdp.mode) for t in range(len(acts))))
        return tuple(out)
    out = []
    for acts, w in zip(mdp.actions, policy.weights):
        w = sc.vector(w, mdp.mode)
        if len(w) != len(acts) or min(w) < 0 or not sc.is_one(sum(w), mdp.mode):
            raise MdpError("randomized policy weights must be convex weights over the actions")
        out.append(w)
    return tuple(out)


def policy_chain(mdp: MdpModel, policy: Policy) -> tuple:
    """``(P^pi, r^pi)``: action-averaged transition matrix and reward."""
    P, r = [], []
    zero = sc.zero(mdp.mode)
    for acts, w in zip(mdp.actions, _as_weights(mdp, policy)):
        row = [zero] * mdp.n
        rew = zero
        for a, wa in zip(acts, w):
            if wa:
                row = [x + wa * t for x, t in zip(row, a.transition)]
                rew += wa * a.reward
        P.append(tuple(row))
        r.append(rew)
    return tuple(P), tuple(r)


def _class_values(P, r, mode):
    classes = final_classes_of_matrix(P)
    values = []
    for F in classes:
        m = invariant_measure(P, F)
        values.append(sum((m[i] * r[i] for i in F), sc.zero(mode)))
    return tuple(classes), tuple(values)


def policy_analysis(mdp: MdpModel, policy: Policy) -> PolicyAnalysis:
    P, r = policy_chain(mdp, policy)
    classes, values = _class_values(P, r, mdp.mode)
    return PolicyAnalysis(P, r, classes, values, mean_reward(P, r))


def brute_force_lambda(mdp: MdpModel, cap: int = DEFAULT_POLICY_CAP):
    """Best mean reward over all deterministic stationary policies."""
    if mdp.policy_count() > cap:
        raise CapExceeded(f"{mdp.policy_count()} deterministic policies exceed the cap {cap}")
    best = None
    for choice in itertools.product(*(range(len(a)) for a in mdp.actions)):
        P, r = policy_chain(mdp, DeterministicPolicy(choice))
        _, values = _class_values(P, r, mdp.mode)
        top = max(values)
        if best is None or top > best:
            best = top
    return best


def active_actions(mdp: MdpModel, lam, v, tol=None) -> tuple:
    """Per state, indices of actions attaining ``lam + v_i = r + P.v``."""
    v = sc.vector(v, mdp.mode)
    lam = sc.convert(lam, mdp.mode)
    tol = 0 if mdp.mode == sc.EXACT else (sc.DEFAULT_FLOAT_TOL if tol is None else tol)
    out = []
    for i, acts in enumerate(mdp.actions):
        out.append(tuple(k for k, a in enumerate(acts)
                         if abs(a.reward + sc.dot(a.transition, v) - lam - v[i]) <= tol))
    return tuple(out)


def _uniform(mdp, acts, idx):
    w = [sc.zero(mdp.mode)] * len(acts)
    share = sc.one(mdp.mode) / len(idx)
    for k in idx:
        w[k] = share
    return tuple(w)


def _supported_in(p, cls):
    return all(a == 0 for j, a in enumerate(p) if j not in cls)


def witness_policy(mdp: MdpModel, active: tuple, classes) -> RandomizedStationaryPolicy:
    """Uniform mixture of active actions staying in the critical class; first active action elsewhere."""
    where = {i: c for c in classes for i in c}
    weights = []
    for i, acts in enumerate(mdp.actions):
        if i in where:
            idx = [k for k in active[i] if _supported_in(acts[k].transition, where[i])]
        else:
            idx = [active[i][0]]
        weights.append(_uniform(mdp, acts, idx))
    return RandomizedStationaryPolicy(tuple(weights))


def _subset_policies(mdp, active, seed):
    subsets = [[c for r in range(1, len(a) + 1) for c in itertools.combinations(a, r)] for a in active]
    total = 1
    for s in subsets:
        total *= len(s)
    if total <= EXHAUSTIVE_SUBSETS:
        picks = itertools.product(*subsets)
    else:
        rng = random.Random(seed)
        picks = (tuple(rng.choice(s) for s in subsets) for _ in range(SAMPLED_SUBSETS))
    for pick in picks:
        yield RandomizedStationaryPolicy(tuple(_uniform(mdp, acts, idx)
                                               for acts, idx in zip(mdp.actions, pick)))


def optimal_class_check(mdp: MdpModel, lam, v, tol=None, seed: int = 0) -> OptimalityReport:
    """Check that the critical classes are exactly the optimal final classes.

    (a) Each critical class is a final class with value lam of a randomized
    policy built from active actions. (b) Final classes of uniform mixtures
    over subsets of active actions lie inside a critical class.
    """
    m = mdp_to_map(mdp)
    verify_pair(m, lam, v, tol)
    lam = sc.convert(lam, mdp.mode)
    cd = critical_data(m, v, lam, tol)
    active = active_actions(mdp, lam, v, tol)
    report = OptimalityReport(lam, active, cd.classes)

    def same(a, b):
        return a == b if mdp.mode == sc.EXACT else abs(a - b) <= (tol or sc.DEFAULT_FLOAT_TOL)

    wa = policy_analysis(mdp, witness_policy(mdp, active, cd.classes))
    values = dict(zip(wa.final_classes, wa.class_values))
    for C in cd.classes:
        val = values.get(C)
        report.certified.append((C, val, val is not None and same(val, lam)))

    for pol in _subset_policies(mdp, active, seed):
        P, r = policy_chain(mdp, pol)
        report.sampled_policies += 1
        for F, val in zip(*_class_values(P, r, mdp.mode)):
            if not same(val, lam):
                continue
            report.sampled_classes += 1
            if not any(F <= C for C in cd.classes):
                report.violations.append(F)
    return report
