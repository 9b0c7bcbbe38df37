"""Cell activation and power assignment.

Given fixed station positions and one snapshot of users, decide which cells
transmit and at which discrete power level so that as many users as
possible are served within each cell's resource-block budget, then shave
transmit power. greedy_design is the production heuristic;
brute_force_design is the exhaustive reference for small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .energy import mimo_power, ris_power, uav_hover_power
from .radio import RadioParams, link_feasible, link_prb_split
from .scenario import AccessNode, UserTerminal


class InstanceTooLargeError(ValueError):
    """The exhaustive search would not finish in reasonable time."""


MAX_ORACLE_NODES = 4
MAX_ORACLE_USERS = 10


@dataclass(frozen=True)
class CandidateLink:
    feasible: bool
    prbs_dl: int
    prbs_ul: int

    @property
    def total_prbs(self) -> int:
        return self.prbs_dl + self.prbs_ul


@dataclass(frozen=True)
class CellConfig:
    node_id: int
    active: bool
    tx_power_dbm: Optional[float]  # None when inactive


@dataclass(frozen=True)
class Assignment:
    """user_id -> (node_id, prbs_dl, prbs_ul), plus per-node block totals."""

    users: dict[int, tuple[int, int, int]]
    node_loads: dict[int, int]

    def __len__(self) -> int:
        return len(self.users)


@dataclass(frozen=True)
class NetworkConfig:
    cells: tuple[CellConfig, ...]
    assignment: Assignment
    covered_count: int
    total_power_w: float

    def to_dict(self) -> dict:
        """Stable dictionary form; equal configs serialize byte-identically."""
        return {
            "cells": [{"node_id": c.node_id, "active": c.active,
                       "tx_power_dbm": c.tx_power_dbm}
                      for c in sorted(self.cells, key=lambda c: c.node_id)],
            "assignment": {str(uid): list(self.assignment.users[uid])
                           for uid in sorted(self.assignment.users)},
            "node_loads": {str(nid): self.assignment.node_loads[nid]
                           for nid in sorted(self.assignment.node_loads)},
            "covered_count": self.covered_count,
            "total_power_w": self.total_power_w,
        }


def enumerate_candidates(nodes: Sequence[AccessNode],
                         users: Sequence[UserTerminal],
                         params: RadioParams,
                         dl_rate_mbps: float,
                         ul_rate_mbps: float) -> dict[tuple[int, int, float], CandidateLink]:
    """Evaluate every (node, user, power level) link once.

    Keys are (node_id, user_id, level_dbm) inserted in ascending
    (node_id, user_id, level) order.
    """
    table: dict[tuple[int, int, float], CandidateLink] = {}
    for node in sorted(nodes, key=lambda n: n.node_id):
        for user in sorted(users, key=lambda u: u.user_id):
            for level in params.power_levels_dbm:
                feasible, _ = link_feasible(node.position, user.position, level,
                                            params, dl_rate_mbps, ul_rate_mbps)
                dl, ul = link_prb_split(node.position, user.position, level,
                                        params, dl_rate_mbps, ul_rate_mbps)
                table[(node.node_id, user.user_id, level)] = CandidateLink(
                    feasible=feasible, prbs_dl=dl or 0, prbs_ul=ul or 0)
    return table


def _network_power(nodes: Sequence[AccessNode],
                   active: dict[int, float],
                   served: dict[int, int]) -> float:
    """Total drawn power [W] over all stations for one configuration.

    Hover and reflective-surface power are paid by every airborne station
    whether or not its cell transmits.
    """
    total = 0.0
    for node in nodes:
        total += uav_hover_power(node.airframe) + ris_power(node.ris)
        if node.node_id in active:
            total += mimo_power(node.mimo, True, served.get(node.node_id, 0),
                                active[node.node_id])
        else:
            total += mimo_power(node.mimo, False, 0, 0.0)
    return total


def _admit_users(table, node_id: int, level: float, candidates: Sequence[int],
                 capacity: int) -> tuple[list[int], int]:
    """Greedily admit users (in the given id order) while blocks remain."""
    admitted = []
    remaining = capacity
    for uid in candidates:
        link = table[(node_id, uid, level)]
        if link.feasible and link.total_prbs <= remaining:
            admitted.append(uid)
            remaining -= link.total_prbs
    return admitted, capacity - remaining


def greedy_design(nodes: Sequence[AccessNode], users: Sequence[UserTerminal],
                  params: RadioParams, dl_rate_mbps: float,
                  ul_rate_mbps: float) -> NetworkConfig:
    """Coverage-first greedy activation with a power-trim pass.

    1. Every cell starts as a candidate at every power level (the ladder
       tops out at maximum power).
    2. Repeatedly activate the (cell, level) pair admitting the most
       still-unassigned users under the block budget; ties fall to the
       smaller power increment, then the lower node id. Users are scanned
       in ascending user_id. Stop when no activation adds coverage.
    3. For each active cell in ascending node id, drop to the lowest level
       at which all of its users stay individually feasible and their
       blocks still fit.
    4. Cells that ended up with no users go back to sleep.

    Deterministic: identical inputs give an identical NetworkConfig.
    """
    node_list = sorted(nodes, key=lambda n: n.node_id)
    table = enumerate_candidates(node_list, users, params, dl_rate_mbps, ul_rate_mbps)

    unassigned = sorted(u.user_id for u in users)
    active: dict[int, float] = {}
    assigned: dict[int, tuple[int, int, int]] = {}
    node_users: dict[int, list[int]] = {}

    while True:
        best_key = None
        best_pick = None
        for node in node_list:
            if node.node_id in active:
                continue
            for level in params.power_levels_dbm:
                admitted, _ = _admit_users(table, node.node_id, level,
                                           unassigned, params.total_prbs)
                if not admitted:
                    continue
                added_power = (mimo_power(node.mimo, True, len(admitted), level)
                               - node.mimo.sleep_power)
                key = (-len(admitted), added_power, node.node_id)
                if best_key is None or key < best_key:
                    best_key = key
                    best_pick = (node.node_id, level, admitted)
        if best_pick is None:
            break
        node_id, level, admitted = best_pick
        active[node_id] = level
        node_users[node_id] = admitted
        for uid in admitted:
            link = table[(node_id, uid, level)]
            assigned[uid] = (node_id, link.prbs_dl, link.prbs_ul)
            unassigned.remove(uid)

    for node_id in sorted(active):
        members = node_users[node_id]
        for level in params.power_levels_dbm:
            links = [table[(node_id, uid, level)] for uid in members]
            if (all(l.feasible for l in links)
                    and sum(l.total_prbs for l in links) <= params.total_prbs):
                active[node_id] = level
                for uid, link in zip(members, links):
                    assigned[uid] = (node_id, link.prbs_dl, link.prbs_ul)
                break

    for node_id in [nid for nid, members in node_users.items() if not members]:
        del active[node_id]

    served = {nid: len(members) for nid, members in node_users.items() if members}
    loads = {nid: sum(assigned[uid][1] + assigned[uid][2] for uid in members)
             for nid, members in node_users.items() if members}
    cells = tuple(CellConfig(node_id=n.node_id,
                             active=n.node_id in active,
                             tx_power_dbm=active.get(n.node_id))
                  for n in node_list)
    return NetworkConfig(cells=cells,
                         assignment=Assignment(users=dict(sorted(assigned.items())),
                                               node_loads=dict(sorted(loads.items()))),
                         covered_count=len(assigned),
                         total_power_w=_network_power(node_list, active, served))


def brute_force_design(nodes: Sequence[AccessNode],
                       users: Sequence[UserTerminal], params: RadioParams,
                       dl_rate_mbps: float,
                       ul_rate_mbps: float) -> NetworkConfig:
    """Exhaustive reference: best coverage, then least power.

    Enumerates every on/off-and-level combination and, per combination,
    finds a maximum assignment by memoized search over users in id order.
    Refuses instances beyond 4 nodes or 10 users.
    """
    node_list = sorted(nodes, key=lambda n: n.node_id)
    user_list = sorted(users, key=lambda u: u.user_id)
    if len(node_list) > MAX_ORACLE_NODES:
        raise InstanceTooLargeError(
            f"{len(node_list)} nodes exceed the exhaustive limit of {MAX_ORACLE_NODES}")
    if len(user_list) > MAX_ORACLE_USERS:
        raise InstanceTooLargeError(
            f"{len(user_list)} users exceed the exhaustive limit of {MAX_ORACLE_USERS}")

    table = enumerate_candidates(node_list, user_list, params,
                                 dl_rate_mbps, ul_rate_mbps)
    n_users = len(user_list)

    best = None  # (covered, power, active map, assignment map)
    for combo in itertools.product([None, *params.power_levels_dbm],
                                   repeat=len(node_list)):
        active = {node.node_id: level
                  for node, level in zip(node_list, combo) if level is not None}
        options = []  # per user: [(node_idx_in_active_order, node_id, cost, link)]
        active_ids = sorted(active)
        for user in user_list:
            opts = []
            for idx, nid in enumerate(active_ids):
                link = table[(nid, user.user_id, active[nid])]
                if link.feasible:
                    opts.append((idx, nid, link))
            options.append(opts)

        memo: dict[tuple[int, tuple[int, ...]], int] = {}

        def coverage(i: int, caps: tuple[int, ...]) -> int:
            if i == n_users:
                return 0
            key = (i, caps)
            hit = memo.get(key)
            if hit is not None:
                return hit
            best_here = coverage(i + 1, caps)
            for idx, _, link in options[i]:
                cost = link.total_prbs
                if caps[idx] >= cost:
                    new_caps = caps[:idx] + (caps[idx] - cost,) + caps[idx + 1:]
                    got = 1 + coverage(i + 1, new_caps)
                    if got > best_here:
                        best_here = got
                        if best_here == n_users - i:
                            break
            memo[key] = best_here
            return best_here

        caps = tuple(params.total_prbs for _ in active_ids)
        covered = coverage(0, caps)

        # Reconstruct one maximum assignment, preferring lower node ids.
        assignment: dict[int, tuple[int, int, int]] = {}
        cur = caps
        for i, user in enumerate(user_list):
            target = coverage(i, cur)
            placed = False
            for idx, nid, link in options[i]:
                cost = link.total_prbs
                if cur[idx] >= cost:
                    new_caps = cur[:idx] + (cur[idx] - cost,) + cur[idx + 1:]
                    if 1 + coverage(i + 1, new_caps) == target:
                        assignment[user.user_id] = (nid, link.prbs_dl, link.prbs_ul)
                        cur = new_caps
                        placed = True
                        break
            if not placed:
                assert coverage(i + 1, cur) == target

        served: dict[int, int] = {}
        for nid, _, _ in assignment.values():
            served[nid] = served.get(nid, 0) + 1
        power = _network_power(node_list, active, served)
        if best is None or (covered, -power) > (best[0], -best[1]):
            best = (covered, power, active, assignment)

    covered, power, active, assignment = best
    loads: dict[int, int] = {}
    for uid, (nid, dl, ul) in assignment.items():
        loads[nid] = loads.get(nid, 0) + dl + ul
    cells = tuple(CellConfig(node_id=n.node_id, active=n.node_id in active,
                             tx_power_dbm=active.get(n.node_id))
                  for n in node_list)
    return NetworkConfig(cells=cells,
                         assignment=Assignment(users=dict(sorted(assignment.items())),
                                               node_loads=dict(sorted(loads.items()))),
                         covered_count=covered,
                         total_power_w=power)
