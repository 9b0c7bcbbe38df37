"""Shared helpers for building tiny design instances and checking
assignment validity."""

from solarran.design import enumerate_candidates
from solarran.radio import Position
from solarran.scenario import AccessNode, UserTerminal


def make_node(nid, x, y, z=50.0):
    return AccessNode(node_id=nid, position=Position(x, y, z))


def make_user(uid, x, y, z=1.5):
    return UserTerminal(user_id=uid, position=Position(x, y, z))


def check_assignment_valid(config, nodes, users, params, dl, ul):
    """Assignment invariants: links feasible at the final level, loads within
    budget, one node per user, consistent bookkeeping."""
    table = enumerate_candidates(nodes, users, params, dl, ul)
    levels = {c.node_id: c.tx_power_dbm for c in config.cells if c.active}
    loads = {}
    for uid, (nid, prbs_dl, prbs_ul) in config.assignment.users.items():
        assert nid in levels, f"user {uid} assigned to inactive node {nid}"
        link = table[(nid, uid, levels[nid])]
        assert link.feasible
        assert (prbs_dl, prbs_ul) == (link.prbs_dl, link.prbs_ul)
        loads[nid] = loads.get(nid, 0) + prbs_dl + prbs_ul
    for nid, load in loads.items():
        assert load <= params.total_prbs
        assert config.assignment.node_loads[nid] == load
    assert config.covered_count == len(config.assignment.users)


def check_local_minimality(config, nodes, users, params, dl, ul):
    """No active cell can drop a level (or be switched off) without losing
    coverage or breaking feasibility."""
    table = enumerate_candidates(nodes, users, params, dl, ul)
    members = {}
    for uid, (nid, _, _) in config.assignment.users.items():
        members.setdefault(nid, []).append(uid)
    for cell in config.cells:
        if not cell.active:
            continue
        assert len(members.get(cell.node_id, [])) >= 1, \
            f"active node {cell.node_id} serves nobody"
        idx = params.power_levels_dbm.index(cell.tx_power_dbm)
        if idx == 0:
            continue
        lower = params.power_levels_dbm[idx - 1]
        links = [table[(cell.node_id, uid, lower)]
                 for uid in members[cell.node_id]]
        broken = (not all(l.feasible for l in links)
                  or sum(l.total_prbs for l in links) > params.total_prbs)
        assert broken, (f"node {cell.node_id} could run at {lower} dBm "
                        f"but was left at {cell.tx_power_dbm}")
