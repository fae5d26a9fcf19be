"""Independent oracles used by the unit and acceptance tests.

Everything here is written from first principles against the documented
behavior, not by calling the implementation it checks.
"""

import itertools
import math
from collections import deque

import numpy as np

from evlot.grid import CellType, Layout

NESW = ((-1, 0), (0, 1), (1, 0), (0, -1))


# ---------------------------------------------------------------- LP oracle

def lp_vertex_oracle(c, a_ub, b_ub, upper_bounds, tol=1e-7):
    """Max c'x over {Ax <= b, 0 <= x <= ub} by enumerating all vertices
    (intersections of n constraint hyperplanes) and keeping the feasible best."""
    c = np.asarray(c, float)
    n = c.size
    rows = [np.asarray(a_ub, float).reshape(-1, n)]
    rhs = [np.asarray(b_ub, float)]
    rows.append(np.eye(n))
    rhs.append(np.asarray(upper_bounds, float))
    rows.append(-np.eye(n))
    rhs.append(np.zeros(n))
    big_a = np.vstack(rows)
    big_b = np.concatenate(rhs)
    finite = np.isfinite(big_b)
    big_a, big_b = big_a[finite], big_b[finite]
    best = -np.inf
    for idx in itertools.combinations(range(big_a.shape[0]), n):
        sq = big_a[list(idx)]
        if abs(np.linalg.det(sq)) < 1e-12:
            continue
        x = np.linalg.solve(sq, big_b[list(idx)])
        if np.all(big_a @ x <= big_b + tol):
            best = max(best, float(c @ x))
    return best


# ------------------------------------------------- parking process oracle

def road_tree_oracle(layout: Layout, door):
    """Breadth-first tree over road/door cells rooted at `door`."""
    children = {door: []}
    queue = deque([door])
    while queue:
        cell = queue.popleft()
        for dr, dc in NESW:
            nxt = (cell[0] + dr, cell[1] + dc)
            if nxt in children or not layout.in_grid(*nxt):
                continue
            if layout.cell(*nxt) in (CellType.ROAD, CellType.DOOR):
                children[nxt] = []
                children[cell].append(nxt)
                queue.append(nxt)
    return children


def _visit_orders(tree, node):
    """All DFS visit orders of the tree with their probabilities (uniform
    child permutation at every branch)."""
    kids = tree[node]
    if not kids:
        return [(1.0, (node,))]
    out = []
    weight = 1.0 / math.factorial(len(kids))
    for perm in itertools.permutations(kids):
        partial = [(1.0, ())]
        for kid in perm:
            sub = _visit_orders(tree, kid)
            partial = [(p1 * p2, s1 + s2) for p1, s1 in partial for p2, s2 in sub]
        for p, s in partial:
            out.append((weight * p, (node,) + s))
    return out


def park_probability_oracle(layout, occupied, spot, rules):
    """The documented per-spot rule, written independently."""
    r, c = spot
    n_occ = 0
    for dr, dc in NESW:
        cell = (r + dr, c + dc)
        if layout.in_grid(*cell) and layout.cell(*cell) in (CellType.PARKING, CellType.EVSE):
            if cell in occupied:
                n_occ += 1
    p = rules.p_base * rules.occupied_neighbor_factor ** n_occ
    if r in (0, layout.height - 1) or c in (0, layout.width - 1):
        p *= rules.edge_bonus
    return min(p, rules.p_max)


def spot_distribution(layout, occupied, door, kind, rules):
    """Exact distribution over the spot one vehicle takes (or None = skip),
    by enumerating DFS orders and first-success trial outcomes."""
    tree = road_tree_oracle(layout, door)
    want = CellType.EVSE if kind == "EV" else CellType.PARKING
    dist = {}
    skip = 0.0
    for order_p, visit in _visit_orders(tree, door):
        trials = []
        for cell in visit:
            for dr, dc in NESW:
                spot = (cell[0] + dr, cell[1] + dc)
                if (layout.in_grid(*spot) and layout.cell(*spot) == want
                        and spot not in occupied):
                    trials.append((spot, park_probability_oracle(layout, occupied, spot, rules)))
        none_so_far = 1.0
        for spot, p in trials:
            dist[spot] = dist.get(spot, 0.0) + order_p * none_so_far * p
            none_so_far *= 1.0 - p
        skip += order_p * none_so_far
    return dist, skip


def sequential_spot_distribution(layout, events, door, rules):
    """Distribution over the LAST vehicle's spot after the earlier vehicles
    (all still parked) have been placed by the same stochastic process."""
    states = {frozenset(): 1.0}
    for kind in [k for k in events[:-1]]:
        nxt = {}
        for occ, w in states.items():
            dist, skip = spot_distribution(layout, occ, door, kind, rules)
            for spot, p in dist.items():
                key = occ | {spot}
                nxt[key] = nxt.get(key, 0.0) + w * p
            if skip > 0:
                nxt[occ] = nxt.get(occ, 0.0) + w * skip
        states = nxt
    final = {}
    skip_total = 0.0
    for occ, w in states.items():
        dist, skip = spot_distribution(layout, occ, door, events[-1], rules)
        for spot, p in dist.items():
            final[spot] = final.get(spot, 0.0) + w * p
        skip_total += w * skip
    return final, skip_total


# ----------------------------------------------------- numeric small fry

def truncated_normal_mean(mean, std, low=0.0):
    """Closed-form mean of Normal(mean, std) truncated below at `low`."""
    a = (low - mean) / std
    phi = math.exp(-0.5 * a * a) / math.sqrt(2 * math.pi)
    tail = 0.5 * math.erfc(a / math.sqrt(2))
    return mean + std * phi / tail


def dijkstra_door_distance(layout: Layout, evse):
    """Shortest road-path distance to a door, via Dijkstra on the road
    graph (unit weights) plus the final step onto the EVSE."""
    import heapq

    dist = {}
    heap = []
    for d in layout.door_cells():
        dist[d] = 0
        heapq.heappush(heap, (0, d))
    while heap:
        d, cell = heapq.heappop(heap)
        if d > dist.get(cell, math.inf):
            continue
        for dr, dc in NESW:
            nxt = (cell[0] + dr, cell[1] + dc)
            if not layout.in_grid(*nxt):
                continue
            if layout.cell(*nxt) not in (CellType.ROAD, CellType.DOOR):
                continue
            if d + 1 < dist.get(nxt, math.inf):
                dist[nxt] = d + 1
                heapq.heappush(heap, (d + 1, nxt))
    best = math.inf
    for dr, dc in NESW:
        cell = (evse[0] + dr, evse[1] + dc)
        if cell in dist:
            best = min(best, dist[cell] + 1)
    return best
