"""Farey graph distances between slopes.

A geodesic in the Farey graph between two vertices stays inside the ladder of
triangles crossed by the hyperbolic geodesic joining them.  After moving one
endpoint to 1/0 the ladder vertices are the convergents and intermediate
fractions of the other endpoint, so a breadth-first search on that finite set
is exact.
"""

from __future__ import annotations

from collections import deque
from math import gcd


def ext_gcd(a: int, b: int):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def to_infinity(r: int, s: int):
    """An integer matrix of determinant one sending r/s to 1/0, as a function."""
    g, x, y = ext_gcd(r, s)  # r*x + s*y = 1
    if g != 1:
        raise ValueError(f"{r}/{s} is not primitive")
    # M = [[r, -y], [s, x]] has det r*x + s*y = 1 and sends 1/0 to r/s
    def inv(p, q):
        return x * p + y * q, -s * p + r * q
    return inv


def ladder(p: int, q: int) -> list:
    """Convergents and intermediate fractions of p/q, together with 1/0."""
    if q < 0:
        p, q = -p, -q
    verts = [(1, 0)]
    if q == 0:
        return verts
    h0, k0, h1, k1 = 1, 0, p // q, 1  # h_{-1}/k_{-1}, h_0/k_0
    # the integer part walks over intermediate fractions from 1/0: every integer is adjacent to 1/0
    verts.append((h1, k1))
    a, b = q, p - (p // q) * q
    while b:
        c = a // b
        for t in range(1, c + 1):
            verts.append((h0 + t * h1, k0 + t * k1))
        h0, k0, h1, k1 = h1, k1, h0 + c * h1, k0 + c * k1
        a, b = b, a - c * b
    out = []
    seen = set()
    for v in verts:
        if v[1] < 0 or (v[1] == 0 and v[0] < 0):
            v = (-v[0], -v[1])
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _norm(p, q):
    if q < 0 or (q == 0 and p < 0):
        return -p, -q
    return p, q


def farey_distance(a: tuple, b: tuple) -> int:
    a, b = _norm(*a), _norm(*b)
    if a == b:
        return 0
    if abs(a[0] * b[1] - a[1] * b[0]) == 1:
        return 1
    move = to_infinity(*a)
    p, q = _norm(*move(*b))
    verts = ladder(p, q)
    target = (p, q)
    dist = {verts[0]: 0}
    dq = deque([verts[0]])
    while dq:
        u = dq.popleft()
        if u == target:
            return dist[u]
        for v in verts:
            if v not in dist and abs(u[0] * v[1] - u[1] * v[0]) == 1:
                dist[v] = dist[u] + 1
                dq.append(v)
    raise AssertionError("ladder search missed its target")


def farey_geodesic(a: tuple, b: tuple) -> list:
    """A shortest Farey path from a to b, as a list of normalized slopes."""
    a, b = _norm(*a), _norm(*b)
    if a == b:
        return [a]
    r, s = a
    g, x, y = ext_gcd(r, s)
    if g != 1:
        raise ValueError(f"{r}/{s} is not primitive")
    move = to_infinity(r, s)
    back = lambda p, q: _norm(r * p - y * q, s * p + x * q)
    target = _norm(*move(*b))
    verts = ladder(*target)
    parent = {verts[0]: None}
    dq = deque([verts[0]])
    while dq:
        u = dq.popleft()
        if u == target:
            break
        for v in verts:
            if v not in parent and abs(u[0] * v[1] - u[1] * v[0]) == 1:
                parent[v] = u
                dq.append(v)
    path = [target]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return [back(*v) for v in reversed(path)]


def farey_neighbours_bfs(a: tuple, b: tuple, max_den: int) -> int:
    """Brute-force distance inside all slopes with |p|, |q| <= max_den (test oracle)."""
    verts = [(p, q) for q in range(0, max_den + 1) for p in range(-max_den, max_den + 1)
             if gcd(abs(p), q) == 1 and (q > 0 or p == 1)]
    a, b = _norm(*a), _norm(*b)
    dist = {a: 0}
    dq = deque([a])
    while dq:
        u = dq.popleft()
        if u == b:
            return dist[u]
        for v in verts:
            if v not in dist and abs(u[0] * v[1] - u[1] * v[0]) == 1:
                dist[v] = dist[u] + 1
                dq.append(v)
    return -1
