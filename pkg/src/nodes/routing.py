"""
Static per-node routing tables.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union


class _NoRoute:
    """Lookup miss. Falsy, and a value rather than an exception."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        return False

    def __repr__(self):
        return 'NoRoute'


NO_ROUTE = _NoRoute()


@dataclass(frozen=True)
class Route:
    dest: str
    next_hop: str
    port: Optional[int] = None

    def to_dict(self) -> dict:
        data = {'dest': self.dest, 'next_hop': self.next_hop}
        if self.port is not None:
            data['port'] = self.port
        return data


class RoutingTable:
    """destination node id → Route for one node."""

    def __init__(self, routes: Iterable[Route] = ()):
        self._routes: Dict[str, Route] = {}
        for route in routes:
            self.set(route)

    def __len__(self) -> int:
        return len(self._routes)

    def __iter__(self):
        return iter(sorted(self._routes.values(), key=lambda r: r.dest))

    def set(self, route: Route):
        self._routes[route.dest] = route

    def remove(self, dest: str) -> bool:
        return self._routes.pop(dest, None) is not None

    def lookup(self, dest: str) -> Union[Route, _NoRoute]:
        return self._routes.get(dest, NO_ROUTE)

    def destinations(self) -> List[str]:
        return sorted(self._routes)


def route_next_hop(
    tables: Mapping[str, RoutingTable],
    at: str,
    dest: str,
) -> Union[str, _NoRoute]:
    """Next hop from `at` toward `dest`, or NO_ROUTE."""
    table = tables.get(at)
    if table is None:
        return NO_ROUTE
    route = table.lookup(dest)
    return route.next_hop if route else NO_ROUTE


def walk_path(
    tables: Mapping[str, RoutingTable],
    src: str,
    dest: str,
    max_hops: int = 64,
) -> Tuple[List[Tuple[str, Route]], bool]:
    """
    Follow routes from src toward dest.

    Returns:
        (hops taken as (node, route) pairs, True if a node was revisited)
    """
    hops = []
    seen = {src}
    at = src
    while at != dest and len(hops) < max_hops:
        table = tables.get(at)
        route = table.lookup(dest) if table is not None else NO_ROUTE
        if not route:
            break
        hops.append((at, route))
        if route.next_hop in seen:
            return hops, True
        seen.add(route.next_hop)
        at = route.next_hop
    return hops, False


def find_routing_loops(tables: Mapping[str, RoutingTable]) -> List[Tuple[str, str]]:
    """(source, destination) pairs whose route walk revisits a node."""
    destinations = sorted({d for t in tables.values() for d in t.destinations()})
    loops = []
    for src in sorted(tables):
        for dest in destinations:
            _, looped = walk_path(tables, src, dest)
            if looped:
                loops.append((src, dest))
    return loops
