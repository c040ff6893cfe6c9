"""
Union-find over the dense indices 0..n-1
"""

from typing import Dict, Iterable, List, Tuple


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        """Merge the classes of x and y; False if they were already one class"""
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        return True

    def labels(self) -> List[int]:
        return [self.find(x) for x in range(len(self.parent))]

    def __len__(self) -> int:
        return sum(1 for x in range(len(self.parent)) if self.parent[x] == x)


def find_orbits(generators: Iterable[Tuple[int, ...]], n: int) -> List[Tuple[int, ...]]:
    """Orbits of the group generated by permutations of 0..n-1, ordered by least member"""
    uf = UnionFind(n)
    for perm in generators:
        for x in range(n):
            uf.union(x, perm[x])
    orbits: Dict[int, List[int]] = {}
    for x in range(n):
        orbits.setdefault(uf.find(x), []).append(x)
    return sorted((tuple(members) for members in orbits.values()), key=lambda o: o[0])
