"""Permutations of finite label sets.

A :class:`Permutation` lives on a :class:`GroundSet`, a sorted tuple of
positive integer labels.  Labels need not be ``1..n``; injections between
ground sets (:class:`Injection`) are first-class so that relabelled
permutations can be pushed from one symmetric group into another.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterable, Sequence


@dataclass(frozen=True, order=True)
class GroundSet:
    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(x) for x in self.labels)
        if any(x <= 0 for x in labels):
            raise ValueError("labels must be positive integers")
        if any(a >= b for a, b in zip(labels, labels[1:])):
            raise ValueError("labels must be strictly increasing")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def range(cls, n: int) -> GroundSet:
        """The standard set {1, ..., n}."""
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def of(cls, labels: Iterable[int]) -> GroundSet:
        return cls(tuple(sorted(set(labels))))

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, x):
        return x in self._index

    @property
    def _index(self) -> dict[int, int]:
        # cached lazily; frozen dataclass so go through object.__setattr__
        try:
            return self.__dict__["_idx"]
        except KeyError:
            idx = {x: i for i, x in enumerate(self.labels)}
            object.__setattr__(self, "_idx", idx)
            return idx

    def index(self, x: int) -> int:
        return self._index[x]

    def __repr__(self):
        return "GroundSet(%s)" % (list(self.labels),)


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``ground``; ``image[i]`` is the image of ``ground.labels[i]``."""

    ground: GroundSet
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        if len(image) != len(self.ground) or sorted(image) != list(self.ground.labels):
            raise ValueError("image is not a permutation of the ground set")
        object.__setattr__(self, "image", image)

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, ground: GroundSet) -> Permutation:
        return cls(ground, ground.labels)

    @classmethod
    def from_cycles(cls, ground: GroundSet, cycles: Iterable[Sequence[int]]) -> Permutation:
        mapping = {x: x for x in ground}
        seen = set()
        for cyc in cycles:
            for x in cyc:
                if x not in ground:
                    raise ValueError("label %r not in ground set" % (x,))
                if x in seen:
                    raise ValueError("cycles are not disjoint")
                seen.add(x)
            for x, y in zip(cyc, tuple(cyc[1:]) + tuple(cyc[:1])):
                mapping[x] = y
        return cls(ground, tuple(mapping[x] for x in ground))

    @classmethod
    def from_mapping(cls, ground: GroundSet, mapping: dict[int, int]) -> Permutation:
        return cls(ground, tuple(mapping.get(x, x) for x in ground))

    # -- basic access -----------------------------------------------------

    def __call__(self, x: int) -> int:
        return self.image[self.ground.index(x)]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.ground.labels, self.image))

    def is_identity(self) -> bool:
        return self.image == self.ground.labels

    def inverse(self) -> Permutation:
        inv = {y: x for x, y in zip(self.ground.labels, self.image)}
        return Permutation(self.ground, tuple(inv[x] for x in self.ground))

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __str__(self):
        cycles = cycle_decomposition(self)
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __repr__(self):
        return "Permutation(%s on %s)" % (self, list(self.ground.labels))


def compose(f: Permutation, g: Permutation) -> Permutation:
    """Return ``x -> f(g(x))``."""
    if f.ground != g.ground:
        raise ValueError("ground-set mismatch")
    fmap = f.as_dict()
    return Permutation(f.ground, tuple(fmap[y] for y in g.image))


def cycle_decomposition(f: Permutation) -> list[tuple[int, ...]]:
    """Non-trivial cycles of ``f``, each starting at its minimum, sorted by minimum."""
    fmap = f.as_dict()
    seen = set()
    cycles = []
    for x in f.ground:  # ascending, so each cycle is met first at its minimum
        if x in seen or fmap[x] == x:
            continue
        cyc = [x]
        seen.add(x)
        y = fmap[x]
        while y != x:
            cyc.append(y)
            seen.add(y)
            y = fmap[y]
        cycles.append(tuple(cyc))
    return cycles


def parse_cycles(text: str) -> list[tuple[int, ...]]:
    """Parse cycle notation such as ``"(1 2)(3 4)"``; ``"()"`` is the identity."""
    text = text.strip()
    cycles = []
    for chunk in text.replace(")", ")\n").split("\n"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise ValueError("bad cycle notation: %r" % (text,))
        body = chunk[1:-1].replace(",", " ").split()
        if body:
            cycles.append(tuple(int(x) for x in body))
    return cycles


def order(f: Permutation) -> int:
    return lcm(1, *(len(c) for c in cycle_decomposition(f)))


def support(f: Permutation) -> GroundSet:
    return GroundSet(tuple(x for x, y in zip(f.ground.labels, f.image) if x != y))


def is_bounded_p_element(f: Permutation, p: int, a: int) -> bool:
    """True iff ``f`` is a product of between 1 and ``a`` disjoint ``p``-cycles."""
    cycles = cycle_decomposition(f)
    return 0 < len(cycles) <= a and all(len(c) == p for c in cycles)


def commutes(f: Permutation, g: Permutation) -> bool:
    if f.ground != g.ground:
        raise ValueError("ground-set mismatch")
    fmap, gmap = f.as_dict(), g.as_dict()
    return all(fmap[gmap[x]] == gmap[fmap[x]] for x in f.ground)


@dataclass(frozen=True)
class Injection:
    """An injective map ``domain -> codomain``; ``images[i]`` is the image of ``domain.labels[i]``."""

    domain: GroundSet
    codomain: GroundSet
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if len(images) != len(self.domain):
            raise ValueError("one image label is needed per domain label")
        if len(set(images)) != len(images):
            raise ValueError("map is not injective")
        if any(y not in self.codomain for y in images):
            raise ValueError("image label outside codomain")
        object.__setattr__(self, "images", images)

    @classmethod
    def inclusion(cls, domain: GroundSet, codomain: GroundSet) -> Injection:
        return cls(domain, codomain, domain.labels)

    @classmethod
    def identity(cls, ground: GroundSet) -> Injection:
        return cls(ground, ground, ground.labels)

    @classmethod
    def from_mapping(cls, domain: GroundSet, codomain: GroundSet, mapping: dict[int, int]) -> Injection:
        return cls(domain, codomain, tuple(mapping[x] for x in domain))

    def __call__(self, x: int) -> int:
        return self.images[self.domain.index(x)]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.domain.labels, self.images))

    def image_set(self) -> GroundSet:
        return GroundSet.of(self.images)

    def compose(self, first: Injection) -> Injection:
        """``self ∘ first``: apply ``first``, then ``self``."""
        if first.codomain != self.domain:
            raise ValueError("injections are not composable")
        return Injection(first.domain, self.codomain, tuple(self(y) for y in first.images))

    def __repr__(self):
        pairs = ", ".join("%d->%d" % kv for kv in self.as_dict().items())
        return "Injection({%s} into %s)" % (pairs, list(self.codomain.labels))


def relabel(f: Permutation, j: Injection) -> Permutation:
    """Push ``f`` along ``j``: act as ``j f j^-1`` on ``j(domain)``, fix everything else."""
    if f.ground != j.domain:
        raise ValueError("domain mismatch")
    jmap = j.as_dict()
    mapping = {jmap[x]: jmap[y] for x, y in zip(f.ground.labels, f.image)}
    return Permutation.from_mapping(j.codomain, mapping)
