"""Computable groups, homomorphisms and finite mitosis witnesses.

Permutations are stored as image tuples and multiplied left to right:
``mul(s, t)`` is the permutation ``x -> t[s[x]]`` (first ``s``, then ``t``).
Conjugation is ``conjugate(x, g) = g x g^-1`` in every group.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Sequence

__all__ = [
    "Group",
    "CyclicGroup",
    "PermutationGroup",
    "SymmetricGroup",
    "DirectProduct",
    "FreeGroup",
    "TowerGroup",
    "Homomorphism",
    "MitosisWitness",
    "WitnessReport",
    "conjugate",
    "commutator",
    "validate_mitosis_witness",
    "build_regular_mitosis",
    "affine_z2_witness",
    "check_witness_all_pairs",
    "WitnessTower",
    "build_tower",
    "parse_group",
    "GroupMismatch",
]

Element = Hashable


class GroupMismatch(ValueError):
    pass


class Group:
    """Base class.  Elements are hashable canonical payloads."""

    finite = False

    @property
    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return a == b

    def is_identity(self, a) -> bool:
        return self.eq(a, self.identity)

    def contains(self, a) -> bool:
        return True

    def prod(self, items: Iterable) -> Element:
        out = self.identity
        for x in items:
            out = self.mul(out, x)
        return out

    def power(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def elements(self) -> list:
        raise TypeError(f"{self!r} has no finite element list")

    def order(self) -> int:
        return len(self.elements())

    def random_element(self, rng: random.Random):
        return rng.choice(self.elements())

    def format(self, a) -> str:
        return repr(a)

    def parse(self, text: str):
        raise NotImplementedError

    def sort_key(self, a):
        return repr(a)


class CyclicGroup(Group):
    finite = True

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("cyclic group order must be positive")
        self.n = n

    def __repr__(self):
        return f"cyclic:{self.n}"

    def __eq__(self, other):
        return isinstance(other, CyclicGroup) and other.n == self.n

    def __hash__(self):
        return hash(("cyclic", self.n))

    @property
    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    def contains(self, a):
        return isinstance(a, int) and 0 <= a < self.n

    def elements(self):
        return list(range(self.n))

    def order(self):
        return self.n

    def random_element(self, rng):
        return rng.randrange(self.n)

    def format(self, a):
        return str(a)

    def parse(self, text):
        return int(text) % self.n

    def sort_key(self, a):
        return a


def perm_mul(s: tuple, t: tuple) -> tuple:
    """First ``s`` then ``t``."""
    return tuple(t[i] for i in s)


def perm_inv(s: tuple) -> tuple:
    out = [0] * len(s)
    for i, j in enumerate(s):
        out[j] = i
    return tuple(out)


class PermutationGroup(Group):
    """Subgroup of Sym(degree) generated by ``generators`` (image tuples)."""

    finite = True

    def __init__(self, degree: int, generators: Sequence[Sequence[int]] = (), name: str | None = None):
        self.degree = degree
        self.generators = [tuple(g) for g in generators]
        for g in self.generators:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation of {degree} points: {g}")
        self.name = name
        self._elements = None

    def __repr__(self):
        return self.name or f"perm<{self.degree}; {len(self.generators)} gens>"

    @property
    def identity(self):
        return tuple(range(self.degree))

    def mul(self, a, b):
        return perm_mul(a, b)

    def inv(self, a):
        return perm_inv(a)

    def contains(self, a):
        if len(a) != self.degree:
            return False
        return a in set(self.elements()) if self._elements is not None else sorted(a) == list(range(self.degree))

    def elements(self, cap: int = 200_000):
        if self._elements is None:
            seen = {self.identity}
            frontier = [self.identity]
            while frontier:
                nxt = []
                for x in frontier:
                    for g in self.generators:
                        y = perm_mul(x, g)
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
                            if len(seen) > cap:
                                raise ValueError(f"group order exceeds cap {cap}")
                frontier = nxt
            self._elements = sorted(seen)
        return self._elements

    def format(self, a):
        return "perm:[" + ",".join(map(str, a)) + "]"

    def parse(self, text):
        m = re.fullmatch(r"(?:perm:)?\[([\d,\s]*)\]", text.strip())
        if not m:
            raise ValueError(f"bad permutation: {text!r}")
        body = m.group(1).strip()
        return tuple(int(v) for v in body.split(",")) if body else ()

    def sort_key(self, a):
        return a


class SymmetricGroup(PermutationGroup):
    def __init__(self, d: int):
        gens = []
        if d >= 2:
            gens.append(tuple([1, 0] + list(range(2, d))))
        if d >= 3:
            gens.append(tuple(list(range(1, d)) + [0]))
        super().__init__(d, gens, name=f"sym:{d}")

    def random_element(self, rng):
        p = list(range(self.degree))
        rng.shuffle(p)
        return tuple(p)

    def contains(self, a):
        return len(a) == self.degree and sorted(a) == list(range(self.degree))


class DirectProduct(Group):
    def __init__(self, left: Group, right: Group):
        self.left, self.right = left, right
        self.finite = left.finite and right.finite

    def __repr__(self):
        return f"product({self.left!r},{self.right!r})"

    @property
    def identity(self):
        return (self.left.identity, self.right.identity)

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a):
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    def eq(self, a, b):
        return self.left.eq(a[0], b[0]) and self.right.eq(a[1], b[1])

    def elements(self):
        return [(x, y) for x in self.left.elements() for y in self.right.elements()]

    def order(self):
        return self.left.order() * self.right.order()

    def random_element(self, rng):
        return (self.left.random_element(rng), self.right.random_element(rng))

    def format(self, a):
        return f"({self.left.format(a[0])},{self.right.format(a[1])})"

    def parse(self, text):
        text = text.strip()
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError(f"bad pair: {text!r}")
        a, b = _split_top(text[1:-1])
        return (self.left.parse(a), self.right.parse(b))

    def sort_key(self, a):
        return (self.left.sort_key(a[0]), self.right.sort_key(a[1]))


def _free_reduce(word: Iterable[tuple]) -> tuple:
    out: list = []
    for let, e in word:
        if out and out[-1][0] == let and out[-1][1] == -e:
            out.pop()
        else:
            out.append((let, e))
    return tuple(out)


class FreeGroup(Group):
    """Free group on named letters; elements are reduced tuples of (letter, +-1)."""

    def __init__(self, letters: Sequence[str]):
        self.letters = list(letters)

    def __repr__(self):
        return "free:[" + ",".join(self.letters) + "]"

    @property
    def identity(self):
        return ()

    def gen(self, name: str):
        return ((name, 1),)

    def mul(self, a, b):
        return _free_reduce(a + b)

    def inv(self, a):
        return tuple((l, -e) for l, e in reversed(a))

    def random_element(self, rng, max_len: int = 6):
        n = rng.randrange(max_len + 1)
        w = [(rng.choice(self.letters), rng.choice((1, -1))) for _ in range(n)]
        return _free_reduce(w)

    def format(self, a):
        if not a:
            return "1"
        return "*".join(l if e == 1 else f"{l}^-1" for l, e in a)

    def parse(self, text):
        text = text.strip()
        if text in ("", "1", "e"):
            return ()
        out = []
        for tok in text.split("*"):
            tok = tok.strip()
            if tok.endswith("^-1"):
                out.append((tok[:-3], -1))
            else:
                out.append((tok, 1))
        return _free_reduce(out)


class TowerGroup(Group):
    """Free product of a base group with the free group on u_j, t_j (1 <= j <= depth).

    Elements are normal forms: tuples of letters, each either
    ``("b", g)`` with ``g`` a non-identity base element, or
    ``("u", j, +-1)`` / ``("t", j, +-1)``.  Adjacent base letters are
    multiplied in the base group.  Every relation of the iterated mitosis
    is ignored here, so equal normal forms imply equality in the tower
    group but not conversely; decide equality by projecting through a
    :class:`WitnessTower` when needed.
    """

    def __init__(self, base: Group, depth: int):
        self.base = base
        self.depth = depth

    def __repr__(self):
        return f"tower({self.base!r},{self.depth})"

    @property
    def identity(self):
        return ()

    def letter(self, g):
        return () if self.base.is_identity(g) else (("b", g),)

    def u(self, j: int):
        return (("u", j, 1),)

    def t(self, j: int):
        return (("t", j, 1),)

    def mul(self, a, b):
        if not a:
            return b
        if not b:
            return a
        out = list(a)
        base = self.base
        for let in b:
            if out:
                top = out[-1]
                if let[0] == "b" and top[0] == "b":
                    g = base.mul(top[1], let[1])
                    if base.is_identity(g):
                        out.pop()
                    else:
                        out[-1] = ("b", g)
                    continue
                if let[0] != "b" and top[0] == let[0] and top[1] == let[1] and top[2] == -let[2]:
                    out.pop()
                    continue
            out.append(let)
        return tuple(out)

    def inv(self, a):
        out = []
        for let in reversed(a):
            if let[0] == "b":
                out.append(("b", self.base.inv(let[1])))
            else:
                out.append((let[0], let[1], -let[2]))
        return tuple(out)

    def random_element(self, rng, max_len: int = 5):
        w = self.identity
        for _ in range(rng.randrange(max_len + 1)):
            k = rng.randrange(3)
            if k == 0 or self.depth == 0:
                w = self.mul(w, self.letter(self.base.random_element(rng)))
            else:
                j = rng.randrange(1, self.depth + 1)
                let = (("u", "t")[k - 1], j, rng.choice((1, -1)))
                w = self.mul(w, (let,))
        return w

    def format(self, a):
        if not a:
            return "1"
        parts = []
        for let in a:
            if let[0] == "b":
                parts.append(self.base.format(let[1]))
            else:
                parts.append(f"{let[0]}{let[1]}" + ("" if let[2] == 1 else "^-1"))
        return "*".join(parts)

    def sort_key(self, a):
        return tuple((let[0], repr(let[1:])) for let in a)


def conjugate(group: Group, x, g):
    """``x^g = g x g^-1``."""
    if not (group.contains(x) and group.contains(g)):
        raise GroupMismatch("conjugate: elements not in the same group")
    return group.mul(group.mul(g, x), group.inv(g))


def commutator(group: Group, a, b):
    """``[a, b] = a b a^-1 b^-1``."""
    return group.mul(group.mul(a, b), group.mul(group.inv(a), group.inv(b)))


class Homomorphism:
    """A group homomorphism given by an explicit function on elements."""

    def __init__(self, domain: Group, codomain: Group, action: Callable[[Any], Any], name: str = "hom"):
        self.domain = domain
        self.codomain = codomain
        self.action = action
        self.name = name

    def __call__(self, x):
        return self.action(x)

    def __repr__(self):
        return f"Homomorphism({self.name}: {self.domain!r} -> {self.codomain!r})"

    def check(self, pairs: Iterable[tuple]) -> bool:
        cod = self.codomain
        if not cod.eq(self(self.domain.identity), cod.identity):
            return False
        for x, y in pairs:
            if not cod.eq(self(self.domain.mul(x, y)), cod.mul(self(x), self(y))):
                return False
        return True

    @classmethod
    def from_generator_images(cls, domain: Group, codomain: Group, gens, images, name="hom"):
        """Extend generator images to every element of a finite domain by BFS."""
        table = {domain.identity: codomain.identity}
        frontier = [domain.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, im in zip(gens, images):
                    y = domain.mul(x, g)
                    v = codomain.mul(table[x], im)
                    if y in table:
                        if not codomain.eq(table[y], v):
                            raise ValueError("generator images do not define a homomorphism")
                    else:
                        table[y] = v
                        nxt.append(y)
            frontier = nxt
        return cls(domain, codomain, table.__getitem__, name=name)


@dataclass
class MitosisWitness:
    """A group with an embedding of ``base`` and elements u, t satisfying
    ``[h, g^u] = e`` and ``g^t = g g^u`` on the image of ``base``."""

    base: Group
    ambient: Group
    embed: Homomorphism
    u: Any
    t: Any
    base_generators: list

    def __repr__(self):
        return f"MitosisWitness(base={self.base!r}, ambient={self.ambient!r})"


@dataclass
class WitnessReport:
    ok: bool
    checked: int
    violation: str | None = None

    def __bool__(self):
        return self.ok


def validate_mitosis_witness(w: MitosisWitness, generators: Sequence | None = None) -> WitnessReport:
    """Check both mitosis relation families on all pairs of ``generators``.

    Generator-level checking suffices: if every ``embed(h)`` commutes with
    every ``embed(g)^u`` for generators g, h, the two generated subgroups
    commute; and then ``(g1 g2)^t = g1^t g2^t = g1 g1^u g2 g2^u
    = g1 g2 g1^u g2^u = (g1 g2)(g1 g2)^u``.
    """
    A = w.ambient
    gens = list(w.base_generators if generators is None else generators)
    imgs = [w.embed(g) for g in gens]
    checked = 0
    for g, ig in zip(gens, imgs):
        gu = conjugate(A, ig, w.u)
        for h, ih in zip(gens, imgs):
            checked += 1
            if not A.is_identity(commutator(A, ih, gu)):
                return WitnessReport(False, checked, f"[h, g^u] != e for g={w.base.format(g)}, h={w.base.format(h)}")
        checked += 1
        if not A.eq(conjugate(A, ig, w.t), A.mul(ig, gu)):
            return WitnessReport(False, checked, f"g^t != g g^u for g={w.base.format(g)}")
    return WitnessReport(True, checked)


def check_witness_all_pairs(w: MitosisWitness) -> WitnessReport:
    """Exhaustive check of both relations over every pair of base elements."""
    A = w.ambient
    els = w.base.elements()
    imgs = {g: w.embed(g) for g in els}
    checked = 0
    for g in els:
        gu = conjugate(A, imgs[g], w.u)
        if not A.eq(conjugate(A, imgs[g], w.t), A.mul(imgs[g], gu)):
            return WitnessReport(False, checked, f"g^t != g g^u for {w.base.format(g)}")
        for h in els:
            checked += 1
            if not A.is_identity(commutator(A, imgs[h], gu)):
                return WitnessReport(False, checked, f"[h, g^u] != e for g={w.base.format(g)}, h={w.base.format(h)}")
    if len({imgs[g] for g in els}) != len(els):
        return WitnessReport(False, checked, "embedding is not injective")
    return WitnessReport(True, checked)


def _generators_of(G: Group) -> list:
    if isinstance(G, CyclicGroup):
        return [1 % G.n] if G.n > 1 else []
    if isinstance(G, PermutationGroup):
        return list(G.generators)
    if isinstance(G, DirectProduct):
        return [(g, G.right.identity) for g in _generators_of(G.left)] + [
            (G.left.identity, h) for h in _generators_of(G.right)
        ]
    return list(G.elements())


def build_regular_mitosis(G: Group, cap: int = 1_000_000, generators: Sequence | None = None) -> MitosisWitness:
    """Finite mitosis of a finite group acting on the set ``G x G``.

    Points ``(x, y)`` are indexed ``i*|G| + j``.  With permutations applied
    left to right, ``g`` embeds as right translation ``(x, y) -> (x g, y)``,
    ``u`` swaps coordinates and ``t`` is ``(x, y) -> (x, y x^-1)``.  Then
    ``g^u`` is ``(x, y) -> (x, y g)`` and ``g^t = g g^u``.
    """
    els = list(G.elements())
    n = len(els)
    if n * n > cap:
        raise ValueError(f"regular mitosis needs {n * n} points, above the cap {cap}")
    index = {g: i for i, g in enumerate(els)}

    def pt(x, y):
        return index[x] * n + index[y]

    def right(g):
        return tuple(pt(G.mul(x, g), y) for x in els for y in els)

    u = tuple(pt(y, x) for x in els for y in els)
    t = tuple(pt(x, G.mul(y, G.inv(x))) for x in els for y in els)
    gens = list(generators) if generators is not None else _generators_of(G)
    ambient = PermutationGroup(n * n, [right(g) for g in gens] + [u, t], name=f"regmit({G!r})")
    cache: dict = {}

    def embed(g):
        if g not in cache:
            cache[g] = right(g)
        return cache[g]

    return MitosisWitness(G, ambient, Homomorphism(G, ambient, embed, name="right-translation"), u, t, gens)


def affine_z2_witness() -> MitosisWitness:
    """The order-24 witness for Z/2: AGL(2, F_2) acting on F_2^2.

    Base generator = translation by (1, 0); u swaps coordinates; t is the
    shear fixing the first coordinate.  Point (a, b) has index 2a + b.
    """
    Z2 = CyclicGroup(2)
    w = build_regular_mitosis(Z2)
    w.ambient.name = "agl(2,2)"
    return w


@dataclass
class WitnessTower:
    """Levels ``w_1, ..., w_d`` with ``w_j.base`` the ambient of ``w_{j-1}``."""

    levels: list

    @property
    def depth(self):
        return len(self.levels)

    @property
    def top(self) -> Group:
        return self.levels[-1].ambient

    def validate(self) -> WitnessReport:
        for j, w in enumerate(self.levels):
            if j and w.base is not self.levels[j - 1].ambient:
                return WitnessReport(False, 0, f"level {j + 1} base is not level {j} ambient")
            rep = validate_mitosis_witness(w)
            if not rep:
                return rep
        return WitnessReport(True, len(self.levels))

    def lift(self, x, from_level: int):
        """Push an element of level ``from_level``'s group (0 = base) to the top."""
        for w in self.levels[from_level:]:
            x = w.embed(x)
        return x

    def letter_image(self, letter):
        """Image in the top ambient of a tower letter."""
        if letter[0] == "b":
            return self.lift(letter[1], 0)
        kind, j, e = letter
        w = self.levels[j - 1]
        g = w.u if kind == "u" else w.t
        g = self.lift(g, j)
        return g if e == 1 else self.top.inv(g)

    def projector(self):
        """Return a memoized function mapping tower words to top-level elements."""
        top = self.top
        letters: dict = {}
        words: dict = {(): top.identity}

        def project(word):
            r = words.get(word)
            if r is not None:
                return r
            acc = project(word[:-1])
            let = word[-1]
            im = letters.get(let)
            if im is None:
                im = letters[let] = self.letter_image(let)
            r = words[word] = top.mul(acc, im)
            return r

        return project


def build_tower(G: Group, depth: int, cap: int = 1_000_000) -> WitnessTower:
    """Iterate :func:`build_regular_mitosis`; each level's ambient is the next base."""
    levels = []
    base = G
    for _ in range(depth):
        w = build_regular_mitosis(base, cap=cap)
        levels.append(w)
        base = w.ambient
    return WitnessTower(levels)


# ---------------------------------------------------------------------------
# textual group specs: cyclic:n, sym:d, perm:[...], product(a,b), free:[x,y]


def _split_top(text: str) -> tuple[str, str]:
    depth = 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            return text[:i], text[i + 1:]
    raise ValueError(f"expected two comma-separated parts in {text!r}")


def parse_group(spec: str) -> Group:
    spec = spec.strip()
    if spec.startswith("cyclic:"):
        return CyclicGroup(int(spec[7:]))
    if spec.startswith("sym:"):
        return SymmetricGroup(int(spec[4:]))
    if spec.startswith("perm:"):
        gens = re.findall(r"\[([\d,\s]*)\]", spec[5:])
        perms = [tuple(int(v) for v in g.split(",")) for g in gens]
        return PermutationGroup(len(perms[0]), perms)
    if spec.startswith("product(") and spec.endswith(")"):
        a, b = _split_top(spec[8:-1])
        return DirectProduct(parse_group(a), parse_group(b))
    if spec.startswith("free:"):
        body = spec[5:].strip().strip("[]")
        return FreeGroup([s.strip() for s in body.split(",") if s.strip()])
    raise ValueError(f"unknown group spec {spec!r}")
