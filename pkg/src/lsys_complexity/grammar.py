"""Binary tree over a bit window, its L-system rules, and rule classification.

Nodes of the perfect tree are addressed heap style: the root is 1, the
children of ``i`` are ``2i`` and ``2i + 1`` and the leaves are
``2**depth .. 2**(depth+1) - 1``.  Heap order is exactly breadth-first,
left-before-right order, which is also the order classes are numbered in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterator

from .encoding import BitString
from .errors import InvalidWindowError

INTERNAL = "I"


@dataclass(frozen=True)
class BitTree:
    leaves: BitString
    depth: int

    @property
    def leaf_count(self) -> int:
        return 1 << self.depth

    @property
    def node_count(self) -> int:
        return 2 * self.leaf_count - 1

    def is_leaf(self, node: int) -> bool:
        return node >= self.leaf_count

    def bit(self, node: int) -> int:
        return self.leaves.bits[node - self.leaf_count]

    def position(self, node: int) -> tuple[int, int]:
        """(level, offset) of a heap index."""
        level = node.bit_length() - 1
        return level, node - (1 << level)

    def node_at(self, level: int, offset: int) -> int:
        if not 0 <= level <= self.depth or not 0 <= offset < (1 << level):
            raise IndexError(f"no node at level {level}, offset {offset}")
        return (1 << level) + offset

    def span(self, node: int) -> tuple[int, int]:
        """Bit slice [start, stop) covered by ``node``."""
        level, offset = self.position(node)
        width = 1 << (self.depth - level)
        return offset * width, (offset + 1) * width

    def substring(self, node: int) -> str:
        start, stop = self.span(node)
        return self.leaves[start:stop].to01()

    def nodes(self) -> range:
        return range(1, 2 * self.leaf_count)

    def shape(self):
        """Nested ``(left, right)`` tuples with ``None`` at the leaves."""

        def walk(node):
            if self.is_leaf(node):
                return None
            return (walk(2 * node), walk(2 * node + 1))

        return walk(1)


def build_tree(window: BitString) -> BitTree:
    n = len(window)
    if n < 2 or n & (n - 1):
        raise InvalidWindowError(f"window length must be a power of two >= 2, got {n}")
    return BitTree(window, n.bit_length() - 1)


def tree_to_bracketed(tree: BitTree) -> str:
    parts: list[str] = []

    def walk(node: int) -> None:
        if tree.is_leaf(node):
            return
        parts.append("[-F")
        walk(2 * node)
        parts.append("][+F")
        walk(2 * node + 1)
        parts.append("]")

    walk(1)
    return "".join(parts)


def parse_bracketed(text: str):
    """Inverse of :func:`tree_to_bracketed` up to leaf bits; returns a shape."""
    pos = 0

    def expect(token: str) -> None:
        nonlocal pos
        if not text.startswith(token, pos):
            raise ValueError(f"expected {token!r} at offset {pos} in bracketed string")
        pos += len(token)

    def subtree():
        if not text.startswith("[", pos):
            return None
        expect("[-F")
        left = subtree()
        expect("][+F")
        right = subtree()
        expect("]")
        return (left, right)

    shape = subtree()
    if pos != len(text):
        raise ValueError(f"trailing characters at offset {pos} in bracketed string")
    return shape


def rewriting_rules(tree: BitTree) -> Iterator[tuple[str, str]]:
    """Yield (lhs, rhs) rules named P, T_L, T_R, T_LR, ... in heap order."""

    def name(node: int) -> str:
        if node == 1:
            return "P"
        path = bin(node)[3:].replace("0", "L").replace("1", "R")
        return "T_" + path

    for node in tree.nodes():
        if tree.is_leaf(node):
            continue
        left, right = 2 * node, 2 * node + 1
        lhs_l = "" if tree.is_leaf(left) else name(left)
        lhs_r = "" if tree.is_leaf(right) else name(right)
        yield name(node), f"[-F{lhs_l}][+F{lhs_r}]"


def depth_signature(tree: BitTree, node: int, depth: int) -> Hashable:
    """Label tree of ``node`` truncated ``depth`` levels below it.

    Leaves are labelled by their bit (0 or 1), internal nodes by ``"I"``.
    Two nodes are isomorphic on ``depth`` exactly when their signatures
    are equal.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if tree.is_leaf(node):
        return tree.bit(node)
    if depth == 0:
        return INTERNAL
    return (
        INTERNAL,
        depth_signature(tree, 2 * node, depth - 1),
        depth_signature(tree, 2 * node + 1, depth - 1),
    )


def _signature_ids(tree: BitTree, depth: int) -> list[int]:
    """Interned depth signatures for every node, indexed by heap index."""
    size = 2 * tree.leaf_count
    first_leaf = tree.leaf_count
    table: dict[tuple, int] = {}

    def intern(key: tuple) -> int:
        found = table.get(key)
        if found is None:
            found = table[key] = len(table)
        return found

    leaf_ids = [intern(("leaf", b)) for b in (0, 1)]
    bare = intern((INTERNAL,))
    sig = [0] * size
    for node in range(first_leaf, size):
        sig[node] = leaf_ids[tree.bit(node)]
    for node in range(1, first_leaf):
        sig[node] = bare
    for _ in range(depth):
        prev = sig
        sig = prev[:]
        for node in range(1, first_leaf):
            sig[node] = intern((INTERNAL, prev[2 * node], prev[2 * node + 1]))
    return sig


@dataclass(frozen=True)
class Variant:
    """One distinct right-hand side inside a class.

    ``left``/``right`` are class ids for an internal rule; ``bit`` is set
    (and the ids are ``None``) for a terminal rule.
    """

    left: int | None
    right: int | None
    bit: int | None
    multiplicity: int

    @property
    def terminal(self) -> bool:
        return self.bit is not None

    def rhs(self) -> str:
        if self.terminal:
            return "null"
        return f"C{self.left} C{self.right}"


@dataclass(frozen=True)
class RuleClass:
    id: int
    variants: tuple[Variant, ...]
    representative: str

    @property
    def variant_count(self) -> int:
        return len(self.variants)

    @property
    def terminal(self) -> bool:
        return self.variants[0].terminal

    @property
    def total(self) -> int:
        return sum(v.multiplicity for v in self.variants)


@dataclass(frozen=True)
class Grammar:
    classes: tuple[RuleClass, ...]
    root_class: int
    iso_depth: int

    @property
    def total_classes(self) -> int:
        return len(self.classes)

    @property
    def node_total(self) -> int:
        return sum(c.total for c in self.classes)

    def __getitem__(self, class_id: int) -> RuleClass:
        return self.classes[class_id - 1]


def classify(tree: BitTree, iso_depth: int = 2) -> Grammar:
    if iso_depth < 0:
        raise ValueError("iso_depth must be >= 0")
    sig = _signature_ids(tree, iso_depth)
    class_of: dict[int, int] = {}
    node_class = [0] * len(sig)
    representative: list[int] = []
    for node in tree.nodes():
        cid = class_of.get(sig[node])
        if cid is None:
            cid = class_of[sig[node]] = len(class_of) + 1
            representative.append(node)
        node_class[node] = cid

    # class id -> {rhs key: count}, insertion ordered by first encounter
    buckets: list[dict[tuple, int]] = [{} for _ in representative]
    for node in tree.nodes():
        if tree.is_leaf(node):
            key = (None, None, tree.bit(node))
        else:
            key = (node_class[2 * node], node_class[2 * node + 1], None)
        bucket = buckets[node_class[node] - 1]
        bucket[key] = bucket.get(key, 0) + 1

    classes = tuple(
        RuleClass(
            id=i + 1,
            variants=tuple(Variant(l, r, b, n) for (l, r, b), n in bucket.items()),
            representative=tree.substring(representative[i]),
        )
        for i, bucket in enumerate(buckets)
    )
    return Grammar(classes, root_class=1, iso_depth=iso_depth)


def grammar_stats(g: Grammar) -> dict:
    return {
        "n": g.total_classes,
        "class_sizes": {c.id: c.variant_count for c in g.classes},
        "multiplicities": {c.id: [v.multiplicity for v in c.variants] for c in g.classes},
        "node_total": g.node_total,
    }


def grammar_to_dict(g: Grammar) -> dict:
    return {
        "iso_depth": g.iso_depth,
        "root_class": g.root_class,
        "n": g.total_classes,
        "node_total": g.node_total,
        "classes": [
            {
                "id": c.id,
                "n_i": c.variant_count,
                "substring": c.representative,
                "variants": [
                    {
                        "multiplicity": v.multiplicity,
                        "rhs": None if v.terminal else [v.left, v.right],
                        "bit": v.bit,
                    }
                    for v in c.variants
                ],
            }
            for c in g.classes
        ],
    }


def format_grammar(g: Grammar) -> str:
    """Aligned text table: class, n_i, (n_ip) rule, representative substring."""
    lines = [f"(n={g.total_classes})  iso-depth {g.iso_depth}  nodes={g.node_total}"]
    lines.append(f"{'class':<8}{'n_i':>4}  {'variant':<28}substring")
    for c in g.classes:
        for j, v in enumerate(c.variants):
            head = f"#{c.id:<7}{c.variant_count:>4}" if j == 0 else " " * 12
            rule = f"({v.multiplicity:>3}) C{c.id} -> {v.rhs()}"
            sub = c.representative if j == 0 else ""
            lines.append(f"{head}  {rule:<28}{sub}".rstrip())
    return "\n".join(lines)
