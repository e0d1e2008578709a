"""And-inverter graph with structural hashing.

Literals follow the AIGER convention: ``2 * node + complement``.  Node 0 is
the constant, so literal 0 is false and literal 1 is true.  Primary inputs
and latch outputs are leaf nodes; every other node is a two-input AND whose
fanins have smaller indices than the node itself.
"""

from __future__ import annotations

CONST0 = 0
CONST1 = 1

KIND_CONST = 0
KIND_PI = 1
KIND_LATCH = 2
KIND_AND = 3


def lit_node(lit: int) -> int:
    return lit >> 1


def is_compl(lit: int) -> bool:
    return bool(lit & 1)


def negate(lit: int) -> int:
    return lit ^ 1


def bit_name(name: str, width: int, i: int) -> str:
    return name if width == 1 else f"{name}[{i}]"


class Aig:
    def __init__(self):
        self._kind = [KIND_CONST]
        self._f0 = [-1]
        self._f1 = [-1]
        self._lev = [0]
        self._strash: dict[tuple[int, int], int] = {}
        self.inputs: list[int] = []
        self.input_names: list[str | None] = []
        # each latch is [state literal, next-state literal]
        self.latches: list[list[int]] = []
        self.latch_names: list[str | None] = []
        self.outputs: list[int] = []
        self.output_names: list[str | None] = []

    # -- construction -----------------------------------------------------

    def _new_node(self, kind, f0=-1, f1=-1) -> int:
        self._kind.append(kind)
        self._f0.append(f0)
        self._f1.append(f1)
        self._lev.append(0 if kind != KIND_AND else
                         max(self._lev[f0 >> 1], self._lev[f1 >> 1]) + 1)
        return len(self._kind) - 1

    def add_input(self, name: str | None = None) -> int:
        lit = 2 * self._new_node(KIND_PI)
        self.inputs.append(lit)
        self.input_names.append(name)
        return lit

    def add_latch(self, name: str | None = None, next_lit: int = CONST0) -> int:
        """Create a latch and return its state literal (reset value 0)."""
        lit = 2 * self._new_node(KIND_LATCH)
        self.latches.append([lit, next_lit])
        self.latch_names.append(name)
        return lit

    def set_latch_next(self, index: int, lit: int) -> None:
        self._check_lit(lit)
        self.latches[index][1] = lit

    def add_output(self, lit: int, name: str | None = None) -> int:
        self._check_lit(lit)
        self.outputs.append(lit)
        self.output_names.append(name)
        return len(self.outputs) - 1

    def _check_lit(self, lit):
        if lit < 0 or (lit >> 1) >= len(self._kind):
            raise ValueError(f"literal {lit} refers to a missing node")

    def make_and(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        if a == CONST0:
            return CONST0
        if a == CONST1:
            return b
        if a == b:
            return a
        if a ^ 1 == b:
            return CONST0
        key = (a, b)
        node = self._strash.get(key)
        if node is None:
            node = self._new_node(KIND_AND, a, b)
            self._strash[key] = node
        return 2 * node

    def lookup_and(self, a: int, b: int) -> int | None:
        """Literal ``make_and(a, b)`` would return, or None if it needs a new node."""
        if a > b:
            a, b = b, a
        if a == CONST0:
            return CONST0
        if a == CONST1:
            return b
        if a == b:
            return a
        if a ^ 1 == b:
            return CONST0
        node = self._strash.get((a, b))
        return None if node is None else 2 * node

    def make_or(self, a: int, b: int) -> int:
        return self.make_and(a ^ 1, b ^ 1) ^ 1

    def make_xor(self, a: int, b: int) -> int:
        return self.make_or(self.make_and(a, b ^ 1), self.make_and(a ^ 1, b))

    def make_xnor(self, a: int, b: int) -> int:
        return self.make_xor(a, b) ^ 1

    def make_mux(self, sel: int, then: int, other: int) -> int:
        """``sel ? then : other``."""
        if then == other:
            return then
        if sel == CONST1:
            return then
        if sel == CONST0:
            return other
        return self.make_or(self.make_and(sel, then), self.make_and(sel ^ 1, other))

    def make_and_tree(self, lits) -> int:
        """Balanced AND over ``lits`` (constant 1 when empty)."""
        lits = list(lits)
        if not lits:
            return CONST1
        while len(lits) > 1:
            nxt = [self.make_and(lits[i], lits[i + 1]) for i in range(0, len(lits) - 1, 2)]
            if len(lits) % 2:
                nxt.append(lits[-1])
            lits = nxt
        return lits[0]

    def make_or_tree(self, lits) -> int:
        return self.make_and_tree([lit ^ 1 for lit in lits]) ^ 1

    def make_xor_tree(self, lits) -> int:
        lits = list(lits)
        if not lits:
            return CONST0
        while len(lits) > 1:
            nxt = [self.make_xor(lits[i], lits[i + 1]) for i in range(0, len(lits) - 1, 2)]
            if len(lits) % 2:
                nxt.append(lits[-1])
            lits = nxt
        return lits[0]

    # -- inspection -------------------------------------------------------

    @property
    def num_nodes(self) -> int:
        """Size of the node table, constant and dead nodes included."""
        return len(self._kind)

    @property
    def num_inputs(self) -> int:
        return len(self.inputs)

    @property
    def num_latches(self) -> int:
        return len(self.latches)

    @property
    def num_outputs(self) -> int:
        return len(self.outputs)

    def kind(self, node: int) -> int:
        return self._kind[node]

    def is_and(self, node: int) -> bool:
        return self._kind[node] == KIND_AND

    def fanins(self, node: int) -> tuple[int, int]:
        return self._f0[node], self._f1[node]

    def and_nodes(self):
        return [n for n, k in enumerate(self._kind) if k == KIND_AND]

    def roots(self) -> list[int]:
        """Literals observed from outside: outputs, then latch next-states."""
        return list(self.outputs) + [nxt for _, nxt in self.latches]

    def sources(self) -> list[int]:
        """Literals that act as inputs: primary inputs, then latch states."""
        return list(self.inputs) + [state for state, _ in self.latches]

    def source_names(self) -> list[str | None]:
        return list(self.input_names) + list(self.latch_names)

    def root_names(self) -> list[str | None]:
        return list(self.output_names) + list(self.latch_names)

    def reachable(self, roots=None) -> list[int]:
        """AND nodes in the transitive fanin of ``roots``, ascending."""
        if roots is None:
            roots = self.roots()
        seen = set()
        stack = [lit >> 1 for lit in roots]
        f0, f1, kind = self._f0, self._f1, self._kind
        while stack:
            n = stack.pop()
            if n in seen or kind[n] != KIND_AND:
                continue
            seen.add(n)
            stack.append(f0[n] >> 1)
            stack.append(f1[n] >> 1)
        return sorted(seen)

    def node_count(self) -> int:
        """Live AND nodes, i.e. those reachable from outputs and latch inputs."""
        return len(self.reachable())

    def levels(self) -> list[int]:
        """Level of every node; leaves are at level 0."""
        return list(self._lev)

    def level(self, lit: int) -> int:
        return self._lev[lit >> 1]

    def depth(self) -> int:
        """Maximum number of AND nodes on any source-to-root path."""
        roots = self.roots()
        if not roots:
            return 0
        lev = self.levels()
        return max(lev[lit >> 1] for lit in roots)

    def stats(self) -> tuple[int, int]:
        return self.node_count(), self.depth()

    def __repr__(self):
        return (f"Aig(pis={self.num_inputs}, latches={self.num_latches}, "
                f"pos={self.num_outputs}, ands={self.node_count()})")

    # -- copying ----------------------------------------------------------

    def empty_like(self) -> tuple["Aig", dict[int, int]]:
        """New Aig with the same sources; returns it with the node -> literal map."""
        dst = Aig()
        mapping = {0: CONST0}
        for lit, name in zip(self.inputs, self.input_names):
            mapping[lit >> 1] = dst.add_input(name)
        for (state, _), name in zip(self.latches, self.latch_names):
            mapping[state >> 1] = dst.add_latch(name)
        return dst, mapping

    def finish_like(self, dst: "Aig", root_lits: list[int]) -> "Aig":
        """Attach ``root_lits`` (outputs then latch next-states) to ``dst``."""
        no = len(self.outputs)
        for lit, name in zip(root_lits[:no], self.output_names):
            dst.add_output(lit, name)
        for i, lit in enumerate(root_lits[no:]):
            dst.set_latch_next(i, lit)
        return dst

    def transfer(self, dst: "Aig", mapping: dict[int, int], roots=None) -> list[int]:
        """Rebuild the cones of ``roots`` inside ``dst``.

        ``mapping`` must hold a literal for every source node; it is extended
        in place with the AND nodes copied.  Returns the mapped root literals.
        """
        if roots is None:
            roots = self.roots()
        f0, f1 = self._f0, self._f1
        for n in self.reachable(roots):
            if n in mapping:
                continue
            a, b = f0[n], f1[n]
            mapping[n] = dst.make_and(mapping[a >> 1] ^ (a & 1), mapping[b >> 1] ^ (b & 1))
        return [mapping[lit >> 1] ^ (lit & 1) for lit in roots]

    def compact(self) -> "Aig":
        """Copy without dead nodes, renumbered in topological order."""
        dst, mapping = self.empty_like()
        return self.finish_like(dst, self.transfer(dst, mapping))

    def structure(self):
        """Hashable description used for structural equality checks."""
        ands = tuple((n, self._f0[n], self._f1[n]) for n in self.and_nodes())
        return (tuple(self._kind), ands, tuple(self.inputs), tuple(self.input_names),
                tuple(map(tuple, self.latches)), tuple(self.latch_names),
                tuple(self.outputs), tuple(self.output_names))

    def structurally_equal(self, other: "Aig") -> bool:
        return self.structure() == other.structure()


def cone_stats(aig: Aig, outputs, boundary) -> tuple[int, int]:
    """AND count and depth of the logic between ``boundary`` literals and ``outputs``.

    Nodes of the boundary cone (everything the boundary literals depend on)
    are excluded from the count and treated as level 0.
    """
    boundary_nodes = {lit >> 1 for lit in boundary}
    level: dict[int, int] = {}
    count = 0

    def visit(n):
        nonlocal count
        if n in level:
            return level[n]
        stack = [n]
        while stack:
            m = stack[-1]
            if m in level:
                stack.pop()
                continue
            if m in boundary_nodes or not aig.is_and(m):
                level[m] = 0
                stack.pop()
                continue
            a, b = aig.fanins(m)
            pending = [x >> 1 for x in (a, b) if (x >> 1) not in level]
            if pending:
                stack.extend(pending)
                continue
            level[m] = max(level[a >> 1], level[b >> 1]) + 1
            count += 1
            stack.pop()
        return level[n]

    depth = 0
    for lit in outputs:
        depth = max(depth, visit(lit >> 1))
    return count, depth
