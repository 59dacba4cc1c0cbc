"""Exhaustive enumeration of query types from the bounded grammar.

Types are produced by a depth-first expansion of the binary grammar

    Formula      := Intersection | Union | Projection
    Intersection := (i,Formula,Formula|Negation)
    Union        := (u,Formula,Formula)
    Negation     := (n,Formula)
    Projection   := (p,Formula|Entity)
    Entity       := (e)

pruned by four structural bounds: anchors per tree, projections per
root-to-leaf path, projections-plus-negations per root-to-leaf path
(prevents unbounded negation nesting), and unary operators above any
binary operator (keeps intersections/unions near the root).  Results
are deduplicated by canonical string and emitted in lexicographic
order.  The defaults (3, 3, 3, 1) yield 301 types.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import Formula, canonicalize, compute_stats, print_formula


@dataclass(frozen=True)
class GenerationConfig:
    """Bounds for type enumeration; all limits are inclusive.

    ``max_unary_above_binary`` caps how many p/n operators may appear on
    the path above an intersection or union, so set operations cannot be
    buried under long projection chains.
    """

    max_anchors: int = 3
    max_chain: int = 3
    max_pn_chain: int = 3
    max_unary_above_binary: int = 1
    bounded_negation: bool = True

    def __post_init__(self):
        if min(self.max_anchors, self.max_chain, self.max_pn_chain) < 1:
            raise ValueError("all generation bounds must be >= 1")
        if self.max_unary_above_binary < 0:
            raise ValueError("max_unary_above_binary must be >= 0")


@dataclass
class TypeCensus:
    """Counts of types grouped by (anchor count, max projection chain)."""

    cells: dict[tuple[int, int], int] = field(default_factory=dict)
    total: int = 0

    def add(self, anchors: int, chain: int):
        key = (anchors, chain)
        self.cells[key] = self.cells.get(key, 0) + 1
        self.total += 1

    def cell(self, anchors: int, chain: int) -> int:
        return self.cells.get((anchors, chain), 0)

    def render(self) -> str:
        """Plain-text grid, rows = chain length, columns = anchor count."""
        anchors = sorted({a for a, _ in self.cells}) or [1]
        chains = sorted({c for _, c in self.cells}) or [1]
        lines = ["chain\\anchors  " + "".join(f"{a:>8}" for a in anchors) + "     sum"]
        for c in chains:
            row = [self.cell(a, c) for a in anchors]
            lines.append(f"{c:<14}" + "".join(f"{v:>8}" for v in row) + f"{sum(row):>8}")
        col = [sum(self.cell(a, c) for c in chains) for a in anchors]
        lines.append("sum           " + "".join(f"{v:>8}" for v in col) + f"{self.total:>8}")
        return "\n".join(lines)


def enumerate_types(cfg: GenerationConfig = GenerationConfig()) -> list[Formula]:
    """All distinct canonical types within the configured bounds.

    Deterministic: the result is sorted by canonical string.
    """
    # unary depth only matters up to the point where binaries get cut off
    u_cap = cfg.max_unary_above_binary + 1
    memo: dict[tuple[int, int, int, int], dict[str, Formula]] = {}

    def gen(anchors: int, p_left: int, pn_left: int, u_above: int) -> dict[str, Formula]:
        """Canonical types with exactly ``anchors`` anchors, every
        root-to-leaf path using at most p_left projections and pn_left
        projections+negations, expanded below u_above unary operators."""
        key = (anchors, p_left, pn_left, u_above)
        cached = memo.get(key)
        if cached is not None:
            return cached
        out: dict[str, Formula] = {}

        def put(f: Formula):
            c = canonicalize(f)
            out[print_formula(c)] = c

        deeper = min(u_above + 1, u_cap)
        if p_left >= 1 and pn_left >= 1:
            if anchors == 1:
                put(Formula("p", (Formula("e"),)))
            for sub in gen(anchors, p_left - 1, pn_left - 1, deeper).values():
                put(Formula("p", (sub,)))
        if anchors >= 2 and u_above <= cfg.max_unary_above_binary:
            for a1 in range(1, anchors):
                a2 = anchors - a1
                lefts = gen(a1, p_left, pn_left, u_above)
                rights = gen(a2, p_left, pn_left, u_above)
                for fa in lefts.values():
                    for fb in rights.values():
                        put(Formula("i", (fa, fb)))
                        put(Formula("u", (fa, fb)))
                if cfg.bounded_negation and pn_left >= 1:
                    negatable = gen(a2, p_left, pn_left - 1, deeper)
                    for fa in lefts.values():
                        for fb in negatable.values():
                            put(Formula("i", (fa, Formula("n", (fb,)))))
        if not cfg.bounded_negation and pn_left >= 1:
            # free grammar: negation is a formula in its own right, so
            # n-rooted subtrees also flow into the binary cases above
            for sub in gen(anchors, p_left, pn_left - 1, deeper).values():
                put(Formula("n", (sub,)))

        memo[key] = out
        return out

    merged: dict[str, Formula] = {}
    for a in range(1, cfg.max_anchors + 1):
        merged.update(gen(a, cfg.max_chain, cfg.max_pn_chain, 0))
    return [merged[s] for s in sorted(merged)]


def census(types: list[Formula]) -> TypeCensus:
    """Group a type list by (anchor count, max projection chain)."""
    out = TypeCensus()
    for f in types:
        stats = compute_stats(f)
        out.add(stats.num_anchors, stats.max_chain)
    return out
