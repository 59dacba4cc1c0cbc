"""Operator trees for logical queries over knowledge graphs.

A query type is a tree of set operators written in a LISP-like text form,
e.g. ``(i,(p,(e)),(n,(p,(e))))``.  Nine operator tags exist:

====  =======  =========================================
tag   arity    meaning
====  =======  =========================================
e     0        entity anchor (singleton set when grounded)
p     1        relational projection
n     1        complement against all entities
i     2        intersection
u     2        union
d     2        set difference
I     >= 2     multi-way intersection
U     >= 2     multi-way union
D     >= 2     multi-way difference (first minus the rest)
====  =======  =========================================

This module owns the tree type plus parsing, printing, canonical
ordering, structural statistics, and grammar validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

ALL_TAGS = frozenset("epniudIUD")

#: Minimum and maximum operand count per tag (None = unbounded).
ARITY: dict[str, tuple[int, int | None]] = {
    "e": (0, 0),
    "p": (1, 1),
    "n": (1, 1),
    "i": (2, 2),
    "u": (2, 2),
    "d": (2, 2),
    "I": (2, None),
    "U": (2, None),
    "D": (2, None),
}

#: Tags whose operands may be freely reordered.
COMMUTATIVE_TAGS = frozenset("iuIU")


class FormulaError(ValueError):
    """Raised for malformed formula text or malformed trees."""


class ParseError(FormulaError):
    """Syntax or grammar error at a known position in the input text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


@dataclass(frozen=True)
class Formula:
    """Immutable operator tree node.

    ``label`` is an optional stable identity for grounding slots (p and e
    nodes).  It is ignored by equality and hashing and never printed, so
    rewritten copies of the same leaf still receive the same grounding.
    """

    tag: str
    children: tuple["Formula", ...] = ()
    label: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.tag not in ALL_TAGS:
            raise FormulaError(f"unknown operator tag {self.tag!r}")

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class FormulaStats:
    """Structural statistics used for grouping and generation bounds."""

    num_anchors: int
    max_chain: int
    num_negations: int
    max_pn_chain: int


def iter_nodes(f: Formula):
    """Yield every node of ``f`` in depth-first pre-order."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def count_nodes(f: Formula) -> int:
    return sum(1 for _ in iter_nodes(f))


def parse_formula(text: str, allowed_tags=None) -> Formula:
    """Parse formula text into a tree.

    Whitespace between tokens is ignored.  Raises :class:`ParseError` on
    syntax errors, arity violations, tags outside ``allowed_tags``, and
    entity anchors that are not the operand of a projection.
    """
    allowed = ALL_TAGS if allowed_tags is None else frozenset(allowed_tags)
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def expect(ch: str):
        nonlocal pos
        skip_ws()
        if pos >= n or text[pos] != ch:
            found = text[pos] if pos < n else "end of input"
            raise ParseError(f"expected {ch!r}, found {found!r}", pos)
        pos += 1

    def node(under_p: bool) -> Formula:
        nonlocal pos
        expect("(")
        skip_ws()
        if pos >= n:
            raise ParseError("expected operator tag, found end of input", pos)
        tag = text[pos]
        tag_pos = pos
        if tag not in ALL_TAGS:
            raise ParseError(f"unknown operator tag {tag!r}", tag_pos)
        if tag not in allowed:
            raise ParseError(f"operator {tag!r} not allowed here", tag_pos)
        if tag == "e" and not under_p:
            raise ParseError("entity anchor (e) must be the operand of a projection", tag_pos)
        pos += 1
        children = []
        while True:
            skip_ws()
            if pos < n and text[pos] == ",":
                pos += 1
                children.append(node(under_p=(tag == "p")))
            else:
                break
        expect(")")
        lo, hi = ARITY[tag]
        if len(children) < lo or (hi is not None and len(children) > hi):
            raise ParseError(
                f"operator {tag!r} takes {_arity_text(tag)} operands, got {len(children)}",
                tag_pos,
            )
        return Formula(tag, tuple(children))

    result = node(under_p=False)
    skip_ws()
    if pos != n:
        raise ParseError("trailing characters after formula", pos)
    return result


def _arity_text(tag: str) -> str:
    lo, hi = ARITY[tag]
    if hi is None:
        return f"at least {lo}"
    if lo == hi:
        return str(lo)
    return f"{lo}..{hi}"


def print_formula(f: Formula) -> str:
    """Emit the canonical text form: no whitespace, comma-separated."""
    if not f.children:
        return f"({f.tag})"
    return "(" + ",".join([f.tag] + [print_formula(c) for c in f.children]) + ")"


def canonicalize(f: Formula) -> Formula:
    """Sort the operands of commutative operators by printed form.

    Operands of i/u/I/U are fully sorted; for D only the subtrahends
    (operands after the first) are sorted.  Idempotent; the result is the
    identity of a query type.
    """
    children = tuple(canonicalize(c) for c in f.children)
    if f.tag in COMMUTATIVE_TAGS:
        children = tuple(sorted(children, key=print_formula))
    elif f.tag == "D":
        children = children[:1] + tuple(sorted(children[1:], key=print_formula))
    return replace(f, children=children)


def compute_stats(f: Formula) -> FormulaStats:
    """Anchor count, per-path projection / projection+negation maxima."""
    num_anchors = 0
    num_negations = 0
    max_chain = 0
    max_pn = 0
    # (node, #p on path so far, #p+n on path so far)
    stack = [(f, 0, 0)]
    while stack:
        node, p_depth, pn_depth = stack.pop()
        if node.tag == "p":
            p_depth += 1
            pn_depth += 1
            max_chain = max(max_chain, p_depth)
            max_pn = max(max_pn, pn_depth)
        elif node.tag == "n":
            num_negations += 1
            pn_depth += 1
            max_pn = max(max_pn, pn_depth)
        elif node.tag == "e":
            num_anchors += 1
        for c in node.children:
            stack.append((c, p_depth, pn_depth))
    return FormulaStats(num_anchors, max_chain, num_negations, max_pn)


def validate(f: Formula, system=None, bounded_negation: bool = False) -> list[str]:
    """Check ``f`` against an operator system and the negation discipline.

    Returns a list of human-readable violations; an empty list means the
    tree conforms.  With ``bounded_negation`` every n node must be a direct
    operand of an intersection (i or I), a binary i may carry at most one
    negated operand, and a multi-way I must keep at least one positive one.
    """
    allowed = ALL_TAGS if system is None else frozenset(system)
    violations: list[str] = []

    def walk(node: Formula, parent: Formula | None, path: str):
        if node.tag not in allowed:
            violations.append(f"{path}: operator {node.tag!r} not in system")
        lo, hi = ARITY[node.tag]
        if len(node.children) < lo or (hi is not None and len(node.children) > hi):
            violations.append(
                f"{path}: operator {node.tag!r} takes {_arity_text(node.tag)} "
                f"operands, got {len(node.children)}"
            )
        if node.tag == "e" and (parent is None or parent.tag != "p"):
            violations.append(f"{path}: entity anchor must be the operand of a projection")
        if bounded_negation and node.tag == "n":
            if parent is None or parent.tag not in ("i", "I"):
                violations.append(f"{path}: negation must be an operand of an intersection")
        if bounded_negation and node.tag in ("i", "I"):
            negated = sum(1 for c in node.children if c.tag == "n")
            if node.tag == "i" and negated > 1:
                violations.append(f"{path}: binary intersection with two negated operands")
            if node.tag == "I" and negated == len(node.children):
                violations.append(f"{path}: intersection with no positive operand")
        for idx, c in enumerate(node.children):
            walk(c, node, f"{path}.{idx}")

    walk(f, None, "root")
    return violations


def assign_labels(f: Formula) -> Formula:
    """Number the grounding slots (p and e nodes) in depth-first order.

    The labels survive rewriting, so every normal form of the same type
    can be instantiated from one slot assignment.
    """
    counter = 0

    def walk(node: Formula) -> Formula:
        nonlocal counter
        label = None
        if node.tag in ("p", "e"):
            label = counter
            counter += 1
        return Formula(node.tag, tuple(walk(c) for c in node.children), label=label)

    return walk(f)
