"""Logic-preserving rewrites between the nine normal forms.

Every rewrite maps a canonical query type to an equivalent tree over a
fixed operator system:

=============  =============  =======================================
form           operators      construction
=============  =============  =======================================
Original       e,p,i,u,n      canonical ordering only
DM             e,p,i,n        unions replaced via De Morgan
DM+I           e,p,I,n        DM with intersections made multi-way
Original+d     e,p,i,u,d      intersection-negation pairs become d
DNF            e,p,i,u,n      unions lifted to the root
DNF+d          e,p,i,u,d      d replacement applied to the DNF
DNF+IU         e,p,I,U,n      DNF with multi-way i/u
DNF+IUd        e,p,I,U,d      negated operands folded out with d
DNF+IUD        e,p,I,U,D      negated operands collected into one D
=============  =============  =======================================

Grounding slot labels survive every rewrite: a subtree duplicated while
lifting a union keeps its original labels, so one slot assignment
instantiates all nine forms consistently.
"""

from __future__ import annotations

from enum import Enum

from .formula import (
    Formula,
    FormulaError,
    canonicalize,
    count_nodes,
    print_formula,
)

#: Hard ceiling on tree growth while lifting unions; the distribution
#: step can blow up exponentially on deeply alternating input.
DEFAULT_NODE_CAP = 4096


class RewriteError(FormulaError):
    """Input outside the operator system a rewrite is defined on."""


class NodeCapExceeded(RewriteError):
    """Union lifting grew the tree past the configured node cap."""


class FormKind(str, Enum):
    ORIGINAL = "Original"
    DM = "DM"
    DM_I = "DM+I"
    ORIGINAL_D = "Original+d"
    DNF = "DNF"
    DNF_D = "DNF+d"
    DNF_IU = "DNF+IU"
    DNF_IUd = "DNF+IUd"
    DNF_IUD = "DNF+IUD"

    def __str__(self) -> str:
        return self.value


ALL_FORM_KINDS = (
    FormKind.ORIGINAL,
    FormKind.DM,
    FormKind.DM_I,
    FormKind.ORIGINAL_D,
    FormKind.DNF,
    FormKind.DNF_D,
    FormKind.DNF_IU,
    FormKind.DNF_IUd,
    FormKind.DNF_IUD,
)

OPERATOR_SYSTEMS: dict[FormKind, frozenset[str]] = {
    FormKind.ORIGINAL: frozenset("epiun"),
    FormKind.DM: frozenset("epin"),
    FormKind.DM_I: frozenset("epIn"),
    FormKind.ORIGINAL_D: frozenset("epiud"),
    FormKind.DNF: frozenset("epiun"),
    FormKind.DNF_D: frozenset("epiud"),
    FormKind.DNF_IU: frozenset("epIUn"),
    FormKind.DNF_IUd: frozenset("epIUd"),
    FormKind.DNF_IUD: frozenset("epIUD"),
}


def _check_tags(f: Formula, allowed: str, op: str):
    for node_tag in _tags_of(f):
        if node_tag not in allowed:
            raise RewriteError(f"{op}: operator {node_tag!r} not supported on input")


def _tags_of(f: Formula):
    stack = [f]
    while stack:
        node = stack.pop()
        yield node.tag
        stack.extend(node.children)


def to_dm(f: Formula) -> Formula:
    """Replace every union by De Morgan's rule: u(A,B) -> n(i(n(A),n(B))).

    Double negations produced by the rule are kept, so the result stays a
    literal transcription of the De Morgan step.
    """
    _check_tags(f, "epiun", "to_dm")

    def walk(node: Formula) -> Formula:
        children = tuple(walk(c) for c in node.children)
        if node.tag == "u":
            a, b = children
            return Formula("n", (Formula("i", (Formula("n", (a,)), Formula("n", (b,)))),))
        return Formula(node.tag, children, label=node.label)

    return canonicalize(walk(f))


def to_dnf(f: Formula, node_cap: int = DEFAULT_NODE_CAP) -> Formula:
    """Lift unions to the root by the four-step rewrite to fixpoint.

    The steps, applied innermost-first until nothing changes:

    1. push negation through intersection/union (De Morgan),
    2. cancel double negation,
    3. lift a union out of a projection, duplicating the projection,
    4. distribute an intersection over a union operand.

    Afterwards every union sits above all other operators and every
    negation applies directly to a projection.  Intersections below a
    projection stay where they are: no rule moves a projection past an
    intersection or negation, which would not preserve the answer set.
    """
    _check_tags(f, "epiun", "to_dnf")

    changed = True

    def pass_(node: Formula) -> Formula:
        nonlocal changed
        children = tuple(pass_(c) for c in node.children)
        tag = node.tag
        if tag == "n":
            child = children[0]
            if child.tag == "n":
                changed = True
                return child.children[0]
            if child.tag in ("i", "u"):
                changed = True
                flipped = "u" if child.tag == "i" else "i"
                return Formula(
                    flipped, tuple(Formula("n", (c,)) for c in child.children)
                )
        elif tag == "p":
            child = children[0]
            if child.tag == "u":
                changed = True
                return Formula(
                    "u",
                    tuple(Formula("p", (c,), label=node.label) for c in child.children),
                )
        elif tag == "i":
            a, b = children
            if b.tag == "u":
                changed = True
                return Formula("u", tuple(Formula("i", (a, c)) for c in b.children))
            if a.tag == "u":
                changed = True
                return Formula("u", tuple(Formula("i", (c, b)) for c in a.children))
        return Formula(tag, children, label=node.label)

    current = f
    while changed:
        changed = False
        current = pass_(current)
        if count_nodes(current) > node_cap:
            raise NodeCapExceeded(
                f"to_dnf: tree grew past {node_cap} nodes on {print_formula(f)}"
            )
    return canonicalize(current)


def flatten_multiary(f: Formula) -> Formula:
    """Turn binary i/u into multi-way I/U, collapsing nested runs.

    A maximal run of nested same-tag nodes becomes a single multi-way
    node over the run's operands; an isolated binary node becomes a
    two-operand multi-way node.
    """

    def run_operands(node: Formula, tag: str) -> list[Formula]:
        out: list[Formula] = []
        for c in node.children:
            if c.tag == tag:
                out.extend(run_operands(c, tag))
            else:
                out.append(c)
        return out

    def walk(node: Formula) -> Formula:
        if node.tag in ("i", "u"):
            ops = run_operands(node, node.tag)
            return Formula(
                "I" if node.tag == "i" else "U", tuple(walk(c) for c in ops)
            )
        return Formula(node.tag, tuple(walk(c) for c in node.children), label=node.label)

    return canonicalize(walk(f))


def replace_negation_with_difference(f: Formula, multi: bool = False) -> Formula:
    """Eliminate negations in favour of set difference.

    Every negation must sit inside an intersection (binary i or
    multi-way I).  With ``multi`` off, negated operands are folded out
    with nested binary d, innermost first; with ``multi`` on, each
    intersection's negated operands become the subtrahends of a single
    multi-way D.  Positive-only intersections are left untouched.
    """
    f = canonicalize(f)

    def rewrite(node: Formula) -> Formula:
        if node.tag == "n":
            raise RewriteError(
                "replace_negation_with_difference: negation not bounded by an intersection"
            )
        if node.tag == "i":
            kind, value = conj(node)
            if kind == "negs":
                raise RewriteError(
                    "replace_negation_with_difference: intersection with no positive operand"
                )
            return value
        if node.tag == "I":
            pos = [rewrite(c) for c in node.children if c.tag != "n"]
            negs = [rewrite(c.children[0]) for c in node.children if c.tag == "n"]
            if not negs:
                return Formula("I", tuple(pos), label=node.label)
            if not pos:
                raise RewriteError(
                    "replace_negation_with_difference: intersection with no positive operand"
                )
            minuend = pos[0] if len(pos) == 1 else Formula("I", tuple(pos))
            if multi:
                return Formula("D", (minuend, *negs))
            return _fold_d(minuend, negs)
        return Formula(
            node.tag, tuple(rewrite(c) for c in node.children), label=node.label
        )

    def conj(node: Formula):
        """Combine one binary-intersection run bottom-up.

        Returns ('pos', tree) when the piece contains a positive operand,
        else ('negs', [trees]) listing what it would subtract; all-negative
        pieces bubble up until a sibling provides the minuend.
        """
        parts = [
            conj(c) if c.tag == "i"
            else ("negs", [rewrite(c.children[0])]) if c.tag == "n"
            else ("pos", rewrite(c))
            for c in node.children
        ]
        (ka, va), (kb, vb) = parts
        if ka == "pos" and kb == "pos":
            return "pos", Formula("i", (va, vb))
        if ka == "negs" and kb == "negs":
            return "negs", va + vb
        pos, negs = (va, vb) if ka == "pos" else (vb, va)
        return "pos", _fold_d(pos, negs)

    return canonicalize(rewrite(f))


def _fold_d(minuend: Formula, subtrahends) -> Formula:
    out = minuend
    for s in subtrahends:
        out = Formula("d", (out, s))
    return out


def to_form(f: Formula, kind: FormKind, node_cap: int = DEFAULT_NODE_CAP) -> Formula:
    """Rewrite an Original-form type into the requested normal form."""
    base = canonicalize(f)
    if kind is FormKind.ORIGINAL:
        return base
    if kind is FormKind.DM:
        return to_dm(base)
    if kind is FormKind.DM_I:
        return flatten_multiary(to_dm(base))
    if kind is FormKind.ORIGINAL_D:
        return replace_negation_with_difference(base)
    dnf = to_dnf(base, node_cap=node_cap)
    if kind is FormKind.DNF:
        return dnf
    if kind is FormKind.DNF_D:
        return replace_negation_with_difference(dnf)
    iu = flatten_multiary(dnf)
    if kind is FormKind.DNF_IU:
        return iu
    if kind is FormKind.DNF_IUd:
        return replace_negation_with_difference(iu)
    if kind is FormKind.DNF_IUD:
        return replace_negation_with_difference(iu, multi=True)
    raise ValueError(f"unknown form kind {kind!r}")


def all_forms(f: Formula, node_cap: int = DEFAULT_NODE_CAP) -> dict[FormKind, Formula]:
    """All nine normal forms of one Original-form type."""
    return {kind: to_form(f, kind, node_cap=node_cap) for kind in ALL_FORM_KINDS}
