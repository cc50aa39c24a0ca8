"""Terms over the group/loop signature and their vectorised evaluation."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ArityMismatch, BudgetExceeded, ParseError, SignatureMismatch

_BINARY = ("mul", "ldiv", "rdiv")


@dataclass(frozen=True)
class Word:
    """A term tree. Leaves are ``var`` (with ``index``) or ``one``."""

    op: str
    args: tuple = ()
    index: int = -1

    def __post_init__(self):
        if self.op == "var":
            if self.index < 0:
                raise ValueError("variables need a non-negative index")
        elif self.op == "one":
            pass
        elif self.op in _BINARY:
            if len(self.args) != 2:
                raise ValueError(f"{self.op} takes two arguments")
        elif self.op == "inv":
            if len(self.args) != 1:
                raise ValueError("inv takes one argument")
        else:
            raise ValueError(f"unknown operation {self.op!r}")

    @cached_property
    def variables(self) -> frozenset:
        if self.op == "var":
            return frozenset([self.index])
        out = frozenset()
        for a in self.args:
            out |= a.variables
        return out

    @cached_property
    def ops(self) -> frozenset:
        out = frozenset([self.op])
        for a in self.args:
            out |= a.ops
        return out

    @property
    def arity(self) -> int:
        vs = self.variables
        r = max(vs) + 1 if vs else 0
        if len(vs) != r:
            raise ArityMismatch(f"variables {sorted(vs)} are not numbered 0..{r - 1}")
        return r

    def __mul__(self, other: "Word") -> "Word":
        return mul(self, other)

    def __str__(self):
        if self.op == "var":
            return _var_name(self.index)
        if self.op == "one":
            return "1"
        return "(" + " ".join([self.op] + [str(a) for a in self.args]) + ")"


def _var_name(i: int) -> str:
    letters = "xyzuvwpqrst"
    return letters[i] if i < len(letters) else f"x{i}"


def var(i: int) -> Word:
    return Word("var", index=i)


def one() -> Word:
    return Word("one")


def mul(a: Word, b: Word) -> Word:
    return Word("mul", (a, b))


def ldiv(a: Word, b: Word) -> Word:
    return Word("ldiv", (a, b))


def rdiv(a: Word, b: Word) -> Word:
    return Word("rdiv", (a, b))


def inv(a: Word) -> Word:
    return Word("inv", (a,))


def commutator(a: Word, b: Word) -> Word:
    """``a b a^-1 b^-1``."""
    return mul(mul(mul(a, b), inv(a)), inv(b))


def associator(a: Word, b: Word, c: Word) -> Word:
    """``((ab)c) / (a(bc))``."""
    return rdiv(mul(mul(a, b), c), mul(a, mul(b, c)))


def check_signature(w: Word, kind: str) -> None:
    if kind == "loop" and "inv" in w.ops:
        raise SignatureMismatch("inv is not an operation of loops; use divisions")


def eval_word(w: Word, A, args):
    """Evaluate ``w`` in ``A`` at ``args`` (integers or broadcastable arrays)."""
    args = tuple(args)
    if len(args) != w.arity:
        raise ArityMismatch(f"word has arity {w.arity}, got {len(args)} arguments")
    check_signature(w, A.kind)
    return _eval(w, A, [np.asarray(a, dtype=np.int64) for a in args])


def _eval(w: Word, A, args):
    if w.op == "var":
        return args[w.index]
    if w.op == "one":
        return np.int64(0)
    vals = [_eval(a, A, args) for a in w.args]
    return A.op(w.op, *vals)


def _count_subterms(w: Word, counts: Counter) -> None:
    counts[w] += 1
    for a in w.args:
        _count_subterms(a, counts)


def _variable_counts(w: Word) -> Counter:
    if w.op == "var":
        return Counter([w.index])
    out = Counter()
    for a in w.args:
        out += _variable_counts(a)
    return out


def split_word(w: Word):
    """``(outer, parts)`` with ``w == outer(*parts)`` and parts on pairwise disjoint variables.

    A part is a maximal proper subterm that owns its variables: every
    occurrence of those variables in ``w`` lies inside an occurrence of the
    part. The value set of ``w`` is then the set of values of ``outer`` over
    the product of the parts' value sets.
    """
    occurrences = Counter()
    _count_subterms(w, occurrences)
    total = _variable_counts(w)

    def owns(t: Word) -> bool:
        counts = _variable_counts(t)
        return bool(counts) and all(total[v] == occurrences[t] * c for v, c in counts.items())

    parts: list[Word] = []

    def walk(t: Word) -> None:
        if t != w and owns(t):
            if t not in parts:
                parts.append(t)
            return
        for a in t.args:
            walk(a)

    walk(w)
    index = {t: i for i, t in enumerate(parts)}

    def rebuild(t: Word) -> Word:
        if t in index:
            return var(index[t])
        if not t.args:
            return t
        return Word(t.op, tuple(rebuild(a) for a in t.args))

    return rebuild(w), parts


def value_set_cost(w: Word, order: int) -> int:
    """Largest number of evaluations :func:`value_set` performs at one level."""
    if w.op == "var" or not w.variables:
        return 1
    outer, parts = split_word(w)
    return max([order ** len(parts)] + [value_set_cost(p, order) for p in parts if p.op != "var"])


def value_set(w: Word, A, budget: int) -> np.ndarray:
    """Sorted distinct values of ``w`` over all argument tuples of ``A``."""
    if w.op == "var":
        return A.elements
    if not w.variables:
        return np.unique(np.atleast_1d(eval_word(w, A, ())))
    outer, parts = split_word(w)
    sets = [A.elements if p.op == "var" else value_set(p, A, budget) for p in parts]
    sizes = [len(s) for s in sets]
    total = int(np.prod(sizes, dtype=object))
    if total > budget:
        raise BudgetExceeded(len(parts), total, budget)
    found = []
    step = 1 << 20
    for start in range(0, total, step):
        flat = np.arange(start, min(total, start + step), dtype=np.int64)
        args = []
        for s, size in zip(reversed(sets), reversed(sizes)):
            args.append(s[flat % size])
            flat = flat // size
        found.append(np.unique(eval_word(outer, A, args[::-1])))
    return np.unique(np.concatenate(found))


_TOKEN = re.compile(r"\s*(?:(\()|(\))|([A-Za-z_][A-Za-z0-9_]*|1))")


def parse_word(text: str) -> Word:
    """Parse prefix syntax such as ``(rdiv (mul (mul x y) z) (mul x (mul y z)))``.

    Lowercase identifiers are variables numbered by first appearance; ``1`` or
    ``one`` is the unit.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", column=pos + 1)
        tokens.append((m.group(0).strip(), pos + 1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    names: dict[str, int] = {}
    word, used = _parse(tokens, 0, names)
    if used != len(tokens):
        raise ParseError("trailing tokens after word", column=tokens[used][1])
    return word


def _parse(tokens, i, names):
    if i >= len(tokens):
        raise ParseError("unexpected end of word")
    tok, col = tokens[i]
    if tok == "(":
        if i + 1 >= len(tokens):
            raise ParseError("unexpected end of word", column=col)
        head, hcol = tokens[i + 1]
        if head not in _BINARY + ("inv",):
            raise ParseError(f"unknown operation {head!r}", column=hcol)
        args = []
        j = i + 2
        while j < len(tokens) and tokens[j][0] != ")":
            sub, j = _parse(tokens, j, names)
            args.append(sub)
        if j >= len(tokens):
            raise ParseError("missing ')'", column=col)
        want = 1 if head == "inv" else 2
        if len(args) != want:
            raise ParseError(f"{head} takes {want} argument(s), got {len(args)}", column=hcol)
        return Word(head, tuple(args)), j + 1
    if tok == ")":
        raise ParseError("unexpected ')'", column=col)
    if tok in ("1", "one"):
        return one(), i + 1
    if tok in _BINARY + ("inv",):
        raise ParseError(f"operation {tok!r} must be applied in parentheses", column=col)
    if not tok[0].islower():
        raise ParseError(f"variables must be lowercase, got {tok!r}", column=col)
    if tok not in names:
        names[tok] = len(names)
    return var(names[tok]), i + 1
