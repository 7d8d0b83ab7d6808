"""Quantifier-free linear integer arithmetic over named integer variables.

The surface syntax is an SMT-LIB2 subset: a script of ``declare-const``
commands (whose order fixes variable indices) followed by exactly one
``assert``.  Connectives and/or/not/=> and relations <= >= = < > are
accepted; ``<``, ``>``, ``not`` and ``=>`` are rewritten away, so a
normalized formula is built from atoms ``term <= term``, ``term >= term``,
``term = term`` with conjunction and disjunction only.

Terms are affine: integer literals, variables, n-ary + and -, and
multiplication by a literal.  Anything nonlinear is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .errors import FormulaError
from .geometry import Cube, CubeUnion, is_finite

# -- linear terms -------------------------------------------------------------


@dataclass(frozen=True)
class LinearTerm:
    """const + sum of coeff * variable, coeffs sparse and sorted."""

    const: int
    coeffs: tuple[tuple[int, int], ...] = ()  # (variable index, coefficient)

    @classmethod
    def constant(cls, c: int) -> "LinearTerm":
        return cls(c)

    @classmethod
    def variable(cls, index: int) -> "LinearTerm":
        return cls(0, ((index, 1),))

    @classmethod
    def of(cls, const: int, coeffs: dict[int, int]) -> "LinearTerm":
        clean = tuple(sorted((i, c) for i, c in coeffs.items() if c != 0))
        return cls(const, clean)

    def coeff_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def add(self, other: "LinearTerm") -> "LinearTerm":
        coeffs = self.coeff_dict()
        for i, c in other.coeffs:
            coeffs[i] = coeffs.get(i, 0) + c
        return LinearTerm.of(self.const + other.const, coeffs)

    def sub(self, other: "LinearTerm") -> "LinearTerm":
        return self.add(other.scale(-1))

    def scale(self, factor: int) -> "LinearTerm":
        return LinearTerm.of(
            self.const * factor, {i: c * factor for i, c in self.coeffs}
        )

    def shift(self, delta: int) -> "LinearTerm":
        return LinearTerm(self.const + delta, self.coeffs)

    def evaluate(self, point: Sequence[int]) -> int:
        return self.const + sum(c * point[i] for i, c in self.coeffs)

    def variables(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs


# -- formulas -----------------------------------------------------------------

RELATIONS = ("<=", ">=", "=")


@dataclass(frozen=True)
class Atom:
    lhs: LinearTerm
    rel: str
    rhs: LinearTerm

    def __post_init__(self) -> None:
        if self.rel not in RELATIONS:
            raise ValueError(f"bad relation {self.rel!r}")

    def variables(self) -> frozenset[int]:
        return self.lhs.variables() | self.rhs.variables()


@dataclass(frozen=True)
class And:
    children: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["Formula", ...]


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, And, Or, Not, Implies]


def true_atom() -> Atom:
    return Atom(LinearTerm.constant(0), "<=", LinearTerm.constant(0))


def false_atom() -> Atom:
    return Atom(LinearTerm.constant(0), "<=", LinearTerm.constant(-1))


def evaluate(f: Formula, point: Sequence[int]) -> bool:
    if isinstance(f, Atom):
        a, b = f.lhs.evaluate(point), f.rhs.evaluate(point)
        if f.rel == "<=":
            return a <= b
        if f.rel == ">=":
            return a >= b
        return a == b
    if isinstance(f, And):
        return all(evaluate(c, point) for c in f.children)
    if isinstance(f, Or):
        return any(evaluate(c, point) for c in f.children)
    if isinstance(f, Not):
        return not evaluate(f.child, point)
    if isinstance(f, Implies):
        return (not evaluate(f.left, point)) or evaluate(f.right, point)
    raise TypeError(f"not a formula: {f!r}")


def atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, (And, Or)):
        for c in f.children:
            yield from atoms(c)
    elif isinstance(f, Not):
        yield from atoms(f.child)
    elif isinstance(f, Implies):
        yield from atoms(f.left)
        yield from atoms(f.right)


def is_monadic(f: Formula) -> bool:
    """True iff every atom constrains at most one variable."""
    return all(len(a.variables()) <= 1 for a in atoms(f))


def _negate_atom(a: Atom) -> Formula:
    if a.rel == "<=":
        return Atom(a.lhs, ">=", a.rhs.shift(1))
    if a.rel == ">=":
        return Atom(a.lhs, "<=", a.rhs.shift(-1))
    return Or((
        Atom(a.lhs, "<=", a.rhs.shift(-1)),
        Atom(a.lhs, ">=", a.rhs.shift(1)),
    ))


def normalize(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form without Not/Implies nodes.

    Negation of an equality splits into the two strict sides, shifted by
    one so everything stays non-strict.
    """
    if isinstance(f, Atom):
        return _negate_atom(f) if negate else f
    if isinstance(f, Not):
        return normalize(f.child, not negate)
    if isinstance(f, Implies):
        return normalize(Or((Not(f.left), f.right)), negate)
    if isinstance(f, And):
        kids = tuple(normalize(c, negate) for c in f.children)
        return Or(kids) if negate else And(kids)
    if isinstance(f, Or):
        kids = tuple(normalize(c, negate) for c in f.children)
        return And(kids) if negate else Or(kids)
    raise TypeError(f"not a formula: {f!r}")


def is_normalized(f: Formula) -> bool:
    if isinstance(f, Atom):
        return True
    if isinstance(f, (And, Or)):
        return all(is_normalized(c) for c in f.children)
    return False


# -- s-expressions ------------------------------------------------------------

Sexpr = Union[str, list]


def parse_sexprs(text: str) -> list[Sexpr]:
    """Tokenize and read a sequence of s-expressions (; comments allowed)."""
    tokens: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            tokens.append(ch)
            i += 1
        elif ch.isspace():
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            tokens.append(text[i:j])
            i = j

    out: list[Sexpr] = []
    stack: list[list] = []
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                raise FormulaError("unbalanced ')'")
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                out.append(done)
        else:
            if stack:
                stack[-1].append(tok)
            else:
                out.append(tok)
    if stack:
        raise FormulaError("unbalanced '('")
    return out


def _is_int_literal(tok: str) -> bool:
    body = tok[1:] if tok[:1] == "-" else tok
    return body.isdigit()


# Commands that may appear in a script but carry no formula content.
_IGNORED_COMMANDS = {
    "set-logic", "set-info", "set-option", "check-sat", "exit",
    "get-model", "get-value", "echo",
}


def parse_formula(text: str) -> tuple[int, Formula]:
    """Parse a script into (dimension, normalized formula).

    Variable indices follow declaration order; the declared names are
    forgotten afterwards (emission always uses x1..xd).
    """
    names: dict[str, int] = {}
    asserted: Formula | None = None
    for expr in parse_sexprs(text):
        if not isinstance(expr, list) or not expr:
            raise FormulaError(f"unexpected top-level token {expr!r}")
        head = expr[0]
        if head == "declare-const":
            if len(expr) != 3 or expr[2] != "Int":
                raise FormulaError(f"bad declaration {expr!r}; want (declare-const name Int)")
            name = expr[1]
            if not isinstance(name, str) or _is_int_literal(name):
                raise FormulaError(f"bad variable name {name!r}")
            if name in names:
                raise FormulaError(f"variable {name!r} declared twice")
            names[name] = len(names)
        elif head == "declare-fun":
            if len(expr) != 4 or expr[2] != [] or expr[3] != "Int":
                raise FormulaError(f"only zero-ary Int declarations are supported: {expr!r}")
            name = expr[1]
            if name in names:
                raise FormulaError(f"variable {name!r} declared twice")
            names[name] = len(names)
        elif head == "assert":
            if len(expr) != 2:
                raise FormulaError("assert takes exactly one argument")
            if asserted is not None:
                raise FormulaError("multiple asserts; provide exactly one")
            asserted = _parse_expr(expr[1], names)
        elif head in _IGNORED_COMMANDS:
            continue
        else:
            raise FormulaError(f"unsupported command {head!r}")
    if asserted is None:
        raise FormulaError("no assert found")
    if not names:
        raise FormulaError("no variables declared")
    return len(names), normalize(asserted)


def _parse_expr(e: Sexpr, names: dict[str, int]) -> Formula:
    if isinstance(e, str):
        if e == "true":
            return true_atom()
        if e == "false":
            return false_atom()
        raise FormulaError(f"expected a formula, got {e!r}")
    if not e:
        raise FormulaError("empty expression")
    head = e[0]
    args = e[1:]
    if head == "and":
        if not args:
            raise FormulaError("'and' needs arguments")
        return And(tuple(_parse_expr(a, names) for a in args))
    if head == "or":
        if not args:
            raise FormulaError("'or' needs arguments")
        return Or(tuple(_parse_expr(a, names) for a in args))
    if head == "not":
        if len(args) != 1:
            raise FormulaError("'not' takes one argument")
        return Not(_parse_expr(args[0], names))
    if head == "=>":
        if len(args) < 2:
            raise FormulaError("'=>' takes at least two arguments")
        out = _parse_expr(args[-1], names)
        for a in reversed(args[:-1]):
            out = Implies(_parse_expr(a, names), out)
        return out
    if head in ("<=", ">=", "=", "<", ">"):
        if len(args) != 2:
            raise FormulaError(f"{head!r} takes exactly two arguments")
        lhs = _parse_term(args[0], names)
        rhs = _parse_term(args[1], names)
        if head == "<":
            return Atom(lhs, "<=", rhs.shift(-1))
        if head == ">":
            return Atom(lhs, ">=", rhs.shift(1))
        return Atom(lhs, head, rhs)
    raise FormulaError(f"unknown connective {head!r}")


def _parse_term(e: Sexpr, names: dict[str, int]) -> LinearTerm:
    if isinstance(e, str):
        if _is_int_literal(e):
            return LinearTerm.constant(int(e))
        if e in names:
            return LinearTerm.variable(names[e])
        raise FormulaError(f"undeclared variable {e!r}")
    if not e:
        raise FormulaError("empty term")
    head = e[0]
    args = [_parse_term(a, names) for a in e[1:]]
    if head == "+":
        if not args:
            raise FormulaError("'+' needs arguments")
        out = args[0]
        for t in args[1:]:
            out = out.add(t)
        return out
    if head == "-":
        if not args:
            raise FormulaError("'-' needs arguments")
        if len(args) == 1:
            return args[0].scale(-1)
        out = args[0]
        for t in args[1:]:
            out = out.sub(t)
        return out
    if head == "*":
        if not args:
            raise FormulaError("'*' needs arguments")
        out = LinearTerm.constant(1)
        seen_var = False
        for t in args:
            if t.is_constant():
                out = out.scale(t.const) if seen_var else LinearTerm.constant(out.const * t.const)
            else:
                if seen_var:
                    raise FormulaError("nonlinear multiplication")
                seen_var = True
                out = t.scale(out.const)
        return out
    raise FormulaError(f"unknown term operator {head!r}")


# -- translation between unions and formulas ----------------------------------


def cube_union_to_formula(u: CubeUnion) -> Formula:
    """Disjunction of per-cube conjunctions of single-variable bounds.

    The empty union becomes an unsatisfiable atom; a cube with no finite
    bound contributes a tautological one.  Cubes are emitted in sorted
    order so the output is deterministic.
    """
    disjuncts: list[Formula] = []
    for c in u.sorted_cubes():
        conj: list[Formula] = []
        for k in range(u.dim):
            if is_finite(c.lo[k]):
                conj.append(
                    Atom(LinearTerm.variable(k), ">=", LinearTerm.constant(c.lo[k]))
                )
            if is_finite(c.hi[k]):
                conj.append(
                    Atom(LinearTerm.variable(k), "<=", LinearTerm.constant(c.hi[k]))
                )
        if not conj:
            disjuncts.append(true_atom())
        elif len(conj) == 1:
            disjuncts.append(conj[0])
        else:
            disjuncts.append(And(tuple(conj)))
    if not disjuncts:
        return false_atom()
    if len(disjuncts) == 1:
        return disjuncts[0]
    return Or(tuple(disjuncts))


def cube_to_formula(c: Cube) -> Formula:
    return cube_union_to_formula(c.as_union())


# -- SMT-LIB2 emission ---------------------------------------------------------


def _var_name(i: int) -> str:
    return f"x{i + 1}"


def _int_to_smt(n: int) -> str:
    return str(n) if n >= 0 else f"(- {-n})"


def term_to_smt(t: LinearTerm) -> str:
    parts: list[str] = []
    if t.const != 0 or not t.coeffs:
        parts.append(_int_to_smt(t.const))
    for i, c in t.coeffs:
        if c == 1:
            parts.append(_var_name(i))
        else:
            parts.append(f"(* {_int_to_smt(c)} {_var_name(i)})")
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(parts) + ")"


def formula_to_smt(f: Formula) -> str:
    if isinstance(f, Atom):
        return f"({f.rel} {term_to_smt(f.lhs)} {term_to_smt(f.rhs)})"
    if isinstance(f, And):
        return "(and " + " ".join(formula_to_smt(c) for c in f.children) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(formula_to_smt(c) for c in f.children) + ")"
    if isinstance(f, Not):
        return f"(not {formula_to_smt(f.child)})"
    if isinstance(f, Implies):
        return f"(=> {formula_to_smt(f.left)} {formula_to_smt(f.right)})"
    raise TypeError(f"not a formula: {f!r}")


def to_script(f: Formula, dim: int, *, logic: str | None = "QF_LIA") -> str:
    """A loadable script: declarations plus one assert (no check-sat)."""
    lines = []
    if logic:
        lines.append(f"(set-logic {logic})")
    for i in range(dim):
        lines.append(f"(declare-const {_var_name(i)} Int)")
    lines.append(f"(assert {formula_to_smt(f)})")
    return "\n".join(lines) + "\n"
