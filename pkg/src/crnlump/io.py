"""Text formats: native reaction lists, BioNetGen ``.net`` import,
partition files, and initial-condition files.

Native format, one reaction per line::

    # comment
    species: A B C D E          (optional; otherwise first-appearance order)
    A + B -> C , 2
    C + D -> 2C + D , 5
    E -> 0 , 1                  (0 denotes the empty side)
    init: A = 1/2               (optional initial concentrations)

Rates and initial values are parsed exactly: integers, fractions
(``3/7``), decimals (``0.1`` becomes 1/10) and scientific notation are
all turned into rationals, never floats.  Species names may contain
parentheses with nested commas (as BioNetGen complex patterns do);
separators are only recognized at bracket depth zero.

The ``.net`` importer understands the fully enumerated
parameters/species/reactions blocks written by BioNetGen 2.2.x and
rejects anything fancier (rate expressions other than products of
numbers and parameter names, non-sequential indices) with an error
naming the line.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    CRN,
    Multiset,
    ParseError,
    Partition,
    PartitionError,
    Reaction,
    Species,
)
from .reduce import ReducedCRN
from .sim import InitialCondition

__all__ = [
    "parse_crn",
    "serialize_crn",
    "import_bngl_net",
    "parse_partition",
    "parse_initial_conditions",
    "partition_from_initial_conditions",
    "parse_rational",
    "format_rational",
]

_OPEN = "([{"
_CLOSE = ")]}"
_COEFF_RE = re.compile(r"^(\d+)\s*(\S.*)$")


def parse_rational(text: str, line: int | None = None) -> Fraction:
    """Exact rational from an integer, fraction, decimal, or scientific literal."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text.strip()!r}", line) from None


def format_rational(value: Fraction) -> str:
    """Canonical text for an exact rational (``6`` or ``1/10``)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _split_top(text: str, sep: str) -> list[str]:
    """Split on a single-character separator at bracket depth zero."""
    parts: list[str] = []
    depth = 0
    current: list[str] = []
    for ch in text:
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def _find_arrow(text: str) -> int:
    depth = 0
    for i, ch in enumerate(text):
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
        elif ch == "-" and depth == 0 and text[i : i + 2] == "->":
            return i
    return -1


def _parse_side(text: str, line: int) -> list[tuple[str, int]]:
    """A reaction side as (name, multiplicity) pairs; '0' is the empty side."""
    text = text.strip()
    if text == "0":
        return []
    if not text:
        raise ParseError("empty reaction side", line)
    pairs = []
    for raw in _split_top(text, "+"):
        term = raw.strip()
        if not term:
            raise ParseError("empty term in reaction side", line)
        match = _COEFF_RE.match(term)
        if match and not match.group(2)[0].isdigit():
            mult, name = int(match.group(1)), match.group(2).strip()
        else:
            mult, name = 1, term
        if any(ch.isspace() for ch in name):
            raise ParseError(f"species name contains whitespace: {name!r}", line)
        if name[0].isdigit():
            raise ParseError(f"species name may not start with a digit: {name!r}", line)
        pairs.append((name, mult))
    return pairs


def parse_crn(text: str) -> tuple[CRN, InitialCondition | None]:
    """Parse the native format; returns the network and its initial
    condition when ``init:`` lines are present.

    Raises :class:`ParseError` with a line number on syntax errors and on
    semantic ones (rate not positive, more than two reactant molecules,
    species missing from an explicit ``species:`` header).
    """
    header: list[str] | None = None
    reaction_rows: list[tuple[int, list, list, Fraction]] = []
    init_rows: list[tuple[int, str, Fraction]] = []
    order: list[str] = []
    seen: set[str] = set()

    def note(name: str) -> None:
        if name not in seen:
            seen.add(name)
            order.append(name)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("species:"):
            if header is not None:
                raise ParseError("duplicate species: header", lineno)
            header = line[len("species:"):].split()
            if len(set(header)) != len(header):
                raise ParseError("duplicate name in species: header", lineno)
            continue
        if line.startswith("init:"):
            body = line[len("init:"):]
            if "=" not in body:
                raise ParseError("expected 'init: NAME = VALUE'", lineno)
            name, _, value_text = body.partition("=")
            name = name.strip()
            if not name:
                raise ParseError("missing species name in init line", lineno)
            value = parse_rational(value_text, lineno)
            if value < 0:
                raise ParseError("initial concentration must be nonnegative", lineno)
            init_rows.append((lineno, name, value))
            note(name)
            continue
        arrow = _find_arrow(line)
        if arrow < 0:
            raise ParseError(f"expected a reaction line, got {line!r}", lineno)
        lhs = _parse_side(line[:arrow], lineno)
        rhs_text = line[arrow + 2 :]
        rhs_parts = _split_top(rhs_text, ",")
        if len(rhs_parts) < 2:
            raise ParseError("missing rate (expected 'products , rate')", lineno)
        rate = parse_rational(rhs_parts[-1], lineno)
        rhs = _parse_side(",".join(rhs_parts[:-1]), lineno)
        if rate <= 0:
            raise ParseError("rate must be positive", lineno)
        total = sum(m for _, m in lhs)
        if total == 0:
            raise ParseError("reactants must contain at least one species", lineno)
        if total > 2:
            raise ParseError("reactants exceed multiplicity 2", lineno)
        for name, _ in lhs + rhs:
            note(name)
        reaction_rows.append((lineno, lhs, rhs, rate))

    names = header if header is not None else order
    if header is not None:
        declared = set(header)
        for lineno, lhs, rhs, _ in reaction_rows:
            for name, _ in lhs + rhs:
                if name not in declared:
                    raise ParseError(f"undeclared species {name}", lineno)
        for lineno, name, _ in init_rows:
            if name not in declared:
                raise ParseError(f"undeclared species {name}", lineno)

    species = tuple(Species(i, name) for i, name in enumerate(names))
    by_name = {sp.name: sp for sp in species}
    reactions = [
        Reaction(
            Multiset((by_name[n], m) for n, m in lhs),
            rate,
            Multiset((by_name[n], m) for n, m in rhs),
        )
        for _, lhs, rhs, rate in reaction_rows
    ]
    crn = CRN(species, reactions)
    inits = None
    if init_rows:
        inits = InitialCondition.from_map(
            crn, {name: value for _, name, value in init_rows}
        )
    return crn, inits


def _format_side(pairs: Iterable[tuple[str, int]]) -> str:
    ordered = sorted(pairs)
    if not ordered:
        return "0"
    return " + ".join(f"{m}{name}" if m > 1 else name for name, m in ordered)


def _reaction_line(rxn: Reaction) -> str:
    lhs = _format_side((sp.name, m) for sp, m in rxn.reactants)
    rhs = _format_side((sp.name, m) for sp, m in rxn.products)
    return f"{lhs} -> {rhs} , {format_rational(rxn.rate)}"


def serialize_crn(
    crn: CRN,
    inits: InitialCondition | None = None,
    reduced: ReducedCRN | None = None,
) -> str:
    """Canonical text for a network: species header, reaction lines in
    sorted order, then init lines.  Deterministic; reparses to an equal
    network (reaction order modulo the sort)."""
    lines = []
    if reduced is not None:
        lines.append(f"# {reduced.mode} reduction, {reduced.partition.n_blocks} blocks")
        for block in reduced.partition.blocks:
            members = " ".join(sp.name for sp in block)
            lines.append(f"# block {block[0].name}: {members}")
    lines.append(("species: " + " ".join(sp.name for sp in crn.species)).rstrip())
    body = sorted(
        (rxn.reactants.name_key(), rxn.products.name_key(), _reaction_line(rxn))
        for rxn in crn.reactions
    )
    lines.extend(text for _, _, text in body)
    if inits is not None:
        for sp in crn.species:
            value = inits.get(sp)
            if value:
                lines.append(f"init: {sp.name} = {format_rational(value)}")
    return "\n".join(lines) + "\n"


def _net_blocks(text: str) -> dict[str, list[tuple[int, str]]]:
    blocks: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("begin "):
            current = line[len("begin "):].strip()
            blocks.setdefault(current, [])
            continue
        if line.startswith("end "):
            current = None
            continue
        if current is not None:
            blocks[current].append((lineno, line))
    return blocks


def _net_rate(expr: str, params: dict[str, Fraction], lineno: int) -> Fraction:
    value = Fraction(1)
    for token in expr.split("*"):
        token = token.strip()
        if not token:
            raise ParseError("empty factor in rate expression", lineno)
        if token in params:
            value *= params[token]
            continue
        try:
            value *= Fraction(token)
        except (ValueError, ZeroDivisionError):
            raise ParseError(
                f"unsupported rate expression token {token!r}", lineno
            ) from None
    return value


def _net_indices(field: str, n_species: int, lineno: int) -> list[int]:
    if field.strip() == "0":
        return []
    indices = []
    for token in field.split(","):
        try:
            idx = int(token)
        except ValueError:
            raise ParseError(f"bad species index {token!r}", lineno) from None
        if not 1 <= idx <= n_species:
            raise ParseError(f"dangling species index {idx}", lineno)
        indices.append(idx - 1)
    return indices


def import_bngl_net(text: str) -> tuple[CRN, InitialCondition]:
    """Import a fully enumerated BioNetGen ``.net`` file.

    Species are named by their pattern strings verbatim and initial
    concentrations come from the species block.  Rate expressions may be
    numeric literals, parameter names, or products of those.
    """
    blocks = _net_blocks(text)
    if "species" not in blocks or "reactions" not in blocks:
        raise ParseError("missing 'begin species' or 'begin reactions' block")

    params: dict[str, Fraction] = {}
    for lineno, line in blocks.get("parameters", []):
        tokens = line.split()
        if len(tokens) == 3 and tokens[0].isdigit():
            tokens = tokens[1:]
        if len(tokens) != 2:
            raise ParseError(f"bad parameter line {line!r}", lineno)
        name, value_text = tokens
        params[name] = parse_rational(value_text, lineno)

    names: list[str] = []
    concentrations: list[Fraction] = []
    for position, (lineno, line) in enumerate(blocks["species"]):
        tokens = line.split()
        if len(tokens) != 3:
            raise ParseError(f"bad species line {line!r}", lineno)
        idx_text, pattern, value_text = tokens
        try:
            idx = int(idx_text)
        except ValueError:
            raise ParseError(f"bad species index {idx_text!r}", lineno) from None
        if idx != position + 1:
            raise ParseError(f"non-sequential species index {idx}", lineno)
        if value_text in params:
            value = params[value_text]
        else:
            value = parse_rational(value_text, lineno)
        names.append(pattern)
        concentrations.append(value)

    species = tuple(Species(i, name) for i, name in enumerate(names))
    reactions = []
    for lineno, line in blocks["reactions"]:
        tokens = line.split()
        if len(tokens) < 4:
            raise ParseError(f"bad reaction line {line!r}", lineno)
        _, reactants_field, products_field, rate_expr = tokens[:4]
        rate = _net_rate(rate_expr, params, lineno)
        if rate <= 0:
            raise ParseError("rate must be positive", lineno)
        reactant_ids = _net_indices(reactants_field, len(species), lineno)
        product_ids = _net_indices(products_field, len(species), lineno)
        reactions.append(
            Reaction(
                Multiset.of(*(species[i] for i in reactant_ids)),
                rate,
                Multiset.of(*(species[i] for i in product_ids)),
            )
        )
    crn = CRN(species, reactions)
    inits = InitialCondition.from_map(
        crn, {species[i]: concentrations[i] for i in range(len(species))}
    )
    return crn, inits


def parse_partition(text: str, crn: CRN) -> Partition:
    """One comma-separated block per line; unmentioned species form one
    implicit final block.  An empty file is the one-block partition."""
    blocks: list[list[Species]] = []
    mentioned: set[Species] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        members = []
        for token in _split_top(line, ","):
            name = token.strip()
            if not name:
                raise ParseError("empty species name in partition block", lineno)
            try:
                sp = crn.by_name(name)
            except KeyError:
                raise PartitionError(f"unknown species {name}") from None
            if sp in mentioned:
                raise PartitionError(f"species {name} occurs in two blocks")
            mentioned.add(sp)
            members.append(sp)
        blocks.append(members)
    rest = [sp for sp in crn.species if sp not in mentioned]
    if rest:
        blocks.append(rest)
    return Partition(crn.species, blocks)


def parse_initial_conditions(text: str, crn: CRN) -> InitialCondition:
    """Lines of ``NAME = VALUE`` (an ``init:`` prefix is allowed);
    unmentioned species start at zero."""
    values: dict[str, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("init:"):
            line = line[len("init:"):].strip()
        if "=" not in line:
            raise ParseError("expected 'NAME = VALUE'", lineno)
        name, _, value_text = line.partition("=")
        name = name.strip()
        value = parse_rational(value_text, lineno)
        if value < 0:
            raise ParseError("initial concentration must be nonnegative", lineno)
        if name not in {sp.name for sp in crn.species}:
            raise ParseError(f"unknown species {name}", lineno)
        values[name] = value
    return InitialCondition.from_map(crn, values)


def partition_from_initial_conditions(v0: InitialCondition) -> Partition:
    """Blocks are the preimages of equal initial values (exact equality)."""
    groups: dict[Fraction, list[Species]] = {}
    for sp in v0.species:
        groups.setdefault(v0.get(sp), []).append(sp)
    return Partition(v0.species, groups.values())
