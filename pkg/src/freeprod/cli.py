"""Command line interface and the sectioned problem-file format.

A problem file names the two finite factors and the subgroup generators:

    [factor1]
    type = cyclic 2
    generators = a

    [factor2]
    type = presentation
    generators = b
    relators = b^3

    [subgroup]
    generators = a b a^-1 b^-1, b a b a b a

Factor types: ``cyclic N``, ``table FILE`` (first line the order, then an
order x order table of element ids; generators given as ``name:id``) and
``presentation`` (bounded enumeration of the given relators).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .fingroup import (
    CapExceededError,
    DEFAULT_CAP,
    FactorPair,
    FiniteGroup,
    GroupValidationError,
    format_symbol_word,
    from_presentation,
    make_cyclic,
)
from .kurosh import decompose, presentation, verify
from .lgraph import components, to_dot
from .precover import contains, index_if_finite, subgroup_graph
from .words import Word, WordSyntaxError, normal_to_word, normalize, parse_word, render_word

EXIT_OK = 0
EXIT_NONMEMBER = 1
EXIT_INPUT = 2
EXIT_CAP = 3


class ProblemFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


@dataclass
class _Section:
    name: str
    line: int
    entries: dict[str, tuple[str, int, int]] = field(default_factory=dict)
    # key -> (value, line, column of value start)

    def get(self, key: str) -> tuple[str, int, int] | None:
        return self.entries.get(key)

    def require(self, key: str) -> tuple[str, int, int]:
        got = self.entries.get(key)
        if got is None:
            raise ProblemFileError(f"section [{self.name}] is missing {key!r}", self.line)
        return got


def _parse_sections(text: str) -> dict[str, _Section]:
    sections: dict[str, _Section] = {}
    current: _Section | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            name = stripped[1:-1].strip()
            if name in sections:
                raise ProblemFileError(f"duplicate section [{name}]", lineno)
            current = _Section(name, lineno)
            sections[name] = current
            continue
        if current is None:
            raise ProblemFileError("content before any [section] header", lineno)
        if "=" not in line:
            raise ProblemFileError("expected 'key = value'", lineno)
        key, _, value = line.partition("=")
        k = key.strip()
        if not k:
            raise ProblemFileError("empty key", lineno)
        if k in current.entries:
            raise ProblemFileError(f"duplicate key {k!r} in [{current.name}]", lineno)
        vcol = len(key) + 2  # 1-based column of the value text
        current.entries[k] = (value.strip(), lineno, vcol)
    return sections


def _split_list(value: str, line: int, col: int) -> list[tuple[str, int]]:
    """Comma-split a value, keeping each item's 1-based column."""
    items: list[tuple[str, int]] = []
    offset = 0
    for part in value.split(","):
        stripped = part.strip()
        if not stripped:
            raise ProblemFileError("empty item in list", line, col + offset)
        items.append((stripped, col + offset + (len(part) - len(part.lstrip()))))
        offset += len(part) + 1
    return items


def _read_table_file(path: Path, line: int) -> list[list[int]]:
    try:
        rows = path.read_text().split("\n")
    except OSError as exc:
        raise ProblemFileError(f"cannot read table file {path}: {exc}", line) from None
    toks = [r.split() for r in rows if r.strip()]
    if not toks:
        raise ProblemFileError(f"table file {path} is empty", line)
    try:
        order = int(toks[0][0])
        table = [[int(x) for x in row] for row in toks[1 : order + 1]]
    except ValueError:
        raise ProblemFileError(f"table file {path} has non-integer entries", line) from None
    if len(table) != order or any(len(r) != order for r in table):
        raise ProblemFileError(f"table file {path} is not {order}x{order}", line)
    return table


def _build_factor(sec: _Section, base: Path, cap: int) -> FiniteGroup:
    tvalue, tline, tcol = sec.require("type")
    parts = tvalue.split()
    kind = parts[0] if parts else ""
    gvalue, gline, gcol = sec.require("generators")
    gen_items = _split_list(gvalue, gline, gcol)

    if kind == "cyclic":
        if len(parts) != 2 or not parts[1].isdigit():
            raise ProblemFileError("expected 'cyclic N'", tline, tcol)
        if len(gen_items) != 1:
            raise ProblemFileError("a cyclic factor takes exactly one generator", gline, gcol)
        return make_cyclic(int(parts[1]), gen_items[0][0])

    if kind == "table":
        if len(parts) != 2:
            raise ProblemFileError("expected 'table FILE'", tline, tcol)
        table = _read_table_file(base / parts[1], tline)
        gens = []
        for item, col in gen_items:
            name, sep, idx = item.partition(":")
            if not sep or not idx.strip().isdigit():
                raise ProblemFileError(
                    f"table generators need the form name:id, got {item!r}", gline, col
                )
            gens.append((name.strip(), int(idx)))
        relators = None
        rel = sec.get("relators")
        if rel is not None:
            from .fingroup import parse_group_word

            labels = tuple(n for n, _ in gens)
            relators = tuple(
                parse_group_word(item, labels) for item, _ in _split_list(*rel)
            )
        return FiniteGroup(table, gens, relators=relators, cap=cap)

    if kind == "presentation":
        labels = [item for item, _ in gen_items]
        rel = sec.get("relators")
        rel_words = [item for item, _ in _split_list(*rel)] if rel is not None else []
        own_cap = sec.get("cap")
        use_cap = cap
        if own_cap is not None:
            if not own_cap[0].isdigit():
                raise ProblemFileError("cap must be a positive integer", own_cap[1])
            use_cap = int(own_cap[0])
        return from_presentation(labels, rel_words, cap=use_cap)

    raise ProblemFileError(
        f"unknown factor type {kind!r} (expected cyclic, table or presentation)", tline, tcol
    )


@dataclass
class Problem:
    pair: FactorPair
    generators: tuple[Word, ...]
    generator_texts: tuple[str, ...]


def load_problem(path: str | Path, cap: int | None = None) -> Problem:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from None
    sections = _parse_sections(text)
    for required in ("factor1", "factor2"):
        if required not in sections:
            raise ProblemFileError(f"missing [{required}] section")
    extra = set(sections) - {"factor1", "factor2", "subgroup", "options"}
    if extra:
        sec = sections[sorted(extra)[0]]
        raise ProblemFileError(f"unknown section [{sec.name}]", sec.line)

    use_cap = cap
    if use_cap is None:
        opt = sections.get("options")
        if opt is not None and opt.get("cap") is not None:
            value, line, col = opt.get("cap")
            if not value.isdigit() or int(value) < 1:
                raise ProblemFileError("cap must be a positive integer", line, col)
            use_cap = int(value)
    if use_cap is None:
        use_cap = DEFAULT_CAP

    g1 = _build_factor(sections["factor1"], path.parent, use_cap)
    g2 = _build_factor(sections["factor2"], path.parent, use_cap)
    pair = FactorPair(g1, g2)

    words: list[Word] = []
    texts: list[str] = []
    sub = sections.get("subgroup")
    if sub is not None:
        got = sub.get("generators")
        if got is not None:
            value, line, col = got
            if value:
                for item, icol in _split_list(value, line, col):
                    try:
                        words.append(parse_word(item, pair))
                    except WordSyntaxError as exc:
                        column = icol + (exc.column - 1 if exc.column else 0)
                        raise ProblemFileError(str(exc), line, column) from None
                    texts.append(item)
    return Problem(pair=pair, generators=tuple(words), generator_texts=tuple(texts))


def _display(w: Word, pair: FactorPair) -> str:
    return render_word(w, pair) or "1"


def _emit(lines: list[str], out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    problem = load_problem(args.file, args.cap)
    sg = subgroup_graph(problem.generators, problem.pair)
    idx = index_if_finite(sg)
    lines = [
        f"vertices: {sg.vertex_count}",
        f"edges: {sg.edge_count}",
        f"components: {len(components(sg.graph))}",
        f"reduced: {'true' if sg.reduced_ok else 'false'}",
        f"index: {idx if idx is not None else 'infinite'}",
    ]
    if args.dot:
        Path(args.dot).write_text(to_dot(sg.graph, problem.pair))
    _emit(lines, args.out)
    return EXIT_OK


def cmd_member(args) -> int:
    problem = load_problem(args.file, args.cap)
    if args.word is None:
        raise ProblemFileError("member needs --word")
    try:
        w = parse_word(args.word, problem.pair)
    except WordSyntaxError as exc:
        raise ProblemFileError(f"in --word: {exc}") from None
    sg = subgroup_graph(problem.generators, problem.pair)
    nf = normalize(w, problem.pair)
    member = contains(sg, w)
    lines = [
        f"word: {args.word.strip() or '1'}",
        f"normal_form: {_display(normal_to_word(nf, problem.pair), problem.pair)}",
        f"member: {'true' if member else 'false'}",
    ]
    _emit(lines, args.out)
    return EXIT_OK if member else EXIT_NONMEMBER


def cmd_kurosh(args) -> int:
    problem = load_problem(args.file, args.cap)
    sg = subgroup_graph(problem.generators, problem.pair)
    d = decompose(sg)
    check = verify(d, sg)
    lines = [f"factors: {len(d.factors)}"]
    for k, f in enumerate(d.factors, start=1):
        nf_word = normal_to_word(f.conjugator_nf, problem.pair)
        lines.append(f"factor_{k}_index: {f.factor}")
        lines.append(f"factor_{k}_order: {f.order}")
        lines.append(f"factor_{k}_conjugator: {_display(nf_word, problem.pair)}")
    lines.append(f"free_rank: {d.free_rank}")
    for k, w in enumerate(d.free_basis, start=1):
        lines.append(f"basis_{k}: {_display(w, problem.pair)}")
    lines.append(f"verified: {'true' if check.ok else 'false'}")
    _emit(lines, args.out)
    if not check.ok:
        print(f"verification failed: {check.reason}", file=sys.stderr)
        return EXIT_NONMEMBER
    return EXIT_OK


def cmd_present(args) -> int:
    problem = load_problem(args.file, args.cap)
    sg = subgroup_graph(problem.generators, problem.pair)
    d = decompose(sg)
    pres = presentation(d, problem.pair)
    lines = [f"generators: {len(pres.generators)}"]
    for s in pres.generators:
        lines.append(f"generator {s}: {_display(pres.aliases[s], problem.pair)}")
    lines.append(f"relators: {len(pres.relators)}")
    for k, rel in enumerate(pres.relators, start=1):
        lines.append(f"relator_{k}: {format_symbol_word(rel)}")
    lines.append(f"fallback: {'true' if pres.fallback else 'false'}")
    _emit(lines, args.out)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freeprod",
        description="Subgroup graphs, membership and Kurosh decompositions "
        "for free products of finite groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="problem file")
        p.add_argument("--out", help="write the record to this path instead of stdout")
        p.add_argument("--cap", type=int, help="element cap for factor construction")

    p_build = sub.add_parser("build", help="construct the subgroup graph")
    common(p_build)
    p_build.add_argument("--dot", help="write a DOT rendering to this path")
    p_build.set_defaults(func=cmd_build)

    p_member = sub.add_parser("member", help="decide membership of a word")
    common(p_member)
    p_member.add_argument("--word", required=True, help="word to test")
    p_member.set_defaults(func=cmd_member)

    p_kurosh = sub.add_parser("kurosh", help="compute a Kurosh decomposition")
    common(p_kurosh)
    p_kurosh.set_defaults(func=cmd_kurosh)

    p_present = sub.add_parser("present", help="compute a group presentation")
    common(p_present)
    p_present.set_defaults(func=cmd_present)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ProblemFileError, WordSyntaxError, GroupValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
