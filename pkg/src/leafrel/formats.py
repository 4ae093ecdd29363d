"""Line-oriented text formats for triples, quartets, instances and maps."""

from __future__ import annotations


def _lines(text):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _split_bar(line, left, right, n):
    if line.count("|") != 1:
        raise ValueError(f"line {n}: expected exactly one '|'")
    lhs, rhs = (part.split() for part in line.split("|"))
    if len(lhs) != left or len(rhs) != right:
        raise ValueError(f"line {n}: expected {left} labels, '|', {right} labels")
    return lhs, rhs


def parse_triples(text):
    """``a b | c`` lines -> list of ``(a, b, c)`` meaning ``ab|c``."""
    out = []
    for n, line in _lines(text):
        (a, b), (c,) = _split_bar(line, 2, 1, n)
        out.append((a, b, c))
    return out


def parse_quartets(text):
    """``a b | c d`` lines -> list of ``((a, b), (c, d))``."""
    out = []
    for n, line in _lines(text):
        (a, b), (c, d) = _split_bar(line, 2, 2, n)
        out.append(((a, b), (c, d)))
    return out


def format_triples(triples):
    return "".join(f"{a} {b} | {c}\n" for a, b, c in triples)


def format_quartets(quartets):
    return "".join(f"{a} {b} | {c} {d}\n" for (a, b), (c, d) in quartets)


KINDS = {"triples": "triples", "quartets": "quartets", "forbidden": "forbidden_triples",
         "forbidden_triples": "forbidden_triples"}


def parse_instance(text):
    """Header ``kind: ...``, optional ``labels: ...`` line, then constraints.

    Returns ``(kind, labels or None, constraints)``.
    """
    rows = list(_lines(text))
    if not rows or not rows[0][1].lower().startswith("kind:"):
        raise ValueError("instance must start with a 'kind:' header")
    name = rows[0][1].split(":", 1)[1].strip()
    if name not in KINDS:
        raise ValueError(f"unknown instance kind {name!r}")
    kind = KINDS[name]
    labels = None
    body = rows[1:]
    if body and body[0][1].lower().startswith("labels:"):
        labels = body[0][1].split(":", 1)[1].split()
        body = body[1:]
    rest = "\n".join(line for _, line in body)
    constraints = parse_quartets(rest) if kind == "quartets" else parse_triples(rest)
    return kind, labels, constraints


def format_instance(kind, labels, constraints):
    header = "forbidden" if kind == "forbidden_triples" else kind
    out = f"kind: {header}\nlabels: {' '.join(labels)}\n"
    if kind == "quartets":
        return out + format_quartets(constraints)
    return out + format_triples(constraints)


def parse_map(text):
    """``src -> dst`` lines plus optional ``@const c1 c2 ...``.

    Returns ``(mapping, constants)``.
    """
    mapping, constants = {}, []
    for n, line in _lines(text):
        if line.startswith("@const"):
            constants.extend(line.split()[1:])
            continue
        parts = line.split("->")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ValueError(f"line {n}: expected 'src -> dst'")
        src, dst = parts[0].strip(), parts[1].strip()
        if src in mapping and mapping[src] != dst:
            raise ValueError(f"line {n}: {src!r} mapped twice")
        mapping[src] = dst
    return mapping, tuple(constants)


def format_map(mapping, constants=()):
    out = f"@const {' '.join(constants)}\n" if constants else ""
    return out + "".join(f"{k} -> {mapping[k]}\n" for k in sorted(mapping))
