"""Wire formats for tables and certificates: JSON, text tables, parsing.

The JSON schema is the external contract::

    {"k": ..., "engine": {...}, "pI": {"num", "exp"},
     "pIII": {"num", "exp"}, "pS": [[{"num", "exp"}, ...], ...]}

The text table prints the gap matrix twice: once as exact reduced dyadics
and once as integer numerators over one shared power-of-two denominator per
column (lower triangle only; the matrix is symmetric).  The numerator block
plus the header lines carry the full exact content, so parsing the text form
reproduces the identical table value.
"""

from __future__ import annotations

from fractions import Fraction

from .dyadic import Dyadic
from .engine import Certificate, EngineParams, ProbTables


def format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------


def engine_to_json(engine: EngineParams) -> dict:
    return {
        "kappa": engine.kappa,
        "n": engine.n,
        "p": [format_fraction(x) for x in engine.recolor_dist],
    }


def engine_from_json(obj: dict) -> EngineParams:
    return EngineParams(
        kappa=int(obj["kappa"]),
        n=int(obj["n"]),
        recolor_dist=tuple(Fraction(x) for x in obj["p"]),
    )


def tables_to_json(tables: ProbTables) -> dict:
    return {
        "k": tables.k,
        "engine": engine_to_json(tables.engine),
        "pI": tables.p_unstable.as_json(),
        "pIII": tables.p_triple.as_json(),
        "pS": [[entry.as_json() for entry in row] for row in tables.p_gap],
    }


def tables_from_json(obj: dict) -> ProbTables:
    return ProbTables(
        k=int(obj["k"]),
        engine=engine_from_json(obj["engine"]),
        p_unstable=Dyadic.from_json(obj["pI"]),
        p_triple=Dyadic.from_json(obj["pIII"]),
        p_gap=tuple(tuple(Dyadic.from_json(e) for e in row) for row in obj["pS"]),
    )


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "k": cert.k,
        "pI": cert.p_unstable.as_json(),
        "pIII": cert.p_triple.as_json(),
        "gap_max": cert.gap_max.as_json(),
        "gap_argmax": cert.gap_argmax,
        "term_III": format_fraction(cert.term_triple),
        "term_I": format_fraction(cert.term_unstable),
        "term_gap": format_fraction(cert.term_gap),
        "c": format_fraction(cert.c),
        "contraction": cert.contraction,
    }


# --------------------------------------------------------------------------
# text table (layout: one power-of-two denominator per column)
# --------------------------------------------------------------------------


def _grid(rows: list[list[str]]) -> list[str]:
    widths = {}
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths.get(i, 0), len(cell))
    return ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
            for row in rows]


def tables_to_text(tables: ProbTables) -> str:
    sat = tables.sat
    lines = [
        f"k = {tables.k}",
        f"engine = {tables.engine.tag}",
        f"p_unstable = {tables.p_unstable} = {tables.p_unstable.ratio_str()}",
        f"p_triple = {tables.p_triple} = {tables.p_triple.ratio_str()}",
        "",
        f"worst-case gap probabilities; side index {sat} stands for any count >= {sat}",
        "",
        "exact values:",
    ]
    header = [""] + [f"n={n}" for n in range(sat + 1)]
    grid = [header]
    for m in range(sat + 1):
        grid.append(
            [f"m={m}"] + [tables.p_gap[n][m].ratio_str() for n in range(sat + 1)])
    lines.extend(_grid(grid))

    # lower triangle as integers over one denominator per column
    col_exp = [
        max(tables.p_gap[n][m].exp for m in range(n, sat + 1)) for n in range(sat + 1)
    ]
    lines += ["", "numerators (column denominator in the second header line):"]
    grid = [header, ["denom"] + [f"2^{e}" for e in col_exp]]
    for m in range(sat + 1):
        row = [f"m={m}"]
        for n in range(m + 1):
            entry = tables.p_gap[n][m]
            row.append(str(entry.num << (col_exp[n] - entry.exp)))
        grid.append(row)
    lines.extend(_grid(grid))
    lines.append("")
    return "\n".join(lines)


def tables_from_text(text: str) -> ProbTables:
    """Parse the text rendering back into the identical table value."""
    lines = [ln.strip() for ln in text.splitlines()]
    fields = {}
    for ln in lines:
        if "=" in ln and not ln.startswith(("n=", "m=", "denom")):
            key, _, val = ln.partition("=")
            fields[key.strip()] = val.strip()
    k = int(fields["k"])
    kappa, n_colors, dist = None, None, None
    for part in fields["engine"].split(","):
        key, _, val = part.partition("=")
        if key == "kappa":
            kappa = int(val)
        elif key == "n":
            n_colors = int(val)
        elif key == "p":
            dist = [Fraction(val)]
        elif dist is not None:
            dist.append(Fraction(part))
    engine = EngineParams(kappa, n_colors, tuple(dist))
    sat = engine.saturation(k)

    start = lines.index("numerators (column denominator in the second header line):")
    denoms = lines[start + 2].split()
    col_exp = [int(tok[2:]) for tok in denoms[1:]]
    entries: dict[tuple[int, int], Dyadic] = {}
    for m, ln in enumerate(lines[start + 3: start + 3 + sat + 1]):
        toks = ln.split()
        assert toks[0] == f"m={m}"
        for n, tok in enumerate(toks[1:]):
            entries[(n, m)] = Dyadic(int(tok), col_exp[n])
    p_gap = tuple(
        tuple(entries[(min(n, m), max(n, m))] for m in range(sat + 1))
        for n in range(sat + 1)
    )
    return ProbTables(
        k=k,
        engine=engine,
        p_unstable=Dyadic.parse(fields["p_unstable"].partition("=")[0]),
        p_triple=Dyadic.parse(fields["p_triple"].partition("=")[0]),
        p_gap=p_gap,
    )


def certificate_to_text(cert: Certificate) -> str:
    lines = [
        f"k = {cert.k}",
        f"p_unstable = {cert.p_unstable}  (worst unstable-site recurrence)",
        f"p_triple = {cert.p_triple}  (worst run-interior recurrence)",
        f"gap_max = {cert.gap_max}  (worst bounded stable region, size {cert.gap_argmax})",
        f"term_triple = {format_fraction(cert.term_triple)}",
        f"term_unstable = {format_fraction(cert.term_unstable)}",
        f"term_gap = {format_fraction(cert.term_gap)}",
        f"c = {format_fraction(cert.c)}",
    ]
    if cert.contraction:
        lines.append("CONTRACTION")
    return "\n".join(lines)
