#!/usr/bin/env python3
"""Write a printed q-series (TeX, "... + 13 q^{100} + O(q)^{101}") as a series file.

Usage: extract_golden.py SOURCE.md ANCHOR OUT.series

The text after the first occurrence of ANCHOR is parsed from the next '='
(or the anchor's own '=') up to the O(q) term, which fixes the truncation order.
"""
import re
import sys


def parse(expr: str):
    trunc = re.search(r"O\(q\)\^\{?(\d+)\}?", expr)
    if not trunc:
        raise SystemExit("no O(q)^k term")
    body = re.sub(r"\s+", "", expr[: trunc.start()])
    coeffs = {}
    for sign, num, var, exp in re.findall(r"([+-]?)(\d*)(q?)(?:\^\{?(\d+)\}?)?", body):
        if not num and not var:
            continue
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        e = (int(exp) if exp else 1) if var else 0
        coeffs[e] = coeffs.get(e, 0) + c
    return coeffs, int(trunc.group(1))


def main():
    src, anchor, out = sys.argv[1:4]
    text = open(src, encoding="utf-8").read()
    expr = text[text.index(anchor) + len(anchor):]
    if "=" in anchor:
        expr = anchor[anchor.rindex("=") + 1:] + expr
    else:
        expr = expr[expr.index("=") + 1:]
    expr = expr[: expr.index("O(q)") + 12]
    coeffs, trunc = parse(expr)
    nonzero = sorted(e for e, c in coeffs.items() if c)
    with open(out, "w", encoding="utf-8") as f:
        f.write(f"# transcribed from the printed series ({anchor.strip()})\n")
        f.write(f"mindeg={nonzero[0]} trunc={trunc}\n")
        for e in nonzero:
            f.write(f"{e} {coeffs[e]}\n")


if __name__ == "__main__":
    main()
