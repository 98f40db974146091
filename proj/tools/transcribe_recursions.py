#!/usr/bin/env python3
"""Convert a printed inhomogeneous recursion (TeX source) into the .rec format.

Usage: transcribe_recursions.py RELATION.tex INHOM.tex OUT.rec

The relation has the shape  b(q^n,q) <c0> f(n) <c1> f(1+n) ... = 0  and the
inhomogeneous file  b(q^n,q) = <expr>.  Powers q^{a+b n} become q^a u^b.
"""
import re
import sys

import sympy as sp
from sympy.parsing.sympy_parser import (implicit_multiplication_application, parse_expr,
                                        standard_transformations)

q, u = sp.symbols("q u")
TRANSFORMS = standard_transformations + (implicit_multiplication_application,)


def to_sympy(tex: str) -> sp.Expr:
    s = tex.replace("\\,", " ").strip()

    def power(m: re.Match) -> str:
        body = m.group(1) if m.group(1) is not None else m.group(2)
        body = body.replace(" ", "")
        const, coef = 0, 0
        for term in re.findall(r"[+-]?[^+-]+", body):
            if term.endswith("n"):
                c = term[:-1]
                coef += int(c + "1") if c in ("", "+", "-") else int(c)
            else:
                const += int(term)
        return f"(q**({const})*u**({coef}))"

    s = re.sub(r"q\^\{([^}]*)\}|q\^(n|\d+)", power, s)
    s = s.replace("^", "**")
    return sp.expand(parse_expr(s, local_dict={"q": q, "u": u}, transformations=TRANSFORMS))


def split_relation(tex: str):
    body = tex.strip()
    body = re.sub(r"=\s*0.*$", "", body)
    if not body.startswith("b(q^n,q)"):
        raise SystemExit("relation must start with b(q^n,q)")
    body = body[len("b(q^n,q)"):]
    pieces = re.split(r"f\((\d*)\+?n\)", body)
    coeffs = {}
    for i in range(0, len(pieces) - 1, 2):
        shift = int(pieces[i + 1]) if pieces[i + 1] else 0
        coeffs[shift] = to_sympy(pieces[i])
    if pieces[-1].strip():
        raise SystemExit(f"unparsed tail: {pieces[-1]!r}")
    return coeffs


def monomials(expr: sp.Expr):
    poly = sp.Poly(expr * q**4000 * u**4000, q, u)
    out = []
    for (eq, eu), c in sorted(poly.terms(), key=lambda t: (t[0][1], t[0][0])):
        out.append(f"{int(c)} u^{eu - 4000} q^{eq - 4000}")
    return "; ".join(out)


def main() -> None:
    if len(sys.argv) != 4:
        raise SystemExit(__doc__)
    relation = open(sys.argv[1]).read()
    inhom = open(sys.argv[2]).read()
    coeffs = split_relation(relation)
    b = to_sympy(inhom.split("=", 1)[1])
    order = max(coeffs)
    with open(sys.argv[3], "w") as out:
        out.write(f"order={order}\n")
        out.write(f"b: {monomials(b)}\n")
        for j in range(order + 1):
            out.write(f"a{j}: {monomials(coeffs.get(j, sp.Integer(0)))}\n")


if __name__ == "__main__":
    main()
