#!/usr/bin/env python3
"""Regenerates corpus/shipped.jsonl.

Expected derivative values are computed with sympy (exact differentiation,
40-digit evaluation at the binary64 value of x0), independently of the C++
code. Cases listed with expected=False are left for the symbolic oracle in
the checker.
"""
import json
import pathlib
import sys

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

CASES = [
    # expr, x0, order, with expected values
    ("sin(x)/cos(x)", 0.0, 5, True),
    ("sin(x)/cos(x)", 0.0, 12, True),
    ("1/(1-x)", 0.0, 4, True),
    ("1/(1-x)", 0.0, 12, True),
    ("x/sin(x)", 1.0, 12, True),
    ("(1+x^2)/(1-x)", 0.0, 12, True),
    ("exp(x)/(1+x)", 0.0, 12, True),
    ("(x/(1+x))/(2-x)", 0.0, 12, True),
    ("sin(x)/(1+cos(x))", 0.3, 12, True),
    ("1/(1+x^2)", 0.5, 12, True),
    ("ln(1+x)/x", 2.0, 12, True),
    ("sqrt(x)/(1+x)", 1.5, 12, True),
    ("exp(-x)/(2+sin(x))", 0.7, 12, True),
    ("(x^3-2*x)/(x^2+1)", -1.2, 12, True),
    ("cos(x)/(x^2+3)", 2.5, 12, True),
    ("1/x", 3.0, 12, True),
    ("x^-2", 1.3, 10, True),
    ("(1/(1+x))/(1/(2+x))", 0.4, 12, True),
    ("sin(x)/cos(x)", 0.5, 12, True),
    ("exp(x)/ln(2+x)", 0.1, 12, True),
    ("1/sqrt(1+x)", 0.2, 12, True),
    ("sin(x)/x", 3.0, 12, True),
    ("(2*x+1)/(x-3)", 1.0, 12, True),
    ("x/(x+exp(x))", 0.25, 8, False),
    ("(1-x)/(1+x)^3", -0.5, 12, False),
    ("cos(x)/(1+x/(2+x))", 1.1, 12, False),
]

x = sympy.Symbol("x")
LOCALS = {"x": x, "ln": sympy.log, "exp": sympy.exp, "sin": sympy.sin, "cos": sympy.cos, "sqrt": sympy.sqrt}


def derivative_values(text, x0, order):
    f = parse_expr(text, local_dict=LOCALS, transformations=standard_transformations + (convert_xor,))
    point = sympy.Rational(x0)  # exact binary64 value
    out = []
    for k in range(order + 1):
        value = sympy.diff(f, x, k).subs(x, point).evalf(40)
        out.append(float(value))
    return out


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    target = root / "corpus" / "shipped.jsonl"
    lines = []
    for text, x0, order, with_expected in CASES:
        case = {"expr": text, "x0": x0, "order": order}
        if with_expected:
            case["expected"] = derivative_values(text, x0, order)
        lines.append(json.dumps(case))
    target.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} cases to {target}", file=sys.stderr)


if __name__ == "__main__":
    main()
