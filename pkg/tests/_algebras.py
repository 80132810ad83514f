"""Presentation sources and helpers shared by the test modules."""

from gklab.presentation import parse_presentation, parse_poly
from gklab.zoo import builtin_zoo_dir

WEYL = "domain: Z\ngenerators: x y\nrule: y x -> x y + 1\nflags: pbw\n"
QPLANE = "domain: Z[q]\ngenerators: x y\nrule: y x -> q x y\nflags: pbw\n"
POLY1 = "domain: Z\ngenerators: x\n"
FREE2 = "domain: Z\ngenerators: x y\n"
COMM2 = "domain: Z\ngenerators: x y\nrule: y x -> x y\nflags: pbw commutative\n"
COMM3 = (
    "domain: Z\ngenerators: x y z\n"
    "rule: y x -> x y\nrule: z x -> x z\nrule: z y -> y z\nflags: pbw commutative\n"
)
NONCONFLUENT = "domain: Z\ngenerators: x y\nrule: x y -> x\nrule: y x -> y\n"


def comm(t: int) -> str:
    names = " ".join(f"x{i}" for i in range(1, t + 1))
    rules = "".join(
        f"rule: x{j} x{i} -> x{i} x{j}\n" for i in range(1, t + 1) for j in range(i + 1, t + 1)
    )
    return f"domain: Z\ngenerators: {names}\n{rules}"


def pres(src: str, name: str = ""):
    return parse_presentation(src, name)


def zoo_pres(name: str):
    return parse_presentation((builtin_zoo_dir() / f"{name}.alg").read_text(), name)


def P(text: str, p):
    return parse_poly(text, p)
