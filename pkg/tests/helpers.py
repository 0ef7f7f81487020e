"""Shared builders for the test suite: small parsers and random generators."""

from fractions import Fraction
from itertools import combinations, permutations

from slin import Polynomial, VariableSpace, Wdg, parse_polynomial, parse_system

TWO_STATE = """\
vars: x y
x' = -x + y^2
y' = -y
"""

FIVE_STATE = """\
vars: x1 x2 x3 x4 x5
x1' = x2
x2' = -x1
x3' = x2^2
x4' = x3 + x1*x2^2
x5' = -x5 + x3^2 + x1^2*x2
"""

OSCILLATOR = """\
vars: x1 x2
x1' = x2
x2' = -x1
"""

BLOWUP = """\
vars: x
x' = x^2
"""


def space(names: str) -> VariableSpace:
    return VariableSpace(tuple(names.split()))


def P(text: str, sp) -> Polynomial:
    if isinstance(sp, str):
        sp = space(sp)
    return parse_polynomial(text, sp)


def two_state():
    return parse_system(TWO_STATE)


def five_state():
    return parse_system(FIVE_STATE)


def random_wdg(rng) -> Wdg:
    """Random small digraph with a mix of constant and nonconstant weights."""
    n = rng.randint(1, 6)
    sp = VariableSpace(tuple(f"x{i + 1}" for i in range(n)))
    weights = {}
    for i in range(n):
        for j in range(n):
            r = rng.random()
            if r < 0.25:
                weights[(i, j)] = Polynomial.constant(sp, rng.choice([-2, -1, 1, 2, 3]))
            elif r < 0.40:
                mono = [0] * n
                mono[rng.randrange(n)] = rng.randint(1, 2)
                weights[(i, j)] = Polynomial(
                    sp, {tuple(mono): Fraction(rng.choice([-2, -1, 1, 2]))}
                )
    return Wdg(n, sp, weights)


def brute_force_simple_cycles(g: Wdg):
    """Independent cycle enumeration: try every subset and rotation-fixed order."""
    found = set()
    for k in range(1, g.n + 1):
        for subset in combinations(range(g.n), k):
            base, rest = subset[0], subset[1:]
            for perm in permutations(rest):
                cyc = (base,) + perm
                if all((cyc[t], cyc[(t + 1) % k]) in g.weights for t in range(k)):
                    found.add(cyc + (base,))
    return found


def random_layered_system(rng):
    """Random system that satisfies the lifting condition by construction.

    Variables are split into up to three layers; within a layer they form
    strongly connected groups joined by constant-coefficient cycles (plus
    optional constant chords and self-loops), and every variable of a deeper
    layer gets random polynomial forcing (degree <= 3) in strictly earlier
    layers' variables. No nonconstant weight can appear inside a strong
    component, so the condition check must accept.
    """
    n = rng.randint(1, 6)
    sp = VariableSpace(tuple(f"x{i + 1}" for i in range(n)))
    n_layers = rng.randint(1, min(3, n))
    order = list(range(n))
    rng.shuffle(order)
    layer_of = {}
    for l in range(n_layers):
        layer_of[order[l]] = l
    for v in order[n_layers:]:
        layer_of[v] = rng.randint(0, n_layers - 1)
    layers = [
        sorted(v for v in range(n) if layer_of[v] == l) for l in range(n_layers)
    ]

    terms = [dict() for _ in range(n)]

    def add(j, mono, coeff):
        mono = tuple(mono)
        terms[j][mono] = terms[j].get(mono, Fraction(0)) + Fraction(coeff)

    def const():
        c = 0
        while c == 0:
            c = rng.randint(-3, 3)
        if rng.random() < 0.25:
            return Fraction(c, rng.randint(2, 3))
        return Fraction(c)

    def x_mono(v, e=1):
        mono = [0] * n
        mono[v] = e
        return mono

    for layer in layers:
        group = list(layer)
        rng.shuffle(group)
        groups = []
        while group:
            size = rng.randint(1, len(group))
            groups.append(sorted(group[:size]))
            group = group[size:]
        for g in groups:
            if len(g) == 1:
                if rng.random() < 0.5:
                    add(g[0], x_mono(g[0]), const())
            else:
                for a, b in zip(g, g[1:] + g[:1]):
                    add(b, x_mono(a), const())  # cycle keeps g strongly connected
                if rng.random() < 0.3:
                    a, b = rng.choice(g), rng.choice(g)
                    add(b, x_mono(a), const())

    earlier = []
    for l, layer in enumerate(layers):
        for v in layer:
            if l > 0:
                for _ in range(rng.randint(1, 2)):
                    mono = [0] * n
                    for _ in range(rng.randint(0, 3)):
                        mono[rng.choice(earlier)] += 1
                    add(v, mono, const())
            elif rng.random() < 0.3:
                add(v, [0] * n, const())  # constant drive on a source variable
        earlier = earlier + layer

    rhs = tuple(Polynomial(sp, t) for t in terms)
    from slin import PolySystem

    return PolySystem(sp, rhs)
