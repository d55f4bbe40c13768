"""Map constructors shared by the test modules."""
import json
import random
from fractions import Fraction
from importlib import resources

from lorenz_lab.config import map_from_config
from lorenz_lab.errors import LorenzLabError
from lorenz_lab.lorenzmap import mod_one, two_slope
from lorenz_lab.numberfield import field_new

QQ = field_new([-1, 1], [0, 2])  # the rationals, as a degree-1 field

# Pisot units in (1, 2): minimal polynomial (low degree first) and an isolating interval
PISOT = {
    "golden": ([-1, -1, 1], ["3/2", "17/10"]),
    "plastic": ([-1, -1, 0, 1], ["13/10", "7/5"]),
    "tribonacci": ([-1, -1, -1, 1], ["9/5", "19/10"]),
    "x4-x3-1": ([-1, 0, 0, -1, 1], ["13/10", "7/5"]),
    "x4-x3-x2-x-1": ([-1, -1, -1, -1, 1], ["19/10", "2"]),
}
_PISOT_FIELDS = {}


def fixture_config(fid):
    text = resources.files("lorenz_lab").joinpath("fixtures").joinpath(f"{fid}.json").read_text()
    return json.loads(text)


def fixture_map(fid):
    return map_from_config(fixture_config(fid)["config"])


def pisot_field(name):
    if name not in _PISOT_FIELDS:
        poly, iso = PISOT[name]
        _PISOT_FIELDS[name] = field_new(poly, iso)
    return _PISOT_FIELDS[name]


def random_rational(rng, lo, hi, den=None):
    den = den or rng.randint(2, 40)
    a = int(lo * den) + 1
    b = int(hi * den) - 1
    if b < a:
        return None
    return Fraction(rng.randint(a, b), den)


def random_mod_one(rng):
    """ModOne map with rational beta in (1, 2) and rational alpha in [0, 2 - beta]."""
    while True:
        beta = random_rational(rng, Fraction(11, 10), Fraction(2))
        if beta is None:
            continue
        alpha = random_rational(rng, Fraction(0), 2 - beta)
        if alpha is None:
            continue
        try:
            return mod_one(QQ, QQ(beta), QQ(alpha))
        except LorenzLabError:
            continue


def random_two_slope(rng):
    """Two-slope map with rational a, b > 1 and c in (1/5, 4/5)."""
    while True:
        c = random_rational(rng, Fraction(1, 5), Fraction(4, 5), den=rng.randint(3, 20))
        if c is None:
            continue
        a = random_rational(rng, Fraction(21, 20), 1 / c)
        b = random_rational(rng, Fraction(21, 20), 1 / (1 - c))
        if a is None or b is None:
            continue
        try:
            return two_slope(QQ, QQ(a), QQ(b), QQ(c))
        except LorenzLabError:
            continue


def random_map(rng):
    return random_mod_one(rng) if rng.random() < 0.5 else random_two_slope(rng)


def random_pisot_mod_one(rng, den_max=6):
    """ModOne map with a Pisot unit slope and alpha in (1/D) Z[beta], 0 <= alpha <= 2 - beta."""
    name = rng.choice(sorted(PISOT))
    K = pisot_field(name)
    beta = K.gen
    room = 2 - float(beta)
    while True:
        den = rng.randint(1, den_max)
        coeffs = [Fraction(rng.randint(-3 * den, 3 * den), den) for _ in range(K.degree)]
        alpha = K.element(coeffs)
        a = float(alpha)
        if 0 <= a <= room and alpha.sign() >= 0 and (alpha - (2 - beta)).sign() <= 0:
            try:
                return mod_one(K, beta, alpha)
            except LorenzLabError:
                continue


def simulate_matching(f, eta_max):
    """Least eta with equal one-sided limit orbits at c, by direct iteration.

    Both branches are increasing, so a limit from the left stays a limit from
    the left along the orbit; at c it takes the value of the matching branch.
    """

    def step(x, side):
        if x == f.c:
            return f.ctx.one if side < 0 else f.ctx.zero
        return f.value(x)

    a, b = f.c, f.c
    for i in range(1, eta_max + 1):
        a, b = step(a, -1), step(b, 1)
        if a == b:
            return i
    return None
