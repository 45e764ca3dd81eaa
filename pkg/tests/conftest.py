import random

from specdens.eqlogic import FALSE, TRUE, And, Eq, Not, Or


def random_formula(rng: random.Random, names, depth: int):
    """Random equality-logic formula over the given variable names."""
    if depth <= 0 or rng.random() < 0.35:
        roll = rng.random()
        if roll < 0.03:
            return TRUE if rng.random() < 0.5 else FALSE
        x, y = rng.choice(names), rng.choice(names)
        atom = Eq(x, y)
        return Not(atom) if rng.random() < 0.5 else atom
    kind = rng.choice(("and", "or", "not"))
    if kind == "not":
        return Not(random_formula(rng, names, depth - 1))
    items = tuple(
        random_formula(rng, names, depth - 1) for _ in range(rng.randint(2, 3))
    )
    return And(items) if kind == "and" else Or(items)


def formula_corpus(seed: int, count: int, max_vars: int = 6):
    """Deterministic corpus of random formulas with 2..max_vars variables."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, max_vars)
        names = [f"v{i}" for i in range(n)]
        out.append(random_formula(rng, names, rng.randint(1, 3)))
    return out
