"""Seeded random strongly connected VASS for fuzzing."""
from __future__ import annotations

import random
from typing import List

from .model import Vass, format_vass, make_vass


def random_vass(dim: int, states: int, max_update: int, seed: int, extra: int = -1) -> Vass:
    """A Hamiltonian cycle over shuffled states plus ``extra`` random transitions.

    With ``extra < 0`` the number of extra transitions is drawn from ``0..2*states``.
    """
    if dim < 1 or states < 1 or max_update < 0:
        raise ValueError("dim and states must be >= 1, max_update >= 0")
    rng = random.Random(seed)
    names = [f"q{i}" for i in range(states)]
    order = names[:]
    rng.shuffle(order)

    def upd() -> List[int]:
        return [rng.randint(-max_update, max_update) for _ in range(dim)]

    trans = [(order[i], upd(), order[(i + 1) % states]) for i in range(states)]
    if extra < 0:
        extra = rng.randint(0, 2 * states)
    for _ in range(extra):
        trans.append((rng.choice(names), upd(), rng.choice(names)))
    return make_vass(dim, names, trans)


def random_vass_text(dim: int, states: int, max_update: int, seed: int) -> str:
    return format_vass(random_vass(dim, states, max_update, seed))


def corpus(size: int = 200, base_seed: int = 0) -> List[Vass]:
    """The fuzzing corpus: ``d <= 3``, ``|Q| <= 4``, updates in ``[-2, 2]``."""
    out = []
    for i in range(size):
        rng = random.Random(base_seed * 1_000_003 + i)
        out.append(random_vass(rng.randint(1, 3), rng.randint(1, 4), 2, base_seed * 1_000_003 + i))
    return out
