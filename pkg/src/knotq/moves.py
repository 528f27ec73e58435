"""Braid words under Markov moves and braid relations, and a seeded fuzzer.

Markov moves preserve the knot type of the closure, so the invariant must not
change along a random move sequence.  Each trial draws its sequence from its
own ``random.Random`` seeded by ``(seed, trial)`` and can be replayed exactly.
"""
import random
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .burau import burau_determinant
from .diagram import LAYOUTS, BraidWord

MAX_LETTERS = 60
MAX_STRANDS = 8


class MoveError(ValueError):
    pass


def mirror(b: BraidWord) -> BraidWord:
    return BraidWord(b.strands, [-x for x in b.letters])


def reverse(b: BraidWord) -> BraidWord:
    """Letters in reverse order (closure with the opposite orientation)."""
    return BraidWord(b.strands, b.letters[::-1])


def conjugate(b: BraidWord, i: int) -> BraidWord:
    """sigma_i * b * sigma_i^-1, with the sign of ``i`` choosing sigma_|i|^(+-1)."""
    if i == 0 or abs(i) > b.strands - 1:
        raise MoveError("cannot conjugate by %d on %d strands" % (i, b.strands))
    return BraidWord(b.strands, (i,) + b.letters + (-i,))


def stabilize(b: BraidWord, sign: int) -> BraidWord:
    if sign not in (1, -1):
        raise MoveError("stabilization sign must be +1 or -1")
    return BraidWord(b.strands + 1, b.letters + (sign * b.strands,))


def can_destabilize(b: BraidWord) -> bool:
    top = b.strands - 1
    return b.strands >= 2 and sum(1 for x in b.letters if abs(x) == top) == 1


def destabilize(b: BraidWord) -> BraidWord:
    """Remove the only occurrence of sigma_(n-1): A s B ~ B A s -> B A on n-1 strands."""
    if not can_destabilize(b):
        raise MoveError("%s cannot be destabilized" % (b,))
    top = b.strands - 1
    k = next(i for i, x in enumerate(b.letters) if abs(x) == top)
    return BraidWord(b.strands - 1, b.letters[k + 1:] + b.letters[:k])


def rewrite_sites(b: BraidWord) -> List[int]:
    """Positions where a braid relation applies (far commutation or same-sign braid relation)."""
    w, out = b.letters, []
    for p in range(len(w) - 1):
        if abs(abs(w[p]) - abs(w[p + 1])) >= 2:
            out.append(p)
        elif (p + 2 < len(w) and w[p] == w[p + 2] and abs(abs(w[p]) - abs(w[p + 1])) == 1
              and (w[p] > 0) == (w[p + 1] > 0)):
            out.append(p)
    return out


def relation_rewrite(b: BraidWord, p: int) -> BraidWord:
    w = list(b.letters)
    if p not in rewrite_sites(b):
        raise MoveError("no braid relation at position %d of %s" % (p, b))
    if abs(abs(w[p]) - abs(w[p + 1])) >= 2:
        w[p], w[p + 1] = w[p + 1], w[p]
    else:
        x, y = w[p], w[p + 1]
        w[p:p + 3] = [y, x, y]
    return BraidWord(b.strands, w)


def cancel_sites(b: BraidWord) -> List[int]:
    w = b.letters
    return [p for p in range(len(w) - 1) if w[p] == -w[p + 1]]


def free_cancel(b: BraidWord, p: int) -> BraidWord:
    if p not in cancel_sites(b):
        raise MoveError("letters at %d of %s do not cancel" % (p, b))
    return BraidWord(b.strands, b.letters[:p] + b.letters[p + 2:])


def free_reduce(b: BraidWord) -> BraidWord:
    out: List[int] = []
    for x in b.letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return BraidWord(b.strands, out)


Op = Tuple[str, int]


def apply_op(b: BraidWord, op: Op) -> BraidWord:
    name, arg = op
    if name == "conjugate":
        return conjugate(b, arg)
    if name == "stabilize":
        return stabilize(b, arg)
    if name == "destabilize":
        return destabilize(b)
    if name == "rewrite":
        return relation_rewrite(b, arg)
    if name == "cancel":
        return free_cancel(b, arg)
    raise MoveError("unknown move %r" % (name,))


@dataclass
class MoveSequence:
    seed: int
    ops: List[Op] = field(default_factory=list)

    def replay(self, b: BraidWord) -> BraidWord:
        for op in self.ops:
            b = apply_op(b, op)
        return b

    def to_json(self):
        return {"seed": self.seed, "ops": [[n, a] for n, a in self.ops]}


def random_moves(b: BraidWord, n_moves: int, rng: random.Random,
                 max_letters: int = MAX_LETTERS, max_strands: int = MAX_STRANDS) -> List[Op]:
    """A legal random move sequence, steering away from the size caps."""
    ops: List[Op] = []
    for _ in range(n_moves):
        choices: List[Tuple[Op, int]] = []
        n, size = b.strands, len(b.letters)
        if n >= 2 and size + 2 <= max_letters:
            i = rng.randint(1, n - 1) * rng.choice((1, -1))
            choices.append((("conjugate", i), 2))
        if n < max_strands and size + 1 <= max_letters:
            choices.append((("stabilize", rng.choice((1, -1))), 1))
        if can_destabilize(b):
            choices.append((("destabilize", 0), 2))
        sites = rewrite_sites(b)
        if sites:
            choices.append((("rewrite", rng.choice(sites)), 3))
        sites = cancel_sites(b)
        if sites:
            choices.append((("cancel", rng.choice(sites)), 3))
        if not choices:
            break
        op = rng.choices([c for c, _ in choices], weights=[w for _, w in choices])[0]
        b = apply_op(b, op)
        ops.append(op)
    return ops


def trial_seed(seed: int, trial: int) -> int:
    return (seed * 0x9E3779B97F4A7C15 + trial) % (1 << 64)


@dataclass
class FuzzReport:
    knot: str
    trials: int
    n_moves: int
    seed: int
    status: str
    counterexample: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"knot": self.knot, "trials": self.trials, "n_moves": self.n_moves,
               "seed": self.seed, "status": self.status}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def fuzz(b: BraidWord, n_moves: int = 30, trials: int = 50, seed: int = 0,
         knot: Optional[str] = None, max_letters: int = MAX_LETTERS) -> FuzzReport:
    """Random Markov-move sequences must leave torsion, minv and fingerprint unchanged.

    Trials alternate between the two grid layouts and also restart the vertex
    perturbation schedule at a trial-dependent offset.
    """
    from .invariant import full_report

    if len(b.letters) > max_letters:
        raise MoveError("word of length %d exceeds the cap %d" % (len(b.letters), max_letters))
    name = knot or str(b)
    reference = full_report(b)
    ref_det = burau_determinant(b)
    for trial in range(trials):
        s = trial_seed(seed, trial)
        seq = MoveSequence(s, random_moves(b, n_moves, random.Random(s), max_letters))
        moved = seq.replay(b)
        layout = LAYOUTS[trial % len(LAYOUTS)]
        bad = None
        det = burau_determinant(moved)
        if det != ref_det:
            bad = "determinant %d != %d" % (det, ref_det)
        else:
            rep = full_report(moved, layout=layout, restart=trial % 3)
            if rep.key() != reference.key():
                bad = "report %s/%s differs from %s/%s" % (rep.torsion, rep.minv,
                                                          reference.torsion, reference.minv)
        if bad:
            cx = {"trial": trial, "layout": layout, "reason": bad,
                  "braid": {"strands": moved.strands, "letters": list(moved.letters)}}
            cx.update(seq.to_json())
            return FuzzReport(name, trials, n_moves, seed, "fail", cx)
    return FuzzReport(name, trials, n_moves, seed, "pass")
