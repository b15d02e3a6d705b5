"""Built-in function library.

Every stochastic built-in consumes a documented, fixed number of raw draws
per call (given its arguments), so a node's draw counter advances the same
way on every run:

    uniform 1 | binomial n | randint 1 | normal 2 | poisson max(1, ceil(lam/500))
    categorical 1 | choice 1 | random_seq length

The full reference (domains, distributions) lives in docs/stdlib.md.
"""

from __future__ import annotations

import math

from .errors import DomainError
from .registry import FunctionRegistry
from .rng import RandomStream
from .values import Tensor, Value, type_name

__all__ = ["build_registry", "BUILTIN_NAMES"]


# --- argument checks -----------------------------------------------------

def _number(x: Value, what: str) -> int | float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DomainError(f"{what} must be a number, got {type_name(x)}")
    return x


def _float(x: Value, what: str) -> float:
    return float(_number(x, what))


def _int(x: Value, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise DomainError(f"{what} must be an integer, got {type_name(x)}")
    return x


def _str(x: Value, what: str) -> str:
    if not isinstance(x, str):
        raise DomainError(f"{what} must be a string, got {type_name(x)}")
    return x


def _list(x: Value, what: str) -> list:
    if not isinstance(x, list):
        raise DomainError(f"{what} must be a list, got {type_name(x)}")
    return x


def _probs(x: Value, what: str) -> list[float]:
    ps = [_float(p, f"{what} entry") for p in _list(x, what)]
    if not ps:
        raise DomainError(f"{what} must be non-empty")
    if any(p < 0 for p in ps):
        raise DomainError(f"{what} entries must be non-negative")
    if abs(sum(ps) - 1.0) > 1e-9:
        raise DomainError(f"{what} must sum to 1 (got {sum(ps)!r})")
    return ps


# --- distributions -------------------------------------------------------

def _uniform(rng: RandomStream, a, b):
    a, b = _float(a, "uniform lower bound"), _float(b, "uniform upper bound")
    if a > b:
        raise DomainError(f"uniform requires a <= b, got ({a}, {b})")
    u = rng.next_float()
    return a + (b - a) * u


def _binomial(rng: RandomStream, n, p):
    n = _int(n, "binomial trial count")
    p = _float(p, "binomial probability")
    if n < 0:
        raise DomainError(f"binomial requires n >= 0, got {n}")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"binomial requires 0 <= p <= 1, got {p}")
    return sum(1 for _ in range(n) if rng.next_float() < p)


def _randint(rng: RandomStream, lo, hi):
    lo, hi = _int(lo, "randint lower bound"), _int(hi, "randint upper bound")
    if lo >= hi:
        raise DomainError(f"randint requires lo < hi (half-open range), got ({lo}, {hi})")
    return lo + rng.next_word() % (hi - lo)


def _normal(rng: RandomStream, mu, sigma):
    mu, sigma = _float(mu, "normal mean"), _float(sigma, "normal sd")
    if sigma < 0:
        raise DomainError(f"normal requires sigma >= 0, got {sigma}")
    # Box-Muller cosine branch; exactly 2 raw draws, discarding none
    u1 = ((rng.next_word() >> 11) + 1) * 2.0**-53  # (0, 1]
    u2 = rng.next_float()
    return mu + sigma * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def _poisson(rng: RandomStream, lam):
    lam = _float(lam, "poisson rate")
    if lam < 0:
        raise DomainError(f"poisson requires lam >= 0, got {lam}")
    # split into chunks of rate <= 500 (Poisson additivity) so exp() never
    # underflows; draw count is max(1, ceil(lam/500))
    chunks = max(1, math.ceil(lam / 500.0))
    rate = lam / chunks
    total = 0
    for _ in range(chunks):
        u = rng.next_float()
        p = math.exp(-rate)
        cum = p
        k = 0
        cap = int(rate + 10.0 * math.sqrt(rate) + 50.0)
        while u >= cum and k < cap:
            k += 1
            p *= rate / k
            cum += p
        total += k
    return total


def _pick(rng: RandomStream, ps: list[float]) -> int:
    u = rng.next_float()
    cum = 0.0
    for i, p in enumerate(ps):
        cum += p
        if u < cum:
            return i
    return len(ps) - 1


def _categorical(rng: RandomStream, probs):
    return _pick(rng, _probs(probs, "categorical probabilities"))


def _choice(rng: RandomStream, items, probs):
    items = _list(items, "choice items")
    ps = _probs(probs, "choice probabilities")
    if len(items) != len(ps):
        raise DomainError(f"choice requires len(items) == len(probs), got {len(items)} vs {len(ps)}")
    return items[_pick(rng, ps)]


def _random_seq(rng: RandomStream, alphabet, length):
    alphabet = _str(alphabet, "random_seq alphabet")
    length = _int(length, "random_seq length")
    if not alphabet:
        raise DomainError("random_seq alphabet must be non-empty")
    if length < 0:
        raise DomainError(f"random_seq length must be >= 0, got {length}")
    k = len(alphabet)
    return "".join(alphabet[rng.next_word() % k] for _ in range(length))


# --- pure math ------------------------------------------------------------

def _sigmoid(x):
    x = _float(x, "sigmoid argument")
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _exp(x):
    try:
        return math.exp(_float(x, "exp argument"))
    except OverflowError:
        raise DomainError(f"exp overflow for argument {x!r}") from None


def _log(x):
    x = _float(x, "log argument")
    if x <= 0.0:
        raise DomainError(f"log requires a positive argument, got {x}")
    return math.log(x)


def _abs(x):
    return abs(_number(x, "abs argument"))


def _min(*args):
    return min(_number(a, "min argument") for a in args)


def _max(*args):
    return max(_number(a, "max argument") for a in args)


def _clamp(x, lo, hi):
    x = _number(x, "clamp value")
    lo = _number(lo, "clamp lower bound")
    hi = _number(hi, "clamp upper bound")
    if lo > hi:
        raise DomainError(f"clamp requires lo <= hi, got ({lo}, {hi})")
    return lo if x < lo else hi if x > hi else x


def _floor(x):
    return math.floor(_number(x, "floor argument"))


def _round(x):
    # banker's rounding, matching the host language convention
    return round(_number(x, "round argument"))


def _get(xs, i):
    xs = _list(xs, "get target")
    i = _int(i, "get index")
    if not 0 <= i < len(xs):
        raise DomainError(f"get index {i} out of range for list of length {len(xs)}")
    return xs[i]


def _len(x):
    if isinstance(x, (list, str)):
        return len(x)
    raise DomainError(f"len requires a list or string, got {type_name(x)}")


def _concat(a, b):
    if isinstance(a, str) and isinstance(b, str):
        return a + b
    if isinstance(a, list) and isinstance(b, list):
        return a + b
    raise DomainError(f"concat requires two strings or two lists, got {type_name(a)} and {type_name(b)}")


# --- sequence / tensor helpers ---------------------------------------------

def _implant(seq, motif, pos):
    seq = _str(seq, "implant sequence")
    motif = _str(motif, "implant motif")
    pos = _int(pos, "implant position")
    if pos < 0 or pos + len(motif) > len(seq):
        raise DomainError(
            f"implant position {pos} with motif length {len(motif)} "
            f"does not fit in sequence of length {len(seq)}"
        )
    return seq[:pos] + motif + seq[pos + len(motif):]


def _kmer_counts(seqs, k, alphabet):
    seqs = _list(seqs, "kmer_counts sequences")
    k = _int(k, "kmer_counts k")
    alphabet = _str(alphabet, "kmer_counts alphabet")
    if k < 1:
        raise DomainError(f"kmer_counts requires k >= 1, got {k}")
    if not alphabet or len(set(alphabet)) != len(alphabet):
        raise DomainError("kmer_counts alphabet must be non-empty without repeats")
    index = {c: i for i, c in enumerate(alphabet)}
    base = len(alphabet)
    counts = [0] * base**k
    for s in seqs:
        s = _str(s, "kmer_counts sequence")
        bad = set(s) - set(alphabet)
        if bad:
            raise DomainError(f"sequence contains characters outside the alphabet: {sorted(bad)}")
        for start in range(len(s) - k + 1):
            code = 0
            for c in s[start:start + k]:
                code = code * base + index[c]
            counts[code] += 1
    return counts


def _tensor_zeros(shape):
    dims = [_int(d, "tensor_zeros dimension") for d in _list(shape, "tensor_zeros shape")]
    if not dims or any(d < 1 for d in dims):
        raise DomainError(f"tensor_zeros dimensions must be >= 1, got {dims}")
    return Tensor(tuple(dims), (0.0,) * math.prod(dims))


def _tensor_fill_rect(t, r0, c0, r1, c1, v):
    if not isinstance(t, Tensor):
        raise DomainError(f"tensor_fill_rect requires a tensor, got {type_name(t)}")
    if len(t.shape) != 2:
        raise DomainError(f"tensor_fill_rect requires a 2-D tensor, got shape {list(t.shape)}")
    rows, cols = t.shape
    r0, c0 = _int(r0, "rectangle r0"), _int(c0, "rectangle c0")
    r1, c1 = _int(r1, "rectangle r1"), _int(c1, "rectangle c1")
    v = _float(v, "fill value")
    if not (0 <= r0 <= r1 <= rows and 0 <= c0 <= c1 <= cols):
        raise DomainError(
            f"rectangle ({r0},{c0})..({r1},{c1}) out of range for shape {list(t.shape)}"
        )
    data = list(t.data)
    for r in range(r0, r1):
        row_base = r * cols
        for c in range(c0, c1):
            data[row_base + c] = v
    return Tensor(t.shape, tuple(data))


_BUILTINS = [
    # (name, arity, stochastic, impl)
    ("uniform", 2, True, _uniform),
    ("binomial", 2, True, _binomial),
    ("randint", 2, True, _randint),
    ("normal", 2, True, _normal),
    ("poisson", 1, True, _poisson),
    ("categorical", 1, True, _categorical),
    ("choice", 2, True, _choice),
    ("random_seq", 2, True, _random_seq),
    ("sigmoid", 1, False, _sigmoid),
    ("exp", 1, False, _exp),
    ("log", 1, False, _log),
    ("abs", 1, False, _abs),
    ("min", (2, None), False, _min),
    ("max", (2, None), False, _max),
    ("clamp", 3, False, _clamp),
    ("floor", 1, False, _floor),
    ("round", 1, False, _round),
    ("get", 2, False, _get),
    ("len", 1, False, _len),
    ("concat", 2, False, _concat),
    ("implant", 3, False, _implant),
    ("kmer_counts", 3, False, _kmer_counts),
    ("tensor_zeros", 1, False, _tensor_zeros),
    ("tensor_fill_rect", 6, False, _tensor_fill_rect),
]

BUILTIN_NAMES = frozenset(name for name, *_ in _BUILTINS)


def build_registry() -> FunctionRegistry:
    """Fresh registry with all built-ins installed."""
    reg = FunctionRegistry()
    for name, arity, stochastic, impl in _BUILTINS:
        reg.add_builtin(name, arity, stochastic, impl)
    return reg
