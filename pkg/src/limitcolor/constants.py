"""Exact big-integer evaluation of the radius/scale schedule.

Two modes are supported.  ``paper`` derives every scale from the degree
bound and the increasing sequence ``eps``.  The radii grow as towers of
exponentials, so only the first level (and the next scale factor) can be
materialized; later levels are reported as blocked.  ``desk`` takes small
user supplied radii ``r_n`` and scale factors ``s_n`` and derives the rest
with the same formulas, which is what the hierarchy builder runs on.

Quantities are evaluated twice: at the actual radii ``r_0..r_n`` and at the
upper radii ``rbar_0..rbar_n`` (the latter feed the next scale factor and
the forward terms of the nesting margin ``K_n``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from math import isqrt
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import mpmath

# Integers above this many bits are never materialized.
MAX_BITS = 1 << 20

W_FIRST = 10
W_LATER = 2


class ScheduleError(ValueError):
    pass


class TooLarge(ScheduleError):
    """A schedule quantity would need more than ``MAX_BITS`` bits."""

    def __init__(self, quantity: str, log2_size: float):
        if math.isinf(log2_size):
            msg = "%s is not materializable" % quantity
        else:
            msg = "%s is not materializable (about 2^%.3g bits)" % (quantity, math.log2(max(log2_size, 1.0)))
        super().__init__(msg)
        self.quantity = quantity
        self.log2_size = log2_size


def _log2(x: int) -> float:
    if x <= 0:
        raise ValueError("log of non-positive integer")
    b = x.bit_length()
    if b <= 1000:
        return math.log2(x)
    return b - 1000 + math.log2(x >> (b - 1000))


def big_pow(base: int, exp: int, quantity: str) -> int:
    """``base ** exp`` unless the result would exceed ``MAX_BITS``."""
    if base in (0, 1) or exp == 0:
        return base ** exp
    est = exp * _log2(base)
    if est > MAX_BITS:
        raise TooLarge(quantity, est)
    return base ** exp


# -- the per-level formulas -----------------------------------------------------

def R_minus(a: int) -> int:
    return 4 * a - 1


def R_plus(a: int, s: int) -> int:
    return a * (2 * s + 3)


def chain(a: Sequence[int], s: Sequence[int], delta: int, with_degree: bool = True) -> List[Dict[str, Optional[int]]]:
    """Evaluate the cumulative functions along radii ``a`` and scales ``s``.

    Returns one dict per level with ``R_minus``, ``R_plus``, ``l``, ``L``,
    ``Gamma_minus``, ``Gamma_plus`` and ``Delta`` (``None`` once the degree
    bound stops being materializable).
    """
    out = []
    L_prev, G_prev, D_prev = 1, 0, delta
    for n, (an, sn) in enumerate(zip(a, s)):
        rm, rp = R_minus(an), R_plus(an, sn)
        l = 2 * rp + 1
        L = L_prev * l
        gm = rm * L_prev + G_prev
        gp = rp * L_prev + G_prev
        D = None
        if with_degree and D_prev is not None:
            try:
                D = 4 * big_pow(D_prev - 1, 2 * rp, "Delta_%d" % n)
            except TooLarge:
                D = None
        out.append({"R_minus": rm, "R_plus": rp, "l": l, "L": L, "Gamma_minus": gm, "Gamma_plus": gp, "Delta": D})
        L_prev, G_prev, D_prev = L, gp, D
    return out


@dataclass
class LevelRecord:
    n: int
    eps: int
    s: int
    r_hat: int
    r_bar: int
    r: int
    case: str
    r_minus: int
    r_plus: int
    R_minus: int
    R_plus: int
    l: int
    L: int
    Gamma_minus: int
    Gamma_plus: int
    Delta: Optional[int]
    L_bar: int
    Gamma_plus_bar: int
    R_plus_bar: int
    Delta_bar: Optional[int]
    K_bar: int = 0
    K: Optional[int] = None
    Upsilon: int = 0
    delta: int = 0
    overrides: Dict[str, int] = field(default_factory=dict)


SEED = LevelRecord(
    n=-1, eps=0, s=0, r_hat=0, r_bar=0, r=0, case="seed", r_minus=0, r_plus=0, R_minus=0, R_plus=0,
    l=1, L=1, Gamma_minus=0, Gamma_plus=0, Delta=None, L_bar=1, Gamma_plus_bar=0, R_plus_bar=0,
    Delta_bar=None, K_bar=0, K=0, Upsilon=0, delta=0,
)


@dataclass
class ParameterSchedule:
    mode: str
    degree: int
    eps: List[int]
    levels: List[LevelRecord]
    # a level whose scale factor is known but whose radius is not materializable
    pending_s: Optional[int] = None
    blocked: Optional[str] = None
    inputs: Dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> LevelRecord:
        if n == -1:
            rec = LevelRecord(**asdict(SEED))
            rec.Delta = rec.Delta_bar = self.degree
            return rec
        if 0 <= n < len(self.levels):
            return self.levels[n]
        if self.blocked and n >= len(self.levels):
            raise ScheduleError("level %d unavailable: %s" % (n, self.blocked))
        raise ScheduleError("level %d outside the schedule (have %d)" % (n, len(self.levels)))

    def r(self, n: int) -> int:
        return self.level(n).r

    def s(self, n: int) -> int:
        return self.level(n).s

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, int) and v.bit_length() > 4096:
                return {"bits": v.bit_length(), "log2": _log2(v)}
            return v

        return {
            "mode": self.mode,
            "degree": self.degree,
            "eps": list(self.eps),
            "inputs": dict(self.inputs),
            "blocked": self.blocked,
            "pending_s": self.pending_s,
            "levels": [{k: enc(v) for k, v in asdict(rec).items()} for rec in self.levels],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParameterSchedule":
        inp = d.get("inputs", {})
        return build_schedule(d["mode"], d["degree"], d["eps"], **inp)


# -- the threshold function and the smallest admissible radius --------------------

def eta_parameters(n: int, schedule: ParameterSchedule) -> Tuple[int, int]:
    """Offset and divisor of the threshold exponent at level ``n``.

    The threshold is ``2 ** floor((a - offset) / divisor)``.
    """
    if n == 0:
        d = schedule.degree
        return d ** 11 + 1, d ** 3
    prev = schedule.level(n - 1)
    if prev.Delta_bar is None:
        raise TooLarge("Delta_%d at the upper radii" % (n - 1), float("inf"))
    before = schedule.level(n - 2)
    base = schedule.degree if n == 1 else before.Delta_bar
    if base is None:
        raise TooLarge("Delta_%d at the upper radii" % (n - 2), float("inf"))
    offset = big_pow(prev.Delta_bar, 11, "Delta_%d^11" % (n - 1)) + 1
    divisor = big_pow(base, prev.r_bar ** 2 * prev.s, "threshold divisor at level %d" % n)
    return offset, divisor


def _floor_exponent(a: Union[int, Fraction], offset: int, divisor: int) -> int:
    return math.floor(Fraction(a) - offset) // divisor if not isinstance(a, int) else (a - offset) // divisor


def eta_from_exponent(e: int) -> Union[int, Fraction]:
    return 1 << e if e >= 0 else Fraction(1, 1 << -e)


def eta_bar(n: int, a: Union[int, Fraction], schedule: ParameterSchedule) -> Union[int, Fraction]:
    """Threshold at level ``n``: a power of two, a rational below 1 when the
    floor exponent is negative."""
    if a < 0:
        raise ValueError("argument must be non-negative")
    offset, divisor = eta_parameters(n, schedule)
    return eta_from_exponent(_floor_exponent(a, offset, divisor))


def _two_power_exceeds(F: int, base: int, e: int) -> bool:
    """Decide ``2**F > (4 * base**e + 6) ** 2`` without materializing."""
    if F < 0:
        return False
    if base == 1:
        return (1 << F) > 100 if F < 64 else True
    if base & (base - 1) == 0:
        m = (base.bit_length() - 1) * e + 2
        if m >= 3:
            # (2^m + 6)^2 lies strictly between 2^(2m) and 2^(2m+1)
            return F >= 2 * m + 1
        return (1 << F) > ((1 << m) + 6) ** 2
    bits = e * _log2(base)
    if bits < 8192:
        if F > 2 * bits + 16:
            return True
        return (1 << F) > (4 * base ** e + 6) ** 2
    with mpmath.workprec(128 + e.bit_length()):
        rhs = 2 * (e * mpmath.log(base, 2) + 2)
        gap = mpmath.mpf(F) - rhs
        if abs(gap) < mpmath.mpf(2) ** -60:
            raise ScheduleError("radius threshold comparison too close to call at exponent %d" % F)
        return gap > 0


def r_hat_condition(r: int, offset: int, divisor: int, s: int, base: int) -> bool:
    """Whether radius ``r`` satisfies the defining inequality of the smallest
    admissible radius (``base`` is the previous degree bound minus one)."""
    E = (r - offset) // divisor
    if E < 0:
        return False
    # floor((sqrt(2^E) - 6 - offset) / divisor) == floor((isqrt(2^E) - 6 - offset) / divisor)
    F = (isqrt(1 << E) - 6 - offset) // divisor
    return _two_power_exceeds(F, base, r * s * s * (3 * s + 1))


def solve_r_hat(n: int, schedule: ParameterSchedule, s: Optional[int] = None) -> int:
    """Smallest positive radius satisfying the level-``n`` inequality.

    The left side is constant on blocks of ``divisor`` consecutive radii
    while the right side grows, so the answer is the start of a block.
    Beyond the first success the left side outgrows the right, so the block
    index is found by doubling and bisection.
    """
    offset, divisor = eta_parameters(n, schedule)
    if s is None:
        s = schedule.level(n).s
    if n == 0:
        base = schedule.degree - 1
    else:
        base = schedule.level(n - 1).Delta_bar - 1

    def ok(k: int) -> bool:
        return r_hat_condition(max(1, offset + k * divisor), offset, divisor, s, base)

    hi = 1
    while not ok(hi):
        hi *= 2
        if hi > 1 << 20:
            raise ScheduleError("no admissible radius found")
    lo = hi // 2
    if ok(lo):
        lo, hi = -1, lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return max(1, offset + hi * divisor)


# -- schedule construction --------------------------------------------------------

DESK_MIN_R0 = 12
DESK_MIN_S = 3


def _check_eps(eps: Sequence[int]) -> List[int]:
    eps = [int(e) for e in eps]
    if not eps:
        raise ScheduleError("eps must be nonempty")
    if eps[0] <= 0 or any(b <= a for a, b in zip(eps, eps[1:])):
        raise ScheduleError("eps must be strictly increasing and positive")
    return eps


def build_schedule(mode: str, degree: int, eps: Optional[Sequence[int]] = None,
                   r: Optional[Sequence[int]] = None, s: Optional[Sequence[int]] = None,
                   levels: Optional[int] = None,
                   choose: Optional[Callable[[int, int, int, int], str]] = None,
                   check_minima: bool = True) -> ParameterSchedule:
    """Build a schedule.

    ``paper`` mode uses ``eps`` only; ``choose(n, r_hat, r_bar, s)`` returns
    ``"bar"`` or ``"hat"`` to pick the actual radius (default ``"hat"``).
    ``desk`` mode needs ``r`` and ``s`` of equal length; ``eps`` defaults to
    ``1, 2, ...``.  ``check_minima=False`` lifts the desk radius and scale
    minima, for using the builder as a plain calculator.
    """
    if degree < 2:
        raise ScheduleError("degree bound must be at least 2")
    if mode == "desk":
        if r is None or s is None or len(r) != len(s) or not r:
            raise ScheduleError("desk mode needs radii r and scales s of equal length")
        r = [int(v) for v in r]
        s = [int(v) for v in s]
        eps = _check_eps(eps if eps is not None else range(1, len(r) + 1))
        if len(eps) < len(r):
            raise ScheduleError("need one eps per level")
        if check_minima and r[0] < DESK_MIN_R0:
            raise ScheduleError("desk radius r_0=%d below minimum %d" % (r[0], DESK_MIN_R0))
        if any(v < 1 for v in r):
            raise ScheduleError("radii must be positive")
        if check_minima and any(v < DESK_MIN_S for v in s):
            raise ScheduleError("desk scales must be at least %d" % DESK_MIN_S)
        inputs = {"r": r, "s": s, "check_minima": check_minima}
        sched = ParameterSchedule("desk", degree, eps, [], inputs=inputs)
        hats = list(r)
        bars = [a * (3 * b + 1) for a, b in zip(r, s)]
        cases = ["desk"] * len(r)
        _fill(sched, s, hats, bars, list(r), cases)
        return sched
    if mode != "paper":
        raise ScheduleError("unknown mode %r" % mode)
    eps = _check_eps(eps if eps is not None else [1])
    count = len(eps) if levels is None else min(levels, len(eps))
    sched = ParameterSchedule("paper", degree, eps, [], inputs={"levels": count})
    ss, hats, bars, rs, cases = [], [], [], [], []
    for n in range(count):
        if n == 0:
            sn = 27 + eps[0]
        else:
            prev = sched.levels[n - 1]
            sn = 27 + 10 * prev.L_bar + 2 * prev.Gamma_plus_bar + eps[n]
        try:
            rh = solve_r_hat(n, sched, s=sn)
        except TooLarge as exc:
            sched.pending_s = sn
            sched.blocked = "radius of level %d: %s" % (n, exc)
            break
        rb = rh * (3 * sn + 1)
        pick = "hat" if choose is None else choose(n, rh, rb, sn)
        ss.append(sn)
        hats.append(rh)
        bars.append(rb)
        rs.append(rb if pick == "bar" else rh)
        cases.append("A" if pick == "bar" else "B")
        _fill(sched, ss, hats, bars, rs, cases)
    return sched


def _fill(sched: ParameterSchedule, s, hats, bars, rs, cases) -> None:
    actual = chain(rs, s, sched.degree)
    upper = chain(bars, s, sched.degree)
    recs = []
    for n in range(len(rs)):
        a, u = actual[n], upper[n]
        recs.append(LevelRecord(
            n=n, eps=sched.eps[n], s=s[n], r_hat=hats[n], r_bar=bars[n], r=rs[n], case=cases[n],
            r_minus=rs[n], r_plus=rs[n] * s[n],
            R_minus=a["R_minus"], R_plus=a["R_plus"], l=a["l"], L=a["L"],
            Gamma_minus=a["Gamma_minus"], Gamma_plus=a["Gamma_plus"], Delta=a["Delta"],
            L_bar=u["L"], Gamma_plus_bar=u["Gamma_plus"], R_plus_bar=u["R_plus"], Delta_bar=u["Delta"],
        ))
    K_prev, U_prev, L_prev = 0, 0, 1
    for n, rec in enumerate(recs):
        rec.K_bar = K_prev + rec.L * (rec.r * rec.s ** 2 + rec.r * (2 * rec.s + 1))
        if n + 1 < len(recs):
            nxt = recs[n + 1]
            rec.K = rec.K_bar + rec.L * (nxt.s * R_plus(nxt.r_bar, nxt.s) + rec.Gamma_plus_bar + 2 * rec.R_plus_bar)
        else:
            rec.K = None
        W = W_FIRST if n == 0 else W_LATER
        rec.Upsilon = U_prev + L_prev * (W + 3 * rec.R_plus + 1) + 2 * rec.Gamma_plus + n * rec.L
        rec.delta = 4 * rec.Gamma_plus + rec.Upsilon + 2 * rec.L
        # K_n of the last level needs the next level; keep the running sum usable
        K_prev = rec.K if rec.K is not None else rec.K_bar
        U_prev, L_prev = rec.Upsilon, rec.L
    sched.levels = recs


def check_gamma_lemma(schedule: ParameterSchedule, n: int) -> bool:
    """Check ``a s_n >= 2 Gamma_n^-(a) + eps_n`` and
    ``a s_n^2 >= 2 Gamma_n^+(a) + eps_n`` for every radius vector bounded
    by the upper radii.

    The right sides increase in the earlier coordinates and both sides are
    affine in the last one, so it suffices to test the largest earlier
    radii at ``a_n = 1`` and at ``a_n = rbar_n`` (or the slope, when the
    level-``n`` radius is not materialized).
    """
    if n < len(schedule.levels):
        sn, en, top = schedule.levels[n].s, schedule.levels[n].eps, schedule.levels[n].r_bar
    elif n == len(schedule.levels) and schedule.pending_s is not None:
        sn, en, top = schedule.pending_s, schedule.eps[n], None
    else:
        raise ScheduleError("level %d not available" % n)
    prev = schedule.level(n - 1)
    L_prev = 1 if n == 0 else prev.L_bar
    G_prev = 0 if n == 0 else prev.Gamma_plus_bar

    def slack(a: int) -> Tuple[int, int]:
        gm = R_minus(a) * L_prev + G_prev
        gp = R_plus(a, sn) * L_prev + G_prev
        return a * sn - 2 * gm - en, a * sn * sn - 2 * gp - en

    lo = slack(1)
    if min(lo) < 0:
        return False
    if top is not None:
        return min(slack(top)) >= 0
    two = slack(2)
    return two[0] >= lo[0] and two[1] >= lo[1]
