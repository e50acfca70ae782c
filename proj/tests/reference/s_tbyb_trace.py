#!/usr/bin/env python3
"""Step-by-step S-TBYB trace on the N=10, DI=2, MUP=1 synthetic model with
uniform prices. Values printed here are frozen into test_strategies.cpp."""
import sys

N, DI, MUP, LAM = 10, 2.0, 1.0, 0.1


def acc(members):
    w = [DI ** (k + 1) for k in range(N)]
    total = 0.0
    for x in w:
        total += x
    s = 0.0
    for k in sorted(members):
        s += w[k]
    return (s / total) ** MUP


def run(tcod):
    price = tcod / N
    single = [acc({i}) for i in range(N)]
    a_star = 1.0
    owned, spent, a_now, rho = [], 0.0, 0.0, None
    rounds = []
    while len(owned) < N:
        rem = [i for i in range(N) if i not in owned]
        # highest individual profit, then lower price, then lower id
        pick = max(rem, key=lambda i: (single[i] - price, -price, -i))
        if not owned:
            ok = single[pick] - price >= -LAM * a_star
        else:
            pred = a_now + rho * single[pick] * (a_star - a_now)
            pred = max(a_now, min(a_star, pred))
            ok = pred - a_now - price >= -LAM * (a_star - a_now)
        if not ok:
            break
        before = a_now
        owned.append(pick)
        a_now = acc(set(owned))
        spent += price
        last = single[pick]
        rho = 1.0 if last < 1e-12 else (a_now - before) / last
        rounds.append((pick, a_now, a_now - spent))
    return rounds


for tcod in map(float, sys.argv[1:] or ["0.5", "1.5", "3"]):
    print(f"tcod={tcod}")
    for pick, a, p in run(tcod):
        print(f"  bought={pick} accuracy={a!r} profit={p!r}")
