#!/usr/bin/env python3
"""Recompute the worked-example constants with exact rational arithmetic.

Standalone on purpose: no imports from the library, plain loops instead of
vectorized code, and a quadratic chord-maximum construction for the concave
envelope instead of a hull sweep.  Every quantity of the worked conversion
pair (0.5, 0.4, 0.1) -> (0.6, 0.2, 0.2) is a rational number, so the values
printed here are exact; the test suite freezes them and requires the library
to agree to 1e-9.

Run:  python scripts/worked_example_oracle.py
"""

import json
from fractions import Fraction as F

SOURCE = [F(1, 2), F(2, 5), F(1, 10)]
TARGET = [F(3, 5), F(1, 5), F(1, 5)]
THIRD = [F(7, 10), F(1, 5), F(1, 10)]  # extra target for the multi-target check


def prefixes(v):
    out = [F(0)]
    for x in v:
        out.append(out[-1] + x)
    return out


def majorized_by(p, q):
    sp, sq = prefixes(p), prefixes(q)
    return all(sp[k] <= sq[k] for k in range(1, len(p))) and sp[-1] == sq[-1]


def meet(p, q):
    sp, sq = prefixes(p), prefixes(q)
    low = [min(a, b) for a, b in zip(sp, sq)]
    return [low[i + 1] - low[i] for i in range(len(p))]


def concave_majorant(ts):
    """Least concave majorant by exhaustive chord maximization (exact)."""
    n = len(ts)
    env = []
    for k in range(n):
        best = ts[k]
        for a in range(k + 1):
            for b in range(k, n):
                if a == b:
                    continue
                chord = ts[a] + (ts[b] - ts[a]) * F(k - a, b - a)
                if chord > best:
                    best = chord
        env.append(best)
    return env


def join(p, q):
    sp, sq = prefixes(p), prefixes(q)
    high = concave_majorant([max(a, b) for a, b in zip(sp, sq)])
    return [high[i + 1] - high[i] for i in range(len(p))]


def suffix_sums(v):
    out = [F(0)] * len(v)
    acc = F(0)
    for i in range(len(v) - 1, -1, -1):
        acc += v[i]
        out[i] = acc
    return out


def optimal_probability(src, tgt):
    es, et = suffix_sums(src), suffix_sums(tgt)
    candidates = [es[l] / et[l] for l in range(len(src)) if et[l] > 0]
    return min(candidates)


def ladder(src, tgt):
    es, et = suffix_sums(src), suffix_sums(tgt)
    d = len(src)
    best = None
    for l in range(1, d + 1):
        if et[l - 1] == 0:
            continue
        ratio = es[l - 1] / et[l - 1]
        if best is None or ratio < best[0]:
            best = (ratio, l)
    ratios, indices = [best[0]], [best[1]]
    while indices[-1] != 1:
        lp = indices[-1]
        best = None
        for l in range(1, lp):
            ratio = (es[l - 1] - es[lp - 1]) / (et[l - 1] - et[lp - 1])
            if best is None or ratio < best[0]:
                best = (ratio, l)
        ratios.append(best[0])
        indices.append(best[1])
    return ratios, indices


def ratio_blocks(ratios, indices, d):
    rv = [None] * d
    hi = d + 1
    for r, lo in zip(ratios, indices):
        for i in range(lo, hi):
            rv[i - 1] = r
        hi = lo
    return rv


def born_branches(state, m_squared):
    p_success = sum(m * x for m, x in zip(m_squared, state))
    success = sorted((m * x / p_success for m, x in zip(m_squared, state)), reverse=True)
    n_squared = [1 - m for m in m_squared]
    failure = sorted(
        (n * x / (1 - p_success) for n, x in zip(n_squared, state)), reverse=True
    )
    return p_success, success, failure


def main():
    d = len(SOURCE)
    incomparable = not majorized_by(SOURCE, TARGET) and not majorized_by(TARGET, SOURCE)

    the_meet = meet(SOURCE, TARGET)
    the_join = join(SOURCE, TARGET)
    meet_of_three = meet(meet(SOURCE, TARGET), THIRD)

    prob = optimal_probability(SOURCE, TARGET)
    ratios, indices = ladder(SOURCE, TARGET)
    ratios_via_meet, indices_via_meet = ladder(SOURCE, the_meet)

    rv = ratio_blocks(ratios, indices, d)
    chi = [r * x for r, x in zip(rv, TARGET)]
    zeta = [r * x for r, x in zip(rv, the_meet)]

    m_squared = [ratios[0] / r for r in rv]
    p_chi, success_chi, xi = born_branches(chi, m_squared)
    p_zeta, success_zeta, nu = born_branches(zeta, m_squared)

    multi_prob = min(
        optimal_probability(SOURCE, TARGET), optimal_probability(SOURCE, THIRD)
    )

    report = {
        "source": [float(x) for x in SOURCE],
        "target": [float(x) for x in TARGET],
        "incomparable": incomparable,
        "p_max": float(prob),
        "ladder_ratios": [float(r) for r in ratios],
        "ladder_indices": indices,
        "ladder_ratios_via_meet": [float(r) for r in ratios_via_meet],
        "ladder_indices_via_meet": indices_via_meet,
        "meet": [float(x) for x in the_meet],
        "join": [float(x) for x in the_join],
        "meet_of_three": [float(x) for x in meet_of_three],
        "chi": [float(x) for x in chi],
        "zeta": [float(x) for x in zeta],
        "kraus_m_squared": [float(x) for x in m_squared],
        "kraus_n_squared": [float(1 - x) for x in m_squared],
        "success_prob_from_chi": float(p_chi),
        "success_state_from_chi": [float(x) for x in success_chi],
        "xi": [float(x) for x in xi],
        "success_prob_from_zeta": float(p_zeta),
        "success_state_from_zeta": [float(x) for x in success_zeta],
        "nu": [float(x) for x in nu],
        "multi_target_prob": float(multi_prob),
        "nu_majorized_by_xi": majorized_by(nu, xi),
        "zeta_majorized_by_chi": majorized_by(zeta, chi),
        "chi_sum": float(sum(chi)),
        "zeta_sum": float(sum(zeta)),
    }
    print(json.dumps(report, indent=2))


if __name__ == "__main__":
    main()
