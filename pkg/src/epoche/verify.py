"""Verification suites behind ``epoche verify``.

Every suite takes a :class:`RunConfig`, draws all randomness from one
``random.Random(cfg.seed)`` and returns a list of :class:`PropertyResult`.
Instances are generated up front, so fanning the checks out to worker
threads (``EPOCHE_THREADS``) does not change the report.

Random regimes: each instance picks ``d`` in ``1..cfg.d`` and ``N`` in
``2..cfg.N`` (``N = 1`` when ``cfg.N == 1``).
"""

from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import coeffs, coequivariance, distortions, quantize
from .algebra import (Context, EnvelopeElement, Monomial, RewriteStats, ShadowElement, canonicalize_tree,
                      chain_bound, envelope_mul, is_monomial, normal_order, shadow_word, swap_coeff)
from .polynomials import RationalFunction, Specialization
from .report import PropertyResult
from .textio import format_element, format_monomial
from .trees import (LTree, catalan, compare_ltrees, concat, enumerate_positive, format_tree, is_positive, label,
                    precedes, rank, shape_count, shapes, tree_key, unrank, Ordering)

SUITES = ("order", "rank", "diamond", "star-oracle", "q-poisson", "weyl", "cocycle",
          "coequivariance", "distortion", "projector", "qybe")


@dataclass
class RunConfig:
    d: int = 1
    N: int = 3
    spec: Optional[Specialization] = None
    q_label: str = "symbolic"
    seed: int = 0
    trials: int = 200

    def __post_init__(self):
        if self.d < 1 or self.N < 1:
            raise ValueError("d and N must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    @property
    def mode(self) -> str:
        return "symbolic" if self.spec is None else "specialized"

    def context(self, d: Optional[int] = None, N: Optional[int] = None) -> Context:
        return Context(d or self.d, N or self.N, self.spec)


# -- helpers ---------------------------------------------------------------------------


def threads() -> int:
    try:
        return max(1, int(os.environ.get("EPOCHE_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn: Callable, items: Sequence) -> list:
    n = threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _regime(rng: random.Random, cfg: RunConfig) -> Tuple[int, int]:
    d = rng.randint(1, cfg.d)
    N = rng.randint(2, cfg.N) if cfg.N >= 2 else 1
    return d, N


def random_ltree(rng: random.Random, d: int, n: int) -> LTree:
    s = rng.choice(shapes(n))
    return label(s, [rng.randint(1, 2 * d) for _ in range(n)])


def random_word(rng: random.Random, d: int, N: int, length: int) -> Tuple[LTree, ...]:
    gens = enumerate_positive(d, N)
    return tuple(rng.choice(gens) for _ in range(length))


def random_monomial(rng: random.Random, d: int, N: int, length: int) -> Monomial:
    return tuple(sorted(random_word(rng, d, N, length), key=tree_key, reverse=True))


def random_element(rng: random.Random, ctx: Context, terms: int = 2, max_len: int = 3) -> ShadowElement:
    total = ShadowElement.zero(ctx)
    for _ in range(terms):
        m = random_monomial(rng, ctx.d, ctx.N, rng.randint(0, max_len))
        total = total + ShadowElement.basis(ctx, m, rng.choice([-3, -2, -1, 1, 2, 3]))
    return total


def _mono_json(m: Sequence[LTree]) -> List[str]:
    return [format_tree(t) for t in m]


def _basis(ctx: Context, m: Monomial) -> ShadowElement:
    return ShadowElement.basis(ctx, m)


# -- order / rank ------------------------------------------------------------------------


def suite_order(cfg: RunConfig, rng: random.Random) -> List[PropertyResult]:
    out = []
    counts = PropertyResult("catalan(n-1) == #shapes(n)", 8)
    for n in range(1, 9):
        counts.check(len(shapes(n)) == catalan(n - 1) == shape_count(n), {"n": n})
    out.append(counts)
    small = PropertyResult("#Y_3 == 2 and #Y_4 == 5", 4)
    small.check(len(shapes(3)) == 2, {"n": 3, "count": len(shapes(3))})
    small.check(len(shapes(4)) == 5, {"n": 4, "count": len(shapes(4))})
    out.append(small)
    anti = PropertyResult("order antisymmetric", cfg.N)
    trans = PropertyResult("order transitive", cfg.N)
    pos = PropertyResult("positive trees have ordered branches", cfg.N)
    for d in range(1, min(cfg.d, 2) + 1):
        trees = enumerate_positive(d, min(cfg.N, 3))
        for a, b in itertools.product(trees, repeat=2):
            ab, ba = compare_ltrees(a, b), compare_ltrees(b, a)
            anti.check(ab == -ba and (ab == Ordering.EQUAL) == (a == b),
                       lambda: {"a": format_tree(a), "b": format_tree(b)})
        for a, b, c in itertools.product(trees, repeat=3):
            if precedes(a, b) and precedes(b, c):
                trans.check(precedes(a, c), lambda: {"a": format_tree(a), "b": format_tree(b), "c": format_tree(c)})
        for t in trees:
            pos.check(is_positive(t) and (isinstance(t, int) or precedes(t[0], t[1])), {"tree": format_tree(t)})
    out += [anti, trans, pos]
    return out


def suite_rank(cfg: RunConfig, rng: random.Random) -> List[PropertyResult]:
    trip = PropertyResult("unrank(rank(t)) == t", 5)
    mono = PropertyResult("rank monotone in the tree order", 5)
    prev = None
    for _ in range(cfg.trials):
        d = rng.randint(1, min(cfg.d, 2))
        t = random_ltree(rng, d, rng.randint(1, 5))
        r = rank(t, d)
        trip.check(unrank(r, d) == t and 1 <= r, lambda: {"tree": format_tree(t), "d": d})
        if prev is not None and prev[1] == d:
            u = prev[0]
            ru = rank(u, d)
            mono.check((ru < r) == precedes(u, t) and (ru == r) == (u == t),
                       lambda: {"a": format_tree(u), "b": format_tree(t), "d": d})
        prev = (t, d)
    return [trip, mono]


# -- diamond -------------------------------------------------------------------------------


def suite_diamond(cfg: RunConfig, rng: random.Random) -> List[PropertyResult]:
    conf = PropertyResult("normal_order confluence (leftmost, rightmost, random)", cfg.N, mode=cfg.mode)
    bound = PropertyResult("rewrite chains within bound", cfg.N, mode=cfg.mode)
    words = []
    for _ in range(cfg.trials * 5 // 2):
        d, N = _regime(rng, cfg)
        words.append((d, N, random_word(rng, d, N, rng.randint(1, 5)), rng.randrange(2 ** 32)))

    def check_word(item):
        d, N, w, s = item
        ctx = cfg.context(d, N)
        ref = normal_order(w, 1, ctx)
        ok, within = True, True
        for strategy in ("leftmost", "rightmost", "random"):
            stats = RewriteStats(strategy)
            got = normal_order(w, 1, ctx, strategy=strategy, rng=random.Random(s), stats=stats)
            ok = ok and got == ref
            within = within and stats.max_chain <= chain_bound(len(w))
        return ok, within

    results = _map(check_word, words)
    for (d, N, w, _), (ok, within) in zip(words, results):
        bound.check(within, lambda: {"d": d, "N": N, "word": _mono_json(w)})
    conf.instances = len(words)
    bad = [item for item, (ok, _) in zip(words, results) if not ok]
    if bad:
        d, N, w, _ = min(bad, key=lambda x: (len(x[2]), x[1], x[0]))
        ctx = cfg.context(d, N)
        conf.fail({"d": d, "N": N, "word": _mono_json(w), "failures": len(bad),
                   "leftmost": format_element(normal_order(w, 1, ctx, strategy="leftmost")),
                   "rightmost": format_element(normal_order(w, 1, ctx, strategy="rightmost"))})

    assoc = PropertyResult("envelope_mul associative", cfg.N, mode=cfg.mode)
    triples = []
    for _ in range(cfg.trials):
        d, N = _regime(rng, cfg)
        triples.append((d, N, [random_monomial(rng, d, N, rng.randint(1, 2)) for _ in range(3)]))

    def check_triple(item):
        d, N, ms = item
        ctx = cfg.context(d, N)
        a, b, c = (EnvelopeElement.basis(ctx, m) for m in ms)
        return envelope_mul(envelope_mul(a, b), c) == envelope_mul(a, envelope_mul(b, c))

    for (d, N, ms), ok in zip(triples, _map(check_triple, triples)):
        assoc.check(ok, lambda: {"d": d, "N": N, "monomials": [_mono_json(m) for m in ms]})
    return [conf, bound, assoc]


# -- star oracle ------------------------------------------------------------------------------


def _small_monomials(ctx: Context, max_len: int = 2) -> List[Monomial]:
    gens = sorted(enumerate_positive(ctx.d, ctx.N), key=tree_key, reverse=True)
    out: List[Monomial] = [()]
    for k in range(1, max_len + 1):
        out += [m for m in itertools.combinations_with_replacement(gens, k) if is_monomial(m, ctx)]
    return out


def _oracle_pairs(cfg: RunConfig, rng: random.Random):
    pairs = []
    for N in range(1, min(cfg.N, 3) + 1):
        ctx = cfg.context(1, N)
        monos = _small_monomials(ctx)
        pairs += [(1, N, a, b) for a in monos for b in monos]
    if cfg.d >= 2:
        ctx = cfg.context(2, min(cfg.N, 3))
        monos = _small_monomials(ctx)
        for _ in range(max(100, cfg.trials // 2)):
            pairs.append((2, ctx.N, rng.choice(monos), rng.choice(monos)))
    return pairs


def _pair_size(item) -> tuple:
    _, N, a, b = item
    return (len(a) + len(b), sum(len(format_tree(t)) for t in a + b), N)


def suite_star_oracle(cfg: RunConfig, rng: random.Random) -> List[PropertyResult]:
    literal = PropertyResult("star_normal_closed == star_normal", min(cfg.N, 3), mode=cfg.mode)
    weighted = PropertyResult("closed formula with equal-block weights == star_normal", min(cfg.N, 3),
                              mode=cfg.mode, gating=False)
    pairs = _oracle_pairs(cfg, rng)

    def check(item):
        d, N, a, b = item
        ctx = cfg.context(d, N)
        ref = quantize.star_normal(_basis(ctx, a), _basis(ctx, b))
        return (quantize.star_normal_closed(a, b, ctx) == ref,
                quantize.star_normal_closed(a, b, ctx, literal=False) == ref)

    results = _map(check, pairs)
    for res, idx in ((literal, 0), (weighted, 1)):
        bad = [p for p, r in zip(pairs, results) if not r[idx]]
        res.instances = len(pairs)
        if bad:
            d, N, a, b = min(bad, key=_pair_size)
            ctx = cfg.context(d, N)
            res.fail({
                "d": d, "N": N, "left": _mono_json(a), "right": _mono_json(b), "mismatches": len(bad),
                "closed": format_element(quantize.star_normal_closed(a, b, ctx, literal=(idx == 0))),
                "rewriting": format_element(quantize.star_normal(_basis(ctx, a), _basis(ctx, b))),
            })
    return [literal, weighted]


# -- q-Poisson -------------------------------------------------------------------------------


def _poisson_checks(br: Callable, ctx: Context, w, w1, w2) -> Dict[str, bool]:
    W, W1, W2 = (_basis(ctx, m) for m in (w, w1, w2))
    tw = ctx.coeff(swap_coeff(w1, w))       # q(w', w)
    tp = ctx.coeff(swap_coeff(w, w1))       # q(w, w')
    anti = br(W, W1) == br(W1, W).scale(-tw)
    leib_l = br(W, W1 * W2)
    leib_r = br(W, W1) * W2
    leib_t = W1 * br(W, W2)
    jac_l = br(W, br(W1, W2))
    jac_a = br(br(W, W1), W2)
    jac_b = br(W1, br(W, W2))
    return {
        "antisymmetry": anti,
        "leibniz": leib_l == leib_r + leib_t.scale(tw),
        "jacobi": jac_l == jac_a + jac_b.scale(tw),
        "leibniz_printed": leib_l == leib_r + leib_t.scale(tp),
        "jacobi_printed": jac_l == jac_a + jac_b.scale(tp),
    }


def _poisson_instances(cfg: RunConfig, rng: random.Random, count: int, lens=(1, 2)):
    out = []
    for _ in range(count):
        d, N = rng.randint(1, min(cfg.d, 2)), min(cfg.N, 3)
        ms = [random_monomial(rng, d, N, rng.randint(*lens)) for _ in range(3)]
        out.append((d, N, ms))
    return out


def _poisson_results(name: str, br: Callable, cfg: RunConfig, instances, gating_axioms: bool) -> List[PropertyResult]:
    n = min(cfg.N, 3)
    res = {
        "antisymmetry": PropertyResult(f"{name} q-antisymmetry", n, mode=cfg.mode),
        "leibniz": PropertyResult(f"{name} q-Leibniz, twist q(w',w)", n, mode=cfg.mode, gating=gating_axioms),
        "jacobi": PropertyResult(f"{name} q-Jacobi, twist q(w',w)", n, mode=cfg.mode, gating=gating_axioms),
        "leibniz_printed": PropertyResult(f"{name} q-Leibniz, twist q(w,w')", n, mode=cfg.mode, gating=False),
        "jacobi_printed": PropertyResult(f"{name} q-Jacobi, twist q(w,w')", n, mode=cfg.mode, gating=False),
    }

    def check(item):
        d, N, ms = item
        return _poisson_checks(br, cfg.context(d, N), *ms)

    for (d, N, ms), got in zip(instances, _map(check, instances)):
        for key, ok in got.items():
            res[key].check(ok, lambda: {"d": d, "N": N, "monomials": [_mono_json(m) for m in ms]})
    return list(res.values())


def suite_q_poisson(cfg: RunConfig, rng: random.Random) -> List[PropertyResult]:
    out = _poisson_results("bracket_normal", quantize.bracket_normal, cfg,
                           _poisson_instances(cfg, rng, cfg.trials), gating_axioms=True)
    gen = PropertyResult("<h[g], h[g']> == h[g v g'] on generators with <= 2 leaves", 2, mode=cfg.mode)
    for d in range(1, min(cfg.d, 2) + 1):
        ctx = cfg.context(d, max(cfg.N, 2))
        gens = enumerate_positive(d, 2)
        for g, h in itertools.product(gens, repeat=2):
            lhs = quantize.bracket_normal(ShadowElement.generator(ctx, g), ShadowElement.generator(ctx, h))
            gen.check(lhs == shadow_word(ctx, [concat(g, h)]),
                      lambda: {"d": d, "g": format_tree(g), "h": format_tree(h), "got": format_element(lhs)})
    return out + [gen]


# -- Weyl ----------------------------------------------------------------------------------


def _random_tuple(rng: random.Random, d: int, N: int, n: int) -> Tuple[LTree, ...]:
    return random_word(rng, d, N, n)


def suite_weyl(cfg: RunConfig, rng: random.Random) -> List[PropertyResult]:
    out: List[PropertyResult] = []
    per_n = max(2, cfg.trials // 20)
    out += coequivariance.verify_coefficient_identities(4, per_n, rng.randrange(2 ** 32), d=min(cfg.d, 2),
                                                       N=min(cfg.N, 3))
    ones = Specialization.all_ones()
    fact = PropertyResult("all-ones coefficients equal 1/n!", 5, mode="specialized")
    for n in range(1, 6):
        for _ in range(per_n):
            gs = _random_tuple(rng, min(cfg.d, 2), min(cfg.N, 3), n)
            cs = coeffs.weyl_coeffs(gs)
            fact.check(all(c.evaluate(ones) == Fraction(1, factorial(n)) for c in cs.values()),
                       lambda: {"trees": _mono_json(gs)})
    out.append(fact)

    rt = PropertyResult("weyl_W_inverse(weyl_W(f)) == f", cfg.N, mode=cfg.mode)
    items = []
    for _ in range(cfg.trials):
        d, N = _regime(rng, cfg)
        items.append((d, N, random_element(rng, cfg.context(d, N))))

    def check_rt(item):
        _, _, f = item
        return quantize.weyl_W_inverse(quantize.weyl_W(f)) == f

    for (d, N, f), ok in zip(items, _map(check_rt, items)):
        rt.check(ok, lambda: {"d": d, "N": N, "f": format_element(f)})
    out.append(rt)

    assoc = PropertyResult("star_weyl associative", cfg.N, mode=cfg.mode)
    rec = PropertyResult("recursive formula == direct inversion", cfg.N, mode=cfg.mode)
    triples = []
    for _ in range(max(100, cfg.trials // 2)):
        d, N = _regime(rng, cfg)
        lens = [1, 1, 1]
        lens[rng.randrange(3)] += rng.randint(0, 1)
        triples.append((d, N, [random_monomial(rng, d, N, k) for k in lens]))

    def check_triple(item):
        d, N, ms = item
        ctx = cfg.context(d, N)
        a, b, c = (_basis(ctx, m) for m in ms)
        sw = quantize.star_weyl
        return (sw(sw(a, b), c) == sw(a, sw(b, c)), quantize.star_weyl_recursive(a, b) == sw(a, b))

    for (d, N, ms), (ok_a, ok_r) in zip(triples, _map(check_triple, triples)):
        info = lambda: {"d": d, "N": N, "monomials": [_mono_json(m) for m in ms]}
        assoc.check(ok_a, info)
        rec.check(ok_r, info)
    out += [assoc, rec]

    semi = PropertyResult("all-ones <h[g], h[g']> == -1/2 h[g' v g]", cfg.N, mode="specialized")
    for d in range(1, min(cfg.d, 2) + 1):
        ctx = Context(d, cfg.N, ones)
        gens = enumerate_positive(d, cfg.N)
        for g, h in itertools.product(gens, repeat=2):
            lhs = quantize.bracket_weyl(ShadowElement.generator(ctx, g), ShadowElement.generator(ctx, h))
            rhs = shadow_word(ctx, [concat(h, g)], Fraction(-1, 2))
            semi.check(lhs == rhs, lambda: {"d": d, "g": format_tree(g), "h": format_tree(h),
                                            "got": format_element(lhs)})
    out.append(semi)
    return out


# -- cocycle ------------------------------------------------------------------------------


def suite_cocycle(cfg: RunConfig, rng: random.Random) -> List[PropertyResult]:
    coc = PropertyResult("bracket_weyl 2-cocycle", min(cfg.N, 3), mode=cfg.mode)
    items = []
    for _ in range(cfg.trials):
        d, N = rng.randint(1, min(cfg.d, 2)), min(cfg.N, 3)
        lens = [1, 1, 1]
        lens[rng.randrange(3)] += rng.randint(0, 1)
        items.append((d, N, [random_monomial(rng, d, N, k) for k in lens]))

    def check(item):
        d, N, ms = item
        ctx = cfg.context(d, N)
        u, v, w = (_basis(ctx, m) for m in ms)
        br = quantize.bracket_weyl
        return not (u * br(v, w) - br(u * v, w) + br(u, v * w) - br(u, v) * w)

    for (d, N, ms), ok in zip(items, _map(check, items)):
        coc.check(ok, lambda: {"d": d, "N": N, "monomials": [_mono_json(m) for m in ms]})
    antis = _poisson_results("bracket_weyl_antisym", quantize.bracket_weyl_antisym, cfg,
                             _poisson_instances(cfg, rng, max(20, cfg.trials // 4), lens=(1, 1)),
                             gating_axioms=False)
    return [coc] + antis


# -- coequivariance ----------------------------------------------------------------------


def suite_coequivariance(cfg: RunConfig, rng: random.Random) -> List[PropertyResult]:
    out = coequivariance.verify_Ln_transform(2, cfg.trials, rng.randrange(2 ** 32), d=min(cfg.d, 2),
                                             N=min(cfg.N, 3))
    out += coequivariance.verify_Ln_transform(3, max(10, cfg.trials // 20), rng.randrange(2 ** 32), d=1, N=2)
    return out


# -- distortion ---------------------------------------------------------------------------


def suite_distortion(cfg: RunConfig, rng: random.Random) -> List[PropertyResult]:
    ctx = Context(1, 3)
    specs = [Specialization.random(1, rng) for _ in range(3)]
    rep = quantize.distortion_witness(ctx, specs)
    nonlin = PropertyResult("W(h[1,2] u) != h^[1,2] W(u) witness", 3, mode="symbolic+specialized")
    nonlin.check(rep.found_nonlinearity, {"searched": "leaf monomials up to length 3"})
    if rep.found_nonlinearity:
        nonlin.notes.append(f"u = {format_monomial(rep.u)}; confirmed: {', '.join(rep.modes_confirmed)}")
    lam = PropertyResult("no uniform lambda with <f,g>_- = lambda <f,g>", 3)
    lam.check(rep.found_lambda_witness, {"pairs": rep.lambda_pairs})
    if rep.found_lambda_witness:
        lam.notes.append("ratios: " + "; ".join(p["ratio"] for p in rep.lambda_pairs))
    return [nonlin, lam]


# -- projector ---------------------------------------------------------------------------


def suite_projector(cfg: RunConfig, rng: random.Random) -> List[PropertyResult]:
    out = []
    idem = PropertyResult("builtin N=2 projector idempotent (d=1)", 2, mode=cfg.mode)
    ctx1 = Context(1, 2, cfg.spec)
    p1 = distortions.builtin_projector_N2(ctx1)
    ms = distortions.projector_monomials(ctx1, 3, 2)
    bad = distortions.check_idempotent(p1, ms)
    idem.instances = len(ms)
    if bad:
        m, once, twice = bad[0]
        idem.fail({"monomial": _mono_json(m), "P": format_element(once), "PP": format_element(twice),
                   "failures": len(bad)})
    out.append(idem)
    if cfg.d >= 2:
        idem2 = PropertyResult("builtin N=2 projector idempotent (d=2)", 2, mode=cfg.mode, gating=False)
        ctx2 = Context(2, 2, cfg.spec)
        ms2 = distortions.projector_monomials(ctx2, 2, 2)
        bad2 = distortions.check_idempotent(distortions.builtin_projector_N2(ctx2), ms2)
        idem2.instances = len(ms2)
        if bad2:
            m, once, twice = bad2[0]
            idem2.fail({"monomial": _mono_json(m), "P": format_element(once), "PP": format_element(twice),
                        "failures": len(bad2)})
        out.append(idem2)

    ident = PropertyResult("star_P with identity projector == star_weyl", cfg.N, mode=cfg.mode)
    ctx = cfg.context(1, cfg.N)
    pid = distortions.ProjectorSpec(ctx)
    for _ in range(max(20, cfg.trials // 10)):
        a, b = random_element(rng, ctx, 2, 2), random_element(rng, ctx, 2, 2)
        ident.check(distortions.star_P(pid, a, b) == quantize.star_weyl(a, b),
                    lambda: {"a": format_element(a), "b": format_element(b)})
    out.append(ident)

    shape = PropertyResult("tree_bracket follows the shape", 3, mode=cfg.mode)
    ctxp = Context(1, 2, cfg.spec)
    pp = distortions.builtin_projector_N2(ctxp)
    gens = [ShadowElement.generator(ctxp, g) for g in enumerate_positive(1, 2)]
    for a, b, c in itertools.product(gens, repeat=3):
        two = distortions.tree_bracket(("*", "*"), pp, [a, b]) == distortions.bracket_P(pp, a, b)
        left = distortions.tree_bracket((("*", "*"), "*"), pp, [a, b, c]) == \
            distortions.bracket_P(pp, distortions.bracket_P(pp, a, b), c)
        shape.check(two and left, lambda: {"args": [format_element(x) for x in (a, b, c)]})
    out.append(shape)

    # at d=1, N=2 no defect shows up among small monomial triples; single generators at d=2 suffice
    nonassoc = PropertyResult("star_P associativity defect witness (builtin projector, d=2)", 2, mode=cfg.mode)
    ctxw = Context(2, 2, cfg.spec)
    pw = distortions.builtin_projector_N2(ctxw)
    gens2 = sorted(enumerate_positive(2, 2), key=tree_key)
    found = None
    searched = 0
    for gs in itertools.product(gens2, repeat=3):
        searched += 1
        xs = [ShadowElement.generator(ctxw, g) for g in gs]
        defect = distortions.associativity_defect(lambda x, y: distortions.star_P(pw, x, y), *xs)
        if defect:
            found = {"generators": [format_tree(g) for g in gs], "defect": format_element(defect)}
            break
    nonassoc.check(found is not None, {"searched": searched})
    if found:
        nonassoc.notes.append(f"witness {found['generators']}: {found['defect']}")
    out.append(nonassoc)
    return out


# -- qybe ---------------------------------------------------------------------------------------


def suite_qybe(cfg: RunConfig, rng: random.Random) -> List[PropertyResult]:
    out = []
    ctx = cfg.context(1, min(cfg.N, 3))
    zero = distortions.TwistSpec(ctx)
    red = PropertyResult("star_R with zero twist == shadow product", ctx.N, mode=cfg.mode)
    bil = PropertyResult("star_R bilinear", ctx.N, mode=cfg.mode)
    twist = distortions.twist_concat(ctx)
    for _ in range(max(20, cfg.trials // 10)):
        a, b, c = (random_element(rng, ctx, 2, 2) for _ in range(3))
        red.check(distortions.star_R(zero, a, b) == a * b, lambda: {"a": format_element(a), "b": format_element(b)})
        k = rng.choice([-2, -1, 2, 3])
        lhs = distortions.star_R(twist, a + b.scale(k), c)
        rhs = distortions.star_R(twist, a, c) + distortions.star_R(twist, b, c).scale(k)
        lhs2 = distortions.star_R(twist, c, a + b.scale(k))
        rhs2 = distortions.star_R(twist, c, a) + distortions.star_R(twist, c, b).scale(k)
        bil.check(lhs == rhs and lhs2 == rhs2, lambda: {"a": format_element(a), "b": format_element(b),
                                                         "c": format_element(c)})
    out += [red, bil]

    single = PropertyResult("concat twist on generators: h[g] h[g'] + h[g v g']", ctx.N, mode=cfg.mode)
    gens = enumerate_positive(1, ctx.N)
    for g, h in itertools.product(gens, repeat=2):
        x, y = ShadowElement.generator(ctx, g), ShadowElement.generator(ctx, h)
        single.check(distortions.star_R(twist, x, y) == x * y + shadow_word(ctx, [concat(g, h)]),
                     lambda: {"g": format_tree(g), "h": format_tree(h)})
    out.append(single)

    probes = distortions.default_probes(ctx, 2)
    lin = PropertyResult("QYBE residual linear in the probe", ctx.N, mode=cfg.mode)
    zres = PropertyResult("zero twist: residual == -L_{g v g'}", ctx.N, mode=cfg.mode)
    for g, h in itertools.product(gens, repeat=2):
        a, b = rng.choice(probes), rng.choice(probes)
        rep = distortions.qybe_residual(twist, g, h, [a, b, a + b.scale(2)])
        lin.check(rep.residuals[2] == rep.residuals[0] + rep.residuals[1].scale(2),
                  lambda: {"g": format_tree(g), "h": format_tree(h)})
        rep0 = distortions.qybe_residual(zero, g, h, probes)
        joined = canonicalize_tree(concat(g, h), ctx)
        ok = True
        for x, res in zip(probes, rep0.residuals):
            expect = ShadowElement.zero(ctx)
            if not joined.is_zero:
                expect = -(ShadowElement.generator(ctx, joined.tree) * x).scale(joined.coeff)
            ok = ok and res == expect
        zres.check(ok, lambda: {"g": format_tree(g), "h": format_tree(h)})
    out += [lin, zres]

    for label_, spec in (("symbolic", None), ("all-ones", Specialization.all_ones())):
        c2 = Context(1, 2, spec)
        r = distortions.twist_from_star_normal(c2)
        pr = distortions.default_probes(c2, 2)
        res = PropertyResult(f"twist from star_normal (N=2): QYBE residual vanishes, {label_}", 2,
                             mode="symbolic" if spec is None else "specialized", gating=False)
        for g, h in itertools.product(enumerate_positive(1, 2), repeat=2):
            rep = distortions.qybe_residual(r, g, h, pr)
            res.check(rep.all_zero, lambda: {"g": format_tree(g), "h": format_tree(h),
                                             "max_support": rep.max_support,
                                             "first": next(format_element(x) for x in rep.residuals if x)})
        out.append(res)
    return out


_SUITES: Dict[str, Callable[[RunConfig, random.Random], List[PropertyResult]]] = {
    "order": suite_order,
    "rank": suite_rank,
    "diamond": suite_diamond,
    "star-oracle": suite_star_oracle,
    "q-poisson": suite_q_poisson,
    "weyl": suite_weyl,
    "cocycle": suite_cocycle,
    "coequivariance": suite_coequivariance,
    "distortion": suite_distortion,
    "projector": suite_projector,
    "qybe": suite_qybe,
}


def run_suite(name: str, cfg: RunConfig) -> List[PropertyResult]:
    if name not in _SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return _SUITES[name](cfg, random.Random(cfg.seed))


def report(name: str, cfg: RunConfig, results: List[PropertyResult]) -> dict:
    return {
        "header": {"suite": name, "seed": cfg.seed, "d": cfg.d, "N": cfg.N, "q": cfg.q_label,
                   "trials": cfg.trials},
        "properties": [r.to_json() for r in results],
        "pass": all(r.passed for r in results if r.gating),
    }
