"""The verification battery: configuration, independent checks, and the report.

Every check gets its own RNG seeded from the suite seed and the check id, so
results do not depend on scheduling. Records are sorted by id before the
report is written.
"""

from __future__ import annotations

import os
import random
import threading
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bolicity import (
    assign_midpoints,
    b1_scan,
    b2_check,
    four_point_check,
    weak_geodesic_check,
)
from .formats import ConfigError, group_from_spec, load_json, parse_rational, space_from_spec, write_json
from .groups import (
    BUILTIN_GENERATORS,
    DEFAULT_CLOSURE_CAP,
    DEFAULT_SUBGROUP_CAP,
    CapExceeded,
    FiniteGroup,
    all_subgroups,
    lambda_ring,
)
from .hnn import (
    DEFAULT_BALL_CAP,
    PresentationError,
    ball,
    build_a1,
    canonicalize,
    conjugacy_search,
    element_prime_powers,
    embed,
    letter_code,
    relation_failures,
    sabotage_psi,
    serialize_word,
    torsion_survey,
    verify_binate,
    verify_isomorphisms,
)
from .reps import (
    ArtinAlarm,
    artin_decompose,
    kaplansky_rep,
    natural_action,
    permutation_character,
    regular_character,
    sigma,
    trivial_character,
)
from .ring import (
    GroupRingElement,
    GroupRingMatrix,
    augmentation,
    bass_support_check,
    hs,
    hs_rank,
    kaplansky,
)

PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"

DEFAULT_METRICS = [
    {"label": "tree", "kind": "random_tree", "n": 10, "delta": 0, "r": "diameter",
     "expect": {"four_point": True, "b1_R_min_below_r": True}},
    {"label": "cycle4", "kind": "cycle", "n": 4, "delta": 0, "r": 4,
     "expect": {"four_point": False, "b1_R_min_zero": False, "b2_ii": False}},
    {"label": "line11", "kind": "line", "n": 11, "delta": 0, "r": "diameter",
     "expect": {"geodesic_min_delta": "1/2"}},
    {"label": "plane25", "kind": "euclidean_sample", "n": 25, "delta": 0.5, "r": "diameter",
     "expect": {"four_point": True, "b2_at_delta_i": True}},
]

_CONFIG_KEYS = {
    "groups", "radius", "n_max", "cap_order", "subgroup_cap", "ball_cap", "metrics",
    "seed", "samples", "idempotents", "tol", "sabotage_psi", "timings",
}


@dataclass
class SuiteConfig:
    groups: list = field(default_factory=lambda: ["C2", "S3"])
    radius: int = 2
    n_max: int = 24
    cap_order: int = DEFAULT_CLOSURE_CAP
    subgroup_cap: int = DEFAULT_SUBGROUP_CAP
    ball_cap: int = DEFAULT_BALL_CAP
    metrics: list = field(default_factory=lambda: [dict(m) for m in DEFAULT_METRICS])
    seed: int = 0
    samples: int = 50
    idempotents: int = 10
    tol: float = 1e-9
    sabotage_psi: bool = False
    timings: bool = False

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("timings")
        return d


def _want_int(d: dict, key: str, minimum: int) -> None:
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ConfigError(f"field '{key}': expected an integer >= {minimum}, got {v!r}")


def parse_inputs(config=None, **overrides) -> SuiteConfig:
    """Build a validated SuiteConfig from a JSON path or dict plus flag overrides."""
    if config is None:
        raw = {}
    elif isinstance(config, (str, Path)):
        raw = load_json(config)
    else:
        raw = dict(config)
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be an object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"config: unknown field(s) {sorted(unknown)}")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    cfg = SuiteConfig(**raw)
    d = asdict(cfg)
    _want_int(d, "radius", 0)
    _want_int(d, "seed", 0)
    for key in ("n_max", "cap_order", "subgroup_cap", "ball_cap", "samples", "idempotents"):
        _want_int(d, key, 1)
    if not isinstance(cfg.tol, (int, float)) or cfg.tol <= 0:
        raise ConfigError(f"field 'tol': expected a positive number, got {cfg.tol!r}")
    if not isinstance(cfg.groups, list):
        raise ConfigError("field 'groups': expected a list")
    for k, g in enumerate(cfg.groups):
        if isinstance(g, str):
            if g not in BUILTIN_GENERATORS:
                raise ConfigError(f"groups[{k}]: unknown built-in {g!r}")
        else:
            try:
                group_from_spec(g, cfg.cap_order, where=f"groups[{k}]")
            except CapExceeded:
                pass  # reported as unknown when the suite runs
    if not isinstance(cfg.metrics, list):
        raise ConfigError("field 'metrics': expected a list")
    labels = set()
    for k, m in enumerate(cfg.metrics):
        if not isinstance(m, dict):
            raise ConfigError(f"metrics[{k}]: expected an object")
        label = m.get("label", f"space{k}")
        if label in labels:
            raise ConfigError(f"metrics[{k}].label: duplicate {label!r}")
        labels.add(label)
        space_from_spec(m, cfg.tol, seed=cfg.seed, cap=cfg.cap_order, where=f"metrics[{k}]")
    return cfg


# -- report -------------------------------------------------------------------------


@dataclass
class CheckRecord:
    id: str
    anchor: str
    status: str
    witness: object = None
    cap: int | None = None
    seconds: float | None = None

    def to_dict(self) -> dict:
        d = {"id": self.id, "anchor": self.anchor, "status": self.status, "witness": self.witness}
        if self.cap is not None:
            d["cap"] = self.cap
        if self.seconds is not None:
            d["seconds"] = round(self.seconds, 3)
        return d


@dataclass
class SuiteReport:
    checks: list = field(default_factory=list)
    version: str | None = None
    config: dict | None = None

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, UNKNOWN: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def exit_code(self) -> int:
        return 1 if any(c.status == FAIL for c in self.checks) else 0

    def to_dict(self) -> dict:
        d = {"checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.id)]}
        if self.version is not None:
            d["version"] = self.version
            d["tool"] = "grouplab"
        if self.config is not None:
            d["config"] = self.config
        if self.version is not None or self.config is not None:
            d["summary"] = self.counts()
        return d


def emit_report(report: SuiteReport, path=None) -> str:
    return write_json(report.to_dict(), path)


# -- random inputs ------------------------------------------------------------------


def random_element(G, rng: random.Random, support: int = 4) -> GroupRingElement:
    coeffs = {}
    for _ in range(rng.randint(1, support)):
        coeffs[rng.randrange(G.order)] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return GroupRingElement(G, coeffs)


def random_unit_pair(G, n: int, rng: random.Random) -> tuple[GroupRingMatrix, GroupRingMatrix]:
    """A product of elementary and monomial matrices together with its inverse."""
    U = V = GroupRingMatrix.identity(G, n)
    for _ in range(rng.randint(1, 3)):
        if n > 1 and rng.random() < 0.6:
            i, j = rng.sample(range(n), 2)
            r = random_element(G, rng, 2)
            E = GroupRingMatrix.elementary(G, n, i, j, r)
            Einv = GroupRingMatrix.elementary(G, n, i, j, -r)
        else:
            gs = [rng.randrange(G.order) for _ in range(n)]
            E = GroupRingMatrix.diagonal(G, [GroupRingElement.basis(G, g) for g in gs])
            Einv = GroupRingMatrix.diagonal(G, [GroupRingElement.basis(G, G.inv(g)) for g in gs])
        U, V = U @ E, Einv @ V
    return U, V


def random_idempotent(G: FiniteGroup, rng: random.Random, subgroups, max_n: int = 4):
    """U D U^-1 with D block diagonal in averaging idempotents, 1 and 0."""
    n = rng.randint(1, max_n)
    diag = []
    for _ in range(n):
        kind = rng.choice(("avg", "one", "zero"))
        if kind == "avg":
            diag.append(GroupRingElement.averaging(G, rng.choice(subgroups)))
        elif kind == "one":
            diag.append(GroupRingElement.one(G))
        else:
            diag.append(GroupRingElement.zero(G))
    D = GroupRingMatrix.diagonal(G, diag)
    U, V = random_unit_pair(G, n, rng)
    return U @ D @ V, n


# -- checks -------------------------------------------------------------------------


class _Skip(Exception):
    def __init__(self, status: str, witness, cap: int | None = None):
        self.status, self.witness, self.cap = status, witness, cap


@dataclass
class _GroupContext:
    label: str
    group: FiniteGroup | None
    cfg: SuiteConfig
    error: _Skip | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock)
    _pres: object = None
    _ball: object = None

    def pres(self):
        with self._lock:
            if self._pres is None:
                try:
                    p = build_a1(self.group, cap=self.cfg.cap_order, subgroup_cap=self.cfg.subgroup_cap,
                                 verify=not self.cfg.sabotage_psi)
                except CapExceeded as exc:
                    self._pres = _Skip(UNKNOWN, {"reason": str(exc)}, exc.cap)
                except PresentationError as exc:
                    self._pres = _Skip(FAIL, {"reason": str(exc)})
                else:
                    self._pres = sabotage_psi(p) if self.cfg.sabotage_psi else p
            if isinstance(self._pres, _Skip):
                raise self._pres
            return self._pres

    def ball(self):
        pres = self.pres()
        with self._lock:
            if self._ball is None:
                try:
                    self._ball = ball(pres, self.cfg.radius, cap=self.cfg.ball_cap)
                except CapExceeded as exc:
                    self._ball = _Skip(UNKNOWN, {"reason": str(exc)}, exc.cap)
            if isinstance(self._ball, _Skip):
                raise self._ball
            return self._ball


def check_trace_identities(ctx, rng):
    G = ctx.group
    for k in range(ctx.cfg.samples):
        a, b = random_element(G, rng), random_element(G, rng)
        ab, ba = a * b, b * a
        comm = hs(ab - ba)
        if comm.values or kaplansky(ab) != kaplansky(ba) or augmentation(ab) != augmentation(ba):
            return FAIL, {"sample": k, "a": _elt(a), "b": _elt(b), "hs_commutator": comm.values}
    return PASS, {"pairs": ctx.cfg.samples}


def _elt(a: GroupRingElement):
    return [[g, c] for g, c in sorted(a.coeffs.items())]


def check_hs_rank(ctx, rng):
    G = ctx.group
    # class sizes by direct orbit enumeration, independent of the stored partition
    orbit_size = {}
    for x in G.elements():
        orbit_size[x] = len({G.conj(g, x) for g in G.elements()})
    expected = {G.class_key(x): Fraction(orbit_size[x], G.order) for x in G.elements()}
    e = GroupRingMatrix(G, [[GroupRingElement.averaging(G)]])
    rank = hs_rank(e)
    if dict(rank.values) != expected:
        return FAIL, {"hs_rank": rank.values, "expected": expected}
    for k in range(ctx.cfg.idempotents):
        n = rng.randint(1, 3)
        M = GroupRingMatrix.diagonal(G, [GroupRingElement.averaging(G)] + [GroupRingElement.zero(G)] * (n - 1))
        U, V = random_unit_pair(G, n, rng)
        conj = hs_rank(U @ M @ V)
        if conj != rank:
            return FAIL, {"conjugation": k, "hs_rank": conj.values, "expected": expected}
    return PASS, {"hs_rank": expected, "conjugations": ctx.cfg.idempotents}


def check_augmentation(ctx, rng):
    G = ctx.group
    subs = all_subgroups(G, cap=ctx.cfg.subgroup_cap)
    for k in range(ctx.cfg.idempotents):
        M, n = random_idempotent(G, rng, subs)
        eps = augmentation(M.trace())
        if eps.denominator != 1 or not 0 <= eps <= n:
            return FAIL, {"sample": k, "augmentation": eps, "n": n}
        verdict = bass_support_check(M)
        if verdict is not True:
            return FAIL, {"sample": k, "bass_support": verdict}
    return PASS, {"idempotents": ctx.cfg.idempotents}


def check_isomorphisms(ctx, rng):
    problems = verify_isomorphisms(ctx.pres())
    return (FAIL, {"problems": problems[:5]}) if problems else (PASS, {"letters": len(ctx.pres().letters)})


def check_relations(ctx, rng):
    pres = ctx.pres()
    bad = relation_failures(pres)
    if bad:
        return FAIL, {"failures": len(bad), "first": bad[0]}
    total = sum(L.F.order * L.C.order for L in pres.letters)
    return PASS, {"relations": total}


def check_normal_form(ctx, rng):
    pres = ctx.pres()
    sq = pres.sq
    count = 0
    for L in pres.letters:
        for f in L.F:
            w = (0, letter_code(L.index, 1), sq.left(f), letter_code(L.index, -1), 0)
            got = canonicalize(pres, w)
            count += 1
            if got.syllables != (sq.left(f),):
                return FAIL, {"letter": L.index, "f": f, "word": serialize_word(w), "canonical": got.tokens()}
    return PASS, {"words": count}


def check_binate(ctx, rng):
    pres = ctx.pres()
    count = 0
    for L in pres.letters:
        for h in L.C:
            count += 1
            if not verify_binate(pres, L.index, h):
                return FAIL, {"letter": L.index, "h": h}
    return PASS, {"pairs": count}


def check_conjugacy(ctx, rng):
    pres = ctx.pres()
    H = ctx.group
    words = ctx.ball()
    reps = [c[0] for c in H.partition.classes]
    unknown = []
    no_count = 0
    for i, a in enumerate(reps):
        for b in reps[i + 1:]:
            ans = conjugacy_search(pres, embed(pres, a), embed(pres, b), ctx.cfg.radius, ctx.cfg.n_max, words)
            if ans.status == "yes":
                return FAIL, {"pair": [a, b], "conjugator": ans.witness}
            no_count += ans.status == "no"
    # positive control: conjugate pairs of H must be found (or left unknown)
    for cls in H.partition.classes:
        for b in cls[1:]:
            ans = conjugacy_search(pres, embed(pres, cls[0]), embed(pres, b), ctx.cfg.radius, ctx.cfg.n_max, words)
            if ans.status == "no":
                return FAIL, {"pair": [cls[0], b], "certificate": ans.witness, "reason": "conjugate in H"}
            if ans.status == "unknown":
                unknown.append([cls[0], b])
    w = {"radius": ctx.cfg.radius, "ball": len(words), "non_conjugate_certified": no_count}
    if unknown:
        return UNKNOWN, {**w, "undecided_conjugate_pairs": unknown[:5]}
    return PASS, w


def check_torsion(ctx, rng):
    found = torsion_survey(ctx.pres(), ctx.cfg.radius, ctx.cfg.n_max, ctx.ball())
    allowed = element_prime_powers(ctx.group)
    extra = found - allowed
    if extra:
        return FAIL, {"found": found, "allowed": allowed, "extra": extra}
    return PASS, {"found": found, "allowed": allowed, "radius": ctx.cfg.radius}


def _characters(G: FiniteGroup):
    chars = {"trivial": trivial_character(G), "regular": regular_character(G)}
    try:
        chars["natural"] = permutation_character(G, natural_action(G))
    except Exception:
        pass
    return chars


def check_artin(ctx, rng):
    G = ctx.group
    out = {}
    for name, chi in _characters(G).items():
        try:
            dec = artin_decompose(G, chi)
        except ArtinAlarm as exc:
            return FAIL, {"character": name, "alarm": str(exc)}
        bad = [t.coeff for t in dec.terms if G.order % t.coeff.denominator]
        if not dec.verified or bad:
            return FAIL, {"character": name, "verified": dec.verified, "bad_denominators": bad}
        out[name] = [{"subgroup_gens": t.generators(), "j": t.j, "coeff": t.coeff} for t in dec.terms]
    return PASS, out


def check_kappa(ctx, rng):
    G = ctx.group
    values = {}
    for name, chi in _characters(G).items():
        k = kaplansky_rep(G, chi)
        values[name] = k
        if (k * G.order).denominator != 1:
            return FAIL, {"character": name, "kappa": k}
    subs = all_subgroups(G, cap=ctx.cfg.subgroup_cap)
    lam = lambda_ring(subs)
    for s in range(ctx.cfg.samples):
        entries = []
        for _ in range(rng.randint(0, 4)):
            S = rng.choice(subs).as_group
            chi = rng.choice((trivial_character, regular_character))(S)
            entries.append((S, chi * rng.randint(-3, 3)))
        total, member = sigma(entries, lam)
        if not member:
            return FAIL, {"sample": s, "sigma": total, "primes": sorted(lam.primes)}
    return PASS, {"kappa": values, "sigma_samples": ctx.cfg.samples, "primes": sorted(lam.primes)}


GROUP_CHECKS = [
    ("trace_identities", "trace identities vanish on commutators", check_trace_identities, False),
    ("hs_rank", "HS rank of the averaging idempotent", check_hs_rank, False),
    ("augmentation", "augmentation of idempotents is an integer", check_augmentation, False),
    ("a1.isomorphisms", "associated subgroup maps are isomorphisms", check_isomorphisms, True),
    ("a1.relations", "defining relations reduce to the identity", check_relations, True),
    ("a1.normal_form", "stable letters fix (f,1) for f in F", check_normal_form, True),
    ("a1.binate", "commutator [t,(1,h)] equals (h,1)", check_binate, True),
    ("a1.conjugacy", "non-conjugate elements stay non-conjugate", check_conjugacy, True),
    ("a1.torsion", "finite orders come from the base", check_torsion, True),
    ("artin", "characters are combinations of cyclic inductions", check_artin, False),
    ("kappa", "Kaplansky image lies in Lambda", check_kappa, False),
]


def _metric_check(spec: dict, cfg: SuiteConfig):
    def run(ctx, rng):
        X = space_from_spec(spec, cfg.tol, seed=cfg.seed, cap=cfg.cap_order)
        diam = X.diameter()
        r = diam if spec.get("r", "diameter") == "diameter" else parse_rational(spec["r"], "r")
        delta = parse_rational(spec.get("delta", 0), "delta")
        if not X.exact:
            r, delta = float(r), float(delta)
        obs, ok = {"n": X.n, "regime": X.regime, "source": X.source}, True
        for key, want in sorted(spec.get("expect", {}).items()):
            if key == "four_point":
                res = four_point_check(X, cfg.tol)
                got, obs[key] = res.passed, res.to_dict()
            elif key in ("b1_R_min_zero", "b1_R_min_below_r"):
                res = b1_scan(X, delta, r)
                obs["b1"] = res.to_dict()
                got = res.R_min == 0 if key == "b1_R_min_zero" else (res.R_min == 0 or res.R_min < r)
            elif key == "geodesic_min_delta":
                res = weak_geodesic_check(X, delta)
                obs["geodesic"] = res.to_dict()
                target = parse_rational(want, key)
                got = res.min_delta == target if X.exact else abs(res.min_delta - float(target)) <= cfg.tol
                want = True
            elif key in ("b2_at_delta_i", "b2_pass", "b2_ii"):
                m = assign_midpoints(X)
                res = b2_check(X, m, m.delta_i if key == "b2_at_delta_i" else delta)
                obs["b2"] = res.to_dict()
                got = res.passed_ii if key == "b2_ii" else res.passed
            else:
                raise ConfigError(f"unknown expectation {key!r}")
            if got != want:
                ok = False
                obs.setdefault("mismatch", []).append(key)
        return (PASS if ok else FAIL), obs

    return run


def _jobs(cfg: SuiteConfig):
    jobs = []
    for k, spec in enumerate(cfg.groups):
        label = spec if isinstance(spec, str) else spec.get("name") or f"group{k}"
        try:
            G = group_from_spec(spec, cfg.cap_order, where=f"groups[{k}]")
            ctx = _GroupContext(label, G, cfg)
        except CapExceeded as exc:
            ctx = _GroupContext(label, None, cfg, _Skip(UNKNOWN, {"reason": str(exc)}, exc.cap))
        for name, anchor, fn, _ in GROUP_CHECKS:
            jobs.append((f"{label}.{name}", anchor, fn, ctx))
    for k, spec in enumerate(cfg.metrics):
        label = spec.get("label", f"space{k}")
        jobs.append((f"metric.{label}", "metric convexity controls", _metric_check(spec, cfg), None))
    return jobs


def _run_job(job, cfg: SuiteConfig) -> CheckRecord:
    cid, anchor, fn, ctx = job
    rng = random.Random(zlib.crc32(f"{cfg.seed}:{cid}".encode()))
    start = time.perf_counter()
    cap = None
    try:
        if ctx is not None and ctx.error is not None:
            raise ctx.error
        status, witness = fn(ctx, rng)
    except _Skip as s:
        status, witness, cap = s.status, s.witness, s.cap
    except CapExceeded as exc:
        status, witness, cap = UNKNOWN, {"reason": str(exc)}, exc.cap
    except Exception as exc:  # a crashing check is a failed check
        status, witness = FAIL, {"error": f"{type(exc).__name__}: {exc}"}
    seconds = time.perf_counter() - start if cfg.timings else None
    return CheckRecord(cid, anchor, status, witness, cap, seconds)


def worker_count() -> int:
    raw = os.environ.get("GROUPLAB_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"GROUPLAB_THREADS: expected a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"GROUPLAB_THREADS: expected a positive integer, got {raw!r}")
    return n


def run_suite(cfg: SuiteConfig, threads: int | None = None) -> SuiteReport:
    jobs = _jobs(cfg)
    threads = threads or worker_count()
    if threads == 1:
        records = [_run_job(j, cfg) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda j: _run_job(j, cfg), jobs))
    records.sort(key=lambda c: c.id)
    return SuiteReport(records, __version__, cfg.echo())
