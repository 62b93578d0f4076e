"""Exhaustive and randomized verification harnesses.

A SearchSpec names a family of finite ambients, one registered checker,
how many summand sets each instance takes, subset filters, and a mode:
exhaustive (every tuple of carrier subsets, counted against a ceiling) or
random (seeded, a fixed number of trials).  Work is cut into fixed-size
items independent of the worker count, so two runs of the same spec agree
exactly no matter how many workers execute them; random instances are
derived from the seed and the trial index alone.

Violations embed the full ambient description and set encodings, so
`replay` can re-run the named checker on the exact instance with no other
state.
"""

import json
import multiprocessing
import random
import time
from dataclasses import dataclass, field

from .ambient import Ambient, ZMod, Product, make_ambient
from .errors import (
    CdlabError,
    CeilingExceeded,
    MalformedInstance,
    PreconditionViolated,
    SpecInvalid,
)
from .setops import DEFAULT_BUDGET, FinSet, is_commutative_generated
from . import theorems

DEFAULT_CEILING = 1 << 30
_CHUNK_EXHAUSTIVE = 1 << 16
_CHUNK_RANDOM = 4096


# -- checker registry ---------------------------------------------------------


@dataclass(frozen=True)
class Checker:
    """Adapter around one checker: fixed arity (None = any), the runner,
    the pass/fail reading of its verdict (None = not applicable, which is
    never a violation), and the JSON encoding of the verdict."""

    arity: object
    run: object      # (sets, budget) -> verdict object
    ok: object       # verdict -> bool | None
    encode: object   # (verdict, sets) -> dict


def _run_theorem(sets, budget):
    return theorems.check_theorem_main(sets[0], sets[1], budget)


def _run_prop13(sets, budget):
    return theorems.check_prop_equiv(sets[0], sets[1], budget)


def _run_udt(sets, budget):
    return theorems.check_cor_udt(sets[0], sets[1], budget)


def _run_hs(sets, budget):
    return theorems.check_cor_hs(sets[0], sets[1], budget)


def _run_zn(sets, budget):
    return theorems.check_cor_zn(sets[0], sets[1], budget)


def _run_weaker(sets, budget):
    return theorems.check_weaker_bound(sets[0], sets[1], budget)


def _ok_holds(r):
    return r.holds


def _encode_plain(v, sets):
    return v.to_json()


CHECKERS = {
    "theorem": Checker(
        2,
        _run_theorem,
        lambda v: v.disjunction_holds,
        lambda v, sets: v.to_json(sets[0].ambient),
    ),
    "prop13": Checker(2, _run_prop13, lambda v: v.agree, _encode_plain),
    "udt": Checker(2, _run_udt, _ok_holds, _encode_plain),
    "hs": Checker(2, _run_hs, _ok_holds, _encode_plain),
    "zn": Checker(2, _run_zn, _ok_holds, _encode_plain),
    "weaker": Checker(2, _run_weaker, _ok_holds, _encode_plain),
    "conjecture": Checker(None, theorems.conjecture_holds, _ok_holds, _encode_plain),
}

_ALIASES = {"theorem_main": "theorem"}

# checkers whose outcome is invariant under replacing (X, Y) by
# (X + y0, -y0 + Y) for a unit y0 of Y, which justifies pinning the
# identity into the last slot during exhaustive runs
TRANSLATION_INVARIANT = {"theorem", "udt", "weaker", "conjecture", "zn"}


def resolve_checker(name: str):
    name = _ALIASES.get(name, name)
    if name not in CHECKERS:
        raise SpecInvalid(f"unknown checker {name!r}")
    return name


# -- abelian group enumeration --------------------------------------------------


def _factorize(m: int) -> dict:
    out = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def _partitions(e: int, cap: int = None):
    """Partitions of e as descending tuples."""
    if cap is None:
        cap = e
    if e == 0:
        yield ()
        return
    for first in range(min(e, cap), 0, -1):
        for rest in _partitions(e - first, first):
            yield (first,) + rest


def enumerate_abelian_groups(max_order: int):
    """One ambient per isomorphism class of abelian groups of order up to
    max_order, as cyclic factors in ascending invariant-factor form."""
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    out = []
    for m in range(1, max_order + 1):
        classes = []
        if m == 1:
            classes.append((1,))
        else:
            primes = sorted(_factorize(m).items())
            choices = [list(_partitions(e)) for _, e in primes]
            for combo in _product_lists(choices):
                depth = max(len(part) for part in combo)
                invariant = []
                for i in range(depth):
                    f = 1
                    for (p, _), part in zip(primes, combo):
                        if i < len(part):
                            f *= p ** part[i]
                    invariant.append(f)
                classes.append(tuple(reversed(invariant)))  # ascending
        for factors in sorted(classes, key=lambda fs: (len(fs), fs)):
            if len(factors) == 1:
                out.append(ZMod(factors[0]))
            else:
                out.append(Product(ZMod(d) for d in factors))
    return out


def _product_lists(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for rest in _product_lists(lists[1:]):
            yield (head,) + rest


# -- search specification ---------------------------------------------------------


@dataclass
class SearchSpec:
    family: dict
    checker: str
    n_summands: int = 2
    subset_filter: dict = field(default_factory=dict)
    mode: dict = field(default_factory=lambda: {"kind": "exhaustive"})
    workers: int = 1
    budget: int = DEFAULT_BUDGET
    symmetry_reduction: bool = False
    ceiling: int = DEFAULT_CEILING

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "checker": self.checker,
            "n_summands": self.n_summands,
            "subset_filter": self.subset_filter,
            "mode": self.mode,
            "workers": self.workers,
            "budget": self.budget,
            "symmetry_reduction": self.symmetry_reduction,
            "ceiling": self.ceiling,
        }

    @staticmethod
    def from_json(doc: dict) -> "SearchSpec":
        if not isinstance(doc, dict):
            raise SpecInvalid(f"spec must be an object, got {doc!r}")
        known = {
            "family", "checker", "n_summands", "subset_filter", "mode",
            "workers", "budget", "symmetry_reduction", "ceiling",
        }
        unknown = set(doc) - known
        if unknown:
            raise SpecInvalid(f"unknown spec fields: {sorted(unknown)}")
        if "family" not in doc or "checker" not in doc:
            raise SpecInvalid("spec needs at least a family and a checker")
        return SearchSpec(
            family=doc["family"],
            checker=doc["checker"],
            n_summands=doc.get("n_summands", 2),
            subset_filter=doc.get("subset_filter", {}),
            mode=doc.get("mode", {"kind": "exhaustive"}),
            workers=doc.get("workers", 1),
            budget=doc.get("budget", DEFAULT_BUDGET),
            symmetry_reduction=doc.get("symmetry_reduction", False),
            ceiling=doc.get("ceiling", DEFAULT_CEILING),
        )


def family_ambients(family: dict):
    if not isinstance(family, dict) or "kind" not in family:
        raise SpecInvalid(f"malformed ambient family: {family!r}")
    kind = family["kind"]
    if kind == "zmod_range":
        lo, hi = family.get("lo"), family.get("hi")
        if not (isinstance(lo, int) and isinstance(hi, int) and 1 <= lo <= hi):
            raise SpecInvalid("zmod_range needs integers 1 <= lo <= hi")
        ambients = [ZMod(n) for n in range(lo, hi + 1)]
    elif kind == "abelian_up_to_order":
        n = family.get("max_order")
        if not isinstance(n, int) or n < 1:
            raise SpecInvalid("abelian_up_to_order needs a positive max_order")
        ambients = enumerate_abelian_groups(n)
    elif kind == "explicit":
        descs = family.get("ambients")
        if not isinstance(descs, list) or not descs:
            raise SpecInvalid("explicit family needs a nonempty ambient list")
        try:
            ambients = [make_ambient(d) for d in descs]
        except CdlabError as exc:
            raise SpecInvalid(f"bad ambient in family: {exc}") from exc
    else:
        raise SpecInvalid(f"unknown family kind {kind!r}")
    for a in ambients:
        if a.carrier_size is None:
            raise SpecInvalid("search families must have finite carriers")
    return ambients


_FILTER_KEYS = {"nonempty", "contains_identity", "commutative_generated", "max_size"}


def _validate_spec(spec: SearchSpec):
    name = resolve_checker(spec.checker)
    arity = CHECKERS[name].arity
    if spec.n_summands < 1:
        raise SpecInvalid("n_summands must be at least 1")
    if arity is not None and spec.n_summands != arity:
        raise SpecInvalid(
            f"checker {name!r} takes {arity} sets, spec asked for {spec.n_summands}"
        )
    if not isinstance(spec.subset_filter, dict) or set(spec.subset_filter) - _FILTER_KEYS:
        raise SpecInvalid(f"subset_filter keys must be among {sorted(_FILTER_KEYS)}")
    if spec.workers < 1:
        raise SpecInvalid("workers must be at least 1")
    mode = spec.mode
    if not isinstance(mode, dict) or mode.get("kind") not in ("exhaustive", "random"):
        raise SpecInvalid("mode must be exhaustive or random")
    if mode["kind"] == "random":
        if not isinstance(mode.get("seed"), int):
            raise SpecInvalid("random mode requires an integer seed")
        if not isinstance(mode.get("trials"), int) or mode["trials"] < 1:
            raise SpecInvalid("random mode requires a positive trial count")
    ambients = family_ambients(spec.family)
    if spec.symmetry_reduction:
        if name not in TRANSLATION_INVARIANT:
            raise SpecInvalid(f"checker {name!r} is not marked translation invariant")
        for a in ambients:
            if not (a.all_units and a.axioms.has_identity):
                raise SpecInvalid("symmetry reduction needs group ambients")
    return name, ambients


# -- instance geometry -------------------------------------------------------------


def _insert_identity_bit(j: int, pos: int) -> int:
    low = j & ((1 << pos) - 1)
    high = (j >> pos) << (pos + 1)
    return high | low | (1 << pos)


class _Space:
    """Odometer over subset-mask tuples for one ambient; slot 0 varies
    fastest.  With symmetry reduction the last slot runs over the empty
    mask plus the masks containing the identity."""

    def __init__(self, ambient: Ambient, n_summands: int, reduced: bool):
        self.ambient = ambient
        self.n = ambient.carrier_size
        self.reduced = reduced
        self.id_index = (
            ambient.index_of(ambient.identity) if ambient.axioms.has_identity else None
        )
        full = 1 << self.n
        self.bases = [full] * n_summands
        if reduced:
            self.bases[-1] = (1 << (self.n - 1)) + 1
        self.total = 1
        for b in self.bases:
            self.total *= b

    def masks_at(self, offset: int):
        masks = []
        for slot, base in enumerate(self.bases):
            offset, digit = divmod(offset, base)
            masks.append(self._digit_to_mask(slot, digit))
        return masks

    def _digit_to_mask(self, slot: int, digit: int) -> int:
        if self.reduced and slot == len(self.bases) - 1:
            if digit == 0:
                return 0
            return _insert_identity_bit(digit - 1, self.id_index)
        return digit


# -- worker ------------------------------------------------------------------------


class _Context:
    def __init__(self, spec: SearchSpec):
        self.spec = spec
        self.checker_name, self.ambients = _validate_spec(spec)
        self.checker = CHECKERS[self.checker_name]
        self.filters = spec.subset_filter
        self.f_nonempty = bool(spec.subset_filter.get("nonempty"))
        self.f_max_size = spec.subset_filter.get("max_size")
        self.f_identity = bool(spec.subset_filter.get("contains_identity"))
        self.f_commutative = bool(spec.subset_filter.get("commutative_generated"))
        self.spaces = None
        self.offsets = None
        if spec.mode["kind"] == "exhaustive":
            self.spaces = [
                _Space(a, spec.n_summands, spec.symmetry_reduction)
                for a in self.ambients
            ]
            self.offsets = []
            acc = 0
            for s in self.spaces:
                self.offsets.append(acc)
                acc += s.total
            self.total = acc
        else:
            self.total = spec.mode["trials"]
        self._finsets = [dict() for _ in self.ambients]

    def finset(self, ai: int, mask: int) -> FinSet:
        cache = self._finsets[ai]
        s = cache.get(mask)
        if s is None:
            s = FinSet.from_mask(self.ambients[ai], mask)
            cache[mask] = s
        return s

    def locate(self, flat: int):
        for ai in range(len(self.spaces) - 1, -1, -1):
            if flat >= self.offsets[ai]:
                return ai, flat - self.offsets[ai]
        raise IndexError(flat)


_CTX_CACHE: dict = {}


def _context(spec_json: str) -> _Context:
    ctx = _CTX_CACHE.get(spec_json)
    if ctx is None:
        ctx = _Context(SearchSpec.from_json(json.loads(spec_json)))
        _CTX_CACHE[spec_json] = ctx
    return ctx


def _mask_passes(ctx: _Context, ai: int, slot: int, mask: int) -> bool:
    if ctx.f_nonempty and mask == 0:
        return False
    if ctx.f_max_size is not None and mask.bit_count() > ctx.f_max_size:
        return False
    if slot == ctx.spec.n_summands - 1:
        if ctx.f_identity:
            a = ctx.ambients[ai]
            if not a.axioms.has_identity:
                return False
            if not (mask >> a.index_of(a.identity)) & 1:
                return False
        if ctx.f_commutative and not is_commutative_generated(ctx.finset(ai, mask)):
            return False
    return True


def _encode_instance(ctx: _Context, ai: int, sets, verdict: dict) -> dict:
    return {
        "ambient": ctx.ambients[ai].describe(),
        "checker": ctx.checker_name,
        "sets": [s.to_json() for s in sets],
        "budget": ctx.spec.budget,
        "verdict": verdict,
    }


def _run_exhaustive_range(ctx: _Context, start: int, end: int):
    checked = skipped = 0
    violations = []
    chk = ctx.checker
    run, ok_of = chk.run, chk.ok
    budget = ctx.spec.budget
    nonempty = ctx.f_nonempty
    plain_filter = (
        ctx.f_max_size is None and not ctx.f_identity and not ctx.f_commutative
    )
    flat = start
    while flat < end:
        ai, offset = ctx.locate(flat)
        space = ctx.spaces[ai]
        base_flat = ctx.offsets[ai]
        stop = min(end, base_flat + space.total) - base_flat
        bases = space.bases
        last = len(bases) - 1
        reduced = space.reduced
        to_mask = space._digit_to_mask
        cache = ctx._finsets[ai]
        ambient = ctx.ambients[ai]
        from_mask = FinSet.from_mask
        for off in range(offset, stop):
            masks = []
            o = off
            for base in bases:
                o, digit = divmod(o, base)
                masks.append(digit)
            if reduced:
                masks[last] = to_mask(last, masks[last])
            if plain_filter:
                if nonempty and 0 in masks:
                    skipped += 1
                    continue
            else:
                passed = True
                for slot, m in enumerate(masks):
                    if not _mask_passes(ctx, ai, slot, m):
                        passed = False
                        break
                if not passed:
                    skipped += 1
                    continue
            sets = []
            for m in masks:
                s = cache.get(m)
                if s is None:
                    s = from_mask(ambient, m)
                    cache[m] = s
                sets.append(s)
            try:
                verdict = run(sets, budget)
            except PreconditionViolated:
                skipped += 1
                continue
            checked += 1
            if ok_of(verdict) is False:
                violations.append(
                    _encode_instance(ctx, ai, sets, chk.encode(verdict, sets))
                )
        flat = base_flat + stop
    return checked, skipped, violations


def _sample_instance(ctx: _Context, index: int):
    rng = random.Random(f"{ctx.spec.mode['seed']}:{index}")
    ai = rng.randrange(len(ctx.ambients))
    n = ctx.ambients[ai].carrier_size
    masks = []
    for slot in range(ctx.spec.n_summands):
        for _ in range(100000):
            m = rng.getrandbits(n)
            if _mask_passes(ctx, ai, slot, m):
                masks.append(m)
                break
        else:
            raise SpecInvalid("subset filters rejected 100000 straight samples")
    return ai, masks


def _run_random_range(ctx: _Context, start: int, end: int):
    checked = skipped = 0
    violations = []
    chk = ctx.checker
    budget = ctx.spec.budget
    for index in range(start, end):
        ai, masks = _sample_instance(ctx, index)
        sets = [ctx.finset(ai, m) for m in masks]
        try:
            verdict = chk.run(sets, budget)
        except PreconditionViolated:
            skipped += 1
            continue
        checked += 1
        if chk.ok(verdict) is False:
            violations.append(
                _encode_instance(ctx, ai, sets, chk.encode(verdict, sets))
            )
    return checked, skipped, violations


def _run_item(payload):
    spec_json, item, start, end = payload
    ctx = _context(spec_json)
    if ctx.spec.mode["kind"] == "exhaustive":
        checked, skipped, violations = _run_exhaustive_range(ctx, start, end)
    else:
        checked, skipped, violations = _run_random_range(ctx, start, end)
    return {
        "item": item,
        "checked": checked,
        "skipped": skipped,
        "violations": violations,
    }


# -- driver -------------------------------------------------------------------------


@dataclass
class SearchReport:
    spec: dict
    instances_checked: int
    instances_skipped: int
    violations: list
    per_item: list
    workers: int
    seed: object
    elapsed: float

    def to_json(self) -> dict:
        doc = self.stable_json()
        doc["elapsed"] = self.elapsed
        return doc

    def stable_json(self) -> dict:
        """Everything except timing; equal across reruns and worker counts."""
        return {
            "spec": self.spec,
            "instances_checked": self.instances_checked,
            "instances_skipped": self.instances_skipped,
            "violations": self.violations,
            "per_item": self.per_item,
            "workers": self.workers,
            "seed": self.seed,
        }


def run_search(spec: SearchSpec) -> SearchReport:
    """Partition the instance space into fixed-size items, run them on the
    requested number of workers, and merge the results in item order."""
    started = time.monotonic()
    name, _ = _validate_spec(spec)
    spec_json = json.dumps(spec.to_json(), sort_keys=True)
    ctx = _context(spec_json)
    if spec.mode["kind"] == "exhaustive":
        if ctx.total > spec.ceiling:
            raise CeilingExceeded(
                f"{ctx.total} instances exceed the ceiling {spec.ceiling}"
            )
        chunk = _CHUNK_EXHAUSTIVE
    else:
        chunk = _CHUNK_RANDOM
    payloads = []
    start = 0
    item = 0
    while start < ctx.total:
        end = min(start + chunk, ctx.total)
        payloads.append((spec_json, item, start, end))
        item += 1
        start = end
    if spec.workers == 1 or len(payloads) <= 1:
        results = [_run_item(p) for p in payloads]
    else:
        mp = multiprocessing.get_context("fork")
        with mp.Pool(spec.workers) as pool:
            results = pool.map(_run_item, payloads)
    violations = []
    checked = skipped = 0
    per_item = []
    for res in results:
        checked += res["checked"]
        skipped += res["skipped"]
        violations.extend(res["violations"])
        per_item.append(
            {
                "item": res["item"],
                "checked": res["checked"],
                "skipped": res["skipped"],
                "violations": len(res["violations"]),
            }
        )
    return SearchReport(
        spec=spec.to_json(),
        instances_checked=checked,
        instances_skipped=skipped,
        violations=violations,
        per_item=per_item,
        workers=spec.workers,
        seed=spec.mode.get("seed"),
        elapsed=time.monotonic() - started,
    )


def replay(instance: dict):
    """Re-run the named checker on a recorded instance encoding.

    Returns (ok, verdict); the verdict serializes byte-identically to the
    recorded one because every checker is a deterministic pure function.
    """
    if not isinstance(instance, dict):
        raise MalformedInstance(f"instance must be an object, got {instance!r}")
    try:
        ambient = make_ambient(instance["ambient"])
        name = resolve_checker(instance["checker"])
        chk = CHECKERS[name]
        raw_sets = instance["sets"]
        budget = instance.get("budget", DEFAULT_BUDGET)
        if not isinstance(raw_sets, list) or not raw_sets:
            raise MalformedInstance("instance has no sets")
        if chk.arity is not None and len(raw_sets) != chk.arity:
            raise MalformedInstance(f"checker {name!r} takes {chk.arity} sets")
        sets = [FinSet.from_json(ambient, s) for s in raw_sets]
    except MalformedInstance:
        raise
    except (CdlabError, KeyError, TypeError, ValueError) as exc:
        raise MalformedInstance(f"cannot decode instance: {exc}") from exc
    verdict = chk.run(sets, budget)
    return chk.ok(verdict), chk.encode(verdict, sets)
