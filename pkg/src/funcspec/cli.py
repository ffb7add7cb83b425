"""Command-line interface: ``funcspec <command> [config.json] [flags]``.

Every command prints one JSON report to standard output with a fixed key
order. Exit status: 0 pass, 1 verification failure, 2 input error (with a
diagnostic on standard error).
"""

from __future__ import annotations

import argparse
import json
import subprocess
import sys
from typing import Any, Callable

from .algebra import RingElem
from .config import (
    build_base,
    build_funcring,
    build_M,
    function_from_x,
    load_config,
    require,
    with_functions,
)
from .constructions import (
    binary_combiner_normform,
    combine_finitecase,
    combine_notalgcl,
    finitecase_form,
    unit_one_lift,
    unit_one_polynomial,
)
from .errors import CheckFailed, FuncSpecError, InputError, TooLarge
from .funcring import FnValue, IdealDescriptor, MDescriptor, image_ring, preimage
from .intpoly import (
    IVPoly,
    PadicApprox,
    chabert_member,
    divide_by_constant,
    pseudoprincipal_Z,
    rep_containment_check,
    required_precision,
)
from .normform import NForm, norm_form
from .setfilters import (
    SetFamily,
    UltrafilterFin,
    fip_filter,
    indices,
    mf_contains,
    refinements,
    zero_locus_family,
)
from .spectrum import base_ring_model, classify_dichotomy, ultraproduct_principal, verify_finitethm
from .verify import CRITERIA, MAX_LISTED_FAILURES, run_criterion

COMMANDS = (
    "normform", "combine", "unitlift", "zerolocus", "filters", "spectrum",
    "dichotomy", "ultraproduct", "chabert", "divide", "verify-all",
)
JSON_SAFE = 2**53


# --- serialization -----------------------------------------------------------


def portable(obj: Any) -> Any:
    """Integers beyond 2^53 become decimal strings; tuples become lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > JSON_SAFE else obj
    if isinstance(obj, dict):
        return {str(k): portable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [portable(v) for v in obj]
    if isinstance(obj, RingElem):
        return portable(obj.value)
    if isinstance(obj, FnValue):
        return portable(list(obj.values))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _flat(obj: Any) -> bool:
    """Lists of scalars (or of such lists) are printed on one line."""
    if isinstance(obj, list):
        return all(_flat(v) for v in obj)
    return not isinstance(obj, dict)


def _render(obj: Any, depth: int) -> str:
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(obj, dict) and obj:
        items = [f"{inner}{json.dumps(k)}: {_render(v, depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and obj and not _flat(obj):
        items = [inner + _render(v, depth + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))


def dumps(report: dict) -> str:
    return _render(portable(report), 0) + "\n"


def verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


class Failed(Exception):
    """A verification failure; carries the finished report."""

    def __init__(self, report: dict):
        self.report = report


# --- commands ----------------------------------------------------------------


def form_text(nf: NForm) -> str:
    parts = []
    for mono, c in reversed(nf.terms()):
        factors = [f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(mono) if e]
        body = "*".join(factors)
        parts.append(body if c.value == 1 else f"{c.value}*{body}")
    return " + ".join(parts)


def cmd_normform(cfg: dict) -> dict:
    p = require(cfg, "p")
    k = cfg.get("k", 2)
    cap = cfg.get("cap", 65536)
    if p**k > cap:
        raise TooLarge(f"p^k = {p}^{k} exceeds the field-size cap {cap}")
    nf = norm_form(p, k, cfg.get("modulus"), check=False)
    zeros = nf.nontrivial_zeros()
    limit = cfg.get("max_terms", 2000)
    out = {
        "p": p,
        "k": k,
        "modulus": list(nf.modulus.ints()),
        "term_count": len(nf),
        "terms": [[list(m), c.value] for m, c in nf.terms()[:limit]],
        "terms_truncated": len(nf) > limit,
        "form": form_text(nf) if len(nf) <= limit else None,
        "only-trivial-zero": verdict(not zeros),
    }
    if zeros:
        out["witness"] = _digits(zeros[0], p, k)
        raise Failed(out)
    return out


def _digits(code: int, p: int, k: int) -> list[int]:
    return [(code // p**i) % p for i in range(k)]


def _mask(mask: int) -> list[int]:
    return indices(mask)


def cmd_combine(cfg: dict) -> dict:
    R = build_funcring(cfg)
    M = build_M(R.base, cfg.get("M"))
    R, fns = with_functions(R, {"f": require(cfg, "f"), "g": require(cfg, "g")})
    f, g = fns["f"], fns["g"]
    method = cfg.get("method", "both")
    if method not in ("both", "normform", "finite"):
        raise InputError(f"unknown method {method!r}")
    target = preimage(f, M) & preimage(g, M)
    out: dict = {
        "f": f,
        "g": g,
        "preimage_f": _mask(preimage(f, M)),
        "preimage_g": _mask(preimage(g, M)),
        "intersection": _mask(target),
        "results": [],
    }
    ok = True
    if method in ("both", "normform"):
        F = M.require_maximal()
        s = binary_combiner_normform(F.characteristic, cfg.get("k", 2), M)
        h = combine_notalgcl(f, g, M, s)
        ok &= preimage(h, M) == target
        out["results"].append({"method": "normform", "form": str(s.s), "h": h, "preimage_h": _mask(preimage(h, M))})
    if method in ("both", "finite"):
        s = finitecase_form(f, g, M)
        h = combine_finitecase(f, g, M)
        ok &= preimage(h, M) == target
        out["results"].append({"method": "finite", "form": str(s.s), "h": h, "preimage_h": _mask(preimage(h, M))})
    out["verdict"] = verdict(ok)
    if not ok:
        raise Failed(out)
    return out


def cmd_unitlift(cfg: dict) -> dict:
    R = build_funcring(cfg)
    M = build_M(R.base, cfg.get("M"))
    R, fns = with_functions(R, {"g": require(cfg, "g")})
    g = fns["g"]
    f = unit_one_lift(g, M)
    poly = unit_one_polynomial(g.residues(M), M)
    residues = sorted(set(g.residues(M)))
    return {
        "g": g,
        "residues": residues,
        "polynomial": str(poly),
        "f": f,
        "one-mod-M": verdict(all(M.contains(v - 1) for v in f.values)),
    }


def cmd_zerolocus(cfg: dict) -> dict:
    R = build_funcring(cfg)
    M = build_M(R.base, cfg.get("M"))
    specs = require(cfg, "ideal")
    if not isinstance(specs, list) or not specs:
        raise InputError("ideal must be a nonempty list of generators")
    R, fns = with_functions(R, {f"i{j + 1}": s for j, s in enumerate(specs)})
    ideal = IdealDescriptor(R, tuple(fns.values()))
    family = zero_locus_family(ideal, M, cfg.get("cap", 4096))
    out: dict = {"generators": list(fns.values()), "family": family.as_lists()}
    try:
        F = fip_filter(family)
        out["fip"] = True
        out["filter_minimal"] = indices(F.minimal)
    except InputError as exc:
        out["fip"] = False
        out["fip_witness"] = list(getattr(exc, "witness", ()))
    return out


def cmd_filters(cfg: dict) -> dict:
    n = cfg.get("n")
    if n is None:
        n = len(require(cfg, "E"))
    family = SetFamily.from_lists(n, require(cfg, "family"))
    F = fip_filter(family)
    refs = refinements(F)
    out = {
        "n": n,
        "family": family.as_lists(),
        "filter_minimal": indices(F.minimal),
        "refinements": [u.point for u in refs],
        "canonical_refinement": refs[0].point,
    }
    if "f" in cfg and "E" in cfg:
        R = build_funcring(cfg)
        M = build_M(R.base, cfg.get("M"))
        f = function_from_x(R, cfg["f"])
        out["f_in_M_F"] = mf_contains(f, M, F)
        out["f_in_M_U"] = [mf_contains(f, M, u) for u in refs]
    return out


def _element(S, i: int) -> list:
    return [portable(e) for e in S.element(i)]


def cmd_spectrum(cfg: dict) -> dict:
    R = build_funcring(cfg)
    M = build_M(R.base, cfg.get("M"))
    cap = cfg.get("cap", 1024)
    rep = verify_finitethm(R, M, cap)
    S = image_ring(R, M, cap)
    out = {
        "image_size": rep.image_size,
        "ideal_count": rep.ideal_count,
        "ultrafilters": R.n,
        "prime_count": len(rep.primes),
        "primes": [[_element(S, i) for i in P] for P in rep.primes],
        "point_prime": rep.point_prime,
        "fibration": rep.fibration,
        "checks": {
            "prime-equals-maximal": verdict(rep.prime_equals_maximal),
            "primes-are-point-ideals": verdict(rep.primes_match_points),
            "point-ideals-maximal": verdict(rep.all_maximal),
            "residue-field": verdict(rep.residues_ok),
        },
        "failures": rep.failures,
        "verdict": verdict(rep.passed),
    }
    if not rep.passed:
        raise Failed(out)
    return out


def cmd_dichotomy(cfg: dict) -> dict:
    R = build_funcring(cfg)
    M = build_M(R.base, require(cfg, "M"))
    T = image_ring(R, MDescriptor.zero(R.base), cfg.get("cap", 4096))
    rep = classify_dichotomy(T, M, cfg.get("cap", 4096))
    cases = []
    for c in rep.cases:
        r = c.result
        case = {
            "ideal": [_element(T, i) for i in c.ideal],
            "branch": r.branch,
            "exactly-one": verdict(c.exactly_one),
            "unit-valued-member": c.has_unit_valued,
        }
        if r.branch == 2:
            case["witness"] = {"f": _element(T, r.f), "g": _element(T, r.g), "h": _element(T, r.h)}
        cases.append(case)
    out = {"ring_size": rep.size, "maximal_ideals": len(cases), "cases": cases, "verdict": verdict(rep.passed)}
    if not rep.passed:
        raise Failed(out)
    return out


def cmd_ultraproduct(cfg: dict) -> dict:
    descs = require(cfg, "rings")
    if not isinstance(descs, list) or not descs:
        raise InputError("rings must be a nonempty list of base descriptors")
    rings = [base_ring_model(build_base(d)) for d in descs]
    U = UltrafilterFin(len(rings), require(cfg, "point"))
    res = ultraproduct_principal(rings, U)
    factor = rings[U.point]
    return {
        "factor_sizes": [r.size for r in rings],
        "product_size": res.product_size,
        "point": U.point,
        "quotient_size": res.size,
        "isomorphism": [_element(factor, i)[0] for i in res.iso],
        "verdict": verdict(res.size == factor.size),
    }


def _ivpoly(cfg: dict, key: str = "f") -> IVPoly:
    spec = require(cfg, key)
    if isinstance(spec, list):
        return IVPoly(tuple(spec))
    if isinstance(spec, str):
        return IVPoly.from_expression(spec, cfg.get("denominator", 1))
    raise InputError(f"{key} must be a binomial coefficient list or an expression in x")


def cmd_chabert(cfg: dict) -> dict:
    f = _ivpoly(cfg)
    alpha_cfg = dict(cfg.get("alpha") or {})
    for key in ("p", "N", "r"):
        if cfg.get(key) is not None:
            alpha_cfg[key] = cfg[key]
    alpha = PadicApprox(require(alpha_cfg, "p"), require(alpha_cfg, "N"), require(alpha_cfg, "r"))
    res = chabert_member(f, alpha)
    return {
        "f_binomial": list(f.coeffs),
        "f": str(f),
        "alpha": {"p": alpha.p, "N": alpha.N, "r": alpha.r},
        "required_precision": None if f.is_zero() else required_precision(f, alpha.p),
        "status": res.status.value,
        "modulus": res.modulus,
        "residues": list(res.residues),
        "member_residue": res.member_residue,
        "non_member_residue": res.non_member_residue,
    }


def cmd_divide(cfg: dict) -> dict:
    f = _ivpoly(cfg)
    out: dict = {"f_binomial": list(f.coeffs), "f": str(f)}
    if cfg.get("c") is not None:
        g = divide_by_constant(f, cfg["c"])
        out["c"] = cfg["c"]
        out["g_binomial"] = list(g.coeffs)
        out["g"] = str(g)
    if cfg.get("containment") is not None:
        opts = cfg["containment"]
        window = opts.get("window")
        rng = range(window[0], window[1] + 1) if window else None
        chk = rep_containment_check(f, require(opts, "p"), rng)
        out["containment"] = {
            "p": chk.p,
            "window": list(chk.window),
            "m": chk.m,
            "s": chk.s,
            "g_binomial": list(chk.g.coeffs),
            "exact": verdict(chk.g.scale(chk.p) == f),
        }
    if cfg.get("pseudoprincipal") is not None:
        opts = cfg["pseudoprincipal"]
        m, s = pseudoprincipal_Z(require(opts, "q"), require(opts, "p"))
        out["pseudoprincipal"] = {"q": opts["q"], "p": opts["p"], "m": m, "s": s}
    return out


def parse_criteria(spec) -> list[int]:
    if spec is None:
        return list(range(1, 11))
    if isinstance(spec, list):
        nums = spec
    else:
        nums = []
        for part in str(spec).split(","):
            lo, _, hi = part.partition("-")
            try:
                nums.extend(range(int(lo), int(hi or lo) + 1))
            except ValueError:
                raise InputError(f"bad criteria list {spec!r}") from None
    bad = [n for n in nums if n not in CRITERIA and n != 10]
    if bad:
        raise InputError(f"unknown criterion {bad[0]}")
    return sorted(set(nums))


def criterion_entry(res) -> dict:
    return {
        "id": res.number,
        "title": res.title,
        "verdict": verdict(res.passed),
        "details": res.details,
        "failure_count": len(res.failures),
        "failures": res.failures[:MAX_LISTED_FAILURES],
    }


def determinism_entry(seed: int, reference: list[dict]) -> dict:
    """Re-run criteria 1-9 in a fresh interpreter and compare the canonical bytes."""
    cmd = [sys.executable, "-m", "funcspec", "verify-all", "--seed", str(seed), "--criteria", "1-9"]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    same = False
    if proc.returncode in (0, 1):
        other = json.loads(proc.stdout)["result"]["criteria"]
        same = dumps({"c": other}) == dumps({"c": reference})
    entry = {
        "id": 10,
        "title": "identical reports across two runs with the same seed",
        "verdict": verdict(same),
        "details": {"compared_criteria": [c["id"] for c in reference]},
        "failure_count": 0 if same else 1,
        "failures": [] if same else ["second run produced a different report"],
    }
    return entry


def cmd_verify_all(cfg: dict) -> dict:
    seed = cfg.get("seed", 0)
    wanted = parse_criteria(cfg.get("criteria"))
    entries = []
    for n in wanted:
        if n == 10:
            continue
        res = run_criterion(n, seed)
        print(f"criterion {n}: {verdict(res.passed)}", file=sys.stderr)
        entries.append(criterion_entry(res))
    if 10 in wanted:
        entries.append(determinism_entry(seed, [e for e in entries if e["id"] != 10]))
    ok = all(e["verdict"] == "pass" for e in entries)
    out = {"seed": seed, "criteria": entries, "verdict": verdict(ok)}
    if not ok:
        raise Failed(out)
    return out


HANDLERS: dict[str, Callable[[dict], dict]] = {
    "normform": cmd_normform,
    "combine": cmd_combine,
    "unitlift": cmd_unitlift,
    "zerolocus": cmd_zerolocus,
    "filters": cmd_filters,
    "spectrum": cmd_spectrum,
    "dichotomy": cmd_dichotomy,
    "ultraproduct": cmd_ultraproduct,
    "chabert": cmd_chabert,
    "divide": cmd_divide,
    "verify-all": cmd_verify_all,
}

# flag name -> config key; flags override config scalars
OVERRIDES = {
    "p": "p", "k": "k", "M": "M", "seed": "seed", "cap": "cap", "point": "point",
    "c": "c", "q": "q", "N": "N", "r": "r", "denominator": "denominator",
    "method": "method", "criteria": "criteria",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="funcspec", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("config_path", nargs="?", help="JSON config file")
    parser.add_argument("--config", dest="config_flag", help="JSON config file")
    parser.add_argument("--p", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--M", "--m", dest="M", type=int, help="generator of M (0 for the zero ideal)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--cap", type=int)
    parser.add_argument("--point", type=int)
    parser.add_argument("--c", type=int)
    parser.add_argument("--q", type=int)
    parser.add_argument("--N", type=int)
    parser.add_argument("--r", type=int)
    parser.add_argument("--denominator", type=int)
    parser.add_argument("--method", choices=("both", "normform", "finite"))
    parser.add_argument("--criteria", help="e.g. 1-10 or 2,4,7")
    return parser


def run_command(argv: list[str]) -> tuple[dict | None, int]:
    """Parse ``argv`` and run; returns (report, exit code)."""
    args = build_parser().parse_args(argv)
    if args.config_path and args.config_flag:
        raise InputError("give the config either positionally or with --config")
    cfg = load_config(args.config_path or args.config_flag)
    for flag, key in OVERRIDES.items():
        value = getattr(args, flag)
        if value is not None:
            cfg[key] = value
    report = {"command": args.command, "input": dict(cfg)}
    try:
        report["result"] = HANDLERS[args.command](cfg)
        return report, 0
    except Failed as exc:
        report["result"] = exc.report
        return report, 1


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        report, code = run_command(argv)
    except CheckFailed as exc:
        print(dumps({"error": "CheckFailed", "message": str(exc), "witness": repr(exc.witness)}), end="")
        return 1
    except (FuncSpecError, ValueError, TypeError) as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        witness = getattr(exc, "witness", None)
        if witness is not None:
            diag["witness"] = portable(witness) if isinstance(witness, (int, tuple, list)) else repr(witness)
        position = getattr(exc, "position", None)
        if position is not None:
            diag["position"] = position
        print(json.dumps(diag), file=sys.stderr)
        return 2
    sys.stdout.write(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
