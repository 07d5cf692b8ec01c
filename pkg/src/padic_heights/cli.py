"""Command-line surface: construct, verify, search.

Configuration is a flat key = value text file; reports are JSON with every
unbounded integer as a decimal string, so certificates survive serialization
exactly.  A verification run rebuilds everything it needs from the report
alone and re-derives each certificate.

Exit codes: 0 all certificates pass, 2 construction succeeded but some
certificate failed (or a report mismatch), 3 input rejected.
"""

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import verify as verify_mod
from .construct import PrimeSpec, run_construction
from .degree import DegreePlan
from .embedding import completion_embedding
from .errors import UnsupportedError
from .localfield import galois_group, lf_init
from .numfield import decompose_prime, nf_init
from .oracle import search_small_height

SCHEMA_VERSION = 1
_ENV_SLACK = "PADIC_HEIGHTS_PRECISION_SLACK"


@dataclass
class JobConfig:
    min_poly: list
    integral_basis: object
    primes: list
    rho: int
    epsilon: float
    seed: int
    precision_slack: object = None
    output: str = None

    def to_dict(self):
        return {
            "min_poly": list(self.min_poly),
            "integral_basis": None
            if self.integral_basis is None
            else [[str(Fraction(x)) for x in row] for row in self.integral_basis],
            "primes": [
                {
                    "p": s.p,
                    "choice": s.choice,
                    "rel_e": s.rel_e,
                    "rel_f": s.rel_f,
                    "unramified": None if s.unram_poly is None else list(s.unram_poly),
                    "eisenstein": None if s.eisenstein_poly is None else list(s.eisenstein_poly),
                }
                for s in self.primes
            ],
            "rho": self.rho,
            "epsilon": self.epsilon,
            "seed": self.seed,
            "precision_slack": self.precision_slack,
        }


def parse_config(text):
    """Flat key = value format; '#' starts a comment.  Polynomials are
    comma-separated integer coefficient lists, constant term first."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError("line %d: expected key = value" % lineno)
        key, val = (part.strip() for part in line.split("=", 1))
        values[key] = val
    if "min_poly" not in values or "rho" not in values:
        raise ValueError("config must set min_poly and rho")
    min_poly = _int_list(values.pop("min_poly"))
    basis = None
    if "integral_basis" in values:
        basis = [
            [Fraction(x.strip()) for x in row.split(",")]
            for row in values.pop("integral_basis").split(";")
        ]
    rho = int(values.pop("rho"))
    epsilon = float(values.pop("epsilon", "0.5"))
    seed = int(values.pop("seed", "0"))
    slack = values.pop("precision_slack", None)
    output = values.pop("output", None)
    primes = {}
    for key in list(values):
        if not key.startswith("prime."):
            raise ValueError("unknown config key: %s" % key)
        _, idx, attr = key.split(".", 2)
        primes.setdefault(int(idx), {})[attr] = values.pop(key)
    specs = []
    for idx in sorted(primes):
        entry = primes[idx]
        specs.append(
            PrimeSpec(
                p=int(entry["p"]),
                choice=int(entry.get("choice", "0")),
                rel_e=int(entry.get("e", "1")),
                rel_f=int(entry.get("f", "1")),
                unram_poly=tuple(_int_list(entry["unramified"])) if "unramified" in entry else None,
                eisenstein_poly=tuple(_int_list(entry["eisenstein"])) if "eisenstein" in entry else None,
            )
        )
    if not specs:
        raise ValueError("at least one prime block is required")
    return JobConfig(
        min_poly=min_poly,
        integral_basis=basis,
        primes=specs,
        rho=rho,
        epsilon=epsilon,
        seed=seed,
        precision_slack=None if slack is None else int(slack),
        output=output,
    )


def _int_list(s):
    return [int(x.strip()) for x in s.split(",")]


def _default_slack(config_slack):
    if config_slack is not None:
        return config_slack
    env = os.environ.get(_ENV_SLACK)
    return int(env) if env else None


# ---------------------------------------------------------------------------
# raw local element serialization


def _raw_to_json(E, raw):
    if E.kind == "zp":
        return str(raw)
    return E.rdigit_indices(raw, E.N_int)


def _raw_from_json(E, data):
    if isinstance(data, str):
        return int(data) % E.pM
    return E.rfrom_digit_indices(data)


def canonical_bytes(report):
    stripped = {k: v for k, v in report.items() if k not in ("timings", "determinism_sha256")}
    return json.dumps(stripped, sort_keys=True, separators=(",", ":")).encode()


# ---------------------------------------------------------------------------
# construct


def cmd_construct(config, seed=None, out_path=None):
    """Run the pipeline and write a self-contained report; returns
    (exit_code, report)."""
    timings = {}
    t_start = time.monotonic()
    if seed is not None:
        config.seed = seed
    slack = _default_slack(config.precision_slack)
    try:
        nf = nf_init(config.min_poly, config.integral_basis)
        t0 = time.monotonic()
        result = run_construction(
            nf, config.primes, config.rho, config.epsilon, config.seed, slack=slack
        )
        timings["construct_s"] = round(time.monotonic() - t0, 3)
    except (ValueError, UnsupportedError) as exc:
        print("input rejected: %s" % exc, file=sys.stderr)
        return 3, None
    t0 = time.monotonic()
    certs = [
        verify_mod.verify_splitting(ctx, result.gpoly, result.plan.c, index=i)
        for i, ctx in enumerate(result.contexts)
    ]
    irr = verify_mod.verify_irreducible(nf, result.gpoly, result.prime0, result.g0)
    timings["splitting_s"] = round(time.monotonic() - t0, 3)
    report_h = verify_mod.height_bound(nf, result.plan, result.contexts, result.prime0, result.log_B)
    t0 = time.monotonic()
    h, herr, place_logm = verify_mod.exact_height(nf, list(result.gpoly.coeffs))
    timings["height_s"] = round(time.monotonic() - t0, 3)
    report_h.exact = h
    report_h.exact_error = herr
    try:
        report_h.lower = verify_mod.lower_bound_for_field(
            nf,
            [(ctx.prime.p, ctx.prime.e * ctx.rel_e, ctx.prime.f * ctx.rel_f) for ctx in result.contexts],
        )
    except UnsupportedError:
        report_h.lower = None
    ok = (
        all(c.all_ok for c in certs)
        and irr.ok
        and h <= report_h.bound_total + 1e-12
        and h <= report_h.coefficient_bound + 1e-12
        and (report_h.lower is None or h >= report_h.lower - 1e-12)
    )
    timings["total_s"] = round(time.monotonic() - t_start, 3)
    report = _build_report(config, result, certs, irr, report_h, place_logm, timings)
    if out_path:
        with open(out_path, "w") as fh:
            json.dump(report, fh, indent=1, sort_keys=True)
            fh.write("\n")
    status = 0 if ok else 2
    print(
        "construct: degree %d, %d splitting certificate(s) %s, irreducible %s, "
        "height %.6f within [%s, %.6f] -> %s"
        % (
            result.gpoly.degree,
            len(certs),
            "ok" if all(c.all_ok for c in certs) else "FAILED",
            "ok" if irr.ok else "FAILED",
            h,
            "%.6f" % report_h.lower if report_h.lower is not None else "-inf",
            min(report_h.bound_total, report_h.coefficient_bound),
            "PASS" if ok else "FAIL",
        )
    )
    return status, report


def _build_report(config, result, certs, irr, report_h, place_logm, timings):
    nf = result.nf
    plan = result.plan
    primes_out = []
    for i, ctx in enumerate(result.contexts):
        E = ctx.E
        primes_out.append(
            {
                "p": ctx.prime.p,
                "choice": ctx.spec.choice,
                "rel_e": ctx.rel_e,
                "rel_f": ctx.rel_f,
                "f_over_p": ctx.prime.f,
                "e_over_p": ctx.prime.e,
                "q": str(ctx.prime.q),
                "x": str(ctx.x),
                "k": ctx.k,
                "m": ctx.m,
                "precision": ctx.N,
                "unramified": None if E.unram is None else list(E.unram),
                "eisenstein": None
                if E.eis is None
                else [[int(v) for v in u] for u in E.eis],
                "repset": {"c": ctx.rep.c, "c0": ctx.rep.c0, "c1": ctx.rep.c1, "d": ctx.rep.d},
                "subset": [_raw_to_json(E, x) for x in ctx.subset],
            }
        )
    cert_out = []
    for ctx, cert in zip(result.contexts, certs):
        E = ctx.E
        cert_out.append(
            {
                "prime_index": cert.prime_index,
                "b": cert.b,
                "separation_max": cert.separation_max,
                "distinct": cert.distinct_count,
                "ok": cert.all_ok,
                "roots": [
                    {
                        "a": e.a,
                        "value_val": e.value_val,
                        "min_slack": e.min_slack,
                        "ok": e.ok,
                        "failing_condition": e.failing_condition,
                        "lifted": None if e.lifted is None else _raw_to_json(E, e.lifted),
                    }
                    for e in cert.entries
                ],
            }
        )
    report = {
        "schema": SCHEMA_VERSION,
        "config": config.to_dict(),
        "field": {
            "min_poly": list(nf.min_poly),
            "degree": nf.degree,
            "disc": str(nf.disc),
        },
        "plan": {
            "n": plan.n,
            "x": [str(x) for x in plan.x],
            "rho": plan.rho,
            "epsilon": plan.epsilon,
            "d": plan.d,
            "C": plan.C,
            "c": plan.c,
            "r": str(plan.r),
            "k": list(plan.k),
            "degree": plan.degree,
        },
        "primes": primes_out,
        "anchor": {
            "p0": result.prime0.p,
            "choice": result.prime0.choice_index,
            "norm": str(result.prime0.hnf.norm),
            "g0_coords": [[str(v) for v in c.coords] for c in result.g0],
            "g0_sha256": result.g0_hash,
            "seed": result.seed,
        },
        "g": {
            "degree": result.gpoly.degree,
            "coeffs_coords": [[str(v) for v in c.coords] for c in result.gpoly.coeffs],
        },
        "modulus_norm": str(result.modulus.norm),
        "log_B": result.log_B,
        "certificates": {
            "splitting": cert_out,
            "irreducible": {
                "ok": irr.ok,
                "anchor_match": irr.anchor_match,
                "scanned_to": irr.scanned_to,
            },
        },
        "height": report_h.to_dict(),
        "place_log_mahler": place_logm,
        "retries": result.retries,
        "timings": timings,
    }
    report["determinism_sha256"] = hashlib.sha256(canonical_bytes(report)).hexdigest()
    return report


# ---------------------------------------------------------------------------
# verify


def cmd_verify(report_path):
    """Re-derive every certificate from the report; 0 on agreement."""
    try:
        with open(report_path) as fh:
            report = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print("malformed report: %s" % exc, file=sys.stderr)
        return 3
    try:
        ok = _reverify(report)
    except KeyError as exc:
        print("malformed report: missing %s" % exc, file=sys.stderr)
        return 3
    return 0 if ok else 2


def _reverify(report):
    if report.get("schema") != SCHEMA_VERSION:
        print("unsupported schema", file=sys.stderr)
        return False
    cfg = report["config"]
    basis = None
    if cfg["integral_basis"] is not None:
        basis = [[Fraction(x) for x in row] for row in cfg["integral_basis"]]
    nf = nf_init(cfg["min_poly"], basis)
    gdata = report["g"]
    coeffs = [nf.element([int(v) for v in c]) for c in gdata["coeffs_coords"]]
    if gdata["degree"] != len(coeffs) - 1 or coeffs[-1] != nf.one():
        print("structural validation failed: degree/monic mismatch", file=sys.stderr)
        return False
    plan = DegreePlan(
        n=report["plan"]["n"],
        x=tuple(int(x) for x in report["plan"]["x"]),
        rho=report["plan"]["rho"],
        epsilon=report["plan"]["epsilon"],
        d=report["plan"]["d"],
        C=report["plan"]["C"],
        c=report["plan"]["c"],
        r=int(report["plan"]["r"]),
        k=tuple(report["plan"]["k"]),
        degree=report["plan"]["degree"],
    )
    if plan.degree != gdata["degree"]:
        print("structural validation failed: plan degree mismatch", file=sys.stderr)
        return False
    from .construct import GlobalPolynomial, PrimeContext

    gpoly = GlobalPolynomial(nf=nf, coeffs=tuple(coeffs), degree=plan.degree, provenance={})
    contexts = []
    for pdata in report["primes"]:
        primes = decompose_prime(nf, pdata["p"])
        prime = primes[pdata["choice"]]
        E = lf_init(
            pdata["p"],
            pdata["unramified"],
            pdata["eisenstein"],
            precision=pdata["precision"],
        )
        F = E if (pdata["rel_e"] == 1 and pdata["rel_f"] == 1) else E.prime_base()
        G = galois_group(E, F)
        emb = completion_embedding(nf, prime, E)
        subset = tuple(_raw_from_json(E, item) for item in pdata["subset"])
        spec = PrimeSpec(p=pdata["p"], choice=pdata["choice"], rel_e=pdata["rel_e"], rel_f=pdata["rel_f"])
        ctx = PrimeContext(
            spec=spec,
            prime=prime,
            E=E,
            F=F,
            G=G,
            embedding=emb,
            x=int(pdata["x"]),
            k=pdata["k"],
            m=pdata["m"],
            N=pdata["precision"],
            subset=subset,
        )
        contexts.append(ctx)
    ok = True
    for i, (ctx, stored) in enumerate(zip(contexts, report["certificates"]["splitting"])):
        cert = verify_mod.verify_splitting(ctx, gpoly, plan.c, index=i)
        if not cert.all_ok:
            print("splitting certificate fails at prime %d" % ctx.prime.p, file=sys.stderr)
            ok = False
            continue
        if (
            cert.b != stored["b"]
            or cert.separation_max != stored["separation_max"]
            or cert.distinct_count != stored["distinct"]
            or [e.a for e in cert.entries] != [r["a"] for r in stored["roots"]]
            or [e.min_slack for e in cert.entries] != [r["min_slack"] for r in stored["roots"]]
        ):
            print("splitting certificate mismatch at prime %d" % ctx.prime.p, file=sys.stderr)
            ok = False
    anchor = report["anchor"]
    primes0 = decompose_prime(nf, anchor["p0"])
    prime0 = primes0[anchor["choice"]]
    g0 = [nf.element([int(v) for v in c]) for c in anchor["g0_coords"]]
    g0_hash = hashlib.sha256(repr([list(c.coords) for c in g0]).encode()).hexdigest()
    if g0_hash != anchor["g0_sha256"]:
        print("anchor polynomial hash mismatch", file=sys.stderr)
        ok = False
    irr = verify_mod.verify_irreducible(nf, gpoly, prime0, g0)
    if not irr.ok:
        print("irreducibility certificate fails", file=sys.stderr)
        ok = False
    hb = verify_mod.height_bound(nf, plan, contexts, prime0, report["log_B"])
    h, herr, _ = verify_mod.exact_height(nf, coeffs)
    stored_h = report["height"]
    if abs(h - stored_h["exact"]) > 1e-9 + herr + stored_h["exact_error"]:
        print("height mismatch: %.12f vs %.12f" % (h, stored_h["exact"]), file=sys.stderr)
        ok = False
    if not (
        h <= hb.bound_total + 1e-12
        and h <= hb.coefficient_bound + 1e-12
        and (stored_h["lower"] is None or h >= stored_h["lower"] - 1e-12)
    ):
        print("height bound violated on re-verification", file=sys.stderr)
        ok = False
    print("verify: %s" % ("PASS" if ok else "FAIL"))
    return ok


# ---------------------------------------------------------------------------
# search


def cmd_search(primes, deg_max, coeff_bound, out_path=None):
    record = search_small_height(primes, deg_max, coeff_bound)
    payload = {
        "schema": SCHEMA_VERSION,
        "primes": list(record.primes),
        "deg_max": record.deg_max,
        "coeff_bound": record.coeff_bound,
        "searched": record.searched,
        "budget_exceeded": record.budget_exceeded,
        "min_height": record.min_height,
        "min_nonzero_height": record.min_nonzero_height,
        "entries": [{"coeffs": list(c), "min_root_height": h} for c, h in record.entries],
    }
    if out_path:
        with open(out_path, "w") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")
    print(
        "search: %d polynomials, %d survivors, min height %s, min nonzero height %s"
        % (
            record.searched,
            len(record.entries),
            record.min_height,
            record.min_nonzero_height,
        )
    )
    return 0


# ---------------------------------------------------------------------------


def main(argv=None):
    parser = argparse.ArgumentParser(prog="padic-heights")
    sub = parser.add_subparsers(dest="command", required=True)
    p_con = sub.add_parser("construct", help="run the construction and write a report")
    p_con.add_argument("--config", required=True)
    p_con.add_argument("--seed", type=int, default=None)
    p_con.add_argument("--out", default=None)
    p_ver = sub.add_parser("verify", help="re-check a report")
    p_ver.add_argument("--report", required=True)
    p_sea = sub.add_parser("search", help="exhaustive small-height search")
    p_sea.add_argument("--primes", required=True, help="comma-separated rational primes")
    p_sea.add_argument("--deg-max", type=int, required=True)
    p_sea.add_argument("--coeff-bound", type=int, required=True)
    p_sea.add_argument("--out", default=None)
    args = parser.parse_args(argv)
    if args.command == "construct":
        try:
            with open(args.config) as fh:
                config = parse_config(fh.read())
        except (OSError, ValueError) as exc:
            print("input rejected: %s" % exc, file=sys.stderr)
            return 3
        out = args.out or config.output
        code, _ = cmd_construct(config, seed=args.seed, out_path=out)
        return code
    if args.command == "verify":
        return cmd_verify(args.report)
    if args.command == "search":
        primes = [int(x) for x in args.primes.split(",") if x.strip()]
        return cmd_search(primes, args.deg_max, args.coeff_bound, out_path=args.out)
    return 3


if __name__ == "__main__":
    sys.exit(main())
