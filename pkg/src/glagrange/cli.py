"""Command-line front end.

Every subcommand reads one input document (JSON or TOML), prints a JSON report
and exits 0 when all verdicts pass, 1 on a verified negative or an exhausted
search, 2 on bad input.  See ``docs/schema.md`` for the document layout.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .corpus import corpus, expected_traces, fox_cross_check, form_sanity, run_case
from .cover import (
    CoverError,
    CoverSpec,
    build_cover,
    chevalley_weil_traces,
    random_monodromy,
    symplectic_module_of_cover,
)
from .exactla import RationalMatrix, Subspace, as_fraction
from .groups import FiniteGroup, GroupError, GroupWord, build_group, eval_word, subgroup_generated
from .lagfind import STRATEGIES, SearchConfig, SearchExhausted, find_invariant_lagrangian, verify_certificate, witt_equivalent
from .repcat import RepError, catalog_reps, rep_from_generators
from .sympmod import CertificateError, ModuleError, SymplecticGModule, induction, transverse_invariant_lagrangian

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Bad input document; the message names the offending field."""


# -- serialization ---------------------------------------------------------


def q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def matrix_out(M: RationalMatrix) -> list[list[str]]:
    return [[q(x) for x in row] for row in M.tolist()]


def subspace_out(S: Subspace) -> list[list[str]]:
    return matrix_out(S.basis) if S.dim else []


def _number(x, where: str) -> Fraction:
    try:
        if isinstance(x, str):
            return Fraction(x.strip())
        return as_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"{where}: expected an exact rational (integer or 'p/q' string), got {x!r}") from None


def matrix_in(rows, where: str, cols: int | None = None) -> RationalMatrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{where}: expected a list of rows")
    width = cols if cols is not None else (len(rows[0]) if rows else 0)
    for i, r in enumerate(rows):
        if len(r) != width:
            raise InputError(f"{where}[{i}]: expected {width} entries, got {len(r)}")
    data = [[_number(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
    return RationalMatrix.from_rows(data, width)


# -- input documents -------------------------------------------------------


def load_document(path: str) -> dict:
    """Parse JSON or TOML, whichever the text turns out to be."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: JSON error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    else:
        try:
            doc = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise InputError(f"{path}: TOML error: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be a table/object")
    sv = doc.get("schema_version", SCHEMA_VERSION)
    if sv != SCHEMA_VERSION:
        raise InputError(f"schema_version: unsupported value {sv!r} (this build reads {SCHEMA_VERSION})")
    return doc


def parse_group(doc: dict, where: str = "group") -> FiniteGroup:
    spec = doc.get("group")
    if spec is None:
        raise InputError(f"{where}: missing")
    try:
        return build_group(spec)
    except (GroupError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def parse_reps(doc: dict, G: FiniteGroup):
    raw = doc.get("representations")
    if raw is None:
        return None
    if not isinstance(raw, list):
        raise InputError("representations: expected a list")
    mats = []
    for k, rep in enumerate(raw):
        gens = rep.get("generators") if isinstance(rep, dict) else rep
        if not isinstance(gens, list) or len(gens) != len(G.generator_indices):
            raise InputError(f"representations[{k}]: need one matrix per group generator ({len(G.generator_indices)})")
        mats.append([matrix_in(M, f"representations[{k}].generators[{i}]") for i, M in enumerate(gens)])
    try:
        return catalog_reps(G, mats)
    except RepError as exc:
        raise InputError(f"representations: {exc}") from None


def parse_word(G: FiniteGroup, w, where: str) -> int:
    if isinstance(w, int) and not isinstance(w, bool):
        if not 0 <= w < G.order:
            raise InputError(f"{where}: element index {w} out of range")
        return w
    if not isinstance(w, str):
        raise InputError(f"{where}: expected a word such as 'x^2 y' or an element index")
    try:
        return eval_word(G, GroupWord.parse(w, G.gen_names))
    except GroupError as exc:
        raise InputError(f"{where}: {exc}") from None


def parse_cover(G: FiniteGroup, sec, where: str, connected: bool = True):
    """CoverSpec from a ``cover`` section: genus plus words, or genus plus random_seed."""
    if not isinstance(sec, dict):
        raise InputError(f"{where}: expected a table")
    h = sec.get("genus", sec.get("base_genus"))
    if not isinstance(h, int) or h < 1:
        raise InputError(f"{where}.genus: expected an integer >= 1")
    if "monodromy" in sec:
        words = sec["monodromy"]
        if not isinstance(words, list) or len(words) != 2 * h:
            raise InputError(f"{where}.monodromy: expected {2 * h} entries (a1, b1, ..., ah, bh)")
        mono = tuple(parse_word(G, w, f"{where}.monodromy[{i}]") for i, w in enumerate(words))
    elif "random_seed" in sec:
        mono = random_monodromy(G, h, random.Random(sec["random_seed"]))
    else:
        raise InputError(f"{where}: need 'monodromy' or 'random_seed'")
    try:
        spec = CoverSpec(h, G, mono)
        if connected and not spec.surjective:
            raise InputError(f"{where}.monodromy: images do not generate the group; pass the generated subgroup instead")
        return spec
    except CoverError as exc:
        raise InputError(f"{where}.monodromy: {exc}") from None


def parse_module(G: FiniteGroup, sec: dict, where: str) -> tuple[SymplecticGModule, dict]:
    """A module from a section holding ``cover``, ``module`` or ``induce``; also returns cover facts."""
    try:
        if "cover" in sec:
            connected = sec.get("connected", True)
            spec = parse_cover(G, sec["cover"], f"{where}cover", connected)
            C = build_cover(spec, require_connected=connected)
            return symplectic_module_of_cover(C), {"spec": spec, "complex": C}
        if "module" in sec:
            m = sec["module"]
            omega = matrix_in(m.get("omega"), f"{where}module.omega")
            gens = m.get("generators")
            if not isinstance(gens, list) or len(gens) != len(G.generator_indices):
                raise InputError(f"{where}module.generators: need one matrix per group generator")
            images = [matrix_in(M, f"{where}module.generators[{i}]", omega.rows) for i, M in enumerate(gens)]
            rep = rep_from_generators(G, images, "module")
            return SymplecticGModule(G, omega, tuple(rep.matrices)), {}
        if "induce" in sec:
            ind = sec["induce"]
            sub = [parse_word(G, w, f"{where}induce.subgroup[{i}]") for i, w in enumerate(ind.get("subgroup", []))]
            if not sub:
                raise InputError(f"{where}induce.subgroup: need at least one generator word")
            H, emb = subgroup_generated(G, sub)
            spec_G = parse_cover(G, ind.get("cover"), f"{where}induce.cover", connected=False)
            back = {g: i for i, g in enumerate(emb)}
            if any(g not in back for g in spec_G.monodromy):
                raise InputError(f"{where}induce.cover.monodromy: images must lie in the subgroup")
            spec_H = CoverSpec(spec_G.base_genus, H, tuple(back[g] for g in spec_G.monodromy))
            VH = symplectic_module_of_cover(build_cover(spec_H))
            return induction(VH, G, emb), {}
    except (ModuleError, RepError, CoverError, GroupError) as exc:
        raise InputError(f"{where.rstrip('.') or 'input'}: {exc}") from None
    raise InputError(f"{where or 'input'}: need a 'cover', 'module' or 'induce' section")


def search_config(doc: dict, args) -> SearchConfig:
    sec = doc.get("config", {})
    if not isinstance(sec, dict):
        raise InputError("config: expected a table")
    seed = args.seed if args.seed is not None else sec.get("seed", 0)
    hb = args.height_bound if args.height_bound is not None else sec.get("height_bound", 4)
    mi = args.max_iterations if args.max_iterations is not None else sec.get("max_iterations", 10**5)
    strategies = args.strategies.split(",") if args.strategies else sec.get("strategies", list(STRATEGIES))
    try:
        return SearchConfig(int(seed), int(hb), int(mi), tuple(s.strip() for s in strategies))
    except (TypeError, ValueError) as exc:
        raise InputError(f"config: {exc}") from None


# -- reports ---------------------------------------------------------------


def artifact_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0.1.0"


def legend(G: FiniteGroup) -> dict:
    return {
        "group": G.label(),
        "generators": list(G.gen_names),
        "elements": {str(i): G.name(i) for i in G.elements()},
    }


def certificate_out(cert) -> dict:
    out = {
        "lagrangian": subspace_out(cert.lagrangian),
        "dimension": cert.dim,
        "checks": dict(cert.checks),
        "provenance": cert.provenance,
    }
    if cert.failure:
        out["failure"] = failure_out(cert.failure)
    return out


def failure_out(failure: dict) -> dict:
    out = {}
    for k, v in failure.items():
        if k == "witness":
            out[k] = [matrix_out(w)[0] for w in v]
        elif isinstance(v, Fraction):
            out[k] = q(v)
        else:
            out[k] = v
    return out


def cover_out(info: dict, V: SymplecticGModule) -> dict:
    spec, C = info["spec"], info["complex"]
    G = spec.group
    traces = chevalley_weil_traces(V)
    return {
        "base_genus": spec.base_genus,
        "monodromy": list(spec.monodromy),
        "cells": {"vertices": C.n_vertices, "edges": C.n_edges, "triangles": C.n_triangles},
        "euler_characteristic": q(C.euler_characteristic),
        "module_dim": V.dim,
        "traces": [q(t) for t in traces],
        "expected_traces": [q(t) for t in expected_traces(G, spec.base_genus)],
    }


def _cmd_cover(doc, args):
    G = parse_group(doc)
    V, info = parse_module(G, {"cover": doc.get("cover")}, "")
    out = cover_out(info, V)
    verdicts = {
        "chevalley_weil": out["traces"] == out["expected_traces"],
        "form_sanity": form_sanity(V),
    }
    return G, {"cover": out}, verdicts, None


def _cmd_find(doc, args):
    G = parse_group(doc)
    reps = parse_reps(doc, G)
    cfg = search_config(doc, args)
    V, info = parse_module(G, doc, "")
    outputs = {"module_dim": V.dim}
    if info:
        outputs["cover"] = cover_out(info, V)
    try:
        cert = find_invariant_lagrangian(V, reps, cfg)
    except SearchExhausted as exc:
        outputs["exhausted"] = exc.report
        return G, outputs, {"lagrangian_found": False}, cfg
    check = verify_certificate(V, cert.lagrangian)
    outputs["certificate"] = certificate_out(cert)
    transverse = transverse_invariant_lagrangian(V, cert.lagrangian)
    outputs["transverse_lagrangian"] = subspace_out(transverse.lagrangian)
    return G, outputs, {"lagrangian_found": True, "certificate_verified": check.passed, "transverse_verified": transverse.passed}, cfg


def _cmd_verify(doc, args):
    G = parse_group(doc)
    if not args.certificate:
        raise InputError("verify needs --certificate PATH (a find-lagrangian report or a bare certificate)")
    cert_doc = load_document(args.certificate)
    body = cert_doc.get("outputs", {}).get("certificate", cert_doc.get("certificate", cert_doc))
    rows = body.get("lagrangian") if isinstance(body, dict) else None
    if rows is None:
        raise InputError("certificate: no 'lagrangian' rows found")
    V, _ = parse_module(G, doc, "")
    L = Subspace.span(matrix_in(rows, "certificate.lagrangian", V.dim), V.dim) if rows else Subspace.zero(V.dim)
    check = verify_certificate(V, L)
    return G, {"certificate": certificate_out(check)}, {"certificate_verified": check.passed}, None


def _cmd_witt(doc, args):
    G = parse_group(doc)
    reps = parse_reps(doc, G)
    cfg = search_config(doc, args)
    for side in ("left", "right"):
        if not isinstance(doc.get(side), dict):
            raise InputError(f"{side}: missing module section")
    V, _ = parse_module(G, doc["left"], "left.")
    W, _ = parse_module(G, doc["right"], "right.")
    res = witt_equivalent(V, W, cfg, reps)
    outputs = {"left_dim": V.dim, "right_dim": W.dim, "equivalent": res.equivalent}
    if res.certificate is not None:
        outputs["certificate"] = certificate_out(res.certificate)
    if res.report is not None:
        outputs["exhausted"] = res.report
    return G, outputs, {"witt_equivalent": res.equivalent}, cfg


def _cmd_cw(doc, args):
    G = parse_group(doc)
    V, info = parse_module(G, {"cover": doc.get("cover")}, "")
    out = cover_out(info, V)
    fox = fox_cross_check(info["spec"], V)
    blocks = [{**r, "expected": q(r["expected"])} for r in fox]
    verdicts = {"chevalley_weil": out["traces"] == out["expected_traces"], "fox": all(r["ok"] for r in fox)}
    return G, {"traces": out["traces"], "expected_traces": out["expected_traces"], "blocks": blocks}, verdicts, None


def _corpus_row(args):
    case, cfg = args
    t0 = time.perf_counter()
    try:
        r = run_case(case, cfg)
    except (SearchExhausted, CertificateError, ModuleError) as exc:
        return {"case": case.name, "error": str(exc), "verdicts": {"lagrangian_certified": False}}
    return {
        "case": r["case"],
        "group": case.group.label(),
        "base_genus": case.base_genus,
        "monodromy": list(case.monodromy),
        "module_dim": r["module_dim"],
        "lagrangian_dim": r["lagrangian"].dim,
        "provenance": r["provenance"],
        "verdicts": r["verdicts"],
        "seconds": q(Fraction(round((time.perf_counter() - t0) * 1000), 1000)),
    }


def _cmd_corpus(doc, args):
    cfg = search_config(doc, args)
    cases = corpus(cfg.seed)
    jobs = [(c, cfg) for c in cases]
    if args.workers and args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(_corpus_row, jobs))
    else:
        rows = [_corpus_row(j) for j in jobs]
    verdicts = {r["case"]: all(r["verdicts"].values()) for r in rows}
    return None, {"cases": rows}, verdicts, cfg


COMMANDS = {
    "cover": (_cmd_cover, "build a cover and report cells, Euler characteristic, module dimension and traces"),
    "find-lagrangian": (_cmd_find, "search for a verified G-invariant Lagrangian"),
    "verify": (_cmd_verify, "re-verify a certificate against a spec"),
    "witt-equiv": (_cmd_witt, "test Witt equivalence of two modules (semi-decision)"),
    "chevalley-weil": (_cmd_cw, "trace identity and per-block Fox cross-check"),
    "corpus": (_cmd_corpus, "run the built-in corpus and print a pass/fail table"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glagrange", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=(name != "corpus"), help="JSON or TOML input document")
        p.add_argument("--seed", type=int)
        p.add_argument("--height-bound", type=int)
        p.add_argument("--max-iterations", type=int)
        p.add_argument("--strategies", help=f"comma-separated subset of {','.join(STRATEGIES)}")
        p.add_argument("--output", help="write the report here instead of standard output")
        if name == "verify":
            p.add_argument("--certificate", help="certificate or find-lagrangian report to check")
        if name == "corpus":
            p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    t0 = time.perf_counter()
    try:
        doc = load_document(args.input) if args.input else {}
        G, outputs, verdicts, cfg = handler(doc, args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - t0
    seed = cfg.seed if cfg is not None else (args.seed if args.seed is not None else 0)
    report = {
        "schema_version": SCHEMA_VERSION,
        "artifact": {"name": "glagrange", "version": artifact_version()},
        "command": args.command,
        "seed": seed,
        "input": doc,
        "legend": legend(G) if G is not None else None,
        "outputs": outputs,
        "verdicts": verdicts,
        "passed": all(verdicts.values()),
        "timing": {"seconds": q(Fraction(round(elapsed * 1000), 1000))},
    }
    if cfg is not None:
        report["config"] = {
            "seed": cfg.seed,
            "height_bound": cfg.height_bound,
            "max_iterations": cfg.max_iterations,
            "strategies": list(cfg.strategies),
        }
    text = json.dumps(report, indent=2, default=str)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0 if report["passed"] else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
