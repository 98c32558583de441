"""Command-line front end.

Exit codes: 0 success, 1 domain or usage error (one ``error[Code]: ...``
line on stderr), 2 computation succeeded but a deviation was found.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from . import autos as A
from . import census as C
from . import perms as P
from . import uvb as V
from .uvp import abelianize_uvp, parse_uvp, relabel
from .words import LAMBDA, parse_word, print_word

EXIT_OK, EXIT_ERROR, EXIT_FINDING = 0, 1, 2


class UsageError(ValueError):
    code = "Usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class CliConfig:
    subcommand: str
    n: int | None = None
    fmt: str = "text"
    workers: int = 1
    budget: int | None = None
    out: str | None = None
    timing: bool = False

    def validate(self) -> None:
        if self.n is not None and self.n < 2:
            raise UsageError("--n must be at least 2")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")
        if self.budget is not None and self.budget <= 0:
            raise UsageError("--budget must be positive")


@dataclass
class Outcome:
    text: str
    data: object
    code: int = EXIT_OK


# ---------------------------------------------------------------------------
# subcommands

def _elem_json(g: V.UvbElement) -> dict:
    return {"lambda": str(g.lam), "perm": str(g.perm)}


def cmd_reduce(a) -> Outcome:
    g = V.nf(a.word, a.n)
    return Outcome(f"{g.lam} {g.perm}", _elem_json(g))


def cmd_eq(a) -> Outcome:
    same = V.uvb_equal(V.nf(a.left, a.n), V.nf(a.right, a.n))
    return Outcome("EQUAL" if same else "NOT_EQUAL", {"equal": same})


def cmd_act(a) -> Outcome:
    p = P.parse_perm(a.perm, a.n)
    x = relabel(parse_uvp(a.word, a.n), p)
    return Outcome(str(x), {"perm": str(p), "result": str(x)})


def cmd_abelianize(a) -> Outcome:
    letters = parse_word(a.word, a.n)
    if a.group == "uvp":
        vec = abelianize_uvp(parse_uvp(a.word, a.n))
        d = {f"l{i},{j}": v for (i, j), v in vec.as_dict().items()}
        return Outcome(" ".join(map(str, vec.entries)), {"basis": list(d), "vector": list(vec.entries)})
    deg, par = V.abelianize_uvb(letters)
    return Outcome(f"{deg} {par}", {"Z": deg, "Z2": par})


def cmd_expand(a) -> Outcome:
    (x,) = parse_word(a.token, a.n)
    if x.kind != LAMBDA or x.exp != 1:
        raise UsageError(f"expand takes a single lambda generator, got {a.token!r}")
    w = print_word(V.expand_lambda(x.idx[0], x.idx[1], a.n))
    return Outcome(w, {"generator": a.token, "word": w})


def _class_rows(classes, G, with_evidence=False) -> list:
    rows = []
    for c in classes:
        row = {"representative": c.representative.labelled(G), "size": c.size, "bucket": c.bucket or None}
        if with_evidence and c.evidence:
            row["evidence"] = c.evidence
        rows.append(row)
    return rows


def cmd_census(a, cfg: CliConfig) -> Outcome:
    G = C.parse_target(a.target)
    table = V.presentation(a.presentation, a.n)
    res = C.enumerate_homs(table, G, budget=cfg.budget, workers=cfg.workers)
    if a.dedup:
        classes = C.dedup_conjugation(res.homs, G, workers=cfg.workers)
    else:
        classes = [C.HomClass(h, 1, [h]) for h in res.homs]
    code = EXIT_OK
    flags = []
    if a.classify == "theorem-a":
        if G.order != len(P.all_perms(a.n)) or not G.name.startswith("S"):
            raise UsageError("theorem-a classification needs target s<n>")
        for c in classes:
            c.bucket = C.classify_theorem_A(c.representative, a.n, G)
        if any(c.bucket == C.OTHER for c in classes):
            flags.append("THEOREM_DEVIATION")
    elif a.classify == "theorem-b":
        C.classify_theorem_B(classes, a.n, G)
        if any(c.bucket == C.VIOLATION for c in classes):
            flags.append("VIOLATION")
        if any(not c.evidence["km_shadow_ok"] for c in classes):
            flags.append("KM_SHADOW")
    if flags:
        code = EXIT_FINDING
    summary: dict = {}
    for c in classes:
        key = c.bucket or "UNCLASSIFIED"
        summary[key] = summary.get(key, 0) + 1
    data = {
        "meta": {"n": a.n, "presentation": table.name, "target": G.name,
                 "homs": len(res.homs), "node_count": res.node_count,
                 "wall_time": round(res.wall_time, 3) if cfg.timing else None},
        "classes": _class_rows(classes, G, with_evidence=a.classify == "theorem-b"),
        "summary": dict(sorted(summary.items())),
        "flags": flags,
    }
    lines = [f"census {table.name}_{a.n} -> {G.name}: {len(res.homs)} homs, "
             f"{len(classes)} {'classes' if a.dedup else 'rows'}, {res.node_count} nodes"]
    for c in classes:
        rep = " ".join(f"{k}={v}" for k, v in c.representative.labelled(G).items())
        lines.append(f"{c.bucket or '-'} size={c.size} {rep}")
    lines.append("summary " + " ".join(f"{k}={v}" for k, v in data["summary"].items()))
    lines += [f"flag {f}" for f in flags]
    return Outcome("\n".join(lines), data, code)


# --- verify suites ------------------------------------------------------

def suite_relations(a, cfg) -> Outcome:
    table = V.presentation(a.presentation, a.n)
    engine = a.engine or ("normal_form" if table.name == "UVB" else "syntactic")
    rep = V.verify_presentation(table, engine, budget=a.rewrite_budget)
    code = EXIT_FINDING if rep.summary()[V.FAIL] else EXIT_OK
    return Outcome(rep.text(), rep.to_json(), code)


def suite_theorem_a(a, cfg) -> Outcome:
    if a.n not in (5, 6):
        raise UsageError("theorem-a suite supports n = 5 or 6")
    G = C.symmetric_group_table(a.n)
    rep = C.verify_theorem_A_staged(a.n, budget=cfg.budget, workers=cfg.workers)
    data = rep.to_json(G, timing=cfg.timing)
    lines = [f"theorem-a n={a.n} rho_homs={data['stages']['rho_homs']} "
             f"rho_classes={len(data['stages']['rho_classes'])} nodes={rep.node_count}"]
    for st in data["stages"]["rho_classes"]:
        lines.append(f"rho-class kind={st['kind']} size={st['class_size']} "
                     f"sigma1_candidates={st['sigma1_candidates']}")
    lines.append("centralizer " + " ".join(data["stages"]["phi_centralizer"]))
    lines.append("summary " + " ".join(f"{k}={v}" for k, v in data["summary"].items()))
    lines += [f"flag {f}" for f in data["flags"]]
    return Outcome("\n".join(lines), data, EXIT_FINDING if rep.deviation else EXIT_OK)


def suite_tss(a, cfg) -> Outcome:
    if a.n < 3:
        raise UsageError("tss suite needs n >= 3")
    rows, lines = [], []
    for i in range(1, a.n + 1):
        rep = C.analyze_totally_symmetric(C.build_A_i(i, a.n), a.n)
        d = {"i": i, **rep.to_json()}
        rows.append(d)
        lines.append(f"A_{i} size={d['size']} commuting={str(rep.commuting).lower()} "
                     f"stabilizer_order={d['stabilizer_order']} induced_order={d['induced_order']} "
                     f"full_symmetry={str(rep.full_symmetry).lower()}"
                     + (" flagged" if rep.flagged else ""))
    k = a.n * (a.n - 1) // 2
    cover = sorted({p for i in range(1, a.n + 1) for p in C.build_A_i(i, a.n)})
    data = {"n": a.n, "sets": rows, "km_bound": str(C.km_bound(k)),
            "covers_all_pairs": len(cover) == a.n * (a.n - 1)}
    lines.append(f"km_bound({k}) = {C.km_bound(k)}")
    lines.append(f"covers_all_pairs {str(data['covers_all_pairs']).lower()}")
    flagged = any(r["flagged"] for r in rows)
    return Outcome("\n".join(lines), data, EXIT_FINDING if flagged else EXIT_OK)


def suite_autos(a, cfg) -> Outcome:
    n = a.n
    lines, data = [], {"n": n}
    gens = A.theoremC_generators(n)
    ok = all(g.checked is True for g in gens)
    unimod = all(A.abelianized_matrix(g).is_unimodular() for g in gens)
    lines.append(f"theorem-c generators={len(gens)} checked={str(ok).lower()} unimodular={str(unimod).lower()}")
    data["theorem_c"] = {"generators": len(gens), "checked": ok, "unimodular": unimod}
    beta, gamma = A.make_beta(n), A.make_gamma(n)
    ident = A.identity_spec(A.UVB, n)
    bg = A.compose_endo(beta, gamma)
    rows = {}
    for name, f in (("beta", beta), ("gamma", gamma), ("beta_gamma", bg)):
        verdict = A.not_inner_witness(f)
        rows[name] = {"checked": f.checked is True,
                      "involution": A.endo_equal(A.compose_endo(f, f), ident),
                      "verdict": str(verdict)}
        lines.append(f"{name} checked={str(rows[name]['checked']).lower()} "
                     f"involution={str(rows[name]['involution']).lower()} {verdict}")
    commute = A.endo_equal(bg, A.compose_endo(gamma, beta))
    lines.append(f"beta_gamma_commute {str(commute).lower()}")
    data.update(rows)
    data["beta_gamma_commute"] = commute
    good = ok and unimod and commute and all(r["checked"] and r["involution"] for r in rows.values())
    return Outcome("\n".join(lines), data, EXIT_OK if good else EXIT_FINDING)


def suite_gamma_outer(a, cfg) -> Outcome:
    v = A.not_inner_witness(A.make_gamma(a.n))
    data = {"n": a.n, "status": v.status, "reason": v.reason, "evidence": v.evidence}
    return Outcome(f"{v}\n{v.evidence}" if v.evidence else str(v), data)


def suite_hbar(a, cfg) -> Outcome:
    cert = A.certify_hbar(a.n)
    lines = [f"hbar n={a.n} injective={str(cert['injective']).lower()} "
             f"surjective={str(cert['surjective']).lower()}",
             f"h_is_endomorphism={str(cert['h_is_endomorphism']).lower()} "
             f"hbar_is_endomorphism={str(cert['hbar_is_endomorphism']).lower()} "
             f"hbar_restricts_to_h={str(cert['hbar_restricts_to_h']).lower()}"]
    for f in cert["factors"]:
        lines.append(f"factor {f['factor']} A->{f['image_A']} B->{f['image_B']} "
                     f"injective={str(f['injective']).lower()} A_in_image={str(f['A_in_image']).lower()}")
    return Outcome("\n".join(lines), cert)


SUITES = {
    "relations": suite_relations,
    "theorem-a": suite_theorem_a,
    "tss": suite_tss,
    "autos": suite_autos,
    "gamma-outer": suite_gamma_outer,
    "hbar": suite_hbar,
}


def cmd_verify(a, cfg) -> Outcome:
    t0 = time.perf_counter()
    out = SUITES[a.suite](a, cfg)
    if cfg.timing:
        wt = round(time.perf_counter() - t0, 3)
        out.text += f"\nwall_time {wt}"
        if isinstance(out.data, dict):
            out.data = {**out.data, "wall_time": wt}
    return out


def cmd_aut(a, cfg) -> Outcome:
    spec = A.load_spec(a.spec)
    if a.action == "check":
        st = spec.checked if spec.target == A.WB else (V.OK if spec.checked else V.FAIL)
        return Outcome(f"{spec.target}_{spec.n} {st}", {"target": spec.target, "n": spec.n, "status": st},
                       EXIT_OK if st != V.FAIL else EXIT_FINDING)
    if a.elem is None:
        raise UsageError("aut apply needs --elem")
    if spec.target == A.UVP:
        x = spec(parse_uvp(a.elem, spec.n))
        return Outcome(str(x), {"result": str(x)})
    if spec.target == A.WB:
        w = print_word(V.substitute(parse_word(a.elem, spec.n), spec.images))
        return Outcome(w, {"result": w, "checked": spec.checked})
    if spec.checked is not True:
        raise A.AutosError("spec fails the relator check")
    g = spec(V.nf(a.elem, spec.n))
    return Outcome(f"{g.lam} {g.perm}", _elem_json(g))


def cmd_s6_outer(a, cfg) -> Outcome:
    w = P.find_outer_s6()
    lines = [f"s{i} -> {p}" for i, p in enumerate(w.images, 1)]
    lines += [f"{k} {str(v).lower()}" for k, v in w.checks.items()]
    data = {"images": [str(p) for p in w.images], "checks": w.checks}
    return Outcome("\n".join(lines), data, EXIT_OK if w.all_ok() else EXIT_FINDING)


def cmd_tss(a, cfg) -> Outcome:
    if a.i is None:
        return suite_tss(a, cfg)
    rep = C.analyze_totally_symmetric(C.build_A_i(a.i, a.n), a.n)
    d = rep.to_json()
    lines = [f"X {' '.join(d['X'])}",
             f"commuting {str(rep.commuting).lower()}",
             f"stabilizer {' '.join(d['stabilizer'])}",
             f"induced_order {d['induced_order']} of {d['sym_X_order']}",
             f"full_symmetry {str(rep.full_symmetry).lower()}",
             f"km_bound {d['km_bound']}"]
    if rep.flagged:
        lines.append("flag TOTAL_SYMMETRY")
    return Outcome("\n".join(lines), d, EXIT_FINDING if rep.flagged else EXIT_OK)


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--budget", type=int, default=None,
                        help="node budget (default: $UVBKIT_BUDGET or built-in)")
    common.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall times (non-deterministic)")

    p = _Parser(prog="uvbkit", description="Unrestricted virtual braid group toolkit.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, help_, n=True, n_default=None):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if n:
            sp.add_argument("--n", type=int, required=n_default is None, default=n_default)
        return sp

    sp = add("reduce", "normal form (lambda, perm) of a word")
    sp.add_argument("word")
    sp = add("eq", "decide equality of two words")
    sp.add_argument("left")
    sp.add_argument("right")
    sp = add("act", "relabel a lambda word by a permutation")
    sp.add_argument("--perm", required=True, help="[2,1,3] or (1 2)")
    sp.add_argument("word")
    sp = add("abelianize", "image in the abelianization")
    sp.add_argument("--group", choices=("uvb", "uvp"), default="uvb")
    sp.add_argument("word")
    sp = add("expand", "sigma/rho word for a lambda generator")
    sp.add_argument("token")

    sp = add("census", "enumerate homomorphisms into a finite group")
    sp.add_argument("--presentation", choices=("uvb", "wb", "s"), default="uvb")
    sp.add_argument("--target", required=True, help="s<m>, z<m>, products like s3xz2, or a table file")
    sp.add_argument("--dedup", action="store_true")
    sp.add_argument("--classify", choices=("theorem-a", "theorem-b"), default=None)

    sp = add("verify", "run a verification suite")
    sp.add_argument("suite", choices=sorted(SUITES))
    sp.add_argument("--presentation", choices=("uvb", "wb", "s"), default="uvb")
    sp.add_argument("--engine", choices=("normal_form", "syntactic"), default=None)
    sp.add_argument("--rewrite-budget", type=int, default=4000)

    sp = add("aut", "apply or check an endomorphism spec file", n=False)
    sp.add_argument("action", choices=("apply", "check"))
    sp.add_argument("--spec", required=True)
    sp.add_argument("--elem", default=None)

    add("s6-outer", "construct and verify the exotic automorphism of S_6", n=False)

    sp = add("tss", "totally symmetric set report for A_i")
    sp.add_argument("--i", type=int, default=None, help="single index (default: all)")
    return p


HANDLERS = {
    "reduce": lambda a, c: cmd_reduce(a),
    "eq": lambda a, c: cmd_eq(a),
    "act": lambda a, c: cmd_act(a),
    "abelianize": lambda a, c: cmd_abelianize(a),
    "expand": lambda a, c: cmd_expand(a),
    "census": cmd_census,
    "verify": cmd_verify,
    "aut": cmd_aut,
    "s6-outer": cmd_s6_outer,
    "tss": cmd_tss,
}


def render(out: Outcome, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.data, indent=2)
    return out.text


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        a = build_parser().parse_args(argv)
        cfg = CliConfig(a.cmd, getattr(a, "n", None), a.format, a.workers,
                        a.budget if a.budget is not None else C.default_budget(), a.out, a.timing)
        cfg.validate()
        out = HANDLERS[a.cmd](a, cfg)
        if cfg.out:
            # files always get the JSON report
            with open(cfg.out, "w") as fh:
                fh.write(render(out, "json") + "\n")
        else:
            stdout.write(render(out, cfg.fmt) + "\n")
        return out.code
    except (ValueError, KeyError, OSError, AssertionError) as exc:
        code = getattr(exc, "code", type(exc).__name__)
        msg = str(exc).replace("\n", " ")
        stderr.write(f"error[{code}]: {msg}\n")
        return EXIT_ERROR


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
