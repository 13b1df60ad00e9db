"""``affine-char`` command line.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 when the input is invalid (an error document is printed).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from . import scene as scenes
from .combination import OrbitSpace
from .errors import AffineCharError, NotBijective
from .kview import ORIENTATION, f_sharp, md_iso, tek_basis
from .orbits import (char_basis, char_local_injection, demo_nonfunctoriality,
                     verify_partial_functoriality)
from .report import Report
from .rlview import (f_bang, irreducible, lw, verify_fht_naturality, verify_naturality_k,
                     verify_naturality_rl)
from .torus import Level, decompose, pullback_level
from .weyl import char_general, char_group, demo_u3, group_basis, rho_shift

VIEWS = ("char", "k", "rl")
CHECKS = ("functoriality", "naturality-k", "naturality-rl", "fht", "counterexample", "u3",
          "rho-shift")


def parse_vector(text: str) -> tuple[int, ...]:
    text = text.strip().strip("[]()")
    if not text:
        return ()
    try:
        return tuple(int(p) for p in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer vector: {text!r}") from None


def load_scene(spec: str | None, default: str | None = None) -> scenes.Scene:
    if spec is None:
        if default is None:
            raise AffineCharError("--scene is required for this command")
        return scenes.builtin(default)
    if spec.startswith("builtin:"):
        return scenes.builtin(spec[len("builtin:"):])
    return scenes.load(spec)


def document(command: dict, results, scene: scenes.Scene | None = None) -> dict:
    return {
        "command": command,
        "orientation": ORIENTATION,
        "results": results,
        "provenance": {"tool": "affine-char", "version": __version__,
                       "input_sha256": scene.sha256 if scene is not None else None},
    }


def cmd_orbits(args) -> tuple[dict, bool]:
    sc = load_scene(args.scene)
    if args.group:
        g = sc.group(args.group)
        results = {"group": args.group, "level": g.level.K.tolist(),
                   "weyl_order": g.weyl.order,
                   "regular_orbits": [{"orbit": list(o.rep),
                                       "members": [list(m) for m in o.members]}
                                      for o in char_group(g)]}
        results["count"] = len(results["regular_orbits"])
    else:
        tau = sc.level(_one_level(sc, args.level))
        space = OrbitSpace.of_level(tau)
        results = {"level": args.level or _one_level(sc, None), "K": tau.K.tolist(),
                   "count": space.size, "orbits": [list(r) for r in space.representatives()]}
    cmd = {"name": "orbits", "level": args.level, "group": args.group}
    return document(cmd, results, sc), True


def _one_level(sc, name):
    if name is not None:
        return name
    if len(sc.levels) != 1:
        raise AffineCharError("--level is required", available=sorted(sc.levels))
    return next(iter(sc.levels))


def induce_one(sc, args, rep):
    if args.morphism in sc.group_morphisms:
        if args.view != "char":
            raise AffineCharError("group morphisms only support the char view",
                                  view=args.view)
        m = sc.group_morphism(args.morphism)
        x = group_basis(m.target, rep)
        return list(x.support[0]), char_general(m, x).to_json()
    f = sc.morphism(args.morphism)
    tau = sc.level(args.level)
    pulled = pullback_level(f, tau)
    if args.view == "char":
        x = char_basis(tau, rep)
        y = char_local_injection(f, tau, x)
    elif args.view == "k":
        x = tek_basis(tau, rep)
        y = md_iso(pulled, f_sharp(f, tau, x))
    else:
        x = irreducible(tau, rep)
        y = lw(pulled, f_bang(f, tau, x))
    return list(x.support[0]), y.to_json()


def cmd_induce(args) -> tuple[dict, bool]:
    sc = load_scene(args.scene)
    is_group = args.morphism in sc.group_morphisms
    if not is_group and args.level is None:
        raise AffineCharError("--level is required for torus morphisms")
    if args.all:
        if is_group:
            reps = [o.rep for o in char_group(sc.group_morphism(args.morphism).target)]
        else:
            reps = OrbitSpace.of_level(sc.level(args.level)).representatives()
    elif args.basis is not None:
        reps = [args.basis]
    else:
        raise AffineCharError("give --basis or --all")
    images = []
    for rep in reps:
        orbit, image = induce_one(sc, args, rep)
        images.append({"orbit": orbit, "image": image})
    results = {"morphism": args.morphism, "view": args.view, "images": images}
    if is_group:
        results["source_group"] = sc.group_morphisms[args.morphism]["source"]
    else:
        results["level"] = args.level
        results["pulled_back_level"] = pullback_level(sc.morphism(args.morphism),
                                                      sc.level(args.level)).K.tolist()
    cmd = {"name": "induce", "morphism": args.morphism, "level": args.level,
           "view": args.view, "basis": list(args.basis) if args.basis else None,
           "all": args.all}
    return document(cmd, results, sc), True


def cmd_decompose(args) -> tuple[dict, bool]:
    sc = load_scene(args.scene)
    f, tau = sc.morphism(args.morphism), sc.level(args.level)
    dec = decompose(f, tau)
    k1, k2 = dec.split_levels
    results = {
        "morphism": args.morphism, "level": args.level,
        "q": dec.q.F.tolist(), "i1": dec.i1.F.tolist(), "fj": dec.fj.F.tolist(),
        "perp_basis": dec.perp_basis.tolist(),
        "degrees": {"q": dec.q.degree, "fj": dec.fj.degree},
        "split_levels": [k1.K.tolist(), k2.K.tolist()],
        "pulled_back_level": pullback_level(f, tau).K.tolist(),
    }
    return document({"name": "decompose", "morphism": args.morphism, "level": args.level},
                    results, sc), True


def _pairs(sc, args):
    """(morphism, level) pairs to check: the named ones, or every valid pair."""
    if args.morphism and args.level:
        return [(args.morphism, args.level)]
    out = []
    for mname in sorted(sc.morphisms):
        if args.morphism and mname != args.morphism:
            continue
        f = sc.morphism(mname)
        for lname in sorted(sc.levels):
            if args.level and lname != args.level:
                continue
            if sc.levels[lname]["torus"] != sc.morphisms[mname]["target"]:
                continue
            tau = sc.level(lname)
            if f.is_local_injection and tau.positive and Level(f.F.T @ tau.K @ f.F).positive:
                out.append((mname, lname))
    return out


PAIR_CHECKS = {
    "functoriality": verify_partial_functoriality,
    "naturality-k": verify_naturality_k,
    "naturality-rl": verify_naturality_rl,
    "fht": verify_fht_naturality,
}


def cmd_verify(args) -> tuple[dict, bool]:
    sc = None
    reports = []
    if args.check == "counterexample":
        reports.append(("builtin", demo_nonfunctoriality()))
    elif args.check == "u3":
        reports.append(("builtin", demo_u3()))
    elif args.check == "rho-shift":
        sc = load_scene(args.scene, default="rho-shift")
        for name in sorted(sc.rho_shifts):
            entry = sc.rho_shifts[name]
            rep = Report(f"rho shift {name}")
            try:
                table = rho_shift(sc.group(entry["low"]), sc.group(entry["high"]))
                rep.add("[lam] -> [lam + rho] is a bijection onto regular orbits", True,
                        table=table.to_json())
            except NotBijective as e:
                rep.add("[lam] -> [lam + rho] is a bijection onto regular orbits", False,
                        **e.to_dict())
            reports.append((name, rep))
    else:
        sc = load_scene(args.scene)
        pairs = _pairs(sc, args)
        if not pairs:
            raise AffineCharError("no local injection with a positive level pair to check")
        for mname, lname in pairs:
            rep = PAIR_CHECKS[args.check](sc.morphism(mname), sc.level(lname))
            reports.append((f"{mname}@{lname}", rep))
    results = [{"subject": subject, **rep.to_dict()} for subject, rep in reports]
    ok = all(rep.ok for _, rep in reports)
    cmd = {"name": "verify", "check": args.check, "morphism": args.morphism,
           "level": args.level}
    return document(cmd, {"ok": ok, "reports": results}, sc), ok


def cmd_examples(args) -> tuple[dict, bool]:
    if args.name is None:
        return document({"name": "examples"}, {"available": sorted(scenes.BUILTIN)}), True
    sc = scenes.builtin(args.name)
    return document({"name": "examples", "scene": args.name},
                    {"scene": args.name, "toml": scenes.BUILTIN[args.name]}, sc), True


def render_text(doc: dict) -> str:
    cmd = doc["command"]["name"]
    res = doc["results"]
    lines = []
    if cmd == "orbits":
        if "group" in res:
            lines.append(f"group {res['group']}: |W| = {res['weyl_order']}, "
                         f"{res['count']} regular orbit(s)")
            lines += [f"  {o['orbit']}  members {o['members']}" for o in res["regular_orbits"]]
        else:
            lines.append(f"level {res['level']}: {res['count']} orbit(s)")
            lines += [f"  {o}" for o in res["orbits"]]
    elif cmd == "induce":
        lines.append(f"{res['morphism']} ({res['view']} view)")
        for e in res["images"]:
            body = " + ".join(f"{t['coeff']}{t['orbit']}" for t in e["image"]) or "0"
            lines.append(f"  {e['orbit']} -> {body}")
    elif cmd == "decompose":
        for k in ("q", "i1", "fj", "perp_basis", "degrees", "split_levels",
                  "pulled_back_level"):
            lines.append(f"{k}: {res[k]}")
    elif cmd == "verify":
        for r in res["reports"]:
            for c in r["checks"]:
                lines.append(f"{'PASS' if c['ok'] else 'FAIL'}  {r['subject']}: {c['name']}")
                if not c["ok"] and c["detail"]:
                    lines.append("  detail: " + json.dumps(c["detail"], sort_keys=True))
            lines += [f"  note: {n}" for n in r["notes"]]
        lines.append("all checks passed" if res["ok"] else "some checks FAILED")
    elif cmd == "examples":
        lines.append(res["toml"].rstrip() if "toml" in res else "\n".join(res["available"]))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="affine-char",
                                description="Exact orbit computations for loop-group levels.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scene=True):
        if scene:
            sp.add_argument("--scene", help="scene file (TOML or .json) or builtin:NAME")
        sp.add_argument("--json", action="store_true", help="emit a JSON result document")

    sp = sub.add_parser("orbits", help="list the orbits of a level or regular orbits of a group")
    common(sp)
    sp.add_argument("--level")
    sp.add_argument("--group")
    sp.set_defaults(func=cmd_orbits)

    sp = sub.add_parser("induce", help="image of basis orbits under an induced map")
    common(sp)
    sp.add_argument("--morphism", required=True)
    sp.add_argument("--level")
    sp.add_argument("--view", choices=VIEWS, default="char")
    sp.add_argument("--basis", type=parse_vector, help="orbit representative, e.g. --basis=0,-1")
    sp.add_argument("--all", action="store_true", help="all basis orbits")
    sp.set_defaults(func=cmd_induce)

    sp = sub.add_parser("decompose", help="canonical decomposition f = fj o i1 o q")
    common(sp)
    sp.add_argument("--morphism", required=True)
    sp.add_argument("--level", required=True)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("verify", help="run a verification and report pass/fail")
    sp.add_argument("check", choices=CHECKS)
    common(sp)
    sp.add_argument("--morphism")
    sp.add_argument("--level")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("examples", help="print a built-in scene")
    sp.add_argument("name", nargs="?", choices=sorted(scenes.BUILTIN))
    common(sp, scene=False)
    sp.set_defaults(func=cmd_examples)
    return p


def dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, ok = args.func(args)
    except AffineCharError as e:
        sys.stdout.write(dump({"error": e.to_dict(), "command": {"name": args.command}}))
        print(f"affine-char: {e} ({e.condition})", file=sys.stderr)
        return 2
    sys.stdout.write(dump(doc) if args.json else render_text(doc))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
