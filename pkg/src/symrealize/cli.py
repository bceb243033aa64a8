"""Command line interface: one subcommand per pipeline stage plus checks."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .complexes import ComplexError, SimplicialComplex, SimplicialMap, automorphism_group
from .finite_spaces import (
    FinitePoset,
    PosetError,
    face_poset,
    glue_w_at_beat_points,
    order_complex,
    poset_automorphisms,
    w2_poset,
    _w2_data,
)
from .invariants import SkeletonH1, edge_path_pi1, hom_count, homology_table, skeleton_of
from .presentations import (
    FiniteGroup,
    GroupAction,
    Presentation,
    PresentationError,
    SymmetricPresentation,
    equivariant_presentation_complex,
    hom_panel,
    symmetrize,
)
from .pipeline import StageFailed
from .rigidify import rigidify, rigidify_trivial

log = logging.getLogger("symrealize")


class StageError(Exception):
    def __init__(self, stage, message):
        super().__init__(f"{stage}: {message}")


def _load(path, stage):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise StageError(stage, f"cannot read JSON from {path}: {exc}") from None


def _dump(obj, path):
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _panel(choice):
    panel = hom_panel()
    if not choice:
        return panel
    names = [s.strip() for s in choice.split(",") if s.strip()]
    unknown = [n for n in names if n not in panel]
    if unknown:
        raise StageError("arguments", f"unknown panel groups {unknown}; choose from {sorted(panel)}")
    return {n: panel[n] for n in names}


def _inputs(args, stage):
    G = FiniteGroup.from_json(_load(args.group, stage))
    M = Presentation.from_json(_load(args.presentation, stage))
    A = GroupAction.from_json(_load(args.action, stage), G, M)
    return G, M, A


def _symmetric_json(sp: SymmetricPresentation):
    gens = sp.presentation.generators
    names = sp.group.elements
    return {"group": sp.group.to_json(), "presentation": sp.presentation.to_json(),
            "xi": {names[g]: [gens[i] for i in sp.xi[g]] for g in range(sp.group.order)},
            "rho": {names[g]: list(sp.rho[g]) for g in range(sp.group.order)}}


def _symmetric_from_json(data):
    G = FiniteGroup.from_json(data["group"])
    gens = data["presentation"]["generators"]
    # relators must be taken verbatim: G permutes them letter for letter
    from .presentations import parse_word

    rels = tuple(parse_word(r, gens, reduce=False) for r in data["presentation"]["relators"])
    p = Presentation(tuple(gens), rels)
    gi = {g: i for i, g in enumerate(gens)}
    xi = tuple(tuple(gi[x] for x in data["xi"][name]) for name in G.elements)
    rho = tuple(tuple(data["rho"][name]) for name in G.elements)
    return SymmetricPresentation(p, G, xi, rho)


def _complex_doc(K, action=None, group=None, basepoint=None):
    out = K.to_json()
    if basepoint is not None:
        out["basepoint"] = basepoint
    if group is not None:
        out["group"] = group.to_json()
    if action is not None:
        out["action"] = {g: f.as_dict() for g, f in action.items()}
    return out


def _load_complex(path, stage):
    data = _load(path, stage)
    K = SimplicialComplex.from_json(data)
    action = {g: SimplicialMap.from_dict(m) for g, m in data.get("action", {}).items()}
    return K, action, data


def _load_poset(path, stage):
    return FinitePoset.from_json(_load(path, stage))


# ---------------------------------------------------------------------------
# subcommands


def cmd_symmetrize(args):
    _, _, A = _inputs(args, "symmetrize")
    sp = symmetrize(A)
    _dump(_symmetric_json(sp), args.output)
    return 0


def cmd_complexify(args):
    if args.symmetric:
        sp = _symmetric_from_json(_load(args.symmetric, "complexify"))
    else:
        sp = symmetrize(_inputs(args, "complexify")[2])
    K, base, action = equivariant_presentation_complex(sp)
    _dump(_complex_doc(K, action, sp.group, base), args.output)
    return 0


def cmd_rigidify(args):
    from .complexes import covering_walk

    K, action, data = _load_complex(args.complex, "rigidify")
    maps = list(action.values())
    if len({m.pairs for m in maps}) < 2:
        _dump(_complex_doc(rigidify_trivial(K)), args.output)
        return 0
    names = list(action)
    result = rigidify(K, maps, covering_walk(K), band_dim=args.band_dim)
    by_name = {}
    for name in names:
        by_name[name] = result.action_map[result.band_of(action[name])]
    _dump(_complex_doc(result.complex, by_name), args.output)
    return 0


def cmd_posetize(args):
    K, _, _ = _load_complex(args.complex, "posetize")
    _dump(face_poset(K).to_json(), args.output)
    return 0


def cmd_minimalize(args):
    X = _load_poset(args.poset, "minimalize")
    level = args.w_level if args.w_level == "auto" else int(args.w_level)
    Y, attachments = glue_w_at_beat_points(X, level)
    out = Y.to_json()
    out["attachments"] = attachments
    _dump(out, args.output)
    return 0


def cmd_aut(args):
    if args.complex:
        K, _, _ = _load_complex(args.complex, "aut")
        maps = automorphism_group(K)
    else:
        maps = poset_automorphisms(_load_poset(args.poset, "aut"))
    print(len(maps))
    if args.list:
        for f in maps:
            print(json.dumps({k: v for k, v in f.pairs if k != v}, sort_keys=True))
    return 0


def cmd_homology(args):
    if args.complex:
        K, _, _ = _load_complex(args.complex, "homology")
        if args.max_dim is not None and args.max_dim <= 1:
            H = SkeletonH1(*skeleton_of(K))
            table = [H.h0, H.h1][: args.max_dim + 1]
        else:
            table = homology_table(K, args.max_dim)
    else:
        X = _load_poset(args.poset, "homology")
        if args.max_dim is not None and args.max_dim <= 1:
            from .pipeline import h1_data

            H, _ = h1_data(X)
            table = [H.h0, H.h1][: args.max_dim + 1]
        else:
            table = homology_table(order_complex(X), args.max_dim)
    for d, Hd in enumerate(table):
        print(json.dumps(Hd.to_json(d), sort_keys=True))
    return 0


def cmd_pi1(args):
    K, _, data = _load_complex(args.complex, "pi1")
    base = args.base or data.get("basepoint")
    p = edge_path_pi1(K, base)
    counts = {name: hom_count(p, T) for name, T in _panel(args.hom_panel).items()}
    _dump({"presentation": p.to_json(), "hom_counts": counts}, args.output)
    return 0


def cmd_verify(args):
    from .pipeline import canonical_json, run_pipeline
    from .plotting import plot_stage_sizes

    G, M, A = _inputs(args, "verify")
    report, _ = run_pipeline(G, M, A, band_dim=args.band_dim, w_level=args.w_level,
                             panel=_panel(args.hom_panel), check_rigid_aut=not args.skip_rigid_aut)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(report.to_json(), indent=1, sort_keys=True) + "\n")
    (out / "checks.tsv").write_text(report.check_rows())
    (out / "timings.json").write_text(canonical_json(report.timings()) + "\n")
    plot_stage_sizes(report, out / "stage_sizes.png")
    sys.stdout.write(report.check_rows())
    print(f"verdict\t{'pass' if report.ok else 'FAIL'}")
    return 0 if report.ok else 1


def cmd_hasse(args):
    if args.w2:
        X, a = w2_poset()
        coords = _w2_data()["coordinates"]
        highlight = [a]
    else:
        X = _load_poset(args.poset, "hasse")
        coords, highlight = None, []
    dot = X.to_dot()
    if args.output in (None, "-"):
        sys.stdout.write(dot)
    else:
        Path(args.output).write_text(dot)
    if args.png:
        from .plotting import plot_hasse

        plot_hasse(X, args.png, coordinates=coords, highlight=highlight)
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="symrealize", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="log stage progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def inputs(sp, required=True):
        sp.add_argument("--group", required=required, help="finite group JSON")
        sp.add_argument("--presentation", required=required, help="presentation JSON")
        sp.add_argument("--action", required=required, help="action JSON (images for every element)")

    def out(sp):
        sp.add_argument("-o", "--output", default="-", help="output path (default stdout)")

    def source(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--complex", help="simplicial complex JSON")
        g.add_argument("--poset", help="poset JSON")

    s = sub.add_parser("symmetrize", help="G-symmetric presentation of an action")
    inputs(s)
    out(s)
    s.set_defaults(func=cmd_symmetrize)

    s = sub.add_parser("complexify", help="simplicial complex with G-action from a presentation")
    s.add_argument("--symmetric", help="output of 'symmetrize' (otherwise give the three inputs)")
    inputs(s, required=False)
    out(s)
    s.set_defaults(func=cmd_complexify)

    s = sub.add_parser("rigidify", help="glue bands so that aut equals the acting group")
    s.add_argument("--complex", required=True)
    s.add_argument("--band-dim", type=int, default=None, help="band dimension (default max(3, dim K + 2))")
    out(s)
    s.set_defaults(func=cmd_rigidify)

    s = sub.add_parser("posetize", help="face poset of a complex")
    s.add_argument("--complex", required=True)
    out(s)
    s.set_defaults(func=cmd_posetize)

    s = sub.add_parser("minimalize", help="glue W_l at every beat point")
    s.add_argument("--poset", required=True)
    s.add_argument("--w-level", default="auto", help="l for W_l, or 'auto'")
    out(s)
    s.set_defaults(func=cmd_minimalize)

    s = sub.add_parser("aut", help="order of the automorphism group")
    source(s)
    s.add_argument("--list", action="store_true", help="also print every automorphism")
    s.set_defaults(func=cmd_aut)

    s = sub.add_parser("homology", help="integral homology (of the order complex for posets)")
    source(s)
    s.add_argument("--max-dim", type=int, default=None)
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("pi1", help="edge-path presentation and homomorphism counts")
    s.add_argument("--complex", required=True)
    s.add_argument("--base", default=None)
    s.add_argument("--hom-panel", default=None, help="comma-separated target groups")
    out(s)
    s.set_defaults(func=cmd_pi1)

    s = sub.add_parser("verify", help="run the whole construction and every check")
    inputs(s)
    s.add_argument("--out", required=True, help="directory for report.json, checks.tsv and figures")
    s.add_argument("--band-dim", type=int, default=None)
    s.add_argument("--w-level", default="auto")
    s.add_argument("--hom-panel", default=None, help="comma-separated target groups")
    s.add_argument("--skip-rigid-aut", action="store_true", help="skip the automorphism search on R")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("hasse", help="Hasse diagram as DOT")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--poset")
    g.add_argument("--w2", action="store_true", help="the built-in W_2")
    s.add_argument("--png", default=None, help="also draw the diagram to this PNG")
    out(s)
    s.set_defaults(func=cmd_hasse)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (StageError, StageFailed) as exc:
        print(f"error in stage {exc}", file=sys.stderr)
    except (ComplexError, PosetError, PresentationError, KeyError, ValueError) as exc:
        print(f"error in stage {args.command}: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
