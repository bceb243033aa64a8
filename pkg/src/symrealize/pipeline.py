"""End-to-end construction: group action on a presentation -> symmetric
presentation -> simplicial complex with G-action -> rigidified complex ->
face poset -> minimal finite space, with a verification record per stage."""

from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .complexes import SimplicialComplex, automorphism_group, covering_walk
from .finite_spaces import (
    FinitePoset,
    auto_level,
    face_poset,
    glue_w_at_beat_points,
    is_minimal,
    order_complex_skeleton,
    poset_automorphisms,
)
from .invariants import SkeletonH1, actions_equivalent, edge_path_pi1, hom_count, skeleton_of
from .presentations import (
    FiniteGroup,
    GroupAction,
    Presentation,
    abelianization,
    equivariant_presentation_complex,
    hom_panel,
    symmetrize,
)
from .rigidify import rigidify, rigidify_trivial

log = logging.getLogger(__name__)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def content_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def complex_hash(K: SimplicialComplex) -> str:
    return content_hash(K.to_json())


def poset_hash(X: FinitePoset) -> str:
    return content_hash(X.to_json())


@dataclass
class StageRecord:
    name: str
    input_hash: str
    output_hash: str
    sizes: dict
    seconds: float = 0.0

    def to_json(self, timings=False):
        out = {"name": self.name, "input_hash": self.input_hash,
               "output_hash": self.output_hash, "sizes": self.sizes}
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class PipelineReport:
    stages: list = field(default_factory=list)
    checks: list = field(default_factory=list)  # dicts: name, value, expected, ok
    results: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(c["ok"] for c in self.checks)

    def check(self, name, value, expected, ok=None):
        ok = (value == expected) if ok is None else bool(ok)
        self.checks.append({"name": name, "value": value, "expected": expected, "ok": ok})
        log.info("check %s: %s (expected %s) -> %s", name, value, expected, "pass" if ok else "FAIL")
        return ok

    def to_json(self, timings=False):
        return {"ok": self.ok, "stages": [s.to_json(timings) for s in self.stages],
                "checks": self.checks, "results": self.results}

    def timings(self):
        return {s.name: round(s.seconds, 3) for s in self.stages}

    def check_rows(self):
        """Tab-separated summary: one line per check."""
        rows = ["check\tvalue\texpected\tstatus"]
        for c in self.checks:
            rows.append(f"{c['name']}\t{canonical_json(c['value'])}\t{canonical_json(c['expected'])}\t"
                        f"{'pass' if c['ok'] else 'FAIL'}")
        return "\n".join(rows) + "\n"


class StageFailed(RuntimeError):
    """A stage rejected its input; carries the stage name."""

    def __init__(self, stage, error):
        super().__init__(f"{stage}: {error}")
        self.stage = stage
        self.error = error


class _Stage:
    def __init__(self, report, name, input_hash):
        self.report, self.name, self.input_hash = report, name, input_hash

    def __enter__(self):
        self.t0 = time.perf_counter()
        log.info("stage %s ...", self.name)
        return self

    def done(self, output_hash, **sizes):
        rec = StageRecord(self.name, self.input_hash, output_hash, sizes,
                          time.perf_counter() - self.t0)
        self.report.stages.append(rec)
        log.info("stage %s done in %.1fs %s", self.name, rec.seconds, sizes)
        return output_hash

    def __exit__(self, exc_type, exc, tb):
        if isinstance(exc, ValueError):
            raise StageFailed(self.name, exc) from exc
        return False


def _group_json(G: FiniteGroup):
    return G.to_json()


def h1_data(X: FinitePoset):
    """H_0, H_1 of the order complex of X plus the skeleton used."""
    sk = order_complex_skeleton(X, 2)
    return SkeletonH1(len(X.points), sk[1], sk[2]), [int(s.shape[0]) for s in sk]


def run_pipeline(group: FiniteGroup, M: Presentation, action: GroupAction, band_dim=None,
                 w_level="auto", panel=None, check_rigid_aut=True):
    """Run every stage and every check; returns ``(report, artifacts)``."""
    report = PipelineReport()
    panel = hom_panel() if panel is None else panel
    art = {}
    in_hash = content_hash({"group": _group_json(group), "presentation": M.to_json(),
                            "action": action.to_json()})
    abM = abelianization(M)
    report.results["abelianization_M"] = str(abM)

    with _Stage(report, "symmetrize", in_hash) as st:
        sp = symmetrize(action)
        h = st.done(content_hash({"presentation": sp.presentation.to_json(), "xi": sp.xi, "rho": sp.rho}),
                    generators=len(sp.presentation.generators), relators=len(sp.presentation.relators))
    art["symmetric"] = sp
    report.check("abelianization of the symmetric presentation", str(abelianization(sp.presentation)), str(abM))

    with _Stage(report, "complexify", h) as st:
        K, base, kaction = equivariant_presentation_complex(sp)
        h = st.done(complex_hash(K), f_vector=K.f_vector())
    art["K"], art["K_action"], art["basepoint"] = K, kaction, base
    pi = edge_path_pi1(K, base)
    fp_K = {name: hom_count(pi, T) for name, T in panel.items()}
    fp_M = {name: hom_count(M, T) for name, T in panel.items()}
    report.results["hom_counts"] = {"M": fp_M, "K": fp_K}
    report.check("pi_1 fingerprint of K", fp_K, fp_M)
    HK = SkeletonH1(*skeleton_of(K))
    report.results["homology_K"] = [HK.h0.to_json(0), HK.h1.to_json(1)]
    report.check("H_1(K) equals the abelianization of M", str(HK.h1), str(abM))

    G_maps = [kaction[g] for g in group.elements]
    faithful = len({m.pairs for m in G_maps}) == group.order
    report.check("G acts faithfully on K", faithful, True)
    with _Stage(report, "rigidify", h) as st:
        if group.order == 1:
            R = rigidify_trivial(K)
            rig = None
            walk_len = 0
        else:
            P = covering_walk(K)
            rig = rigidify(K, G_maps, P, band_dim=band_dim)
            R = rig.complex
            walk_len = len(P) - 1
        h = st.done(complex_hash(R), f_vector=R.f_vector(), walk_length=walk_len,
                    band_dim=band_dim if band_dim is not None else max(3, K.dim + 2))
    art["R"], art["rigidification"] = R, rig
    HR = SkeletonH1(*skeleton_of(R))
    report.results["homology_R"] = [HR.h0.to_json(0), HR.h1.to_json(1)]
    report.check("H_0, H_1 of R equal those of K", [str(HR.h0), str(HR.h1)], [str(HK.h0), str(HK.h1)])
    if check_rigid_aut:
        AR = automorphism_group(R)
        restricted = sorted({tuple((v, f(v)) for v in K.vertices) for f in AR})
        expected = sorted({m.pairs for m in G_maps})
        report.check("|aut(R)| equals |G|", len(AR), group.order)
        report.check("aut(R) restricts to G on K", restricted == expected, True)

    with _Stage(report, "posetize", h) as st:
        XR = face_poset(R)
        h = st.done(poset_hash(XR), points=len(XR), covers=len(XR.covers))

    with _Stage(report, "minimalize", h) as st:
        level = auto_level(XR) if w_level == "auto" else int(w_level)
        X, attachments = glue_w_at_beat_points(XR, level)
        h = st.done(poset_hash(X), points=len(X), covers=len(X.covers),
                    beat_points_glued=len(attachments), w_level=level)
    art["X"] = X
    report.check("X is minimal", is_minimal(X), True)

    with _Stage(report, "verify", h) as st:
        H, sk_sizes = h1_data(X)
        AX = poset_automorphisms(X)
        st.done(h, order_complex_skeleton=sk_sizes, automorphisms=len(AX))
    report.results["homology_X"] = [H.h0.to_json(0), H.h1.to_json(1)]
    report.check("|aut(X)| equals |G|", len(AX), group.order)
    report.check("H_0 of K(X)", str(H.h0), "Z")
    report.check("H_1 of K(X) equals the abelianization of M", str(H.h1), str(abM))

    # identify each automorphism of X with a group element via its action on K's vertices
    idx = X.index
    by_restriction = {}
    for f in AX:
        m = f.as_dict()
        key = tuple((v, m[f"({v})"][1:-1]) for v in K.vertices)
        by_restriction[key] = f
    A = {}
    missing = []
    for g in group.elements:
        f = by_restriction.get(kaction[g].pairs)
        if f is None:
            missing.append(g)
            continue
        m = f.as_dict()
        perm = np.array([idx[m[p]] for p in X.points], np.int64)
        A[g] = H.action_matrix(perm)
    report.check("every element of G is realized by an automorphism of X", missing, [])
    report.results["h1_action_X"] = A
    ab_group, B = action.abelianized_action()
    report.results["h1_action_input"] = B
    if not missing and ab_group == H.h1:
        verdict = actions_equivalent(A, B, group, H.h1)
    else:
        verdict = False
    report.check("induced action on H_1 is equivalent to the input action",
                 verdict, True, ok=verdict is True)
    return report, art
