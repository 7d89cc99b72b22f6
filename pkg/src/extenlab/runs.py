"""End-to-end reproductions producing convergence tables and verdicts.

Each run builds its pair and family, constructs positive certificates on
the extendible side and obstruction certificates on the non-extendible
side, re-checks everything through the certificate checker, and fails
loudly (ok=False with a note, never a silent pass) when any expected
identity or verdict does not hold.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import dyadic
from .certificates import (REFUTED, VERIFIED, PositiveCertificate, Verdict,
                           build_negative_certificate, check_certificate,
                           disjointify)
from .errors import EpsilonTooLarge, ExtenlabError, InvalidArgument, \
    UnknownName
from .families import example_family, explicit_extension
from .maps import (Homotopy, MapSample, _merged_modulus, constant_map,
                   cone_contraction, dugundji_extend_partial,
                   equiconnect_homotopy, glue_homotopy_extension,
                   homotopy_between, restrict, small_diameter_extend)
from .metric import Modulus, euclidean_rows, measured_modulus, sup_distance
from .spaces import SpacePair, make_pair, make_space, product_with, \
    subspace, urysohn


@dataclass
class Report:
    """Outcome of one named reproduction at one resolution."""

    name: str
    epsilon: float
    n_max: int
    rows: list = field(default_factory=list)
    conclusion: str = ""
    notes: list = field(default_factory=list)
    first_success: int | None = None
    ok: bool = True
    timing_seconds: float = 0.0

    def add_row(self, label, sup, kind, verdict, margin):
        self.rows.append({"label": str(label),
                          "sup": None if sup is None else float(sup),
                          "kind": kind, "verdict": verdict.status,
                          "margin": float(margin)})
        if not verdict.ok:
            self.ok = False
            bad = [c for c in verdict.checks if not c["ok"]]
            self.notes.append(f"row {label}: {verdict.status} "
                              f"({'; '.join(c['check'] for c in bad)})")

    def fail(self, note: str):
        self.ok = False
        self.notes.append(note)

    def expect(self, condition: bool, note: str) -> bool:
        if not condition:
            self.fail(note)
        return condition

    def as_dict(self, include_timing: bool = False) -> dict:
        out = {"example": self.name,
               "epsilon": dyadic.format_epsilon(self.epsilon),
               "n_max": self.n_max, "rows": self.rows,
               "first_success": self.first_success,
               "conclusion": self.conclusion, "notes": self.notes,
               "ok": self.ok}
        if include_timing:
            out["timing_seconds"] = self.timing_seconds
        return out

    def to_text(self) -> str:
        lines = [f"example: {self.name}   epsilon: "
                 f"{dyadic.format_epsilon(self.epsilon)}   n_max: {self.n_max}",
                 f"{'label':>8}  {'sup_distance':>22}  {'certificate':>22}  "
                 f"{'verdict':>10}  {'margin':>12}"]
        for r in self.rows:
            sup = "-" if r["sup"] is None else repr(r["sup"])
            lines.append(f"{r['label']:>8}  {sup:>22}  {r['kind']:>22}  "
                         f"{r['verdict']:>10}  {r['margin']:>12.6g}")
        if self.first_success is not None:
            lines.append(f"first successful n: {self.first_success}")
        lines.append(f"conclusion: {self.conclusion}")
        for n in self.notes:
            lines.append(f"note: {n}")
        lines.append(f"status: {'ok' if self.ok else 'FAILED'}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        lines = ["label,sup_distance"]
        for r in self.rows:
            sup = "" if r["sup"] is None else repr(r["sup"])
            lines.append(f"{r['label']},{sup}")
        return "\n".join(lines) + "\n"


def _family_run(report: Report, family_name: str, positive_members: bool,
                positive_limit, closed_form):
    """Shared driver for the counterexample families.

    positive_members: members get explicit extensions (else obstructions);
    positive_limit: a callable producing the limit extension, or None for
    an obstruction; closed_form: expected sup_distance(phi_n, phi).
    """
    eps = report.epsilon
    fam = example_family(family_name, eps)
    if report.n_max > fam.n_bound:
        raise InvalidArgument(
            f"n_max {report.n_max} beyond the truncation bound {fam.n_bound} "
            f"at {dyadic.format_epsilon(eps)}")
    pair = fam.pair
    prev = math.inf
    for n in range(1, report.n_max + 1):
        member = fam.member(n)
        sup = sup_distance(member, fam.limit)
        expected = closed_form(n)
        report.expect(sup == expected,
                      f"n={n}: sup {sup!r} != closed form {expected!r}")
        report.expect(sup < prev, f"n={n}: sup column not strictly decreasing")
        prev = sup
        if positive_members:
            ext = explicit_extension(family_name, n, eps)
            cert = PositiveCertificate(ext, tolerance=0.0)
            kind = "positive"
        else:
            cert = build_negative_certificate(family_name, n, eps)
            kind = cert.kind
        verdict = check_certificate(pair, member, cert)
        margin = _row_margin(verdict)
        report.add_row(n, sup, kind, verdict, margin)
    if positive_limit is not None:
        ext = positive_limit()
        cert = PositiveCertificate(ext, tolerance=0.0)
    else:
        cert = build_negative_certificate(family_name, None, eps)
    verdict = check_certificate(pair, fam.limit, cert)
    report.add_row("limit", 0.0, cert.kind, verdict, _row_margin(verdict))
    return fam


def _row_margin(verdict) -> float:
    for key in ("separation_margin", "image_separation", "value_isolation",
                "winding", "restriction_gap"):
        if key in verdict.margins:
            return verdict.margins[key]
    return 0.0


def _run_comb(report: Report):
    _family_run(report, "comb", positive_members=True, positive_limit=None,
                closed_form=lambda n: 1.0 / (n + 1))
    report.conclusion = ("every member extends over the interval; the limit "
                         "is blocked by a mandatory crossing of the base")


def _run_sine_not_eclosed(report: Report):
    _family_run(report, "sine-eclosed", positive_members=True,
                positive_limit=None, closed_form=lambda n: 1.0 / n)
    report.conclusion = ("maps into the curve component extend along it; "
                         "the limit reaches the segment and is blocked by "
                         "the oscillation peaks")


def _run_pathcomp(report: Report):
    _family_run(report, "pathcomp", positive_members=True,
                positive_limit=None, closed_form=lambda n: 1.0 / n)
    report.conclusion = ("a non-closed path component: members extend, the "
                         "limit lands in a different component")


def _run_sine_not_eopen(report: Report):
    eps = report.epsilon

    def identity_extension():
        return explicit_extension("sine-eopen", None, eps)

    _family_run(report, "sine-eopen", positive_members=False,
                positive_limit=identity_extension,
                closed_form=lambda n: 1.0 / (n + 1))
    report.conclusion = ("no member extends (image splits across path "
                         "components); the inclusion limit extends via the "
                         "identity")


def _run_ndagger_not_eopen(report: Report):
    eps = report.epsilon

    def constant_extension():
        return explicit_extension("ndagger-eopen", None, eps)

    _family_run(report, "ndagger-eopen", positive_members=False,
                positive_limit=constant_extension,
                closed_form=lambda n: 1.0 / (n + 1))
    report.conclusion = ("no member has the clopen intersection property "
                         "over the interval; the constant limit extends")


def _run_ndagger_eclosed(report: Report):
    eps = report.epsilon
    fam = example_family("ndagger-eclosed", eps)
    pair = fam.pair
    if report.n_max > fam.n_bound:
        raise InvalidArgument(f"n_max beyond {fam.n_bound} blocks")
    prev = math.inf
    for j in range(1, report.n_max + 1):
        member = fam.member(j)
        sup = sup_distance(member, fam.limit)
        report.expect(sup == 1.0 / (j + 1), f"j={j}: sup {sup!r} off")
        report.expect(sup < prev, f"j={j}: sup not strictly decreasing")
        prev = sup
        ext = explicit_extension("ndagger-eclosed", j, eps)
        verdict = check_certificate(pair, member,
                                    PositiveCertificate(ext, tolerance=0.0))
        report.add_row(j, sup, "positive", verdict, _row_margin(verdict))

    # the limit's extension assembled from clopen blocks, disjointified
    blocks = pair.space.meta["blocks"]
    v_sets = [frozenset(range(b["start"], b["start"] + b["size"]))
              for b in blocks]
    u_sets = disjointify(pair.space, v_sets)
    report.expect(u_sets == v_sets,
                  "block witnesses were already disjoint but changed")
    vals = np.zeros((len(pair.space.net), 1))
    for k, u in enumerate(u_sets, start=1):
        vals[sorted(u)] = 1.0 / k
    ext = MapSample(pair.space.net, fam.codomain, vals,
                    measured_modulus(pair.space.net, vals),
                    name="ndagger-eclosed-limit-ext")
    direct = explicit_extension("ndagger-eclosed", None, eps)
    report.expect(bool(np.array_equal(ext.values, direct.values)),
                  "block-assembled extension differs from the direct one")
    verdict = check_certificate(pair, fam.limit,
                                PositiveCertificate(ext, tolerance=0.0))
    report.add_row("limit", 0.0, "positive", verdict, _row_margin(verdict))
    report.conclusion = ("extendible members converge to a limit whose "
                         "extension is assembled from disjoint clopen blocks")


def _run_hawaii(report: Report):
    eps = report.epsilon

    def constant_extension():
        return explicit_extension("hawaii", None, eps)

    fam = _family_run(report, "hawaii", positive_members=False,
                      positive_limit=constant_extension,
                      closed_form=lambda n: 2.0 / (n + 1))
    # accumulation sanity: the collapsed circles shrink to the basepoint
    report.conclusion = ("members wind once around a collapsed circle, so "
                         "none extends over the disk; the constant limit does")
    del fam


def _run_anr_eopen(report: Report):
    eps = report.epsilon
    circle = make_space("circle", eps)
    pair = make_pair("interval-ends", eps)
    y_space = pair.space
    quarter = circle.meta["count"] // 4
    base_pts = circle.net.points[[0, quarter]]

    def gamma(m):
        return 3 * math.pi / (4 * m)

    def member_values(m):
        ang = np.array([gamma(m), math.pi / 2 - gamma(m)])
        return np.column_stack([np.cos(ang), np.sin(ang)])

    limit = MapSample(pair.z_net, circle, base_pts, Modulus.lip(2.0),
                      name="anr-eopen-limit")
    y = y_space.net.points[:, 0]
    limit_ext_vals = np.column_stack([np.cos(math.pi / 2 * y),
                                      np.sin(math.pi / 2 * y)])
    limit_ext = MapSample(y_space.net, circle, limit_ext_vals,
                          Modulus.lip(math.pi / 2), name="anr-eopen-limit-ext")
    verdict = check_certificate(
        pair, restrict(limit_ext, pair),
        PositiveCertificate(limit_ext, tolerance=2 * eps))
    report.expect(verdict.ok, "limit extension failed its own certificate")

    prod = product_with(y_space, "ndagger")
    n_base = prod.meta["base_size"]
    factor_vals = np.asarray(prod.meta["factor_values"])
    z_cols = pair.z_indices
    tilde_z = [np.arange(n_base)]         # the 0 slice carries all of Y
    psi_vals = [limit_ext_vals]
    for i, f in enumerate(factor_vals):
        if f == 0.0:
            continue
        m = round(1.0 / f)
        tilde_z.append(i * n_base + z_cols)
        psi_vals.append(member_values(m))
    tilde_z = np.concatenate(tilde_z)
    psi_values = np.vstack(psi_vals)
    tilde_pair = SpacePair.build("eopen-cylinder", prod, tilde_z)
    psi = MapSample(tilde_pair.z_net, circle, psi_values,
                    measured_modulus(tilde_pair.z_net, psi_values),
                    name="eopen-psi")
    values, ok_mask = dugundji_extend_partial(tilde_pair, psi, "radial")

    first = None
    prev = math.inf
    for n in range(1, report.n_max + 1):
        i_n = int(np.nonzero(factor_vals == 1.0 / n)[0][0])
        rows = i_n * n_base + np.arange(n_base)
        member = MapSample(pair.z_net, circle, member_values(n),
                           Modulus.lip(2.0), name=f"anr-eopen-{n}")
        sup = sup_distance(member, limit)
        report.expect(sup < prev, f"n={n}: sup not strictly decreasing")
        prev = sup
        if not bool(ok_mask[rows].all()):
            if first is not None:
                report.fail(f"slice {n} failed after first success {first}")
            continue
        slice_vals = values[rows]
        ext = MapSample(y_space.net, circle, slice_vals,
                        measured_modulus(y_space.net, slice_vals),
                        name=f"anr-eopen-ext-{n}")
        verdict = check_certificate(pair, member,
                                    PositiveCertificate(ext, tolerance=0.0))
        if first is None:
            first = n
        drift = float(euclidean_rows(slice_vals, limit_ext_vals).max())
        report.add_row(n, sup, "positive", verdict, _row_margin(verdict))
        report.notes.append(f"n={n}: sup |ext_n - ext_limit| = {drift!r}")
    report.first_success = first
    report.expect(first is not None, "no slice extension ever succeeded")
    report.conclusion = ("the cylinder over the convergent family extends "
                         "slice-wise from the first reported n onward")


def _run_eop_homotopy(report: Report):
    eps = report.epsilon
    circle = make_space("circle", eps)
    net = circle.net
    ang = np.arctan2(net.points[:, 1], net.points[:, 0])
    k_cap = 64

    def angle_shift(k):
        if k == 1:
            return 0.75 * math.pi
        return ((-1) ** (k + 1)) * math.pi / (2 * k)

    def member(k):
        b = angle_shift(k)
        vals = np.column_stack([np.cos(ang + b), np.sin(ang + b)])
        return MapSample(net, circle, vals, Modulus.lip(2.0),
                         name=f"eop-{k}")

    limit = MapSample(net, circle, net.points, Modulus.lip(1.0), name="eop-limit")
    members = {k: member(k) for k in range(1, k_cap + 1)}

    def chain_ok(n):
        # the geodesic chain breaks only at an exactly antipodal pair
        return not any(
            abs(abs(angle_shift(k) - angle_shift(k + 1)) - math.pi) < 1e-9
            for k in range(n, k_cap))

    first = None
    for n in range(1, report.n_max + 1):
        if chain_ok(n):
            first = n
            break
    report.first_success = first
    if not report.expect(first is not None, "no homotopy threshold found"):
        return
    times = [0.0] + [1.0 / k for k in range(k_cap, first - 1, -1)]
    frames = [limit.values] + [members[k].values
                               for k in range(k_cap, first - 1, -1)]
    psi = Homotopy(net, circle, np.asarray(times), np.stack(frames),
                   _merged_modulus(net, frames[:2] + frames[-2:]),
                   meta={"indices": np.arange(len(net))})
    prev = math.inf
    for k in range(first, report.n_max + 1):
        sup = sup_distance(members[k], limit)
        report.expect(sup < prev, f"k={k}: sup not strictly decreasing")
        prev = sup
        exact = bool(np.array_equal(psi.slice(1.0 / k).values,
                                    members[k].values))
        verdict = Verdict(VERIFIED if exact else REFUTED, eps)
        verdict.add("slice-identity", exact,
                    f"slice at 1/{k} equals member {k} exactly")
        gap = abs(angle_shift(k) - angle_shift(min(k + 1, k_cap)))
        report.add_row(k, sup, "slice-identity", verdict,
                       2.0 - 2 * math.sin(min(gap, math.pi) / 2))
    exact0 = bool(np.array_equal(psi.slice(0.0).values, limit.values))
    report.expect(exact0, "slice at 0 is not the limit map")
    report.conclusion = ("one homotopy path passes through every member "
                         "beyond the reported threshold and ends at the limit")


def _run_anr_eclosed(report: Report):
    eps = report.epsilon
    pair = make_pair("interval-N", eps)
    y_space = pair.space
    circle = make_space("circle", eps)
    y = y_space.net.points[:, 0]

    def global_ext(beta):
        a = math.pi / 2 * y + beta
        return MapSample(y_space.net, circle,
                         np.column_stack([np.cos(a), np.sin(a)]),
                         Modulus.lip(math.pi / 2), name=f"ext-{beta:.3f}")

    phibar_limit = global_ext(0.0)
    phi = restrict(phibar_limit, pair)
    rho = 4 * eps
    d_z = np.min(y_space.net.dist_idx(np.arange(len(y)), pair.z_indices),
                 axis=1)
    v_idx = np.nonzero(d_z < rho)[0]
    vbar_idx = np.nonzero(d_z <= rho)[0]
    f = urysohn(y_space, pair.z_indices, v_idx)
    sub = y_space.net.subnet(vbar_idx)
    prev = math.inf
    for n in range(1, report.n_max + 1):
        beta = math.pi / (n + 2)
        phibar_n = global_ext(beta)
        phi_n = restrict(phibar_n, pair)
        sup = sup_distance(phi_n, phi)
        report.expect(sup < prev, f"n={n}: sup not strictly decreasing")
        prev = sup
        a_on = MapSample(sub, circle, phibar_n.values[vbar_idx],
                         phibar_n.modulus, name="psi0")
        b_on = MapSample(sub, circle, phibar_limit.values[vbar_idx],
                         phibar_limit.modulus, name="psi1")
        psi = homotopy_between(a_on, b_on, "geodesic-circle")
        psi.meta["indices"] = vbar_idx
        glued = glue_homotopy_extension(pair, v_idx, phibar_n, psi, f)
        cert = PositiveCertificate(glued, tolerance=0.0,
                                   modulus_slack=4 * eps)
        verdict = check_certificate(pair, phi, cert)
        report.add_row(n, sup, "glued-extension", verdict,
                       _row_margin(verdict))
    report.conclusion = ("each nearby extendible member yields, by homotopy "
                         "gluing along a separating function, an extension "
                         "of the limit that is exact on the subspace")


def _run_loc_ext(report: Report):
    eps = report.epsilon
    pair = make_pair("opc-intervals", eps)
    circle = make_space("circle", eps)
    p = circle.net.points[0]
    blocks = pair.space.meta["blocks"]
    n_demo = 2
    full_vals = np.tile(p, (len(pair.space.net), 1))
    prev = math.inf
    for b in blocks:
        k = b["n"]
        a_k = 2.0 ** (-k - 1)
        angles = np.array([-a_k, a_k])
        f_vals = np.column_stack([np.cos(angles), np.sin(angles)])
        idx = np.arange(b["start"], b["start"] + b["size"])
        bspace = subspace(pair.space, idx, f"block-{k}")
        bpair = SpacePair.build(f"block-{k}-ends", bspace,
                                [0, b["size"] - 1])
        span = float(bpair.z_net.points.max() - bpair.z_net.points.min())
        fmap = MapSample(bpair.z_net, circle, f_vals,
                         Modulus.lip(2.0 * a_k / span), name=f"phi-{k}")
        try:
            ext = small_diameter_extend(bpair, fmap, 2.0 ** (-k + 1))
        except ExtenlabError as exc:
            report.fail(f"block {k}: {exc}")
            continue
        diam = ext.value_diameter()
        report.expect(diam < prev, f"block {k}: diameters not decreasing")
        prev = diam
        ok = diam <= 2.0 ** (-k + 1)
        verdict = Verdict(VERIFIED if ok else REFUTED, eps)
        verdict.add("image-diameter", ok,
                    f"diam {diam:.4g} <= {2.0 ** (-k + 1):.4g}")
        report.add_row(k, diam, "small-diameter-extension", verdict,
                       2.0 ** (-k + 1) - diam)
        if k > n_demo:
            full_vals[idx] = ext.values
    # accumulation toward the point at infinity
    worst = 0.0
    for b in blocks:
        idx = np.arange(b["start"], b["start"] + b["size"])
        far = float(np.abs(pair.space.net.points[idx, 0]).max())
        worst = max(worst, far - 2.0 ** (-b["n"]))
    report.expect(worst <= 1e-12,
                  "a block escapes its 2^-n ball around infinity")
    # the assembled extension of the n_demo family member
    fam_vals = []
    for i, yi in enumerate(pair.z_indices):
        blk = 0
        for b in blocks:
            if b["start"] <= yi < b["start"] + b["size"]:
                blk = b["n"]
        if blk <= n_demo:
            fam_vals.append(p)
        else:
            fam_vals.append(full_vals[yi])
    member = MapSample(pair.z_net, circle, np.asarray(fam_vals),
                       measured_modulus(pair.z_net, np.asarray(fam_vals)),
                       name=f"loc-ext-{n_demo}")
    assembled = MapSample(pair.space.net, circle, full_vals,
                          measured_modulus(pair.space.net, full_vals),
                          name="loc-ext-assembled")
    verdict = check_certificate(pair, member,
                                PositiveCertificate(assembled, tolerance=0.0))
    report.add_row(f"family n={n_demo}", None, "positive", verdict,
                   _row_margin(verdict))
    limit = constant_map(pair.z_net, circle, p, name="loc-ext-limit")
    lverdict = check_certificate(
        pair, limit,
        PositiveCertificate(constant_map(pair.space.net, circle, p),
                            tolerance=0.0))
    report.add_row("limit", None, "positive", lverdict,
                   _row_margin(lverdict))
    report.conclusion = ("small-diameter maps on shrinking blocks extend "
                         "with shrinking image diameters, assembling to an "
                         "extension over the compactified union")


def _run_cone_contraction(report: Report):
    eps = report.epsilon
    circle = make_space("circle", eps)
    p_idx = 0
    p = circle.net.points[p_idx]
    prev = math.inf
    for j in range(1, report.n_max + 1):
        target = 2.0 ** (-j)
        delta = min(target / 2, 1.0)
        radius = delta / 4
        d_to_p = euclidean_rows(circle.net.points,
                                np.broadcast_to(p, circle.net.points.shape))
        idx = np.nonzero(d_to_p <= radius)[0]
        if len(idx) < 3:
            report.notes.append(f"j={j}: ball too small at this resolution")
            break
        ball = subspace(circle, idx, f"ball-{j}")
        p_local = int(np.nonzero(idx == p_idx)[0][0])
        try:
            h = cone_contraction(ball, p_local, target)
        except ExtenlabError as exc:
            report.fail(f"j={j}: {exc}")
            continue
        ident = bool(np.array_equal(h.slice(0.0).values, ball.net.points))
        endpt = bool(np.all(h.slice(1.0).values == p))
        rel_p = bool(np.all(h.values[:, p_local, :] == p))
        spread = float(euclidean_rows(
            h.values.reshape(-1, 2),
            np.broadcast_to(p, (h.values.shape[0] * h.values.shape[1], 2))).max())
        good = ident and endpt and rel_p and spread < target
        verdict = Verdict(VERIFIED if good else REFUTED, eps)
        verdict.add("starts-at-identity", ident, "")
        verdict.add("ends-at-p", endpt, "")
        verdict.add("fixes-p-throughout", rel_p, "")
        verdict.add("stays-in-target-ball", spread < target,
                    f"max distance to p {spread:.4g} < {target:.4g}")
        report.expect(spread < prev, f"j={j}: contraction radii not decreasing")
        prev = spread
        report.add_row(j, spread, "cone-contraction", verdict,
                       target - spread)
    report.conclusion = ("balls around the basepoint contract to it inside "
                         "shrinking neighborhoods, fixing the basepoint at "
                         "every stage")


def _run_equiconnected(report: Report):
    eps = report.epsilon
    circle = make_space("circle", eps)
    net = circle.net
    ang = np.arctan2(net.points[:, 1], net.points[:, 0])
    phi0 = MapSample(net, circle, net.points, Modulus.lip(1.0), name="identity")
    prev = math.inf
    for j in range(1, report.n_max + 1):
        delta = 2.0 ** (-j)
        amp = delta / 2
        bump = np.where((ang >= 0) & (ang <= math.pi),
                        amp * np.sin(np.maximum(ang, 0.0)), 0.0)
        shifted = ang + bump
        vals = np.where((bump == 0.0)[:, None], net.points,
                        np.column_stack([np.cos(shifted), np.sin(shifted)]))
        phi1 = MapSample(net, circle, vals, Modulus.lip(2.0),
                         name=f"bumped-{j}")
        sup = sup_distance(phi0, phi1)
        report.expect(sup < prev, f"j={j}: sup not strictly decreasing")
        prev = sup
        try:
            h = equiconnect_homotopy(phi0, phi1, delta)
        except EpsilonTooLarge as exc:
            report.fail(f"j={j}: {exc}")
            continue
        coincidence = np.nonzero(np.all(phi0.values == phi1.values, axis=1))[0]
        fixed = bool(np.all(h.values[:, coincidence, :]
                            == phi0.values[coincidence]))
        pairwise = 0.0
        for a in range(len(h.times)):
            for b in range(a + 1, len(h.times)):
                pairwise = max(pairwise, float(
                    euclidean_rows(h.values[a], h.values[b]).max()))
        ends = bool(np.array_equal(h.values[0], phi0.values)
                    and np.array_equal(h.values[-1], phi1.values))
        good = fixed and ends and pairwise < delta and len(coincidence) > 0
        verdict = Verdict(VERIFIED if good else REFUTED, eps)
        verdict.add("coincidence-fixed", fixed,
                    f"{len(coincidence)} coincidence points pinned")
        verdict.add("endpoints-exact", ends, "")
        verdict.add("slices-pairwise-close", pairwise < delta,
                    f"max pairwise slice distance {pairwise:.4g} < {delta:.4g}")
        report.add_row(j, sup, "equiconnected-homotopy", verdict,
                       delta - pairwise)
    report.conclusion = ("delta-close maps admit homotopies that pin their "
                         "coincidence set and keep all stages epsilon-close")


_EXAMPLES = {
    "pathcomp": dict(runner=_run_pathcomp, eps=2.0 ** -8, n_max=15,
                     claim="a non-closed path component makes a uniform "
                           "limit of extendible maps non-extendible"),
    "sine-not-eclosed": dict(runner=_run_sine_not_eclosed, eps=2.0 ** -8,
                             n_max=15,
                             claim="the topologist's sine curve is not "
                                   "e-closed"),
    "sine-not-eopen": dict(runner=_run_sine_not_eopen, eps=2.0 ** -8,
                           n_max=15,
                           claim="the topologist's sine curve is not e-open"),
    "comb": dict(runner=_run_comb, eps=2.0 ** -8, n_max=20,
                 claim="the infinite comb is path-connected but not "
                       "e-closed"),
    "ndagger-not-eopen": dict(runner=_run_ndagger_not_eopen, eps=2.0 ** -8,
                              n_max=20,
                              claim="the compactified naturals are not "
                                    "e-open"),
    "ndagger-eclosed": dict(runner=_run_ndagger_eclosed, eps=2.0 ** -6,
                            n_max=7,
                            claim="the compactified naturals are e-closed "
                                  "via the clopen intersection property"),
    "hawaii": dict(runner=_run_hawaii, eps=2.0 ** -8, n_max=10,
                   claim="the Hawaiian earring is path-connected and "
                         "locally path-connected but not e-open"),
    "anr-eopen": dict(runner=_run_anr_eopen, eps=2.0 ** -6, n_max=6,
                      claim="near an extendible limit into a compact ANR, "
                            "members become extendible"),
    "eop-homotopy": dict(runner=_run_eop_homotopy, eps=2.0 ** -6, n_max=8,
                         claim="a uniformly convergent family into the "
                               "circle is eventually joined by one homotopy "
                               "path"),
    "anr-eclosed": dict(runner=_run_anr_eclosed, eps=2.0 ** -6, n_max=6,
                        claim="a uniform limit of extendible maps into the "
                              "circle extends by homotopy gluing"),
    "loc-ext": dict(runner=_run_loc_ext, eps=2.0 ** -6, n_max=8,
                    claim="small-diameter maps extend with small-diameter "
                          "images over a compactified shrinking union"),
    "cone-contraction": dict(runner=_run_cone_contraction, eps=2.0 ** -7,
                             n_max=4,
                             claim="small balls contract to a point rel the "
                                   "point inside prescribed neighborhoods"),
    "equiconnected": dict(runner=_run_equiconnected, eps=2.0 ** -6, n_max=6,
                          claim="close circle-valued maps are homotopic rel "
                                "their coincidence set"),
}


def list_examples() -> list[dict]:
    """Static catalog of the shipped reproductions."""
    return [{"name": name,
             "claim": entry["claim"],
             "default_epsilon": dyadic.format_epsilon(entry["eps"]),
             "default_n_max": entry["n_max"]}
            for name, entry in sorted(_EXAMPLES.items())]


def run_example(name: str, epsilon: float | None = None,
                n_max: int | None = None) -> Report:
    """Run one named reproduction and assemble its report."""
    if name not in _EXAMPLES:
        raise UnknownName(f"unknown example {name!r}")
    entry = _EXAMPLES[name]
    eps = entry["eps"] if epsilon is None else epsilon
    if not dyadic.is_dyadic(eps):
        raise InvalidArgument(f"epsilon {eps!r} is not dyadic")
    count = entry["n_max"] if n_max is None else n_max
    if count < 1:
        raise InvalidArgument("n_max must be at least 1")
    report = Report(name=name, epsilon=eps, n_max=count)
    started = time.perf_counter()
    entry["runner"](report)
    report.timing_seconds = time.perf_counter() - started
    return report
