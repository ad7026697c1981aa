"""Verification suites, the report_v1 document, and the curve registry."""

from __future__ import annotations

import fcntl
import hashlib
import json
import os
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .ec import DEFAULT_BUDGET, ECPoint, EllipticCurve, Isogeny, frobenius_isogeny, matching_iso_test, velu_isogeny
from .errors import (
    AssumptionViolated,
    CoverUnsupported,
    Genus2GlueError,
    InvalidField,
    InvalidKernel,
    NotFound,
    ReportError,
    SingularCurve,
    SupersingularUnsupported,
)
from .ff import FieldDescriptor, field_create
from .g2 import (
    CoverSpec,
    cover_degree,
    cover_degree_by_fibers,
    example1_model,
    find_example1_parameter,
    g2_count_and_lpoly,
    pgl2_iso_test,
    ramification_report,
    split_check,
)
from .glue import GluedCurve, glue_construct, section_maps_eval
from .homalg import beta_form, congruence_and_minimality, phi_kernel_check, polarization_check
from .poly import Polynomial

SCHEMA = "report_v1"
SUITES = ("core", "covers", "example1")
REGISTRY_ENV = "GENUS2GLUE_REGISTRY"
DEFAULT_REGISTRY = "registry.jsonl"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


# -- reports --


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    status: str  # "pass", "fail" or "skipped"
    data: dict

    def to_json(self) -> dict:
        return {"id": self.check_id, "anchor": self.anchor, "status": self.status, "data": self.data}


@dataclass
class VerificationReport:
    params: dict
    checks: list[CheckRecord] = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        live = [c for c in self.checks if c.status != "skipped"]
        return "pass" if all(c.status == "pass" for c in live) else "fail"

    def run(self, check_id: str, anchor: str, fn: Callable[[], tuple[bool, dict]]) -> CheckRecord:
        if any(c.check_id == check_id for c in self.checks):
            raise ReportError(f"duplicate check id {check_id}")
        t0 = time.perf_counter()
        try:
            ok, data = fn()
            status = "pass" if ok else "fail"
        except (CoverUnsupported, SupersingularUnsupported) as exc:
            status, data = "skipped", {"reason": str(exc)}
        except Genus2GlueError as exc:
            status, data = "fail", {"error": type(exc).__name__, "message": str(exc)}
        self.timing[check_id] = round(time.perf_counter() - t0, 4)
        rec = CheckRecord(check_id, anchor, status, data)
        self.checks.append(rec)
        return rec

    def skip(self, check_id: str, anchor: str, reason: str) -> CheckRecord:
        rec = CheckRecord(check_id, anchor, "skipped", {"reason": reason})
        self.checks.append(rec)
        return rec

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "params": self.params,
            "status": self.status,
            "checks": [c.to_json() for c in self.checks],
        }
        if include_timing:
            out["timing"] = self.timing
        return out

    def dumps(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_json(include_timing), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


# -- building curves from flags or records --


def parse_isogeny(spec: str) -> tuple[str, int]:
    try:
        kind, arg = spec.split(":")
        n = int(arg)
    except ValueError:
        raise ValueError(f"isogeny must look like frob:k or velu:l, got {spec!r}") from None
    if kind not in ("frob", "velu") or n < 1:
        raise ValueError(f"isogeny must look like frob:k or velu:l, got {spec!r}")
    return kind, n


def parse_element(F: FieldDescriptor, text: str) -> int:
    """An element given as its integer code or as comma-separated base-p digits (low first)."""
    if "," in text:
        digits = [int(d) for d in text.split(",")]
        if any(not 0 <= d < F.p for d in digits) or len(digits) > F.e:
            raise ValueError(f"bad digits {text!r} for F_{F.q}")
        return F.from_digits(digits + [0] * (F.e - len(digits)))
    code = int(text)
    if not 0 <= code < F.q:
        raise ValueError(f"code {code} out of range for F_{F.q}")
    return code


def build_isogeny(E: EllipticCurve, kind: str, n: int, kernel=None) -> Isogeny:
    if kind == "frob":
        return frobenius_isogeny(E, n)
    F = E.field
    if kernel is None:
        K = E.point_of_order(n)
        if K is None:
            raise InvalidKernel(f"{n} does not divide #E = {E.order()}")
    else:
        K = ECPoint(F, F.from_digits(kernel[0]), F.from_digits(kernel[1]))
    return velu_isogeny(E, K, n)


def _try_glue(F: FieldDescriptor, lam: int, kind: str, n: int):
    E = EllipticCurve(F, F.elem(lam))
    iso = build_isogeny(E, kind, n)
    C = glue_construct(E, iso.target, iso)
    if kind == "frob" and not E.is_ordinary():
        raise SupersingularUnsupported(f"{E!r} is supersingular")
    return E, iso, C


def auto_lambda(F: FieldDescriptor, kind: str, n: int, seed: int = 0):
    """First lambda, scanning codes from a seed-determined start, giving a valid glue."""
    start = random.Random(seed).randrange(F.q)
    last = None
    for k in range(F.q):
        lam = (start + k) % F.q
        if lam in (0, 1):
            continue
        try:
            return _try_glue(F, lam, kind, n)
        except (AssumptionViolated, InvalidKernel, SingularCurve, SupersingularUnsupported) as exc:
            last = exc
    raise AssumptionViolated(f"no lambda in F_{F.q} gives a valid glue for {kind}:{n}" + (f" (last: {last})" if last else ""))


def curve_record(F: FieldDescriptor, E: EllipticCurve, iso: Isogeny, C: GluedCurve) -> dict:
    body = {
        "field": {"p": F.p, "e": F.e, "modulus": list(F.modulus)},
        "lambda": F.digits(E.lam),
        "lambda_prime": F.digits(iso.target.lam),
        "isogeny": {"kind": "frob" if iso.kind == "frobenius" else "velu", "n": iso.params.get("k", iso.params.get("ell"))},
        "sextic": [F.digits(c) for c in C.h.coeffs],
    }
    if iso.kind == "velu":
        body["isogeny"]["kernel"] = iso.params["kernel"]
    return {"kind": "curve", "id": "g2-" + digest(body)[:12], **body}


def curve_from_record(rec: dict) -> tuple[EllipticCurve, Isogeny, GluedCurve]:
    fd = rec["field"]
    F = field_create(fd["p"], fd["e"])
    if list(F.modulus) != fd["modulus"]:
        raise ReportError("field modulus in the registry differs from the canonical one")
    E = EllipticCurve(F, F.elem(F.from_digits(rec["lambda"])))
    iso_spec = rec["isogeny"]
    iso = build_isogeny(E, iso_spec["kind"], iso_spec["n"], iso_spec.get("kernel"))
    if F.digits(iso.target.lam) != rec["lambda_prime"]:
        raise ReportError("registry lambda' does not match the rebuilt isogeny")
    C = glue_construct(E, iso.target, iso)
    return E, iso, C


# -- suites --


def _sample_points(C: GluedCurve, k: int, seed: int):
    rng = random.Random(seed)
    return [C.random_point(rng) for _ in range(k)]


def run_core(rep: VerificationReport, E, iso, C, budget: int, seed: int = 0):
    F = C.field
    rep.run("core.assumption", "zero sections disjoint", lambda: (True, {"detail": "checked at construction"}))

    def genus():
        rh = C.riemann_hurwitz()
        return rh["total"] == 10 and rh["genus"] == 2, rh

    rep.run("core.genus", "Riemann-Hurwitz for the x-line map", genus)

    def weier():
        imgs = C.weierstrass_x_images()
        return sorted(imgs) == ["0", "0", "1", "1", "inf", "inf"], {"x_images": imgs}

    rep.run("core.weierstrass_pushforward", "Weierstrass points over 2-torsion x-values", weier)

    def split():
        v = split_check(C, E, iso.target, budget)
        return v["pass"], v

    rep.run("core.lpoly_split", "L_C = L_E L_E'", split)

    def kernel():
        v = phi_kernel_check(E, iso.target, iso)
        return v["pass"], v

    rep.run("core.phi_kernel", "kernel of Phi is the graph of -psi", kernel)

    def psi_compat():
        iso_match = matching_iso_test(E, iso.target, iso.psi)
        same = E.lam == iso.target.lam
        return True, {"isomorphism_matching_psi": iso_match is not None, "lambda_equal": same}

    rep.run("core.psi_compatibility", "no isomorphism E -> E' restricts to psi unless lambda = lambda'", psi_compat)

    def sections():
        pts = _sample_points(C, 16, seed)
        ok = True
        for P in pts:
            a = section_maps_eval(C, "pi", P)
            ok &= section_maps_eval(C, "pi", C.deck_pi(P)) == a
            ok &= section_maps_eval(C, "pi_prime", C.deck_pi_prime(P)) == section_maps_eval(C, "pi_prime", P)
            ok &= section_maps_eval(C, "pi", C.hyperelliptic_involution(P)) == E.neg(a)
        return ok, {"points": len(pts)}

    rep.run("core.deck_involutions", "deck maps commute with the covers", sections)

    def dual():
        rng = random.Random(seed)
        pts = [E.random_point(rng) for _ in range(16)]
        ok = all(iso.dual(iso(P)) == E.mul(iso.degree, P) for P in pts)
        return ok, {"points": len(pts), "degree": iso.degree}

    rep.run("core.dual_identity", "dual(tau) o tau = [N]", dual)

    def ram():
        r = ramification_report(CoverSpec(C, 1, 0))
        d = r.data
        ok = (
            len(r.V) == 2
            and d["pi_prime_of_V_is_origin"]
            and d["delta_distinct"]
            and d["V_disjoint_from_V_prime"]
        )
        return ok, r.to_json()

    rep.run("core.ramification", "V(pi) over m = 0, pi'(V) = 0, Delta has two points", ram)


def run_covers(rep: VerificationReport, E, iso, C, budget: int):
    p = C.field.p
    N = iso.degree
    for a, b in ((1, 0), (0, 1), (1, 1), (1, 2)):
        def deg(a=a, b=b):
            if b and iso.kind != "frobenius":
                raise CoverUnsupported("symbolic dual is implemented for Frobenius isogenies")
            spec = CoverSpec(C, a, b, iso if b else None)
            d = cover_degree(spec)
            fib = cover_degree_by_fibers(spec)
            return d == spec.expected_degree() and fib <= d, {
                "a": a, "b": b, "degree": d, "expected": spec.expected_degree(), "max_fiber": fib,
            }

        rep.run(f"covers.degree_{a}_{b}", "deg = 2a^2 + 2Nb^2", deg)

    def ram_p():
        if iso.kind != "frobenius":
            raise CoverUnsupported("symbolic dual is implemented for Frobenius isogenies")
        r = ramification_report(CoverSpec(C, 1, p, iso))
        return r.data["V_equals_V_10"] and min(r.multiplicities) >= 2, r.to_json()

    rep.run(f"covers.ramification_1_{p}", "V_(1,p) = V", ram_p)

    def congruence():
        rows = [congruence_and_minimality(b, p, N) for b in range(-30, 31)]
        ok = all(r["congruent_mod_p"] == (b % p == 0) for b, r in zip(range(-30, 31), rows))
        ok &= all(r["minimality_certified"] for b, r in zip(range(-30, 31), rows) if b % 2 == 0)
        return ok, {"b_range": [-30, 30], "congruent_b": [r["b"] for r in rows if r["congruent_mod_p"]]}

    rep.run("covers.congruence_minimality", "(pi + b dual pi')_* = pi_* mod p iff p | b", congruence)

    def beta():
        rng = range(-4, 5)
        bad = [
            (a, b, c, d)
            for a in rng for b in rng for c in rng for d in rng
            if beta_form(a, b, c, d, N) != 2 * a * c + 2 * N * b * d
        ]
        return not bad, {"range": [-4, 4], "N": N, "mismatches": bad[:5]}

    rep.run("covers.beta_form", "beta = 2ac + 2Nbd", beta)

    def polar():
        v = polarization_check(2, N)
        return v["pass"], {"n": 2, "N": N, "lambda_tilde": v["lambda_tilde"].to_json()}

    rep.run("covers.polarization", "n Phihat^-1 Phi^-1", polar)


def example1_pair(F: FieldDescriptor, t0_code: int | None = None):
    if t0_code is None:
        t0 = find_example1_parameter(F)
        if t0 is None:
            raise ReportError(f"no admissible t0 in F_{F.q}")
    else:
        t0 = F.elem(t0_code)
    model = example1_model(F.p, t0)
    E = EllipticCurve(F, t0)
    iso = frobenius_isogeny(E, 1)
    C = glue_construct(E, iso.target, iso)
    return t0, model, C


def run_example1(rep: VerificationReport, F: FieldDescriptor, budget: int, t0_code: int | None = None):
    try:
        t0, model, C = example1_pair(F, t0_code)
    except Genus2GlueError as exc:
        rep.skip("example1.parameter", "admissible specialization", str(exc))
        return
    rep.run("example1.parameter", "admissible specialization", lambda: (True, {"t0": t0.to_json()}))

    def shape():
        monic = [f.monic() for f in C.factors]
        p = F.p
        tp1 = t0 ** (p - 1)
        S = sum((t0**i for i in range(1, p)), F.one())
        expected = [Polynomial(F, (F.neg(c.code), 0, 1)) for c in (F.one(), tp1, S)]
        ok = sorted(f.coeffs for f in monic) == sorted(f.coeffs for f in expected)
        return ok, {"factors": [[F.digits(c) for c in f.coeffs] for f in monic]}

    rep.run("example1.shape", "factor root sets match", shape)
    verdict = {}

    def pgl2():
        res = pgl2_iso_test(model, C.genus2())
        if res is None:
            return False, {"verdict": None}
        verdict["v"] = res.verdict
        return True, res.to_json()

    rep.run("example1.pgl2", "isomorphic or quadratic twist", pgl2)

    def lpoly():
        if "v" not in verdict:
            return False, {"reason": "no isomorphism class verdict"}
        a = g2_count_and_lpoly(model, budget, spot_check=False)["_lpoly"]
        b = g2_count_and_lpoly(C, budget, spot_check=False)["_lpoly"]
        if verdict["v"] == "isomorphic":
            return a.coeffs == b.coeffs, {"field": "F_q", "lpoly": a.coeffs}
        a2, b2 = a.over_quadratic_extension(), b.over_quadratic_extension()
        return a2.coeffs == b2.coeffs, {"field": "F_q2", "lpoly": a2.coeffs, "lpoly_over_F_q": [a.coeffs, b.coeffs]}

    rep.run("example1.lpoly", "equal L-polynomials where the twist trivializes", lpoly)


def verify_record(rec: dict, suite: str = "core", budget: int = DEFAULT_BUDGET, t0_code: int | None = None) -> VerificationReport:
    if suite not in SUITES + ("all",):
        raise ValueError(f"unknown suite {suite!r}")
    E, iso, C = curve_from_record(rec)
    rep = VerificationReport({"id": rec["id"], "suite": suite, "budget": budget, "curve": {
        k: rec[k] for k in ("field", "lambda", "lambda_prime", "isogeny")}})
    if suite in ("core", "all"):
        run_core(rep, E, iso, C, budget)
    if suite in ("covers", "all"):
        run_covers(rep, E, iso, C, budget)
    if suite in ("example1", "all"):
        run_example1(rep, C.field, budget, t0_code)
    return rep


# -- registry --


class CurveRegistry:
    """Append-only JSONL file; every line carries a sha256 digest of its other fields."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path or os.environ.get(REGISTRY_ENV) or DEFAULT_REGISTRY)

    def _records(self) -> list[dict]:
        if not self.path.exists():
            return []
        with open(self.path, "r", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_SH)
            try:
                return [json.loads(line) for line in fh if line.strip()]
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def append(self, record: dict) -> dict:
        body = {k: v for k, v in record.items() if k != "digest"}
        rec = {**body, "digest": digest(body)}
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a+", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.seek(0)
                for line in fh:
                    if line.strip():
                        old = json.loads(line)
                        if old.get("kind") == "curve" and rec.get("kind") == "curve" and old["id"] == rec["id"]:
                            return old
                fh.seek(0, os.SEEK_END)
                fh.write(canonical_json(rec) + "\n")
                fh.flush()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
        return rec

    def curves(self) -> list[dict]:
        return [r for r in self._records() if r.get("kind") == "curve"]

    def get(self, curve_id: str) -> dict:
        for r in self.curves():
            if r["id"] == curve_id:
                return r
        raise NotFound(curve_id)

    def integrity(self) -> list[int]:
        """Line numbers (1-based) whose digest does not match their content."""
        bad = []
        for i, r in enumerate(self._records(), 1):
            body = {k: v for k, v in r.items() if k != "digest"}
            if r.get("digest") != digest(body):
                bad.append(i)
        return bad

    def add_report(self, curve_id: str, rep: VerificationReport) -> dict:
        doc = rep.to_json()
        return self.append({
            "kind": "report", "id": curve_id, "suite": rep.params.get("suite"),
            "status": rep.status, "report_digest": digest(doc),
        })


def construct(p: int, e: int, isogeny: str, lam: str | None = None, auto: bool = False, seed: int = 0):
    """Build and validate a glued curve from command-line style inputs."""
    if p == 2 or p < 2:
        raise InvalidField(f"p = {p}: need an odd prime")
    F = field_create(p, e)
    kind, n = parse_isogeny(isogeny)
    if auto:
        return auto_lambda(F, kind, n, seed)
    if lam is None:
        raise ValueError("give --lambda or --auto")
    code = parse_element(F, lam)
    if code in (0, 1):
        raise SingularCurve(f"lambda = {code} gives a singular curve")
    return _try_glue(F, code, kind, n)


__all__ = [
    "SCHEMA", "CheckRecord", "VerificationReport", "CurveRegistry", "construct", "curve_record",
    "curve_from_record", "verify_record", "run_core", "run_covers", "run_example1", "example1_pair",
    "canonical_json", "digest", "parse_isogeny", "parse_element", "auto_lambda",
]
