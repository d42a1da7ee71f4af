"""Command line driver: each stage as a subcommand, plus a chained reproduction run.

Every stage returns a report with a result and a list of checks against the
targets shipped in data/targets.json.  Reports go to standard output
(or --out), progress lines to standard error.  The exit status is 0 iff every
check passes.
"""
import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .algebra import MultiPoly, RationalFunction, divexact, mpq, parse_poly, qq, to_text
from .balances import (PHASE_VARS, SERIES, check_equivariance, initial_locus, initial_point,
                       kovalevskaya_exponents, principal_balance)
from .curves import (CURVE, STRATA, Stratum, cyclic_cover_data, elliptic_quotient, general_family,
                     genus_simple_ramification, painleve_plane_model, ramification_sextic_a)
from .curves import invariants_on_balance
from .filtration import (reference_relations, completed_psi_basis, filtration_basis,
                         fibre_points, hilbert_function, hilbert_series_coefficients, image_relations,
                         in_relation_span, line_section, reference_targets, phi_basis, pole_order,
                         psi_basis, same_span, slice_rank, vanishes_on_fibre_points)
from .integrability import critical_value_eliminant, expressibility_phi, expressibility_psi
from .mechanics import (G_QUANTUM_CORRECTION, PHASE, UMBRELLA_TEXTS, canonicalize_dgr,
                        fixed_point_count, poisson_bracket, verify_component_membership,
                        weyl_commutator_check)

PIPELINE = ("canonicalize", "locus", "exponents", "balance", "invariants", "plane-model", "genus",
            "j", "filtration", "relations", "hilbert", "line", "wronskians", "eliminant",
            "fixed-points", "umbrella", "weyl")


class ConfigError(ValueError):
    pass


class Mode:
    """Deformation mode: a = 0, a symbolic, or a fixed rational value (computed symbolically, then substituted)."""

    def __init__(self, text):
        text = str(text).strip()
        if text in ("sym", "symbolic"):
            self.kind, self.value = "sym", None
        else:
            try:
                v = Fraction(text)
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"--a expects 0, sym or a rational number, got {text!r}")
            if v == 0:
                self.kind, self.value = "zero", None
            else:
                self.kind, self.value = "value", mpq(v.numerator, v.denominator)

    @property
    def symbolic(self):
        """Whether computations keep a as a variable."""
        return self.kind != "zero"

    @property
    def label(self):
        return {"zero": "0", "sym": "sym"}.get(self.kind) or str(self.value)

    def fix(self, f):
        """Bring a polynomial or rational function computed with symbolic a to this mode."""
        if self.kind == "sym" or not isinstance(f, (MultiPoly, RationalFunction)) or "a" not in f.ring.names:
            return f
        return f.subs({"a": 0 if self.kind == "zero" else self.value})


class Report:
    def __init__(self, stage):
        self.stage = stage
        self.result = {}
        self.checks = []

    def check(self, name, ok, value=None, target=None):
        entry = {"name": name, "pass": bool(ok)}
        if value is not None:
            entry["value"] = value
        if target is not None:
            entry["target"] = target
        self.checks.append(entry)
        return ok

    def fail(self, exc):
        self.checks.append({"name": "stage completed", "pass": False, "error": f"{type(exc).__name__}: {exc}"})

    @property
    def passed(self):
        return all(c["pass"] for c in self.checks)

    def to_dict(self):
        return {"stage": self.stage, "pass": self.passed, "checks": self.checks, "result": self.result}


def same_up_to_scalar(f, g):
    return f.primitive() == g.primitive()


def ratfunc_text(j):
    if isinstance(j, RationalFunction):
        return j.to_text()
    return str(qq(j)) if not isinstance(j, str) else j


def is_zero_value(j):
    if isinstance(j, RationalFunction):
        return j.is_constant() and qq(j.constant_value()) == 0
    return qq(j) == 0


def equal_ratfunc(j, target):
    """Compare a computed value (number or RationalFunction) with a {"num", "den"} target."""
    if isinstance(j, RationalFunction):
        ring = j.ring
        return RationalFunction(parse_poly(target["num"], ring), parse_poly(target["den"], ring)) == j
    return False


class Runner:
    def __init__(self, a="0", order=24, weight_cap=None, seed=0, quiet=False):
        self.mode = Mode(a)
        self.order = order
        self.weight_cap = weight_cap
        self.seed = seed
        self.quiet = quiet
        self.targets = reference_targets()
        self._cache = {}

    def progress(self, text):
        if not self.quiet:
            print(f"dgr: {text}", file=sys.stderr, flush=True)

    def config(self):
        return {"a": self.mode.label, "order": self.order, "weight_cap": self.weight_cap, "seed": self.seed}

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def run(self, stage, **options):
        self.progress(f"stage {stage}")
        report = Report(stage if not options.get("suffix") else f"{stage}-{options['suffix']}")
        method = getattr(self, "stage_" + stage.replace("-", "_"))
        try:
            method(report, **{k: v for k, v in options.items() if k != "suffix"})
        except Exception as exc:  # a failing stage is a reported result, not a crash
            report.fail(exc)
        return report

    # ---- shared intermediate results ------------------------------------------------

    def balance(self):
        return self.cached("balance", lambda: principal_balance(self.order, self.mode.symbolic))

    def relations(self, d):
        sym = self.mode.symbolic
        if d == 8:
            return self.cached(8, lambda: image_relations(8, modulo_fibre=False, a_symbolic=sym,
                                                          progress=self.progress))
        if d == 3:
            return self.cached(3, lambda: image_relations(3, a_symbolic=sym,
                                                          progress=self.progress))
        if d == 4:
            return self.cached(4, lambda: image_relations(4, a_symbolic=sym, lower=self.relations(3),
                                                          progress=self.progress))
        raise ConfigError("relations are computed in degrees 3, 4 and 8")

    def surface_generators(self):
        return [self.mode.fix(f) for f in self.relations(3).generators + self.relations(4).generators]

    # ---- stages ---------------------------------------------------------------------

    def stage_canonicalize(self, report):
        fix = self.mode.fix
        S = canonicalize_dgr()
        H, G = fix(S.H), fix(S.G)
        report.result = {"H": to_text(H), "G": to_text(G), "weights": dict(zip(PHASE.names, PHASE.weights))}
        report.check("H equals the target", H == fix(PHASE(self.targets["H"])))
        report.check("G equals the target", G == fix(PHASE(self.targets["G"])))
        report.check("{H, G} = 0", not fix(poisson_bracket(S.H, S.G)))

    def stage_locus(self, report):
        pts = initial_locus(a_symbolic=self.mode.symbolic)
        found = {pt.name: [int(v) for v in pt.as_tuple()] for pt in pts}
        report.result = {"points": [pt.to_dict() for pt in pts]}
        report.check("initial locus equals the target", found == self.targets["initial_locus"],
                     value=found, target=self.targets["initial_locus"])

    def stage_exponents(self, report, point=None):
        names = [point] if point else ["I1", "I2", "I3"]
        out = {}
        for n in names:
            exps = sorted(int(e) for e in kovalevskaya_exponents(initial_point(n)))
            out[n] = exps
            target = sorted(self.targets["exponents"][n])
            report.check(f"exponents at {n}", exps == target, value=exps, target=target)
        report.result = {"exponents": out}

    def stage_balance(self, report):
        fix = self.mode.fix
        b = self.balance()
        series = {}
        for x in PHASE_VARS:
            s = b[x]
            target = {p: fix(SERIES(t)) for p, t in self.targets["series"][x]}
            top = max(target)
            ok = all(fix(s.coefficient(p)) == target.get(p, SERIES.zero())
                     for p in range(s.valuation, top + 1))
            report.check(f"displayed terms of {x}", ok)
            series[x] = [[p, to_text(fix(c))] for p, c in s.terms()]
        report.check("sigma-equivariance at a = 0", check_equivariance(b))
        report.result = {"order": self.order, "initial_point": b.point.to_dict(), "series": series}

    def stage_invariants(self, report):
        fix = self.mode.fix
        h, g = invariants_on_balance(self.balance())
        h, g = fix(h), fix(g)
        report.result = {"h": to_text(h), "g": to_text(g)}
        report.check("h(gamma) equals the target", h == fix(SERIES(self.targets["invariants"]["h"])))
        report.check("g(gamma) equals the target", g == fix(SERIES(self.targets["invariants"]["g"])))

    def plane_model(self):
        return self.cached("plane", lambda: painleve_plane_model(self.balance()))

    def stage_plane_model(self, report):
        fix = self.mode.fix
        C = self.plane_model()
        F = fix(C.poly)
        report.result = {"curve": to_text(F)}
        report.check("plane model equals the target", F == fix(CURVE(self.targets["plane_model"])))
        if self.mode.kind == "zero":
            coords = {k: to_text(v) for k, v in C.coordinates.items()}
            want = {k: to_text(CURVE(v)) for k, v in self.targets["readoff"].items()}
            report.result["family_coordinates"] = coords
            report.check("family coordinates", coords == want, value=coords, target=want)
            report.check("sigma-invariant", C.is_sigma_invariant())

    def stage_genus(self, report):
        ladder = {}
        family = general_family()
        for name, want in self.targets["genus"].items():
            cert = genus_simple_ramification(family, name, seed=self.seed)
            ladder[name] = cert.to_dict()
            report.check(f"genus on stratum {name}", cert.genus == want, value=cert.genus, target=want)
        rng = random.Random(self.seed)
        while True:
            zh, dh, eh = (rng.choice([-1, 1]) * rng.randint(1, 30) for _ in range(3))
            if dh * dh != 4 * zh * eh:
                break
        cyc = cyclic_cover_data(zh, dh, eh)
        want = self.targets["cyclic_cover"]
        report.check("cyclic cover genus", cyc["genus"] == want["genus"], value=cyc["genus"], target=want["genus"])
        report.check("cyclic cover Euler characteristic", cyc["euler_characteristic"] == want["euler_characteristic"],
                     value=cyc["euler_characteristic"], target=want["euler_characteristic"])
        C = self.plane_model()
        curve = C if self.mode.kind != "value" else type(C)(self.mode.fix(C.poly), C.name)
        painleve = {}
        if self.mode.kind == "zero":
            cases = [("generic fibre", Stratum("fibre", nonzero=("g", "3*h^2 + 2*g")), 4),
                     ("3h^2 + 2g = 0", Stratum("singular", {"g": "-3/2*h^2"}, nonzero=("h",)), 1),
                     ("g = 0 residual component", Stratum("g=0", {"g": "0"}, nonzero=("h",), factor="y - x^4"), 2)]
        else:
            nonzero = ("g", "3*h^2 + 2*g", "2*a^3 + 9*g", "4*a^3 + 27*h^2 + 18*g")
            cases = [("generic fibre", Stratum("fibre", nonzero=nonzero), 4)]
        for label, stratum, want in cases:
            cert = genus_simple_ramification(curve, stratum, seed=self.seed)
            painleve[label] = cert.to_dict()
            report.check(f"Painleve divisor genus, {label}", cert.genus == want, value=cert.genus, target=want)
        report.result = {"strata": ladder, "cyclic_cover": {"coefficients": [zh, dh, eh], **cyc},
                         "painleve_divisor": painleve}

    def stage_j(self, report):
        fix = self.mode.fix
        E2f = elliptic_quotient(STRATA["beta=gamma,eps=beta*delta"].apply(general_family()))
        report.result["E2_family"] = E2f.to_dict()
        report.check("j(E2) of the family", equal_ratfunc(E2f.j, self.targets["j_E2_family"]))
        if self.mode.kind == "zero":
            E2 = elliptic_quotient(self.plane_model())
            report.result["E2"] = E2.to_dict()
            report.check("j(E2) in h, g", equal_ratfunc(E2.j, self.targets["j_E2"]))
            return
        C = self.plane_model()
        E = elliptic_quotient(C)
        jE = fix(E.j)
        ring = E.j.ring
        target = {k: to_text(fix(parse_poly(v, ring))) for k, v in self.targets["j_E"].items()}
        report.result["E"] = {"radicand": to_text(fix(E.cubic)), "j": ratfunc_text(jE),
                              "plane_model": to_text(fix(E.plane_model))}
        report.check("j(E) of the deformed quotient", equal_ratfunc(jE, target))
        tau = fix(E.plane_model)
        report.check("tau-quotient model up to scale", same_up_to_scalar(tau, fix(tau.ring(self.targets["tau_quotient"]))))
        sextic = fix(ramification_sextic_a(C))
        report.result["ramification_sextic"] = to_text(sextic)
        report.check("ramification sextic up to scale",
                     same_up_to_scalar(sextic, fix(sextic.ring(self.targets["ramification_sextic"]))))

    def stage_filtration(self, report, pole=1):
        sym = self.mode.symbolic
        fb = filtration_basis(pole, weight_cap=self.weight_cap, a_symbolic=sym)
        report.result = fb.to_dict()
        report.result["a"] = self.mode.label
        report.result["basis"] = [{"weight": w, "poly": to_text(self.mode.fix(f))} for w, f in fb.generators]
        want = self.targets["dimensions"].get(str(pole))
        if want is not None:
            report.check(f"dim P({pole}D)", fb.dimension == want, value=fb.dimension, target=want)
        if pole == 1:
            report.check("span equals the phi basis", same_span(fb, phi_basis(sym)))
        elif pole == 2:
            psi = psi_basis(sym)
            report.check("listed elements have pole order at most 2",
                         all(pole_order(f, a_symbolic=sym) <= 2 for f in psi))
            report.check("P(D) products lie in P(2D)",
                         all(pole_order(f, a_symbolic=sym) <= 2 for f in phi_basis(sym)))
            report.result["completed_basis_spans"] = same_span(fb, completed_psi_basis(sym))
            report.check("listed 24 elements span P(2D)", same_span(fb, psi))

    def stage_relations(self, report, degree=None):
        fix = self.mode.fix
        F8, cubics, quartics = reference_relations()
        if not self.mode.symbolic:
            cubics, quartics = [fix(f) for f in cubics], [fix(f) for f in quartics]
        degrees = [degree] if degree else [8, 3, 4]
        report.result = {}
        for d in degrees:
            ideal = self.relations(d)
            gens = [fix(f) for f in ideal.generators]
            report.result[str(d)] = [{"weight": f.weighted_degree(), "poly": to_text(f)} for f in gens]
            if d == 8:
                ok = len(gens) == 1 and same_up_to_scalar(gens[0], fix(F8))
                report.check("hypersurface equals the reference octic up to scale", ok)
            elif d == 3:
                want = self.targets["cubic_count"]
                report.check("number of cubic generators", len(gens) == want, value=len(gens), target=want)
                report.check("reference cubics lie in the recovered slice",
                             all(in_relation_span(c, ideal, self.mode.symbolic) for c in cubics))
                rng = random.Random(self.seed)
                vals = {"h": rng.randint(2, 999), "g": rng.randint(2, 999), "a": rng.randint(2, 999)}
                if self.mode.kind == "zero":
                    vals["a"] = 0
                elif self.mode.kind == "value":
                    vals["a"] = self.mode.value
                r_ours = slice_rank(ideal.generators, vals)
                r_both = slice_rank(ideal.generators + cubics, vals)
                report.check("specialized cubic rank", r_ours == want and r_both == want,
                             value=[r_ours, r_both], target=[want, want])
            elif d == 4:
                want = self.targets["quartic_count"]
                report.check("number of quartic generators", len(gens) == want, value=len(gens), target=want)
                report.check("reference quartics lie in the recovered slice",
                             all(in_relation_span(q, ideal, self.mode.symbolic) for q in quartics))
                pts = fibre_points(50, seed=self.seed, a_symbolic=self.mode.symbolic)
                report.check("reference cubics and quartics vanish on 50 fibre points",
                             all(vanishes_on_fibre_points(f, pts) for f in cubics + quartics))

    def stage_hilbert(self, report):
        gens = self.surface_generators()
        hf = hilbert_function(gens, 4, seed=self.seed, a_symbolic=self.mode.kind == "sym")
        closed = hilbert_series_coefficients(tuple(self.targets["hilbert_numerator"]), 4)
        report.result = {"hilbert_function": hf, "closed_form": closed}
        report.check("Hilbert function", hf == self.targets["hilbert"], value=hf, target=self.targets["hilbert"])
        report.check("closed-form numerator expansion", closed == self.targets["hilbert"], value=closed)

    def stage_line(self, report):
        sec = line_section(self.surface_generators())
        report.result = sec.to_dict()
        report.check("P lies on the section", sec.contains_p)
        if self.mode.kind == "zero":
            report.check("j = 0 (equianharmonic)", is_zero_value(sec.j))
        elif isinstance(sec.j, RationalFunction):
            ring = sec.j.ring
            target = {k: to_text(self.mode.fix(parse_poly(v, ring))) for k, v in self.targets["line_j"].items()}
            report.check("j of the four points", equal_ratfunc(sec.j, target))
        else:
            report.check("j of the four points", False, value=ratfunc_text(sec.j))

    def stage_wronskians(self, report, basis=None, F=None):
        sym = self.mode.symbolic
        bases = [basis] if basis else ["phi", "psi"]
        flows = [F] if F else ["H", "G"]
        report.result = {"a": "sym" if sym else "0"}
        for b in bases:
            for name in flows:
                self.progress(f"wronskians {b} {name}")
                if b == "phi":
                    cert = expressibility_phi(name, sym, progress=self.progress)
                else:
                    cert = expressibility_psi(name, sym, progress=self.progress)
                pairs = [list(p) for p in cert.failing_pairs]
                report.result[f"{b}/{name}"] = {"failing_pairs": pairs, "denominators": cert.denominators}
                if b == "phi" and name == "H" and self.mode.kind == "zero":
                    want = self.targets["phi_failing_pairs"]
                    report.check("phi-basis failing pairs for H", pairs == want, value=pairs, target=want)
                if b == "psi":
                    report.check(f"all psi-basis Wronskians of {name} expressible", not pairs, value=pairs)

    def stage_eliminant(self, report):
        fix = self.mode.fix
        rep = critical_value_eliminant("zero" if self.mode.kind == "zero" else "symbolic", progress=self.progress)
        R = fix(rep.R)
        report.result = rep.to_dict()
        report.result["a"] = self.mode.label
        report.result["eliminant"] = to_text(R)
        factors = self.targets["discriminant"]["zero" if self.mode.kind == "zero" else "symbolic"]
        for text in factors:
            f = fix(R.ring(text))
            try:
                divexact(R, f)
                ok = True
            except ValueError:
                ok = False
            report.check(f"{text} divides the eliminant", ok)
        report.check("the origin is a critical value", R.constant_term() == 0)
        if self.mode.kind == "zero":
            report.check("weighted homogeneous", R.is_weighted_homogeneous())
        elif self.mode.kind == "sym":
            R0 = rep.R.subs({"a": 0})
            try:
                divexact(R0, R.ring("(3*h^2 + 2*g)*g") ** 2)
                ok = True
            except ValueError:
                ok = False
            report.check("((3h^2 + 2g) g)^2 divides the eliminant at a = 0", ok)

    def stage_fixed_points(self, report):
        counts = [fixed_point_count(k, seed=self.seed) for k in (1, 2, 3)]
        report.result = {"a": "0", "counts": counts}
        report.check("fixed points of sigma, sigma^2, sigma^3", counts == self.targets["fixed_points"],
                     value=counts, target=self.targets["fixed_points"])

    def stage_umbrella(self, report):
        report.check("equations equal the target", list(UMBRELLA_TEXTS) == self.targets["umbrella"])
        mult = verify_component_membership()
        report.result = {k: [to_text(m) for m in v] for k, v in mult.items()}
        report.check("H and G lie in the umbrella ideal", set(mult) == {"H", "G"})

    def stage_weyl(self, report):
        report.check("correction equals the target", G_QUANTUM_CORRECTION == self.targets["quantum_correction"])
        c = weyl_commutator_check()
        report.result = {"commutator": to_text(c)}
        report.check("[H, G_hbar] = 0", not c)

    def reproduce(self):
        reports = []
        for stage in PIPELINE:
            if stage == "filtration":
                reports.append(self.run(stage, pole=1, suffix="1"))
                reports.append(self.run(stage, pole=2, suffix="2"))
            else:
                reports.append(self.run(stage))
        return reports


def build_report(runner, command, reports):
    first = None
    for r in reports:
        for c in r.checks:
            if not c["pass"]:
                first = f"{r.stage}: {c['name']}"
                break
        if first:
            break
    return {"tool": "dgr", "version": __version__, "targets_version": runner.targets.get("version"),
            "command": command, "config": runner.config(), "stages": [r.to_dict() for r in reports],
            "pass": all(r.passed for r in reports), "first_failure": first}


def format_text(doc):
    cfg = doc["config"]
    lines = [f"dgr {doc['command']}  a={cfg['a']}  order={cfg['order']}  seed={cfg['seed']}"]
    for st in doc["stages"]:
        lines.append(f"[{'PASS' if st['pass'] else 'FAIL'}] {st['stage']}")
        for c in st["checks"]:
            extra = ""
            if "value" in c:
                extra = f"  value={json.dumps(c['value'])}"
            if "target" in c:
                extra += f"  target={json.dumps(c['target'])}"
            if "error" in c:
                extra += f"  error={c['error']}"
            lines.append(f"    {'PASS' if c['pass'] else 'FAIL'}  {c['name']}{extra}")
    verdict = "PASS" if doc["pass"] else f"FAIL (first failure: {doc['first_failure']})"
    lines.append(f"overall: {verdict}")
    return "\n".join(lines) + "\n"


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", default="0", help="deformation: 0, sym, or a rational value")
    common.add_argument("--order", type=int, default=24, help="series truncation order")
    common.add_argument("--weight-cap", type=int, default=None, help="weight cap for filtrations and relations")
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of standard output")
    common.add_argument("--quiet", action="store_true", help="no progress lines on standard error")
    parser = argparse.ArgumentParser(prog="dgr", description="Reproduce the algebraic analysis of the DGR system.")
    parser.add_argument("--version", action="version", version=f"dgr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    simple = {
        "canonicalize": "rebuild H, G in rational coordinates and check {H, G} = 0",
        "locus": "initial locus of the Laurent ansatz",
        "balance": "principal Laurent balance",
        "invariants": "H and G on the balance",
        "plane-model": "plane model of the Painleve divisor",
        "genus": "genus ladder, cyclic cover and Painleve divisor genus",
        "j": "elliptic quotients and j-invariants",
        "hilbert": "Hilbert function of the fibre surface",
        "line": "section of the fibre surface by the line L",
        "eliminant": "critical values of the moment map",
        "fixed-points": "fixed points of sigma powers on a generic fibre",
        "umbrella": "membership of H, G in the umbrella ideal",
        "weyl": "commutator of the quantum lift",
        "reproduce-paper": "run every stage in order",
    }
    for name, text in simple.items():
        sub.add_parser(name, parents=[common], help=text)
    p = sub.add_parser("exponents", parents=[common], help="Kovalevskaya exponents")
    p.add_argument("--point", choices=("I1", "I2", "I3"), default=None)
    p = sub.add_parser("filtration", parents=[common], help="basis of P(mD)")
    p.add_argument("--pole", type=int, default=1)
    p = sub.add_parser("relations", parents=[common], help="relations among phi in degree 3, 4 or 8")
    p.add_argument("--degree", type=int, choices=(3, 4, 8), default=None)
    p = sub.add_parser("wronskians", parents=[common], help="quadratic expressibility of Wronskians")
    p.add_argument("--basis", choices=("phi", "psi"), default=None)
    p.add_argument("--F", choices=("H", "G"), default=None)
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        runner = Runner(a=args.a, order=args.order, weight_cap=args.weight_cap, seed=args.seed, quiet=args.quiet)
    except ConfigError as exc:
        print(f"dgr: {exc}", file=sys.stderr)
        return 2
    if args.command == "reproduce-paper":
        reports = runner.reproduce()
    else:
        options = {}
        if args.command == "exponents":
            options["point"] = args.point
        elif args.command == "filtration":
            options["pole"] = args.pole
        elif args.command == "relations":
            options["degree"] = args.degree
        elif args.command == "wronskians":
            options["basis"], options["F"] = args.basis, args.F
        reports = [runner.run(args.command, **options)]
    doc = build_report(runner, args.command, reports)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n" if args.format == "json" else format_text(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not doc["pass"]:
        print(f"dgr: FAIL at {doc['first_failure']}", file=sys.stderr)
    return 0 if doc["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
