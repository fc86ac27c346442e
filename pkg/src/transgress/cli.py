"""Command-line driver: configure a run, execute the constructions and
checks, and emit a deterministic text or JSON report.

Exit codes: 0 all checks pass, 1 at least one check fails, 2 usage or
input-validation error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field

from .algebra import ContractError, Scalar, render_monomial
from .invariants import invariant_from_dict, pfaffian, symmetrized_trace
from .lie import (
    LieAlgebra,
    algebra_from_file,
    named_algebra,
    named_split,
    validate,
    validate_split,
)
from .transgression import (
    ad_invariance_identity_check,
    coefficient_A,
    coefficient_A_by_integration,
    deformation_bianchi_check,
    derivative_identity_check,
    tp_chern_euler,
    tp_integral,
    tp_johnson,
    verify_transgression,
)
from .weil import UniversalSetup

__all__ = ["RunConfig", "Report", "UsageError", "parse_config", "run", "main"]

METHOD_NAMES = ("integral", "johnson", "chern")
CHECK_NAMES = ("d2", "transgression", "basicness", "agreement",
               "coefficients", "derivative-identity")

PRESETS = {
    "paper-so4": {
        "algebra": "so4", "subalgebra": "so3", "polynomial": "pfaffian",
        "methods": "integral,johnson,chern", "checks": "all",
    },
    "paper-so6": {
        "algebra": "so6", "subalgebra": "so5", "polynomial": "pfaffian",
        "methods": "integral,johnson,chern", "checks": "all",
    },
    "paper-gl3": {
        "algebra": "gl3", "subalgebra": "gl2", "polynomial": "trace^2",
        "methods": "integral,johnson", "checks": "all",
    },
}

_CONFIG_KEYS = ("algebra", "subalgebra", "polynomial", "methods", "checks",
                "output", "field", "seed", "corrupt")


class UsageError(Exception):
    """Bad flags, unknown keys, or unusable input files."""


@dataclass
class RunConfig:
    algebra: str
    subalgebra: str = "none"
    polynomial: str = "trace^1"
    methods: tuple = ("integral",)
    checks: tuple = CHECK_NAMES
    output: str = "text"
    field: str = ""          # "" means infer from the algebra data
    seed: int = 0
    corrupt: tuple = ()      # testing hook: ("aij", i, j) | ("structure", a, b, c) | ("prefactor",)


@dataclass
class ReportEntry:
    name: str
    status: str  # "pass" | "fail"
    witness: str = ""


@dataclass
class Report:
    config: dict
    checks: list = field(default_factory=list)
    forms: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.status == "pass" for e in self.checks)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "checks": [
                {"name": e.name, "status": e.status,
                 **({"witness": e.witness} if e.witness else {})}
                for e in self.checks
            ],
            "forms": self.forms,
            "stats": self.stats,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = ["config: " + " ".join(f"{k}={v}" for k, v in self.config.items() if v != "")]
        for e in self.checks:
            mark = "PASS" if e.status == "pass" else "FAIL"
            line = f"[{mark}] {e.name}"
            if e.witness:
                line += f"  witness: {e.witness}"
            lines.append(line)
        for method, info in self.forms.items():
            lines.append(
                f"TP[{method}]: degree {info['degree']}, {info['term_count']} terms")
        n_pass = sum(1 for e in self.checks if e.status == "pass")
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'} "
                     f"({n_pass}/{len(self.checks)} checks)")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="transgress",
                description="Construct and verify transgression forms for "
                            "characteristic classes, exactly.")
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="start from a bundled configuration")
    p.add_argument("--config", help="JSON config file (same keys as the flags)")
    p.add_argument("--algebra", help="built-in name (so4, gl3, su2, u2, abelian3) "
                                     "or a JSON table file")
    p.add_argument("--sub", dest="subalgebra",
                   help="subalgebra: so3, gl2, u1, 'none', or h indices '0,1,3'")
    p.add_argument("--poly", dest="polynomial",
                   help="pfaffian | trace^k | tensor JSON file")
    p.add_argument("--method", dest="methods",
                   help="comma list from: " + ",".join(METHOD_NAMES))
    p.add_argument("--check", dest="checks",
                   help="'all' or comma list from: " + ",".join(CHECK_NAMES))
    p.add_argument("--output", choices=("text", "json"))
    p.add_argument("--out", help="write the report to this path")
    p.add_argument("--field", choices=("rational", "gaussian"))
    p.add_argument("--seed", type=int, help="seed for the randomized d2 probe")
    p.add_argument("--corrupt",
                   help="regression hook: aij=i,j | structure=a,b,c | prefactor")
    return p


def _csv(value) -> tuple:
    if isinstance(value, (list, tuple)):
        return tuple(value)
    return tuple(tok.strip() for tok in str(value).split(",") if tok.strip())


def _parse_corrupt(spec) -> tuple:
    if not spec:
        return ()
    if spec == "prefactor":
        return ("prefactor",)
    kind, _, rest = str(spec).partition("=")
    try:
        nums = tuple(int(tok) for tok in rest.split(","))
    except ValueError:
        raise UsageError(f"bad corrupt spec: {spec!r}") from None
    if kind == "aij" and len(nums) == 2:
        return ("aij",) + nums
    if kind == "structure" and len(nums) == 3:
        return ("structure",) + nums
    raise UsageError(f"bad corrupt spec: {spec!r}")


def _standard_so_h(n: int) -> tuple:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return tuple(idx for idx, (i, j) in enumerate(pairs) if j < n - 1)


def _is_file_ref(name: str) -> bool:
    return name.endswith(".json") or "/" in name


def parse_config(argv, config_file: str = None) -> tuple:
    """Validate flags (plus optional preset/config file) into a RunConfig.

    Returns (RunConfig, out_path).  Raises UsageError on anything malformed,
    including an invalid method/check token, an unusable polynomial spec, or
    the chern method outside so(2k) over so(2k-1) with the Pfaffian.
    """
    ns = _build_parser().parse_args(list(argv))
    merged = {}
    if ns.preset:
        merged.update(PRESETS[ns.preset])
    path = config_file or ns.config
    if path:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {path}: {exc}") from None
        unknown = set(data) - set(_CONFIG_KEYS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        merged.update(data)
    for key in _CONFIG_KEYS:
        value = getattr(ns, key, None)
        if value is not None:
            merged[key] = value

    if not merged.get("algebra"):
        raise UsageError("an algebra is required (--algebra or --preset)")

    methods = _csv(merged.get("methods", "integral"))
    for m in methods:
        if m not in METHOD_NAMES:
            raise UsageError(f"unknown method {m!r}")
    if not methods:
        raise UsageError("at least one method is required")

    checks_raw = merged.get("checks", "all")
    checks = _csv(checks_raw)
    if checks == ("all",):
        checks = CHECK_NAMES
    for c in checks:
        if c not in CHECK_NAMES:
            raise UsageError(f"unknown check {c!r}")

    poly = str(merged.get("polynomial", "trace^1"))
    if poly != "pfaffian" and not _is_file_ref(poly):
        if not (poly.startswith("trace^") and poly[6:].isdigit()
                and int(poly[6:]) >= 1):
            raise UsageError(f"unknown polynomial {poly!r}")

    algebra_name = str(merged["algebra"])
    sub = merged.get("subalgebra")
    sub = "none" if sub is None else str(sub)

    if "chern" in methods:
        ok = (not _is_file_ref(algebra_name)
              and algebra_name.startswith("so")
              and algebra_name[2:].isdigit()
              and int(algebra_name[2:]) % 2 == 0
              and poly == "pfaffian")
        if ok:
            n = int(algebra_name[2:])
            want = _standard_so_h(n)
            if sub == f"so{n - 1}" or (sub in ("none", "") and not want):
                pass
            else:
                try:
                    given = tuple(sorted(int(t) for t in sub.split(",")))
                except ValueError:
                    given = None
                ok = given == want
        if not ok:
            raise UsageError(
                "the chern method needs so(2k) with the so(2k-1) splitting "
                "and the pfaffian polynomial")

    config = RunConfig(
        algebra=algebra_name,
        subalgebra=sub,
        polynomial=poly,
        methods=methods,
        checks=checks,
        output=str(merged.get("output", "text")),
        field=str(merged.get("field", "") or ""),
        seed=int(merged.get("seed", 0)),
        corrupt=_parse_corrupt(merged.get("corrupt")),
    )
    if config.output not in ("text", "json"):
        raise UsageError(f"unknown output format {config.output!r}")
    if config.field not in ("", "rational", "gaussian"):
        raise UsageError(f"unknown field {config.field!r}")
    return config, ns.out


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------

def _resolve_algebra(config: RunConfig) -> LieAlgebra:
    name = config.algebra
    try:
        if _is_file_ref(name):
            algebra = algebra_from_file(name)
        else:
            algebra = named_algebra(name)
    except (OSError, ContractError) as exc:
        raise UsageError(str(exc)) from None
    if config.corrupt and config.corrupt[0] == "structure":
        a, b, c = config.corrupt[1:]
        structure = dict(algebra.structure)
        bumped = structure.get((a, b, c), Scalar(0)) + Scalar(1)
        structure[(a, b, c)] = bumped
        structure[(a, c, b)] = -bumped
        algebra = LieAlgebra(algebra.dim, algebra.labels, structure,
                             algebra.matrices, name=algebra.name + "+corrupt",
                             meta=algebra.meta)
    return algebra


def _resolve_polynomial(config: RunConfig, algebra: LieAlgebra):
    poly = config.polynomial
    try:
        if poly == "pfaffian":
            P = pfaffian(algebra)
        elif poly.startswith("trace^"):
            P = symmetrized_trace(algebra, int(poly[6:]))
        else:
            with open(poly, "r", encoding="utf-8") as fh:
                P = invariant_from_dict(algebra, json.load(fh))
    except (OSError, json.JSONDecodeError, ContractError) as exc:
        raise UsageError(f"cannot build polynomial {poly!r}: {exc}") from None
    if config.corrupt and config.corrupt[0] == "prefactor":
        P = P.scaled(Scalar(2))
    return P


def _entry_from_validation(name: str, report) -> ReportEntry:
    if report.passed:
        return ReportEntry(name, "pass")
    first = report.first()
    return ReportEntry(name, "fail",
                       witness=f"{first.invariant} at {first.indices}: {first.detail}")


def _entry_from_check(check) -> ReportEntry:
    return ReportEntry(check.name, "pass" if check.passed else "fail",
                       witness=check.witness)


def _rendered_terms(form):
    ctx = form.ctx
    return [[coeff.render(), render_monomial(ctx, mono)]
            for mono, coeff in form.sorted_terms()]


def run(config: RunConfig) -> Report:
    """Execute the configured constructions and checks, deterministically."""
    t_start = time.perf_counter()
    algebra = _resolve_algebra(config)

    needs_gaussian = algebra.has_imaginary_data()
    field_resolved = config.field or ("gaussian" if needs_gaussian else "rational")
    if field_resolved == "rational" and needs_gaussian:
        raise UsageError(
            f"algebra {algebra.name!r} needs the gaussian field "
            "(imaginary entries present)")

    try:
        split = named_split(algebra, config.subalgebra)
    except ContractError as exc:
        raise UsageError(str(exc)) from None

    report = Report(config={
        "algebra": config.algebra,
        "subalgebra": config.subalgebra,
        "polynomial": config.polynomial,
        "methods": ",".join(config.methods),
        "checks": ",".join(config.checks),
        "field": field_resolved,
        "seed": config.seed,
        "corrupt": "=".join(str(x) for x in config.corrupt[:1])
                   + (":" + ",".join(str(x) for x in config.corrupt[1:])
                      if len(config.corrupt) > 1 else "") if config.corrupt else "",
        "output": config.output,
    })
    entries = report.checks
    timing = {}

    algebra_report = validate(algebra)
    entries.append(_entry_from_validation("algebra-valid", algebra_report))
    split_report = validate_split(algebra, split)
    entries.append(_entry_from_validation("split-valid", split_report))

    if not (algebra_report.passed and split_report.passed):
        for name in config.checks:
            entries.append(ReportEntry(
                name, "fail", witness="not run: invalid algebra or split"))
        report.stats = {"seed": config.seed, "term_counts": {},
                        "timing": {"total": round(time.perf_counter() - t_start, 6)}}
        return report

    setup = UniversalSetup(algebra, split)
    P = _resolve_polynomial(config, algebra)
    witness = P.ad_invariance_witness()
    entries.append(ReportEntry(
        "polynomial-ad-invariant", "pass" if witness is None else "fail",
        witness="" if witness is None else
        f"direction {witness[0]}, tuple {witness[1]}: {witness[2].render()}"))

    results = {}
    for method in config.methods:
        t0 = time.perf_counter()
        if method == "integral":
            results[method] = tp_integral(setup, P)
        elif method == "johnson":
            coefficient_fn = None
            if config.corrupt and config.corrupt[0] == "aij":
                ci, cj = config.corrupt[1:]

                def coefficient_fn(k, i, j, _ci=ci, _cj=cj):
                    base = coefficient_A(k, i, j)
                    return base + Scalar(1) if (i, j) == (_ci, _cj) else base

            results[method] = tp_johnson(setup, P, coefficient_fn=coefficient_fn)
        else:
            results[method] = tp_chern_euler(setup, P)
        timing[f"tp[{method}]"] = round(time.perf_counter() - t0, 6)
        form = results[method].form
        report.forms[method] = {
            "degree": form.degree() if not form.is_zero else None,
            "term_count": form.term_count,
            "terms": _rendered_terms(form),
        }

    for name in config.checks:
        t0 = time.perf_counter()
        if name == "d2":
            witness = setup.d_squared_witness()
            if witness is None:
                rng = random.Random(config.seed)
                probe = None
                for _ in range(20):
                    x = setup.context.random_element(
                        rng, terms=3, max_odd=3, max_even=1, max_t=1)
                    out = setup.d(setup.d(x))
                    if not out.is_zero:
                        probe = out
                        break
                entries.append(ReportEntry(
                    "d2", "pass" if probe is None else "fail",
                    witness="" if probe is None else probe.leading_term_str()))
            else:
                label, residue = witness
                entries.append(ReportEntry(
                    "d2", "fail",
                    witness=f"d(d({label})) = {residue.leading_term_str()}"))
        elif name in ("transgression", "basicness"):
            for method, result in results.items():
                checks = result.checks or verify_transgression(result, setup, P)
                if name == "transgression":
                    c = checks["transgression"]
                    entries.append(ReportEntry(
                        f"transgression[{method}]",
                        "pass" if c.passed else "fail", witness=c.witness))
                else:
                    hor, inv = checks["horizontality"], checks["invariance"]
                    ok = hor.passed and inv.passed
                    entries.append(ReportEntry(
                        f"basicness[{method}]", "pass" if ok else "fail",
                        witness=hor.witness or inv.witness))
        elif name == "agreement":
            methods = list(results)
            status, witness_str = "pass", ""
            for i in range(len(methods)):
                for j in range(i + 1, len(methods)):
                    diff = results[methods[i]].form - results[methods[j]].form
                    if not diff.is_zero:
                        status = "fail"
                        witness_str = (f"{methods[i]} vs {methods[j]}: "
                                       f"{diff.leading_term_str()}")
                        break
                if status == "fail":
                    break
            entries.append(ReportEntry("agreement", status, witness=witness_str))
        elif name == "coefficients":
            k = P.degree
            status, witness_str = "pass", ""
            for i in range(k):
                for j in range(k - i):
                    closed = coefficient_A(k, i, j)
                    integrated = coefficient_A_by_integration(k, i, j)
                    if closed != integrated:
                        status = "fail"
                        witness_str = (f"(k,i,j)=({k},{i},{j}): "
                                       f"{closed.render()} vs {integrated.render()}")
                        break
                if status == "fail":
                    break
            entries.append(ReportEntry("coefficients", status, witness=witness_str))
        elif name == "derivative-identity":
            for check in (derivative_identity_check(setup, P),
                          deformation_bianchi_check(setup),
                          ad_invariance_identity_check(setup, P)):
                entries.append(_entry_from_check(check))
        timing[name] = round(time.perf_counter() - t0, 6)

    timing["total"] = round(time.perf_counter() - t_start, 6)
    report.stats = {
        "seed": config.seed,
        "term_counts": {m: info["term_count"] for m, info in report.forms.items()},
        "timing": timing,
    }
    return report


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config, out_path = parse_config(argv)
        report = run(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = report.to_json() if config.output == "json" else report.to_text()
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
