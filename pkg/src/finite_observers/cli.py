"""Command-line front end: ``finite-observers run|list``."""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import platform
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import free_hamiltonian, harmonic_potential
from .covariance import (
    angular_momentum_check,
    canonical_limit_check,
    composition_check,
    covariance_sweep,
    galilean_symmetry_check,
    verify_covariance,
)
from .dynamics import (
    HamiltonianSpec,
    HarmonicPotential,
    ehrenfest_track,
    energy,
    evolve,
    free_gaussian_width,
    frame_consistency_check,
    reduced_mass,
    trajectory_series,
)
from .frames import (
    FrameMap,
    amplitude_preservation_check,
    localized_observer_state,
    superposed_observer_state,
    transform_state,
)
from .io import dump_state, write_rows, write_state_csv, write_trajectory_csv
from .lattice import (
    Lattice,
    LatticeState,
    PhysConstants,
    gaussian_factor,
    gaussian_product_state,
    random_gaussian_mixture,
    spread,
)
from .protocols import bounds_respected, delta_c, delta_c_sweep, spread_of, uncertainty_matrix
from .scenario import Scenario, ScenarioError, bundled_path, list_bundled_scenarios, load
from .wigner import (
    as_complex,
    check_r1_consistency,
    classical_assignment,
    constraint_residual,
    quantum_observer_assignment,
    solution_family,
    standard_qm_assignment,
)

DEFAULT_SEED = 0

DEFAULT_TOLS = {
    "norm": 1e-10,
    "amplitude": 1e-12,
    "round_trip": 1e-14,
    "velocity": 1e-6,
    "force": 1e-8,
    "energy": 1e-8,
    "reduced_mass": 1e-6,
    "role_swap": 1e-10,
    "frame_consistency": 1e-8,
    "bound": 1e-8,
    "delta_c": 1e-8,
    "state_independence": 1e-8,
    "wigner": 1e-10,
}


@dataclass
class ActionReport:
    action: str
    index: int
    label: str = ""
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    files: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def check(self, name: str, value, tol=None, passed=None):
        """Record a check: ``value <= tol`` unless ``passed`` is given."""
        if passed is None:
            passed = bool(value <= tol)
        entry = {"name": name, "passed": bool(passed), "value": _plain(value)}
        if tol is not None:
            entry["tolerance"] = tol
        self.checks.append(entry)

    def to_json(self) -> dict:
        return {
            "action": self.action,
            "index": self.index,
            "label": self.label,
            "passed": self.passed,
            "checks": self.checks,
            "data": _plain(self.data),
            "files": self.files,
        }


def _plain(v):
    """JSON-friendly copy (numpy scalars/arrays, complex numbers)."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return _plain(v.tolist())
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, (np.integer, np.bool_)):
        return v.item()
    return v


class Runner:
    def __init__(self, scenario: Scenario, out: Path, seed: int, hbar=None, grid_n=None, grid_L=None):
        self.scenario = scenario
        self.out = Path(out)
        data = scenario.data
        self.seed = seed
        self.constants = PhysConstants(hbar if hbar is not None else data.get("hbar", 1.0))
        grid = data.get("grid", {})
        self.n = grid_n if grid_n is not None else grid.get("n", 128)
        self.L = grid_L if grid_L is not None else grid.get("L", 40.0)
        self.frames = scenario.frames
        self.states = {}

    def rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, index])

    def lattice(self, frame) -> Lattice:
        return Lattice.for_frame(frame, self.n, self.L)

    def build_states(self):
        for k, st in enumerate(self.scenario.states):
            fr = self.frames[st["frame"]]
            lat = self.lattice(fr)
            if st["kind"] == "gaussian":
                psi = gaussian_product_state(lat, fr, [tuple(p) for p in st["params"]], self.constants)
            elif st["kind"] == "random":
                psi = random_gaussian_mixture(lat, fr, self.rng(1000 + k), st.get("components", 3), self.constants)
            else:
                center, width, q = st["particle"]
                particle = gaussian_factor(lat, center, width, q, self.constants.hbar)
                make = superposed_observer_state if st.get("superposed") else localized_observer_state
                psi = make(lat, fr, particle, st["observer"], st["c"])
                psi = LatticeState(psi.amplitudes, fr, lat, self.constants)
            self.states[st["id"]] = psi

    def run(self) -> tuple[bool, list]:
        self.out.mkdir(parents=True, exist_ok=True)
        self.build_states()
        reports = []
        for k, act in enumerate(self.scenario.actions):
            rep = ActionReport(act["action"], k, act.get("label", ""))
            tols = {**DEFAULT_TOLS, **act.get("tolerances", {})}
            handler = getattr(self, "do_" + act["action"].replace("-", "_"))
            try:
                handler(act, rep, tols)
            except Exception as exc:  # a failing action still gets a report
                rep.check("completed", 0, passed=False)
                rep.data["error"] = f"{type(exc).__name__}: {exc}"
            name = f"{k:02d}_{act['action']}.json"
            (self.out / name).write_text(json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n")
            reports.append(rep)
        ok = all(r.passed for r in reports)
        summary = {
            "scenario": Path(self.scenario.source).name if self.scenario.source else "",
            "description": self.scenario.description,
            "seed": self.seed,
            "hbar": self.constants.hbar,
            "grid": {"n": self.n, "L": self.L},
            "passed": ok,
            "actions": [{"index": r.index, "action": r.action, "label": r.label, "passed": r.passed}
                        for r in reports],
        }
        (self.out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        return ok, reports

    def _file(self, rep: ActionReport, suffix: str) -> Path:
        name = f"{rep.index:02d}_{rep.action}_{suffix}"
        rep.files.append(name)
        return self.out / name

    # ---------------------------------------------------------- actions

    def do_verify_algebra(self, act, rep, tols):
        fr = self.frames[act["frame"]]
        cov = verify_covariance(fr, fr.relative_to(act["to"]))
        lim = canonical_limit_check(fr)
        rep.check("covariance identities", sum(not c.passed for c in cov.checks), passed=cov.passed)
        rep.check("canonical limit", sum(not c.passed for c in lim.checks), passed=lim.passed)
        rep.data["identities"] = len(cov.checks)
        rep.data["failures"] = [c.to_json() for c in cov.checks + lim.checks if not c.passed]
        if "compose_via" in act:
            comp = composition_check(fr, act["compose_via"], act["to"]) if act["compose_via"] != act["to"] else None
            if comp is not None:
                rep.check("composition", sum(not c.passed for c in comp.checks), passed=comp.passed)
        n = act.get("random_triples", 0)
        if n:
            sweep = covariance_sweep(n, seed=self.seed, dim=fr.dim)
            rep.check(f"covariance over {n} random mass triples",
                      sum(not c.passed for c in sweep.checks), passed=sweep.passed)
            rep.data["random_identities"] = len(sweep.checks)
            rep.data["random_triples"] = sweep.info["triples"]

    def do_transform(self, act, rep, tols):
        psi = self.states[act["state"]]
        fmap = FrameMap.between(psi.frame, act["to"])
        out = transform_state(psi, fmap)
        back = transform_state(out, fmap.inverse())
        rep.check("norm preserved", abs(out.norm() - psi.norm()), tols["amplitude"])
        rep.check("round trip", float(np.max(np.abs(back.amplitudes - psi.amplitudes))), tols["round_trip"])
        if "compare" in act:
            a = amplitude_preservation_check(self.states[act["compare"]], psi, fmap)
            rep.check("transition amplitude preserved", a.difference, tols["amplitude"])
            rep.data["amplitude"] = a.source_amplitude
        rep.data["target_frame"] = fmap.target.to_json()
        if "as" in act:
            self.states[act["as"]] = out
        if act.get("dump"):
            dump_state(out, self._file(rep, "state.bin"))
            write_state_csv(out, self._file(rep, "state.csv"))

    def do_evolve(self, act, rep, tols):
        psi = self.states[act["state"]]
        fr = psi.frame
        h = act["hamiltonian"]
        pot = None
        if "potential" in h:
            p = h["potential"]
            pot = HarmonicPotential(p["a"], p["b"], float(p["k"]))
        spec = HamiltonianSpec(h["kind"], fr, pot)
        dt, steps = act["dt"], act["steps"]
        traj = evolve(psi, spec, dt, steps, act.get("save_every", 1))
        checks = act.get("checks", [])
        rep.data.update({"kind": spec.kind, "dt": dt, "steps": steps, "saved": len(traj)})

        if "norm" in checks:
            drift = max(abs(s.norm() - psi.norm()) for s in traj.states)
            rep.check("norm drift", drift, tols["norm"])
        if "energy" in checks:
            es = np.array([energy(s, spec) for s in traj.states])
            rep.check("energy drift", float(np.max(np.abs(es - es[0]))), tols["energy"])
        if "ehrenfest" in checks:
            self._ehrenfest(traj, spec, rep, tols)
        if "reduced-mass" in checks:
            self._reduced_mass(traj, psi, rep, tols)
        if "frame-consistency" in checks:
            err = frame_consistency_check(psi, FrameMap.between(fr, fr.bodies[-1]), traj.times[-1])
            rep.check("evolve/transform commute", err, tols["frame_consistency"])

        write_trajectory_csv(self._file(rep, "trajectory.csv"), trajectory_series(traj))
        if "as" in act:
            self.states[act["as"]] = traj.states[-1]
        if act.get("dump"):
            dump_state(traj.states[-1], self._file(rep, "state.bin"))

    def _ehrenfest(self, traj, spec, rep, tols):
        fr = spec.frame
        er = ehrenfest_track(traj)
        rows = []
        for b in fr.bodies:
            m = float(fr.mass(b))
            v = float(np.max(np.abs(er.heisenberg_velocity_residual(b))))
            f = float(np.max(np.abs(er.force_residual(b))))
            rep.check(f"d<x_{b}>/dt = <(K pi)_{b}>", v, tols["velocity"])
            rep.check(f"d<p_{b}>/dt = -<dV/dx_{b}>", f, tols["force"])
            info = {
                "velocity_minus_p_over_m": float(np.max(np.abs(er.velocity_residual(b, m)))),
                "velocity_minus_scaled_p_over_m": float(
                    np.max(np.abs(er.velocity_residual(b, m, 1 + float(fr.ratio(b)))))),
            }
            if spec.potential is not None:
                # the 1/m force form, reported only
                info["force_residual_with_1_over_m"] = float(np.max(np.abs(er.displayed_force_residual(b, m))))
            rep.data[f"ehrenfest_{b}"] = info
            for k, t in enumerate(er.times[1:-1], start=1):
                rows.append((float(t), b, er.x[b][k], er.p[b][k], er.dxdt[b][k - 1], er.dpdt[b][k - 1],
                             er.force[b][k]))
        if spec.potential is not None:
            a, b2 = spec.potential.a, spec.potential.b
            total = np.max(np.abs(er.dpdt[a] + er.dpdt[b2]))
            rep.check("d<p_a + p_b>/dt = 0", float(total), tols["force"])
        write_rows(self._file(rep, "ehrenfest.csv"),
                   ("t", "body", "mean_x", "mean_p", "dxdt", "dpdt", "mean_dV"), rows)

    def _reduced_mass(self, traj, psi, rep, tols):
        fr = psi.frame
        (b,) = fr.bodies
        mu = reduced_mass(fr.mass(b), fr.observer_mass) if fr.observer_mass is not None else fr.mass(b)
        sigma0 = spread(psi, ("x", b))
        measured = np.array([spread(s, ("x", b)) for s in traj.states])
        predicted = free_gaussian_width(sigma0, float(mu), traj.times, psi.hbar)
        rel = float(np.max(np.abs(measured - predicted) / predicted))
        rep.check("width follows reduced-mass law", rel, tols["reduced_mass"])
        rep.data["mu"] = [mu.numerator, mu.denominator]
        rows = [(float(t), m, p) for t, m, p in zip(traj.times, measured, predicted)]
        if fr.observer_mass is not None:
            # the particle becomes the observer of a one-body frame
            swapped = type(fr).create(b, fr.mass(b), {fr.observer_id: fr.observer_mass})
            moved = transform_state(psi, FrameMap(fr, swapped))
            straj = evolve(moved, HamiltonianSpec("free_N", swapped), traj.dt,
                           int(round(traj.times[-1] / traj.dt)), max(1, int(round(traj.step / traj.dt))))
            other = np.array([spread(s, ("x", fr.observer_id)) for s in straj.states])
            rep.check("role swap gives the same widths", float(np.max(np.abs(other - measured))), tols["role_swap"])
            rows = [r + (o,) for r, o in zip(rows, other)]
        write_rows(self._file(rep, "widths.csv"),
                   ("t", "measured", "predicted", "swapped")[: len(rows[0])], rows)

    def do_uncertainty(self, act, rep, tols):
        psi = self.states[act["state"]]
        mats = [("", psi)]
        if "covariant_to" in act:
            mats.append((act["covariant_to"], transform_state(psi, FrameMap.between(psi.frame, act["covariant_to"]))))
        rows = []
        for tag, st in mats:
            mat = uncertainty_matrix(st, st.frame)
            where = f" in frame {st.frame.observer_id}"
            worst = min(e.margin for row in mat for e in row)
            rep.check("bounds respected" + where, -worst, tols["bound"], passed=bounds_respected(mat, tols["bound"]))
            for row in mat:
                for e in row:
                    rows.append((st.frame.observer_id, e.coord, e.body, e.product, e.bound, e.margin))
        write_rows(self._file(rep, "matrix.csv"), ("frame", "coord", "body", "product", "bound", "margin"), rows)

    def do_delta_c(self, act, rep, tols):
        psi = self.states[act["state"]]
        L, R = act["L"], act["R"]
        res = delta_c(psi, psi.frame, L, R)
        rep.check("ΔC = i hbar m_M/m_O", res.error, tols["delta_c"])
        rep.data.update(res.to_json(psi.hbar))
        n = act.get("random_states", 0)
        if n:
            rng = self.rng(rep.index)
            vals = [delta_c(random_gaussian_mixture(psi.lattice, psi.frame, rng, constants=psi.constants),
                            psi.frame, L, R).delta_c for _ in range(n)]
            rep.check(f"state independence over {n} random states", spread_of(vals), tols["state_independence"])
        if "sweep" in act:
            rows = delta_c_sweep(act["sweep"], self.n, self.L, psi.hbar)
            rep.data["sweep"] = rows
            write_rows(self._file(rep, "sweep.csv"),
                       ("mass_ratio", "abs_delta_c_over_hbar", "predicted", "relative_error"),
                       [tuple(r.values()) for r in rows])

    def do_wigner(self, act, rep, tols):
        alpha, beta = as_complex(act["alpha"]), as_complex(act["beta"])
        kind = act["assignment"]
        expect = act.get("expect", "consistent")
        cases = []
        if kind == "standard":
            cases.append(("standard", standard_qm_assignment(alpha, beta), None))
        elif kind == "classical":
            cases.append(("classical", classical_assignment(alpha, beta), None))
        else:
            toys = []
            if "toy" in act:
                toys.append(tuple(as_complex(v) for v in act["toy"]))
            for t in act.get("family_angles", []):
                toys.extend(solution_family(alpha, [t]))
            for k, toy in enumerate(toys):
                cases.append((f"toy[{k}]", quantum_observer_assignment(alpha, beta, *toy), toy))
        for name, states, toy in cases:
            r = check_r1_consistency(*states)
            rep.check(f"{name}: {expect}", r.violation, passed=(r.consistent == (expect == "consistent")))
            entry = r.to_json()
            if toy is not None:
                entry["constraint_residual"] = constraint_residual(alpha, beta, *toy)
            rep.data[name] = entry
        if kind == "standard":
            want = abs(alpha - abs(alpha) ** 2)
            got = rep.data["standard"]["violation"]
            rep.check("violation equals |alpha - |alpha|^2|", abs(got - want), 1e-12)

    def do_galilean_check(self, act, rep, tols):
        fr = self.frames[act["frame"]]
        H = free_hamiltonian(fr)
        if "potential" in act:
            p = act["potential"]
            H = H + harmonic_potential(fr, p["a"], p["b"], p["k"])
        ok, residual = galilean_symmetry_check(H, act["body"])
        expect = act.get("expect", True)
        rep.check(f"[H, p_{act['body']}] = 0 is {str(expect).lower()}", int(not ok), passed=(ok == expect))
        rep.data["residual"] = str(residual)

    def do_angular_momentum(self, act, rep, tols):
        fr = self.frames[act["frame"]]
        r = angular_momentum_check(fr, act["body"])
        rep.check("angular-momentum identities", sum(not c.passed for c in r.checks), passed=r.passed)
        rep.data.update(r.info)
        rep.data["identities"] = len(r.checks)


def run(path, out, seed: int | None = None, **overrides) -> int:
    """Run a scenario file; return the process exit status."""
    scenario = load(path)
    if seed is None:
        seed = scenario.data.get("seed", DEFAULT_SEED)
    ok, _ = Runner(scenario, out, seed, **overrides).run()
    return 0 if ok else 1


def _write_run_info(out: Path, args):
    info = {
        "started": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "argv": sys.argv[1:],
        "seed": args.seed,
    }
    (out / "run_info.json").write_text(json.dumps(info, indent=2) + "\n")


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="finite-observers", description="Run finite-mass observer scenarios.")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario file or a bundled scenario name")
    r.add_argument("file")
    r.add_argument("--out", default="out")
    r.add_argument("--seed", type=_u64, default=None)
    r.add_argument("--hbar", type=float)
    r.add_argument("--grid-n", type=int)
    r.add_argument("--grid-L", type=float)
    sub.add_parser("list", help="list bundled scenarios")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name, desc in list_bundled_scenarios():
            print(f"{name:16s} {desc}")
        return 0
    path = Path(args.file)
    if not path.exists():
        try:
            path = bundled_path(args.file)
        except FileNotFoundError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    try:
        scenario = load(path)
    except ScenarioError as exc:
        print(f"scenario error at {exc}", file=sys.stderr)
        return 2
    seed = args.seed if args.seed is not None else scenario.data.get("seed", DEFAULT_SEED)
    args.seed = seed
    out = Path(args.out)
    runner = Runner(scenario, out, seed, args.hbar, args.grid_n, args.grid_L)
    ok, reports = runner.run()
    _write_run_info(out, args)
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.index:02d} {r.action} {r.label}".rstrip())
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
