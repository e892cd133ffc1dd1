"""Command-line front end: matrix decomposition reports, wave-equation gate
sweeps and small verified evolutions.

Outputs are deterministic: floats are written with ``repr`` and no timing
data goes into files (wall time is printed to stderr instead).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from tripauli import __version__
from tripauli.circuit import (GATE_KINDS, TrotterPlan, count_gates, estimate_trotter_steps,
                              trotter_circuit)
from tripauli.decomposer import (Decomposition, MatrixClass, TridiagonalSpec, decompose,
                                 wave_hamiltonian)
from tripauli.errors import CapExceededError, ValidationError
from tripauli.simulator import (MAX_QUBITS, brute_force_decompose, circuit_unitary,
                                embedding_matrix, evolve_state, exact_propagator,
                                reconstruct, spectral_error, weights_close)

CSV_SCHEMA = "wave-sweep/1"
EVOLVE_SCHEMA = "evolve/1"
ORACLE_MAX_N = 5
VERIFY_MAX_QUBITS = 6
ORACLE_TOL = 1e-12


# --- configuration ----------------------------------------------------------

@dataclass(frozen=True)
class SpeedProfile:
    """Either a constant speed or samples on the unit interval (interpolated to each grid)."""

    constant: float | None = None
    samples: tuple[float, ...] | None = None

    @classmethod
    def parse(cls, text: str) -> "SpeedProfile":
        kind, _, value = text.partition(":")
        if kind == "constant":
            try:
                return cls(constant=float(value or 1.0))
            except ValueError:
                raise ValidationError(f"bad constant speed {value!r}") from None
        if kind == "file":
            return cls(samples=tuple(read_samples(value)))
        raise ValidationError(f"speed must be 'constant:VALUE' or 'file:PATH', got {text!r}")

    def sample(self, size: int) -> np.ndarray:
        if self.constant is not None:
            return np.full(size, self.constant, dtype=np.float64)
        src = np.asarray(self.samples, dtype=np.float64)
        if src.shape[0] == size:
            return src.copy()
        return np.interp(np.linspace(0.0, 1.0, size), np.linspace(0.0, 1.0, src.shape[0]), src)


@dataclass(frozen=True)
class ExperimentConfig:
    n_min: int = 2
    n_max: int = 4
    orders: tuple[int, ...] = (1, 2)
    eps: float = 1e-3
    t: float = 1.0
    speed: SpeedProfile = field(default_factory=lambda: SpeedProfile(constant=1.0))
    # None means the unit interval: h = 1 / (N - 1)
    h: float | None = None
    trotter_constant: float = 1.0
    verify_max_qubits: int = VERIFY_MAX_QUBITS

    def __post_init__(self):
        if not 1 <= self.n_min <= self.n_max:
            raise ValidationError(f"bad n range {self.n_min}..{self.n_max}")
        if not self.eps > 0:
            raise ValidationError(f"eps must be positive, got {self.eps}")
        if not self.t > 0:
            raise ValidationError(f"t must be positive, got {self.t}")
        if self.h is not None and not self.h > 0:
            raise ValidationError(f"h must be positive, got {self.h}")
        if not self.trotter_constant > 0:
            raise ValidationError(f"trotter constant must be positive, got {self.trotter_constant}")
        bad = [p for p in self.orders if p not in (1, 2, 4, 6)]
        if bad or not self.orders:
            raise ValidationError(f"unsupported orders {bad or self.orders}")
        if self.verify_max_qubits > MAX_QUBITS:
            raise ValidationError(f"verification is capped at {MAX_QUBITS} qubits")

    def grid_step(self, n: int) -> float:
        return self.h if self.h is not None else 1.0 / ((1 << n) - 1)


# --- file parsing -----------------------------------------------------------

def _parse_values(text: str, lineno: int) -> list[complex]:
    out = []
    for token in text.replace(",", " ").split():
        try:
            out.append(complex(token))
        except ValueError:
            raise ValidationError(f"line {lineno}: cannot parse number {token!r}") from None
    return out


def read_samples(path: str | Path) -> list[float]:
    values = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for v in _parse_values(line, lineno):
            if v.imag:
                raise ValidationError(f"{path} line {lineno}: samples must be real")
            values.append(v.real)
    if not values:
        raise ValidationError(f"{path}: no samples found")
    return values


def parse_matrix_text(text: str, matrix_class: str | None = None) -> TridiagonalSpec:
    """Parse ``c:``, ``a:`` and ``b:`` lines (main, super, sub diagonal).

    An optional ``# class: NAME`` header sets the matrix class unless
    ``matrix_class`` is given. Other ``#`` lines are comments.
    """
    rows: dict[str, tuple[int, list[complex]]] = {}
    header_class = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            if key.strip().lower() == "class":
                header_class = value.strip()
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in ("c", "a", "b"):
            raise ValidationError(f"line {lineno}: expected 'c:', 'a:' or 'b:' row, got {raw!r}")
        if key in rows:
            raise ValidationError(f"line {lineno}: duplicate {key!r} row")
        rows[key] = (lineno, _parse_values(value, lineno))
    if "c" not in rows:
        raise ValidationError("missing 'c:' row")
    c_line, c = rows["c"]
    size = len(c)
    n = size.bit_length() - 1
    if size < 2 or size != 1 << n:
        raise ValidationError(f"line {c_line}: diagonal length {size} is not a power of two >= 2")
    diags = {}
    for key in ("a", "b"):
        lineno, vals = rows.get(key, (None, [0j] * (size - 1)))
        if len(vals) != size - 1:
            raise ValidationError(f"line {lineno}: {key!r} needs {size - 1} entries, got {len(vals)}")
        diags[key] = vals
    cls = MatrixClass.parse(matrix_class or header_class or "general")
    return TridiagonalSpec(n, c, diags["a"], diags["b"], cls)


# --- decompose --------------------------------------------------------------

@dataclass
class DecompositionReport:
    decomposition: Decomposition
    oracle_status: str
    oracle_deviation: float | None

    def to_dict(self) -> dict:
        body = self.decomposition.to_dict()
        body["nonempty_set_count"] = len(self.decomposition.nonempty_sets())
        body["oracle_check"] = {"status": self.oracle_status, "max_deviation": self.oracle_deviation}
        body["version"] = __version__
        return body

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def run_decompose(path: str | Path, matrix_class: str | None = None) -> DecompositionReport:
    spec = parse_matrix_text(Path(path).read_text(), matrix_class)
    decomp = decompose(spec)
    if spec.n > ORACLE_MAX_N:
        return DecompositionReport(decomp, "skipped", None)
    reference = brute_force_decompose(spec.to_dense())
    dev = weights_close(decomp.weight_map(), reference)
    dev = max(dev, float(np.max(np.abs(reconstruct(decomp) - spec.to_dense()), initial=0.0)))
    return DecompositionReport(decomp, "passed" if dev <= ORACLE_TOL * max(1.0, _scale(spec)) else "failed", dev)


def _scale(spec: TridiagonalSpec) -> float:
    return float(max(np.max(np.abs(arr), initial=0.0) for arr in (spec.c, spec.a, spec.b))) * spec.size


# --- wave sweep -------------------------------------------------------------

@dataclass
class RunRecord:
    n: int
    N: int
    qubits: int
    p: int
    r: int
    eps: float
    g: int
    counts: dict[str, int]
    measured_error: float | None
    status: str
    wall_time: float = 0.0

    CSV_FIELDS = ("n", "N", "qubits", "p", "r", "eps", "g", *GATE_KINDS, "measured_error", "status")

    def csv_row(self) -> list[str]:
        err = "unverified" if self.measured_error is None else repr(float(self.measured_error))
        return [str(self.n), str(self.N), str(self.qubits), str(self.p), str(self.r), repr(float(self.eps)),
                str(self.g), *(str(self.counts[k]) for k in GATE_KINDS), err, self.status]


def operator_norm(spec: TridiagonalSpec) -> float:
    """Spectral norm of ``[[0, B], [B^T, 0]]``, equal to that of ``B``."""
    if spec.size <= 4096:
        return float(np.linalg.norm(spec.to_dense(), 2))
    # Gershgorin-style bound for large grids
    return float(np.max(np.abs(spec.c)) + max(np.max(np.abs(spec.a)), np.max(np.abs(spec.b))))


def wave_setup(config: ExperimentConfig, n: int):
    speeds = config.speed.sample(1 << n)
    return wave_hamiltonian(speeds, n, config.grid_step(n))


def run_wave_point(config: ExperimentConfig, n: int, p: int) -> RunRecord:
    start = time.perf_counter()
    spec, ham = wave_setup(config, n)
    set_count = 2 * n + 1
    r = estimate_trotter_steps(set_count, operator_norm(spec), config.t, config.eps, p,
                               config.trotter_constant)
    circ = trotter_circuit(ham, None, TrotterPlan(p, r, config.t))
    tally = count_gates(circ)
    measured, status = None, "unverified"
    if ham.n <= config.verify_max_qubits:
        exact = exact_propagator(embedding_matrix(spec.to_dense()), config.t)
        measured = spectral_error(circuit_unitary(circ), exact)
        status = "ok" if measured <= config.eps else "violation"
    return RunRecord(n, 1 << n, ham.n, p, r, config.eps, tally.total, dict(tally.counts), measured, status,
                     time.perf_counter() - start)


def _point(args):
    return run_wave_point(*args)


def run_wave_sweep(config: ExperimentConfig, jobs: int = 1) -> list[RunRecord]:
    """One record per ``(n, p)``, ordered by ``n`` then ``p``."""
    grid = [(config, n, p) for n in range(config.n_min, config.n_max + 1) for p in config.orders]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_point, grid))
    return [_point(item) for item in grid]


def reference_gamma(p: int) -> float:
    gamma = 2.0 * 5.0 ** (p / 2 - 1) * 10.0 ** (5.0 / p)
    return gamma / 2 if p == 6 else gamma


@dataclass(frozen=True)
class SlopeFit:
    p: int
    points: int
    slope_raw: float
    slope_model: float
    target: float
    gamma_fit: float
    gamma_reference: float
    monotone: bool


def fit_gate_scaling(records: Sequence[RunRecord]) -> list[SlopeFit]:
    """Log-log fits of ``g`` against ``N`` per order.

    ``slope_raw`` regresses ``log g`` on ``log N``; ``slope_model`` first
    divides out ``n**(2 + 1/p)`` so it estimates the ``N`` exponent of
    ``g = gamma N**a n**(2 + 1/p)``. ``gamma_fit`` is the geometric mean of
    ``g / (N**(1.5 + 1/p) n**(2 + 1/p))``.
    """
    fits = []
    for p in sorted({rec.p for rec in records}):
        rows = sorted((rec for rec in records if rec.p == p), key=lambda rec: rec.n)
        if len(rows) < 2:
            continue
        big_n = np.array([rec.N for rec in rows], dtype=np.float64)
        small_n = np.array([rec.n for rec in rows], dtype=np.float64)
        g = np.array([rec.g for rec in rows], dtype=np.float64)
        log_n = np.log(big_n)
        raw = np.polyfit(log_n, np.log(g), 1)[0]
        model = np.polyfit(log_n, np.log(g) - (2 + 1 / p) * np.log(small_n), 1)[0]
        target = 1.5 + 1 / p
        gamma = float(np.exp(np.mean(np.log(g) - target * log_n - (2 + 1 / p) * np.log(small_n))))
        monotone = bool(np.all(np.diff(g) > 0))
        fits.append(SlopeFit(p, len(rows), float(raw), float(model), target, gamma, reference_gamma(p), monotone))
    return fits


def sweep_csv(records: Sequence[RunRecord], config: ExperimentConfig) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {CSV_SCHEMA}; tripauli {__version__}; t={config.t!r}; "
              f"trotter_constant={config.trotter_constant!r}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RunRecord.CSV_FIELDS)
    for rec in records:
        writer.writerow(rec.csv_row())
    return buf.getvalue()


def fit_csv(fits: Sequence[SlopeFit]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {CSV_SCHEMA}-fit; tripauli {__version__}\n")
    writer = csv.writer(buf, lineterminator="\n")
    names = list(SlopeFit.__dataclass_fields__)
    writer.writerow(names)
    for fit in fits:
        writer.writerow([repr(v) if isinstance(v, float) else str(v) for v in asdict(fit).values()])
    return buf.getvalue()


def fit_path(out: Path) -> Path:
    return out.with_name(out.stem + ".fit.csv")


# --- evolution --------------------------------------------------------------

@dataclass(frozen=True)
class EvolveSample:
    time: float
    index: int
    x: float
    u_trotter: float
    u_exact: float
    deviation: float
    r: int


def run_evolve(config: ExperimentConfig, n: int, init, order: int = 2, snapshots: int = 4) -> list[EvolveSample]:
    """Evolve ``psi(0) = (g, 0) / |g|`` and compare with the exact propagator.

    ``u`` is the first block of the state rescaled by ``|g|``; ``deviation``
    is the largest amplitude difference of the normalised states.
    """
    if n + 1 > MAX_QUBITS:
        raise CapExceededError(f"{n + 1} qubits exceeds the simulation cap of {MAX_QUBITS}; use n <= {MAX_QUBITS - 1}")
    if snapshots < 1:
        raise ValidationError("need at least one snapshot")
    size = 1 << n
    init = np.asarray(init, dtype=np.float64).reshape(-1)
    if init.shape[0] != size:
        raise ValidationError(f"initial condition has {init.shape[0]} samples, expected {size}")
    spec, ham = wave_setup(config, n)
    dense_h = embedding_matrix(spec.to_dense())
    norm_g = float(np.linalg.norm(init))
    psi0 = np.zeros(2 * size, dtype=np.complex128)
    if norm_g > 0:
        psi0[:size] = init / norm_g
    h = config.grid_step(n)
    samples = []
    for k in range(snapshots + 1):
        tau = config.t * k / snapshots
        if tau == 0 or norm_g == 0:
            r = 0
            trot = exact = psi0
        else:
            r = estimate_trotter_steps(2 * n + 1, operator_norm(spec), tau, config.eps, order,
                                       config.trotter_constant)
            trot = evolve_state(trotter_circuit(ham, None, TrotterPlan(order, r, tau)), psi0)
            exact = evolve_state(exact_propagator(dense_h, tau), psi0)
        dev = np.abs(trot[:size] - exact[:size])
        for i in range(size):
            samples.append(EvolveSample(tau, i, i * h, float(trot[i].real * norm_g), float(exact[i].real * norm_g),
                                        float(dev[i]), r))
    return samples


def evolve_csv(samples: Sequence[EvolveSample]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {EVOLVE_SCHEMA}; tripauli {__version__}\n")
    writer = csv.writer(buf, lineterminator="\n")
    names = list(EvolveSample.__dataclass_fields__)
    writer.writerow(names)
    for s in samples:
        writer.writerow([repr(v) if isinstance(v, float) else str(v) for v in asdict(s).values()])
    return buf.getvalue()


# --- CLI --------------------------------------------------------------------

def _orders(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad order list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trotter-constant", type=float, default=1.0,
                        help="constant multiplying the Trotter error estimate (default 1)")
    parser = argparse.ArgumentParser(prog="tripauli", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    dec = sub.add_parser("decompose", parents=[common], help="decompose a tridiagonal matrix file")
    dec.add_argument("--input", required=True)
    dec.add_argument("--class", dest="matrix_class", choices=["general", "real", "symmetric", "real-symmetric"])
    dec.add_argument("--out", required=True)

    sw = sub.add_parser("wave-sweep", parents=[common], help="gate counts of wave-equation propagators")
    sw.add_argument("--n-min", type=int, default=2)
    sw.add_argument("--n-max", type=int, default=4)
    sw.add_argument("--orders", type=_orders, default=(1, 2))
    sw.add_argument("--eps", type=float, default=1e-3)
    sw.add_argument("--t", type=float, default=1.0)
    sw.add_argument("--h", type=float, default=None, help="grid step (default 1/(N-1))")
    sw.add_argument("--speed", default="constant:1", help="constant:VALUE or file:PATH")
    sw.add_argument("--verify-max-qubits", type=int, default=VERIFY_MAX_QUBITS)
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--out", required=True)

    ev = sub.add_parser("evolve", parents=[common], help="verified evolution of an initial profile")
    ev.add_argument("--n", type=int, required=True)
    ev.add_argument("--t", type=float, default=1.0)
    ev.add_argument("--eps", type=float, default=1e-3)
    ev.add_argument("--order", type=int, default=2, choices=[1, 2, 4, 6])
    ev.add_argument("--h", type=float, default=None)
    ev.add_argument("--profile", default=None, help="speed samples file (default constant 1)")
    ev.add_argument("--init", required=True, help="initial condition samples, one per grid point")
    ev.add_argument("--snapshots", type=int, default=4)
    ev.add_argument("--out", required=True)
    return parser


def _write(path: str | Path, text: str) -> None:
    Path(path).write_text(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.command == "decompose":
            report = run_decompose(args.input, args.matrix_class)
            _write(args.out, report.to_json())
            print(f"{report.decomposition.term_count} terms, oracle {report.oracle_status}", file=sys.stderr)
            if report.oracle_status == "failed":
                return 1
        elif args.command == "wave-sweep":
            config = ExperimentConfig(args.n_min, args.n_max, args.orders, args.eps, args.t,
                                      SpeedProfile.parse(args.speed), args.h, args.trotter_constant,
                                      args.verify_max_qubits)
            records = run_wave_sweep(config, jobs=args.jobs)
            out = Path(args.out)
            _write(out, sweep_csv(records, config))
            _write(fit_path(out), fit_csv(fit_gate_scaling(records)))
            for rec in records:
                print(f"n={rec.n} p={rec.p} r={rec.r} g={rec.g} {rec.status} {rec.wall_time:.3f}s",
                      file=sys.stderr)
            bad = [rec for rec in records if rec.status == "violation"]
            if bad:
                print(f"warning: {len(bad)} verified rows exceed eps", file=sys.stderr)
        else:
            speed = (SpeedProfile(samples=tuple(read_samples(args.profile))) if args.profile
                     else SpeedProfile(constant=1.0))
            config = ExperimentConfig(args.n, args.n, (args.order,), args.eps, args.t, speed, args.h,
                                      args.trotter_constant)
            samples = run_evolve(config, args.n, read_samples(args.init), args.order, args.snapshots)
            _write(args.out, evolve_csv(samples))
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"done in {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
