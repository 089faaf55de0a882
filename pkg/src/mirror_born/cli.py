"""``mirror-born <command> --config <path> [--out <dir>] [--seed <u64>] [--tolerance <real>]``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time
from pathlib import Path

import numpy as np
from scipy.stats import chi2

from mirror_born import __version__, acceptance, analogy, mirror, spectral
from mirror_born.config import COMMANDS, ConfigError, RunConfig, RunSummary, parse_config
from mirror_born.grid import make_grid, norm, to_momentum
from mirror_born.states import PacketSpec, gaussian_packet

log = logging.getLogger("mirror_born")


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _c(z) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _packet(cfg: RunConfig):
    g = make_grid(cfg.grid.n, cfg.grid.x_min, cfg.grid.x_max)
    spec = PacketSpec(**cfg.packet.model_dump())
    return spec, gaussian_packet(spec, g)


def _run_packet(cfg: RunConfig):
    spec, psi = _packet(cfg)
    mom = to_momentum(psi)
    mean_x = spectral.expectation_grid(psi, "position")
    mean_p = spectral.expectation_grid(psi, "momentum")
    sx = float(np.sqrt(np.sum((psi.nodes - mean_x) ** 2 * psi.density()) * psi.step))
    sp = float(np.sqrt(np.sum((mom.nodes - mean_p) ** 2 * mom.density()) * mom.step))
    metrics = {
        "norm_position": norm(psi),
        "norm_momentum": norm(mom),
        "mean_x": mean_x,
        "mean_p": mean_p,
        "mean_kinetic": spectral.expectation_grid(psi, "kinetic", spec.m),
        "sigma_x": sx,
        "sigma_p": sp,
        "uncertainty_product": sx * sp,
    }
    files = {
        "packet_position.csv": _csv(("x", "re", "im", "density"),
                                    ((_fmt(x), _fmt(a.real), _fmt(a.imag), _fmt(d))
                                     for x, a, d in zip(psi.nodes, psi.amp, psi.density()))),
        "packet_momentum.csv": _csv(("p", "re", "im", "density"),
                                    ((_fmt(p), _fmt(a.real), _fmt(a.imag), _fmt(d))
                                     for p, a, d in zip(mom.nodes, mom.amp, mom.density()))),
    }
    return metrics, files, True


def _run_mirror(cfg: RunConfig):
    _, psi = _packet(cfg)
    mom = to_momentum(psi)
    report = mirror.born_compare(mom, cfg.tolerance)
    seg = mirror.apparatus_image_segmentwise(mom)
    metrics = report.to_dict()
    metrics["segmentwise_equals_reflect_conjugate"] = bool(
        np.array_equal(seg.amp, mirror.reflect(mirror.conjugate(mom)).amp)
    )
    return metrics, {"mirror.csv": mirror.mirror_csv(mom)}, True


def _spectral(cfg: RunConfig):
    op = spectral.HermitianOperator(cfg.operator_matrix())
    state = np.array(cfg.state_vector())
    d = spectral.eigendecompose(op)
    c = spectral.coefficients(d, state)
    table = spectral.born_table(c, d.eigenvalues)
    e_mat = spectral.expectation_matrix(op, state)
    e_spec = spectral.expectation_spectral(table)
    metrics = {
        "eigenvalues": d.eigenvalues.tolist(),
        "coefficients": [_c(z) for z in c],
        "probabilities": table.probs.tolist(),
        "expectation_matrix": e_mat,
        "expectation_spectral": e_spec,
        "expectation_difference": abs(e_mat - e_spec),
        "reconstruction_defect": float(np.max(np.abs(d.reconstruct() - op.entries))),
        "gram_defect": d.gram_defect(),
        "sweeps": d.sweeps,
    }
    return d, c, table, metrics


def _run_born(cfg: RunConfig):
    d, c, table, metrics = _spectral(cfg)
    rows = ((k, _fmt(lam), _fmt(z.real), _fmt(z.imag), _fmt(p))
            for k, (lam, z, p) in enumerate(zip(d.eigenvalues, c, table.probs)))
    return metrics, {"born.csv": _csv(("outcome", "eigenvalue", "coeff_re", "coeff_im", "probability"), rows)}, True


def _run_measure(cfg: RunConfig):
    d, _, table, metrics = _spectral(cfg)
    n = cfg.n_samples
    counts = spectral.sample_outcomes(table, n, cfg.seed)
    stat, dof = spectral.chi_square(counts, table.probs)
    metrics.update({
        "n_samples": n,
        "seed": cfg.seed,
        "counts": counts.tolist(),
        "frequencies": (counts / n).tolist(),
        "chi_square": stat,
        "chi_square_dof": dof,
        "chi_square_p_value": float(chi2.sf(stat, dof)) if dof > 0 else 1.0,
    })
    rows = ((k, _fmt(lam), _fmt(p), int(cnt), _fmt(cnt / n))
            for k, (lam, p, cnt) in enumerate(zip(d.eigenvalues, table.probs, counts)))
    return metrics, {"measure.csv": _csv(("outcome", "eigenvalue", "probability", "count", "frequency"), rows)}, True


def _run_two_ball(cfg: RunConfig):
    tb = cfg.two_ball
    res = analogy.run_two_ball(analogy.TwoBallConfig(tb.p1, tb.p2, tb.n, cfg.seed))
    metrics = res.to_dict()
    metrics["seed"] = cfg.seed
    return metrics, {"two_ball.csv": analogy.two_ball_csv(res)}, True


def _run_suite(cfg: RunConfig):
    results = acceptance.run_battery(cfg.seed)
    for r in results:
        log.info(r.line())
    files = acceptance.data_files(cfg.seed)
    files["acceptance.csv"] = acceptance.battery_csv(results)
    metrics = {
        "criteria": [{"number": r.number, "name": r.name, "passed": r.passed, "metrics": r.metrics} for r in results],
        "all_passed": all(r.passed for r in results),
    }
    return metrics, files, metrics["all_passed"]


RUNNERS = {
    "packet": _run_packet,
    "mirror-check": _run_mirror,
    "born": _run_born,
    "measure": _run_measure,
    "two-ball": _run_two_ball,
    "suite": _run_suite,
}


def run(cfg: RunConfig, out: str | Path) -> tuple[RunSummary, bool]:
    """Execute ``cfg``, write its CSV files and ``summary.json`` under ``out``.

    The boolean is False only when the suite has a failing criterion; a failed
    mirror verdict is a finding recorded in the summary, not an error.
    """
    out = Path(out)
    start = time.perf_counter()
    metrics, files, ok = RUNNERS[cfg.command](cfg)
    wall = time.perf_counter() - start
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in files.items():
        path = out / name
        path.write_bytes(text.encode("utf-8"))
        paths.append(str(path))
    summary = RunSummary(
        command=cfg.command,
        config=cfg.model_dump(mode="json"),
        metrics=metrics,
        wall_time=wall,
        files=paths,
        version=__version__,
    )
    (out / "summary.json").write_text(summary.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return summary, ok


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mirror-born", description=__doc__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON config file (optional for 'suite')")
    parser.add_argument("--out", default="out", help="output directory (default: ./out)")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--tolerance", type=float, help="override the mirror verdict tolerance")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        if args.config:
            text = Path(args.config).read_text(encoding="utf-8")
        elif args.command == "suite":
            text = '{"command": "suite"}'
        else:
            log.error("--config is required for %s", args.command)
            return 2
        cfg = parse_config(text, seed=args.seed, tolerance=args.tolerance)
        if cfg.command != args.command:
            log.error("config command %r does not match %r", cfg.command, args.command)
            return 2
        summary, ok = run(cfg, args.out)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return 2
    except (OSError, ValueError, ArithmeticError, spectral.ConvergenceError) as exc:
        log.error("%s failed: %s", args.command, exc)
        return 1
    log.info("wrote %s", Path(args.out) / "summary.json")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
