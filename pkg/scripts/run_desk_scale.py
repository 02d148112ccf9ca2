"""Desk-scale covariance run: free and harmonic Gaussian, boosted near v = 2.

Prints the per-snapshot discrepancies and writes a CSV per case.
"""
import argparse
import csv
from pathlib import Path

from schrobundle.gauge import GaussianPacket, sample_wave, snap_boost
from schrobundle.operator import HarmonicPotential, ZeroPotential
from schrobundle.solver import SolverConfig, covariance_experiment
from schrobundle.spacetime import InertialFrame, Params


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--box-length", type=float, default=64.0)
    ap.add_argument("--n-points", type=int, default=512)
    ap.add_argument("--boost", type=float, default=2.0)
    ap.add_argument("--stiffness", type=float, default=1.0)
    ap.add_argument("--out-dir", type=Path, default=Path("out/desk_scale"))
    args = ap.parse_args()

    params = Params(dim=1)
    fid = InertialFrame.fiducial(1)
    packet = GaussianPacket.make([0.0], 2.0, [1.0], params)
    psi0 = sample_wave(packet, args.box_length, args.n_points)
    v = snap_boost([args.boost], args.box_length, params)
    print(f"requested boost {args.boost}, commensurate boost {v[0]:.17g}")

    args.out_dir.mkdir(parents=True, exist_ok=True)
    cases = {
        "free": (1e-3, ZeroPotential(1)),
        "harmonic": (5e-4, HarmonicPotential(fid, args.stiffness)),
    }
    for name, (dt, pot) in cases.items():
        steps = int(round(1.0 / dt))
        cfg = SolverConfig(args.box_length, args.n_points, dt, 1.0, fid, pot, params, record_every=steps // 10)
        rep = covariance_experiment(psi0, v, cfg)
        with open(args.out_dir / f"{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "l2_error", "linf_error"])
            for row in zip(rep.times, rep.l2_errors, rep.linf_errors):
                w.writerow([format(x, ".17g") for x in row])
        print(f"{name:9s} dt={dt:g}  final rel. L2 {rep.final_l2:.3e}  max {rep.max_l2:.3e}  tail {rep.boundary_tail:.1e}")


if __name__ == "__main__":
    main()
