"""Indicator maps against their asymptotic predictions, noiseless data.

    python3 scripts/prediction_agreement.py [--scene single|three] [--methods msm,mmsm,dsm,mdsm]
"""
import argparse
import time

from msmimaging.imaging import (
    MULTI_FREQUENCIES_HZ,
    SINGLE_FREQUENCY_HZ,
    ExperimentSpec,
    map_metrics,
    run_experiment,
    single_disk_scene,
    three_disk_scene,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scene", default="single", choices=["single", "three"])
    ap.add_argument("--methods", default="msm,mmsm,dsm")
    ap.add_argument("--n-dirs", type=int, default=64)
    args = ap.parse_args()
    scene = single_disk_scene() if args.scene == "single" else three_disk_scene()
    for method in args.methods.split(","):
        freqs = MULTI_FREQUENCIES_HZ if method in ("mmsm", "mdsm") else SINGLE_FREQUENCY_HZ
        t0 = time.perf_counter()
        runs = run_experiment(ExperimentSpec(scene, freqs, method, n_dirs=args.n_dirs))
        for run in runs:
            rms, mx, dist = map_metrics(run.image, run.prediction.combined)
            pr = run.prediction
            lam = abs(pr.lam).max() / abs(pr.phi + pr.lam).max()
            print(f"{method:<5} width {run.aperture.width:.4f} rad: rms {rms:.4f} "
                  f"max {mx:.4f} argmax shift {dist:.4f} m max|Lambda|/max|Phi+Lambda| {lam:.3f}")
        print(f"  ({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
