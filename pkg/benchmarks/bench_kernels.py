"""Time the hot kernels on the numba path and the pure-numpy path.

    python benchmarks/bench_kernels.py [--frames N] [--repeat R]

The kernel path is fixed at import time, so each path runs in its own
subprocess (the numpy one with TYROLEAN_DISABLE_NUMBA=1).  Work is done on
generated test-split frames at the default desk configuration: about 570
detections per frame on a 32 x 32 grid.
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from tyrolean import kernels
from tyrolean.config import TrainConfig
from tyrolean.evaluation import match_detections
from tyrolean.grid import build_features, build_grid, build_iou_layer
from tyrolean.labeling import assign_labels, class_weights, weighted_logistic_loss
from tyrolean.net import NetConfig, Network, Workspace, backward, forward, msra_init
from tyrolean.nms import greedy_nms_arrays
from tyrolean.optim import AdamState, adam_step, clip_gradients
from tyrolean.synth import SynthConfig, generate_split

n_frames, repeat = int(sys.argv[1]), int(sys.argv[2])
frames = generate_split(SynthConfig(), "test", n_frames)
grids = [build_grid(f) for f in frames]
thresholds = (1.0, 0.6, 0.4, 0.3, 0.2, 0.0)
net = Network(NetConfig())
msra_init(net, np.random.default_rng(0))
feats = [build_features(g, thresholds) for g in grids]
labels = [assign_labels(g, f.annotations) for g, f in zip(grids, frames)]
ws = Workspace()
state = AdamState.zeros_like(net.params)


def step(i):
    g, fs, lm = grids[i], feats[i], labels[i]
    out, cache = forward(net, fs, at=g.occupied, workspace=ws)
    _, dl = weighted_logistic_loss(out, lm, class_weights(lm))
    grads, _ = clip_gradients(backward(net, cache, dl), 1000.0)
    adam_step(net.params, grads, state, 1e-4, 5e-5)
    net.mark_updated()


cases = {
    "nms_tau1": lambda i: greedy_nms_arrays(frames[i].boxes, frames[i].scores, 1.0),
    "nms_tau0.3": lambda i: greedy_nms_arrays(frames[i].boxes, frames[i].scores, 0.3),
    "iou_layer": lambda i: build_iou_layer(grids[i], 11),
    "features_full": lambda i: build_features(grids[i], thresholds),
    "voc_match_raw": lambda i: match_detections(frames[i].boxes, frames[i].scores, frames[i].annotation_boxes),
    "train_step": step,
}
# warm-up compiles the numba kernels outside the timed region
for fn in cases.values():
    fn(0)
result = {"use_numba": kernels.USE_NUMBA}
for name, fn in cases.items():
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        for i in range(n_frames):
            fn(i)
        best = min(best, (time.perf_counter() - t) / n_frames)
    result[name] = 1e3 * best
print(json.dumps(result))
"""


def run(disable_numba: bool, frames: int, repeat: int) -> dict:
    env = dict(os.environ)
    env["TYROLEAN_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    out = subprocess.run([sys.executable, "-c", WORKER, str(frames), str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--frames", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    t0 = time.perf_counter()
    fast = run(False, args.frames, args.repeat)
    slow = run(True, args.frames, args.repeat)
    if not fast["use_numba"]:
        print("numba is not installed; both columns use numpy", file=sys.stderr)
    print(f"{'kernel':<16}{'numba ms':>12}{'numpy ms':>12}{'speed-up':>10}")
    for key in fast:
        if key == "use_numba":
            continue
        print(f"{key:<16}{fast[key]:>12.2f}{slow[key]:>12.2f}{slow[key] / fast[key]:>9.1f}x")
    print(f"(per frame, best of {args.repeat}; {args.frames} frames; total {time.perf_counter() - t0:.0f} s)")


if __name__ == "__main__":
    main()
