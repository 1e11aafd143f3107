"""Energy-detector ROC.

Simulated ROC of an energy detector at a per-sample SNR of 0 dB, against
the exact chi-square curve, and the gain from doubling the sensing window.
"""
import numpy as np

from greencell.sensing import analytic_detection_probability, roc_curve, threshold_for_false_alarm
from greencell.evaluate import wilson_interval

rng = np.random.default_rng(7)
snr, samples, trials = 1.0, 20, 100_000

grid = np.linspace(10, 90, 9)
print(f"{'threshold':>9} {'P_f':>7} {'P_d':>7} {'P_d exact':>9}")
for thr, (p_f, p_d) in zip(grid, roc_curve(snr, samples, grid, trials, rng)):
    exact = analytic_detection_probability(snr, samples, thr)
    print(f"{thr:9.1f} {p_f:7.4f} {p_d:7.4f} {exact:9.4f}")

# %% constant false-alarm rate: longer sensing buys detection probability
print()
for n in (5, 10, 20, 40):
    thr = threshold_for_false_alarm(0.01, n)
    print(f"N={n:3d}: threshold {thr:6.2f}, P_d = {analytic_detection_probability(0.25, n, thr):.4f} at SNR -6 dB")

# %% a rare-event count and its Wilson interval
lo, hi = wilson_interval(3, trials)
print(f"\n3 events in {trials} trials: 95% Wilson interval [{lo:.2e}, {hi:.2e}]")
