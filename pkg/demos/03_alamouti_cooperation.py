"""Alamouti cooperation between the BS and the TV station.

Encodes two symbols, passes them through a random two-path channel with
noise, decodes, and shows that the combined SNR is the sum of the two
per-link SNRs. That sum is what the capacity-level outage model uses.
"""
import numpy as np

from greencell.schemes import alamouti_decode, alamouti_effective_snr, alamouti_encode, alamouti_transmit

rng = np.random.default_rng(3)
x = np.array([1 + 1j, -1 + 1j]) / np.sqrt(2)  # two QPSK symbols
block = alamouti_encode(*x)
print("transmitted block (rows: slots, columns: BS, TVS)")
print(np.round(block, 3))

h = (rng.standard_normal(2) + 1j * rng.standard_normal(2)) / np.sqrt(2)
print(f"\nchannel |h1|^2 = {abs(h[0]) ** 2:.3f}, |h2|^2 = {abs(h[1]) ** 2:.3f}")

# %% noise-free: decoding recovers the symbols exactly
r = alamouti_transmit(block, *h)
print("noise-free estimate:", np.round(alamouti_decode(r, h, normalize=True), 12))

# %% noisy: empirical post-combining SNR against the sum rule
noise_var = 0.1
n = 200_000
errs = []
for _ in range(n):
    noise = np.sqrt(noise_var / 2) * (rng.standard_normal(2) + 1j * rng.standard_normal(2))
    est = alamouti_decode(alamouti_transmit(block, *h, noise), h)
    errs.append(est[0] - (abs(h[0]) ** 2 + abs(h[1]) ** 2) * x[0])
gain = abs(h[0]) ** 2 + abs(h[1]) ** 2
empirical = gain ** 2 * abs(x[0]) ** 2 / np.var(errs)
print(f"\npost-combining SNR: empirical {empirical:.3f}, "
      f"sum rule {alamouti_effective_snr(abs(h[0]) ** 2, abs(h[1]) ** 2, noise_var):.3f}")
