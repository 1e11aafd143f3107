"""Link budget of the reference scenario.

Free-space path gain at the LTE and TV carriers, thermal noise, and the
mean SNR that the BS delivers to the UT at 1 W.
"""
from greencell.linkmodel import NoiseModel, noise_power, path_gain, watt_to_dbm, linear_to_db
from greencell.scenario import default_scenario

sc = default_scenario()

# %% path gain at both carriers, same 1 km geometry
g_cell = path_gain(sc.cellular, sc.bs_cellular)
g_tv = path_gain(sc.tv, sc.bs_tv)
print(f"path gain @ {sc.cellular.carrier_hz / 1e6:g} MHz: {g_cell:.4e} ({linear_to_db(g_cell):.1f} dB)")
print(f"path gain @ {sc.tv.carrier_hz / 1e6:g} MHz: {g_tv:.4e} ({linear_to_db(g_tv):.1f} dB)")
print(f"TV band advantage: {g_tv / g_cell:.0f}x")

# %% noise floor
n0 = noise_power(NoiseModel(290.0), 1.0)
print(f"\nnoise PSD at 290 K: {watt_to_dbm(n0):.2f} dBm/Hz")
for band in (sc.cellular, sc.tv):
    print(f"noise in {band.bandwidth_hz / 1e6:g} MHz: {noise_power(sc.noise, band.bandwidth_hz):.4e} W")

# %% mean SNR at 1 W and the SNR needed for 30 Mbit/s
snr = g_cell / noise_power(sc.noise, sc.cellular.bandwidth_hz)
need = 2 ** (sc.rate_bps / sc.cellular.bandwidth_hz) - 1
print(f"\nmean SNR at 1 W: {snr:.0f} ({linear_to_db(snr):.1f} dB); required: {need:g}")

# %% the common c = 3e8 approximation shifts the figures by ~0.14%
approx = default_scenario(speed_of_light_m_s=3e8)
print(f"with c = 3e8: path gain {path_gain(approx.cellular, approx.bs_cellular, approx.speed_of_light):.4e}")
