"""Energy efficiency versus outage for the four schemes.

Sweeps total transmit power, prints the analytic and Monte Carlo outage per
scheme, then reads off the efficiency each scheme reaches at fixed outage
targets. Pass a filename to also save a log-log plot (needs matplotlib).
"""
import sys

from greencell import SchemeKind, default_scenario, efficiency_at_outage, log_power_grid, tradeoff_sweep

sc = default_scenario()  # P_a = 0.8, P_d = 0.99, P_f = 0.01
curves = tradeoff_sweep(sc, log_power_grid(0.01, 10, 7), trials=200_000, seed=1)

for scheme, curve in curves.items():
    print(f"\n{scheme.value}")
    print(f"{'P [W]':>8} {'eta [bit/J]':>12} {'P_out':>10} {'P_out MC':>10}")
    for pt in curve:
        flag = "" if pt.mc_reliable else "  (MC-unreliable)"
        print(f"{pt.total_power_w:8.3g} {pt.energy_efficiency_bits_per_joule:12.3e} "
              f"{pt.outage.mean:10.3e} {pt.outage_mc.mean:10.3e}{flag}")

# %% efficiency at matched outage, from dense analytic curves
dense = tradeoff_sweep(sc, log_power_grid(1e-4, 100, 121), trials=0, seed=0)
print(f"\n{'target':>8} " + " ".join(f"{s.value:>17}" for s in SchemeKind))
for target in (1e-3, 1e-2, 1e-1):
    effs = [efficiency_at_outage(dense[s], target) for s in SchemeKind]
    print(f"{target:8g} " + " ".join(f"{e:17.3e}" for e in effs))

if len(sys.argv) > 1:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    for scheme, curve in dense.items():
        ax.loglog([p.outage.mean for p in curve], [p.energy_efficiency_bits_per_joule for p in curve],
                  label=scheme.value)
    ax.set_xlim(1e-5, 1)
    ax.set_xlabel("outage probability")
    ax.set_ylabel("energy efficiency [bit/J]")
    ax.legend()
    fig.savefig(sys.argv[1], dpi=120)
    print(f"\nplot written to {sys.argv[1]}")
