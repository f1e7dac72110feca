"""Information tradeoff curves: what Bob learns versus what Eve can learn.

For a single-photon source the two mutual-information curves cross at a
disturbance of about 0.1464; any error rate below that leaves Bob ahead.
Weak coherent pulses hand Eve the multi-photon fraction for free, so the
crossing moves left as the signal intensity grows.
"""

from brpqkd import IDEAL_SOURCE, disturbance_bound, disturbance_tradeoff

SOURCES = [IDEAL_SOURCE, 0.1, 0.3, 0.5, 0.8, 1.0]


def main():
    print("tolerable disturbance by source intensity")
    print(f"{'source':>8}  {'bound':>9}  {'i_ab at bound':>13}  {'i_ae at bound':>13}")
    for source in SOURCES:
        result = disturbance_bound(source)
        i_ab, i_ae = disturbance_tradeoff(source, result.bound)
        label = source if isinstance(source, str) else f"{source:.1f}"
        print(f"{label:>8}  {result.bound:9.5f}  {i_ab:13.6f}  {i_ae:13.6f}")

    print()
    print("curve samples (mu_s = 0.5)")
    print(f"{'d':>6}  {'i_ab':>9}  {'i_ae':>9}  {'margin':>10}")
    for i in range(0, 11):
        d = 0.02 * i
        i_ab, i_ae = disturbance_tradeoff(0.5, d)
        print(f"{d:6.2f}  {i_ab:9.5f}  {i_ae:9.5f}  {i_ab - i_ae:+10.5f}")

    try:
        import matplotlib.pyplot as plt
    except ImportError:
        print("\nmatplotlib not installed; skipping the plot")
        return

    ds = [i / 400 for i in range(0, 101)]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for source in (IDEAL_SOURCE, 0.3, 1.0):
        pairs = [disturbance_tradeoff(source, d) for d in ds]
        label = source if isinstance(source, str) else f"mu_s = {source}"
        ax.plot(ds, [p[1] for p in pairs], label=f"i_ae, {label}")
    ax.plot(ds, [disturbance_tradeoff(IDEAL_SOURCE, d)[0] for d in ds], "k--", label="i_ab")
    ax.set_xlabel("disturbance d")
    ax.set_ylabel("mutual information (bits)")
    ax.legend()
    fig.tight_layout()
    fig.savefig("security_tradeoff.png", dpi=150)
    print("\nwrote security_tradeoff.png")


if __name__ == "__main__":
    main()
