"""r_C vs r_N, raw and scaled by pulses per gate, for the three pulse error
models over all nine pulse sets (exact sequence averages)."""

from rbgatesets import compilation, experiments


def main():
    rows = experiments.sweep(compilation.ERROR_MODELS, range(1, 10))
    print(f"{'model':<14}{'row':>4}{'r_C':>11}{'r_N':>11}{'r_C/n_C':>11}{'r_N/n_N':>11}{'ratio':>8}")
    for model, row, rc, rn, nc, nn, sc, sn, ratio in rows:
        print(f"{model:<14}{row:>4}{rc:11.3e}{rn:11.3e}{sc:11.3e}{sn:11.3e}{ratio:8.3f}")


if __name__ == "__main__":
    main()
