"""Mean noisy pulses per gate for the nine pulse sets, both gatesets."""

from rbgatesets import compilation


def main():
    print(f"{'row':>3}  {'alphabet':<54} {'n_C':>8} {'(table)':>8} {'n_N':>6} {'(table)':>8}")
    for ps in compilation.pulse_sets():
        n = {gs: compilation.mean_noisy_count(compilation.decompose_gateset(gs, ps)) for gs in ("C", "N")}
        print(f"{ps.index:>3}  {str(ps):<54} {n['C']:8.5f} {ps.n_clifford:>8} {n['N']:6.3f} {ps.n_nist:>8}")


if __name__ == "__main__":
    main()
