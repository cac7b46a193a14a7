"""Resource-estimation walkthrough: what a 10^4-qubit device buys.

Builds the full resource report for a 10,000 physical-qubit device at
p = 1e-4 for two patch distances, then prints the architecture
comparison and two application sizings. Everything here is closed-form
arithmetic on top of the fitted scaling law; nothing is simulated.
"""

import argparse
import json

from patchsim import (
    DeviceSpec,
    LayoutScheme,
    application_sizing,
    build_resource_report,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-phys", type=int, default=10_000)
    parser.add_argument("--p", type=float, default=1e-4)
    args = parser.parse_args()

    spec = DeviceSpec(args.n_phys, args.p)
    for d in (7, 9):
        report = build_resource_report(spec, d, scheme=LayoutScheme.COMPACT)
        print(f"d = {d} (compact layout):")
        print(f"  logical qubits        {report.n_logical}")
        print(f"  P_round               {report.p_round:.3e}")
        print(f"  Clifford budget       {report.n_clifford:.3e}")
        print(f"  P per rotation        {report.p_rotation:.3e}")
        print(f"  rotation budget       {report.n_rotation}")
        print(f"  PEC overhead (budget) {report.pec_overhead:.1f}")
        print(f"  NISQ-equivalent m     {report.m_nisq}")
        print(f"  log2 V_Q              {report.log2_vq_star}")
        print()

    report = build_resource_report(spec, 7, scheme=LayoutScheme.COMPACT)
    print("clocks per rotation, this architecture vs T-gate factories:")
    print("  " + report.table_csv().replace("\n", "\n  "))
    print()

    for d in (7, 9):
        sizing = application_sizing(spec, d)
        print(f"d = {d} applications: "
              + json.dumps({k: v.__dict__ for k, v in sizing.items()}))
    print()
    print("the Hubbard row counts rotations per Trotter step against the")
    print("rotation budget; the QAOA row counts one mixer plus one cost")
    print("layer per round on a complete graph.")


if __name__ == "__main__":
    main()
