"""Solve the certificate LP and write src/trimix/data/alphas.txt.

Run after gen_data.py. Solves at eps = 1/1000, verifies the rationalized
table exactly, and checks that the same table fails at eps = 1/100 (the
certificate must be sharp enough to be falsifiable).
"""

import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from trimix.certify import (
    Certifier, DATA_DIR, format_alpha_table, generate_inequalities,
    solve_lp, verify_alphas,
)


def main():
    cert = Certifier.load()
    ineqs = generate_inequalities(cert)
    print(f"{len(ineqs)} distinct inequalities")
    eps = Fraction(1, 1000)
    outcome = solve_lp(ineqs, cert.mu_table, eps)
    print(outcome.message)
    if not outcome.feasible:
        sys.exit(1)
    bad = verify_alphas(outcome.alphas, ineqs, cert.mu_table, eps)
    print(f"violations at 1/1000: {len(bad)}")
    if bad:
        for v in bad[:10]:
            print("  ", v)
        sys.exit(1)
    loose = verify_alphas(outcome.alphas, ineqs, cert.mu_table,
                          Fraction(1, 100))
    print(f"violations at 1/100: {len(loose)} (expected >= 1)")
    if not loose:
        sys.exit(1)
    (DATA_DIR / "alphas.txt").write_text(format_alpha_table(outcome.alphas),
                                         encoding="utf-8")
    print(f"wrote {DATA_DIR / 'alphas.txt'}")


if __name__ == "__main__":
    main()
