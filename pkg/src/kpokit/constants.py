"""Physical constants (CODATA exact values, SI units)."""

import math

E_CHARGE = 1.602176634e-19  # elementary charge [C]
H_PLANCK = 6.62607015e-34   # Planck constant [J s]
HBAR = H_PLANCK / (2.0 * math.pi)
PHI0_REDUCED = HBAR / (2.0 * E_CHARGE)  # reduced flux quantum hbar/2e [Wb]

TWO_PI = 2.0 * math.pi

# unit helpers: all internal frequencies are angular (rad/s); quoted
# values in the literature are omega/2pi, so conversion lives here.
GHZ = TWO_PI * 1e9
MHZ = TWO_PI * 1e6
KHZ = TWO_PI * 1e3

FEMTO = 1e-15
PICO = 1e-12
NANO = 1e-9
