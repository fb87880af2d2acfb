"""Physical constants (SI, CODATA 2018)."""

EPS_0 = 8.8541878128e-12    # vacuum permittivity, F/m
MU_0 = 1.25663706212e-6     # vacuum permeability, H/m
Q_E = 1.602176634e-19       # elementary charge, C (exact)
K_B = 1.380649e-23          # Boltzmann constant, J/K (exact)
