# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

"""Constants used by vmi2stro"""

# Numerical tolerances
POINT_IDENTITY_TOL = 1.0e-12
ORTHONORMAL_TOL = 1.0e-8
UNIT_NORM_TOL = 1.0e-10
PSEUDOINVERSE_RCOND = 1.0e-10
STEP_NORM_SLACK = 1.0e-12

# Secular equation root finder
SECULAR_MAX_ITERATIONS = 60
SECULAR_TOL = 1.0e-12

# Sampling defaults
DEFAULT_LAMBDA_0 = 4.0
DEFAULT_LAMBDA_EXPONENT = 1.1
DEFAULT_LAMBDA_SHIFT = 10.0
DEFAULT_KAPPA = 1.0
DEFAULT_C_V = 1.0
DEFAULT_N_MAX = 100_000

# Trust-region defaults
DEFAULT_DELTA_MAX = 10.0
DEFAULT_ETA_1 = 0.1
DEFAULT_ETA_2 = 0.5
DEFAULT_MU = 100.0
DEFAULT_THETA = 1.0e-3
DEFAULT_GAMMA_1 = 1.5
DEFAULT_GAMMA_2 = 0.75
DEFAULT_W = 2.0
DEFAULT_DELTA_MIN = 1.0e-10

# Harness
DEFAULT_REPS = 20
DEFAULT_GRID_POINTS = 200
CI_Z = 1.96
POST_HOC_SHOTS = 100_000
CSV_HEADER = ("budget", "rep", "best_value", "true_value", "delta", "Q_n", "W_s")
TRACE_CSV_HEADER = ("rep", "cost", "true_value", "true_variance", "delta")

# QAOA
MAX_STATEVECTOR_QUBITS = 20
MAX_BRUTEFORCE_VERTICES = 24
