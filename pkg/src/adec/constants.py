"""Numerical tolerances used across the package, in one place."""

# linalg
HERMITIAN_TOL = 1e-12          # relative ||M - M*||_F / ||M||_F
EIG_RESIDUAL_TOL = 1e-10       # reconstruction / unitarity residuals
JACOBI_MAX_SWEEPS = 100
JACOBI_OFFDIAG_TOL = 1e-15     # relative off-diagonal Frobenius mass at convergence
RANK_TOL = 1e-12               # sigma_min / sigma_max below this => rank deficient
PINV_COND_SWITCH = 1e8         # cond(M*M) above this => eigen route instead of Cholesky
PINV_TOL = 1e-9

# frames
UNIT_NORM_TOL = 1e-12
ROW_NORM_TOL = 1e-10
INTEGER_EIG_TOL = 1e-9         # eigenvalue must be this close to an integer
DEGENERATE_BASE_TOL = 1e-12
FRAME_TOL = 1e-12              # A / B below this => not a frame

# identities and bounds
IDENTITY_TOL = 1e-8            # relative Frobenius, floating lemma identities
BOUND_SLACK = 1e-9
