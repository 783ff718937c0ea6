from source.verify.compare import (
    ComparisonReport, DistanceKind, calibrate_l1_threshold, compare, max_abs_report, mc_mean_report, moment_report,
    two_sample_report,
)
from source.verify.empirical import bin_edges, collect_values, empirical_density
from source.verify.exact import IdentityProof, prove_identity
from source.verify.marginal import gue2_level_density, marginal_level_density
from source.verify.suites import SUITES, SuiteContext
from source.verify.verify_model import run_all, run_suite
