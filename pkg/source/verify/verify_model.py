import logging

from source import settings
from source.errors import AccuracyError, ConfigurationError, DataError, NumericError, ResourceError
from source.verify import verify_utils as utils
from source.verify.compare import DistanceKind, make_report
from source.verify.suites import SUITE_NAMES, SUITES, SuiteContext, negative_control

logger = logging.getLogger(__name__)

DEFAULT_VERIFY_OUTPUT_DIR = settings.DEFAULT_VERIFY_OUTPUT_DIR


def suite_names(suite):
    """Expands "all" into every suite."""
    if suite == "all":
        return list(SUITE_NAMES)
    if suite not in SUITES:
        raise ConfigurationError(f"unknown suite {suite!r}, choose from {list(SUITE_NAMES) + ['all']}")
    return [suite]


def run_model(reports, suite, ctx: SuiteContext):
    """
    Runs one suite and appends its reports. A numerical breakdown inside the suite becomes one failed report.
    Params:
        reports: List collecting the reports
        suite: Suite name
        ctx: Budget, seed and workers
    Returns:
        reports
    """
    print(
        f"\nRunning verification suite"
        f"\n  - suite = {suite}"
        f"\n  - budget = {ctx.budget}"
        f"\n  - seed = {ctx.seed}"
    )
    try:
        reports.extend(SUITES[suite](ctx))
    except (AccuracyError, DataError, NumericError, ResourceError) as e:
        print(f"Error in {suite}: {e}")
        logger.error("suite %s aborted: %s", suite, e)
        reports.append(make_report(f"{suite}: suite aborted ({type(e).__name__})", DistanceKind.MAX_ABS,
                                   float("inf"), 0.0, seed=ctx.seed, error=str(e)))
    return reports


def run_suite(suite, budget, seed=settings.DEFAULT_SEED, negative=False, output_dir=None, workers=None):
    """
    Runs a suite (or "all"), prints the summary and writes the JSONL reports.
    Params:
        suite: herm, hankel, hermplus, unitary, haarparam, transforms or all
        budget: Monte Carlo sample budget
        seed: Root seed
        negative: Append the negative-control comparison
        output_dir: Output directory (default res/verify)
        workers: Sampling threads
    Returns:
        (reports, path of the JSONL file)
    """
    names = suite_names(suite)
    ctx = SuiteContext(int(budget), int(seed), workers)
    output_dir = output_dir or DEFAULT_VERIFY_OUTPUT_DIR

    reports = []
    for name in names:
        reports = run_model(reports, name, ctx)
    if negative:
        reports.extend(negative_control(ctx))

    key = utils.make_key(suite, ctx.budget, ctx.seed, negative)
    utils.print_summary(key, reports)
    config = {"suite": suite, "budget": ctx.budget, "seed": ctx.seed, "negative_control": bool(negative)}
    path = utils.write_reports(output_dir, key, reports, config)
    return reports, path


def run_all(budget, seed=settings.DEFAULT_SEED, output_dir=None, workers=None):
    """Runs every suite."""
    return run_suite("all", budget, seed, False, output_dir, workers)
