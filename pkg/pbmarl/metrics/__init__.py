from .welfare import (
    MEASURES,
    STATISTICS,
    WelfareReport,
    WelfareSummary,
    WelfareVector,
    build_table,
    gini,
    profile_report,
    satisfaction_cost,
    satisfaction_project,
    share,
    welfare_report,
    welfare_vectors,
)

from .distribution import (
    QUARTILES,
    cost_quartile_distribution,
    cost_quartiles,
    satisfaction_cdf,
)
