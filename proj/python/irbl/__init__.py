"""Information-retrieval bug localization toolkit.

Thin wrapper around the native _irbl extension: issue/commit ingestion with
temporal file snapshots, the three suspiciousness components (similar reports,
version history, code structure), ten score composers, and the evaluation
metrics (MAP/MRR/Top-k, paired t-test, two-sample K-S).
"""

try:
    from irbl._irbl import *  # noqa: F401,F403  (installed wheel layout)
    from irbl._irbl import __version__  # noqa: F401
except ImportError:  # in-tree builds put _irbl on PYTHONPATH directly
    from _irbl import *  # noqa: F401,F403
    from _irbl import __version__  # noqa: F401
