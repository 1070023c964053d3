"""rtimon: backend for an open-access RTI monitoring dashboard.

Ingests indicator data from configured sources, stores observations,
benchmarks them against reference region sets, and serves the dashboard
API.
"""

__version__ = "0.1.0"
