"""Placement, fabric throughput and CAPEX models for composable data-center racks."""

__version__ = "0.1.0"
