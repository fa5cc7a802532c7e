"""Hermite-series numerics for Gelfand-Shilov and Pilipovic spaces."""
