"""Stationarity certification for disjunctive programs and MPECs."""
__version__ = "0.1.0"
