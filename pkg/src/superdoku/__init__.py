"""Superdoku teaching sandbox.

A virtual robot learns puzzle concepts from three-token demonstrations; a
supervisor scores how well each teaching intention matches what was
actually learned and feeds that back under one of three study conditions.
Ships with an HTTP API for live sessions, simulated teachers for cohort
experiments, and an event-sourced session log with exact replay.
"""

__version__ = "0.1.0"
