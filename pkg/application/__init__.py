"""
Application layer: pipeline orchestration, experiments, reports and the CLI.
"""
