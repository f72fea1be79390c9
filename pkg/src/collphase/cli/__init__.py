"""Scenario runner and command-line interface."""
