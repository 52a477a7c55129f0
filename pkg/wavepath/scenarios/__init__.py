"""Scenario files shipped with wavepath; load by name with --config <name>."""
