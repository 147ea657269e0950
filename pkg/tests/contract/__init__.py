"""Contract tests for external API interactions."""
