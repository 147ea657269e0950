"""Command-line pipelines and report rendering."""
