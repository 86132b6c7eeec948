"""`toolforge` command-line interface."""
