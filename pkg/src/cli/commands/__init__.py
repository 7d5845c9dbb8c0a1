# CLI commands package