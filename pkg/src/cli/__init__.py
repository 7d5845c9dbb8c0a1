# CLI package initialization