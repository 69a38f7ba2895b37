"""Reference experiments for the machine scientist, one preset per package."""
