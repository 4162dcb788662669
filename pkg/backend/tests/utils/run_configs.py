from pathlib import Path

CONFIGS_DIR = Path(__file__).resolve().parents[2] / "configs"

# coarse enough for a solve in well under a second per stage
FAST = {
    "nodes = 2048": "nodes = 257",
    "eps_steps = 6": "eps_steps = 2",
}


def write_config(directory: Path, replacements: dict[str, str] | None = None, *, fast: bool = True) -> Path:
    """Copy of the reference config with ``old -> new`` line replacements applied."""
    text = (CONFIGS_DIR / "std.toml").read_text()
    edits = (FAST if fast else {}) | (replacements or {})
    for old, new in edits.items():
        assert old in text, old
        text = text.replace(old, new)
    text = text.replace('directory = "out/std"', f'directory = "{(directory / "out").as_posix()}"')
    path = directory / "run.toml"
    path.write_text(text)
    return path
