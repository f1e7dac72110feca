"""Allow ``python -m brpqkd`` to behave exactly like the installed script."""

from .cli import run

if __name__ == "__main__":
    run()
