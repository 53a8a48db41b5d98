"""Entry point for python -m mandelrays."""

from .cli import main

if __name__ == "__main__":
    main()
