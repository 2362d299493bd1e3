"""python -m entbound"""

try:
    from .cli.main import main
except ImportError:
    from entbound.cli.main import main

if __name__ == "__main__":
    main()
